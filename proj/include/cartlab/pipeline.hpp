#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cartlab/distribution.hpp"
#include "cartlab/growing.hpp"
#include "cartlab/rational.hpp"

namespace cartlab {

enum class Method { M1, M2 };

const char* method_name(Method m);
Method method_from_string(const std::string& s);

// How the N observations are divided: M1 grows on part 1, prunes on part 2
// and selects on part 3; M2 grows and prunes on part 1 (n2 = 0) and selects
// on part 3. Parts are contiguous blocks of the seeded-shuffled sample.
struct SplitScheme {
    Method method = Method::M1;
    long long n1 = 0;
    long long n2 = 0;
    long long n3 = 0;
    std::uint64_t seed = 0;

    long long total() const { return n1 + n2 + n3; }
    void validate(long long N) const;
};

// Default sizes: N/3 each for M1, (2N/3, N/3) for M2, remainders to the
// last part.
SplitScheme default_scheme(Method method, long long N, std::uint64_t seed);

// VC dimension of axis-parallel (indeed, all) half-spaces of R^d: d + 1.
long long vc_dimension_half_spaces(int d);

// Penalty scale 2 + V/2 (1 + log(n1/V)) for selection among trees built on
// their own design grid; requires n1 >= V >= 1.
double penalty_scale_alpha(double n1, double V);

// Convenience form for axis-parallel splits in dimension d:
// (4 + (d+1)(1 + log(n1/(d+1)))) / (2h), the per-leaf penalty factor.
double m2_penalty_factor(double n1, int d, double h);

// One experiment: sample, split, grow, prune, select, then evaluate every
// candidate against the generating distribution.
struct ReplicateRecord {
    int rep = 0;
    long long N = 0, n1 = 0, n2 = 0, n3 = 0;
    int K = 0;
    int tmax_leaves = 0;
    int leaves_selected = 0;
    int k_selected = 0; // 1-based
    double excess_loss_sel = 0.0;
    double excess_loss_best_k = 0.0;
    double oracle_inf = 0.0;
    double holdout_bound = 0.0;
    double h = 0.0;
    long long V = 0;
    double alpha_n1V = 0.0;
    std::uint64_t seed = 0;

    std::vector<double> per_k_excess;
    std::vector<double> per_k_empirical_excess; // M2 only: l_{n1} per candidate
    double empirical_excess_sel = 0.0;          // M2 only
    bool margin_checked = false;                // MA spot-checks ran and held
};

struct BoundReport {
    Method method = Method::M1;
    std::vector<ReplicateRecord> replicates;

    double median_excess() const;
    double median_gap() const; // excess(selected) - min_k excess(T_k)
    double median_K() const;
    // Median over replicates of loss / (oracle_inf + holdout_bound), with
    // the method's native loss (exact excess for M1, empirical for M2).
    double c_hat() const;
};

double median(std::vector<double> values);

ReplicateRecord run_m1(const TiledDistribution& dist, long long N, const SplitScheme& scheme,
                       const GrowConfig& grow = {});
ReplicateRecord run_m2(const TiledDistribution& dist, long long N, const SplitScheme& scheme,
                       const GrowConfig& grow = {});

// reps replicates at each N; replicate r uses seed base_seed + r.
BoundReport run_replicates(const TiledDistribution& dist, Method method, long long N, int reps,
                           std::uint64_t base_seed, const GrowConfig& grow = {});

// Sweep configuration file (JSON):
// {
//   "dist": "preset:tiles" | path,     (presets: tiles, zero-error, no-margin)
//   "dim": 2, "cells": 2, "margin": 0.6,   (preset parameters)
//   "method": "m1" | "m2",
//   "N": [250, 1000, 4000],
//   "reps": 20,
//   "seed": 1,
//   "min_node_size": 1, "max_depth": 0, "max_leaves": 0
// }
struct SweepConfig {
    std::string dist_spec = "preset:tiles";
    int dim = 2;
    int cells = 2;
    double margin = 0.6;
    Method method = Method::M1;
    std::vector<long long> Ns;
    int reps = 1;
    std::uint64_t seed = 0;
    GrowConfig grow;

    TiledDistribution make_distribution() const;
    static SweepConfig from_json(const nlohmann::json& j);
    static SweepConfig load_file(const std::string& path);
};

// Resolves "preset:name" (with the given parameters) or loads a
// distribution file.
TiledDistribution resolve_distribution(const std::string& spec, int dim, int cells, double margin);

// Per-replicate record CSV. Column order is part of the interface:
// rep,N,n1,n2,n3,K,leaves_selected,k_selected,excess_loss_sel,
// excess_loss_best_k,oracle_inf,holdout_bound,h,V,alpha_n1V,seed
std::string report_csv_header();
std::string report_csv_row(const ReplicateRecord& r);

// Runs every (N, replicate) job and writes runs.csv plus an aggregate
// summary.csv under out_dir. Reruns with the same config are byte-identical.
void sweep(const SweepConfig& config, const std::string& out_dir);

} // namespace cartlab
