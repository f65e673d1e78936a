#pragma once

// Test-only oracles: independent brute-force routes the implementation is
// checked against. Nothing here may call the code path it verifies.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "cartlab/distribution.hpp"
#include "cartlab/rational.hpp"
#include "cartlab/rng.hpp"
#include "cartlab/sample.hpp"
#include "cartlab/tree.hpp"

namespace cartlab::testing {

// Midpoint Riemann sum of the excess loss on a grid_n^dim lattice.
inline double riemann_excess(const TiledDistribution& dist, const Tree& tree, int grid_n) {
    const int d = dist.dim();
    std::vector<long long> pick(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    long double total = 0.0L; // extended precision: ~1e6 summands must stay exact to 1e-12
    const double cell = 1.0 / grid_n;
    for (;;) {
        for (int j = 0; j < d; ++j)
            x[static_cast<std::size_t>(j)] = (static_cast<double>(pick[static_cast<std::size_t>(j)]) + 0.5) * cell;
        if (predict(tree, x) != dist.bayes_label_at(x))
            total += std::abs(2.0 * dist.eta_at(x) - 1.0);
        int j = d - 1;
        for (; j >= 0; --j) {
            if (++pick[static_cast<std::size_t>(j)] < grid_n) break;
            pick[static_cast<std::size_t>(j)] = 0;
        }
        if (j < 0) break;
    }
    return static_cast<double>(total / std::pow(static_cast<long double>(grid_n), d));
}

// Paired Monte-Carlo estimate of P(f(X) != Y) - P(f*(X) != Y) with its
// standard error.
struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};
inline McEstimate mc_excess(const TiledDistribution& dist, const Tree& tree, long long n,
                            std::uint64_t seed) {
    SplitMix64 gen(seed);
    std::vector<double> x(static_cast<std::size_t>(dist.dim()));
    double sum = 0.0, sumsq = 0.0;
    for (long long i = 0; i < n; ++i) {
        for (int j = 0; j < dist.dim(); ++j) x[static_cast<std::size_t>(j)] = gen.next_unit();
        const int y = gen.next_unit() < dist.eta_at(x) ? 1 : 0;
        const double diff = static_cast<double>(predict(tree, x) != y ? 1 : 0) -
                            static_cast<double>(dist.bayes_label_at(x) != y ? 1 : 0);
        sum += diff;
        sumsq += diff * diff;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - mean * mean;
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n))};
}

// Minimum misclassification count over all 2^leaves leaf labelings.
inline long long best_labeling_error(const Tree& tree, const LabeledSample& sample) {
    std::vector<int> leaf_ids;
    for (int id = 0; id < tree.node_count(); ++id)
        if (tree.node(id).is_leaf()) leaf_ids.push_back(id);
    const int L = static_cast<int>(leaf_ids.size());
    std::vector<std::pair<long long, long long>> counts(static_cast<std::size_t>(L), {0, 0});
    for (long long i = 0; i < sample.size(); ++i) {
        const int leaf = predict_leaf(tree, sample.x(i));
        const auto pos = std::find(leaf_ids.begin(), leaf_ids.end(), leaf) - leaf_ids.begin();
        (sample.y(i) == 0 ? counts[static_cast<std::size_t>(pos)].first
                          : counts[static_cast<std::size_t>(pos)].second)++;
    }
    long long best = sample.size() + 1;
    for (long long mask = 0; mask < (1LL << L); ++mask) {
        long long wrong = 0;
        for (int l = 0; l < L; ++l) {
            const auto& [c0, c1] = counts[static_cast<std::size_t>(l)];
            wrong += (mask >> l) & 1 ? c0 : c1;
        }
        best = std::min(best, wrong);
    }
    return best;
}

// Independent candidate scan for the best split: every feature, every
// midpoint between consecutive distinct values, scored in exact rationals.
struct ScanCandidate {
    Split split;
    Rational score; // nl0*nl1/nl + nr0*nr1/nr
};
inline std::vector<ScanCandidate> scan_all_splits(const LabeledSample& sample,
                                                  long long min_node_size) {
    std::vector<ScanCandidate> out;
    const long long n = sample.size();
    for (int f = 0; f < sample.dim(); ++f) {
        std::vector<long long> order(static_cast<std::size_t>(n));
        for (long long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](long long a, long long b) {
            return sample.x(a)[static_cast<std::size_t>(f)] < sample.x(b)[static_cast<std::size_t>(f)];
        });
        for (long long i = 0; i + 1 < n; ++i) {
            const double lo = sample.x(order[static_cast<std::size_t>(i)])[static_cast<std::size_t>(f)];
            const double hi = sample.x(order[static_cast<std::size_t>(i + 1)])[static_cast<std::size_t>(f)];
            if (!(lo < hi)) continue;
            const double threshold = (lo + hi) / 2.0;
            long long nl0 = 0, nl1 = 0, nr0 = 0, nr1 = 0;
            for (long long k = 0; k < n; ++k)
                if (sample.x(k)[static_cast<std::size_t>(f)] <= threshold)
                    (sample.y(k) == 0 ? nl0 : nl1)++;
                else
                    (sample.y(k) == 0 ? nr0 : nr1)++;
            if (nl0 + nl1 < min_node_size || nr0 + nr1 < min_node_size) continue;
            const Rational score = Rational(nl0 * nl1, nl0 + nl1) + Rational(nr0 * nr1, nr0 + nr1);
            out.push_back({Split{f, threshold}, score});
        }
    }
    return out;
}

// Leaf membership by explicit routing constraints (exact double compares),
// independent of Tree::predict's traversal.
struct LeafRegion {
    int leaf_id = 0;
    std::vector<std::pair<int, double>> le; // x[f] <= s
    std::vector<std::pair<int, double>> gt; // x[f] >  s
};
inline std::vector<LeafRegion> leaf_regions(const Tree& tree) {
    std::vector<LeafRegion> out;
    LeafRegion current;
    const auto walk = [&](auto&& self, int id) -> void {
        const Tree::Node& nd = tree.node(id);
        if (nd.is_leaf()) {
            LeafRegion r = current;
            r.leaf_id = id;
            out.push_back(std::move(r));
            return;
        }
        current.le.emplace_back(nd.feature, nd.threshold);
        self(self, nd.left);
        current.le.pop_back();
        current.gt.emplace_back(nd.feature, nd.threshold);
        self(self, nd.right);
        current.gt.pop_back();
    };
    walk(walk, tree.root());
    return out;
}
inline std::optional<int> containing_leaf(const std::vector<LeafRegion>& regions,
                                          std::span<const double> x) {
    std::optional<int> found;
    for (const LeafRegion& r : regions) {
        bool inside = true;
        for (const auto& [f, s] : r.le)
            if (!(x[static_cast<std::size_t>(f)] <= s)) inside = false;
        for (const auto& [f, s] : r.gt)
            if (!(x[static_cast<std::size_t>(f)] > s)) inside = false;
        if (inside) {
            if (found) return std::nullopt; // two leaves claim the point
            found = r.leaf_id;
        }
    }
    return found;
}

// Random sample on a coarse coordinate lattice; duplicate values are the
// point (they stress distinct-value candidate handling and exact ties).
inline LabeledSample lattice_sample(int dim, long long n, int lattice, std::uint64_t seed) {
    SplitMix64 gen(seed);
    LabeledSample out(dim);
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (long long i = 0; i < n; ++i) {
        for (int j = 0; j < dim; ++j)
            x[static_cast<std::size_t>(j)] =
                static_cast<double>(gen.next_below(static_cast<std::uint64_t>(lattice) + 1)) / lattice;
        out.add(x, static_cast<int>(gen.next_below(2)));
    }
    return out;
}

// Random tree with splits on lattice thresholds, fitted on nothing.
inline Tree random_tree(int dim, int max_internal, int lattice, std::uint64_t seed) {
    SplitMix64 gen(seed);
    std::vector<Tree::Node> nodes;
    int budget = max_internal;
    const auto build = [&](auto&& self, int depth) -> int {
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        const bool split = budget > 0 && depth < 12 && gen.next_below(3) != 0;
        if (!split) {
            nodes[static_cast<std::size_t>(id)].label = static_cast<int>(gen.next_below(2));
            return id;
        }
        --budget;
        const int feature = static_cast<int>(gen.next_below(static_cast<std::uint64_t>(dim)));
        const double threshold =
            (static_cast<double>(gen.next_below(static_cast<std::uint64_t>(lattice) - 1)) + 1.0) /
            lattice;
        nodes[static_cast<std::size_t>(id)].feature = feature;
        nodes[static_cast<std::size_t>(id)].threshold = threshold;
        const int li = self(self, depth + 1);
        const int ri = self(self, depth + 1);
        nodes[static_cast<std::size_t>(id)].left = li;
        nodes[static_cast<std::size_t>(id)].right = ri;
        return id;
    };
    build(build, 0);
    return Tree::from_nodes(dim, std::move(nodes));
}

// Random eta table over a small grid.
inline TiledDistribution random_distribution(int dim, int cells, std::uint64_t seed) {
    SplitMix64 gen(seed);
    long long total = 1;
    for (int j = 0; j < dim; ++j) total *= cells;
    std::vector<double> eta(static_cast<std::size_t>(total));
    for (auto& e : eta) e = static_cast<double>(gen.next_below(11)) / 10.0;
    return TiledDistribution(dim, cells, std::move(eta));
}

} // namespace cartlab::testing
