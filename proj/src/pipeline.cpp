#include "cartlab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "cartlab/loss.hpp"
#include "cartlab/oracle.hpp"
#include "cartlab/pruning.hpp"
#include "cartlab/selection.hpp"

namespace cartlab {

const char* method_name(Method m) { return m == Method::M1 ? "m1" : "m2"; }

Method method_from_string(const std::string& s) {
    if (s == "m1" || s == "M1") return Method::M1;
    if (s == "m2" || s == "M2") return Method::M2;
    throw InputError("method must be m1 or m2, got '" + s + "'");
}

void SplitScheme::validate(long long N) const {
    if (total() != N) throw InputError("split scheme: n1 + n2 + n3 must equal N");
    if (n1 < 1 || n3 < 1) throw InputError("split scheme: used parts must be nonempty");
    if (method == Method::M1 && n2 < 1) throw InputError("split scheme: M1 requires n2 > 0");
    if (method == Method::M2 && n2 != 0) throw InputError("split scheme: M2 requires n2 = 0");
}

SplitScheme default_scheme(Method method, long long N, std::uint64_t seed) {
    SplitScheme s;
    s.method = method;
    s.seed = seed;
    if (method == Method::M1) {
        s.n1 = N / 3;
        s.n2 = N / 3;
        s.n3 = N - s.n1 - s.n2;
    } else {
        s.n1 = 2 * N / 3;
        s.n2 = 0;
        s.n3 = N - s.n1;
    }
    return s;
}

long long vc_dimension_half_spaces(int d) {
    if (d < 1) throw InputError("vc_dimension_half_spaces: d must be positive");
    return static_cast<long long>(d) + 1;
}

double penalty_scale_alpha(double n1, double V) {
    if (!(V >= 1.0)) throw InputError("penalty_scale_alpha: V must be at least 1");
    if (!(n1 >= V)) throw InputError("penalty_scale_alpha: requires n1 >= V");
    return 2.0 + V / 2.0 * (1.0 + std::log(n1 / V));
}

double m2_penalty_factor(double n1, int d, double h) {
    if (!(h > 0.0 && h <= 1.0)) throw InputError("m2_penalty_factor: h must lie in (0,1]");
    const double V = static_cast<double>(vc_dimension_half_spaces(d));
    if (!(n1 > V)) throw InputError("m2_penalty_factor: requires n1 > d + 1");
    return (4.0 + V * (1.0 + std::log(n1 / V))) / (2.0 * h);
}

namespace {

struct SplitParts {
    LabeledSample part1;
    LabeledSample part2;
    LabeledSample part3;
};

// One generator stream drives the whole replicate: first the N draws, then
// the Fisher-Yates shuffle that forms the contiguous parts.
SplitParts sample_and_split(const TiledDistribution& dist, long long N, const SplitScheme& scheme) {
    SplitMix64 gen(scheme.seed);
    const LabeledSample full = dist.sample_with(gen, N);
    std::vector<long long> perm(static_cast<std::size_t>(N));
    std::iota(perm.begin(), perm.end(), 0LL);
    for (long long i = N - 1; i > 0; --i) {
        const auto j = static_cast<long long>(gen.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    const std::span<const long long> all(perm);
    return SplitParts{full.subset(all.subspan(0, static_cast<std::size_t>(scheme.n1))),
                      scheme.n2 > 0
                          ? full.subset(all.subspan(static_cast<std::size_t>(scheme.n1),
                                                    static_cast<std::size_t>(scheme.n2)))
                          : LabeledSample(dist.dim()),
                      full.subset(all.subspan(static_cast<std::size_t>(scheme.n1 + scheme.n2)))};
}

std::vector<Tree> sequence_trees(const PruneSequence& seq) {
    std::vector<Tree> out;
    out.reserve(static_cast<std::size_t>(seq.K()));
    for (const PruneEntry& e : seq.entries()) out.push_back(e.tree);
    return out;
}

void check_structure(const ReplicateRecord& r, const PruneSequence& seq) {
    if (seq.K() > r.n1) throw IntegrityError("replicate: K exceeds n1");
    if (seq.K() > r.tmax_leaves) throw IntegrityError("replicate: K exceeds the maximal leaf count");
    // splitting never increases the misclassification count
    const Tree& t = seq.t_max();
    for (int id = 0; id < t.node_count(); ++id) {
        const Tree::Node& nd = t.node(id);
        if (nd.is_leaf()) continue;
        const Tree::Node& l = t.node(nd.left);
        const Tree::Node& rr = t.node(nd.right);
        if (std::min(l.n0, l.n1) + std::min(rr.n0, rr.n1) > std::min(nd.n0, nd.n1))
            throw IntegrityError("replicate: split increased the error count");
    }
}

} // namespace

ReplicateRecord run_m1(const TiledDistribution& dist, long long N, const SplitScheme& scheme,
                       const GrowConfig& grow) {
    if (scheme.method != Method::M1) throw InputError("run_m1: scheme method must be M1");
    scheme.validate(N);
    const SplitParts parts = sample_and_split(dist, N, scheme);

    const Tree grown = grow_maximal(parts.part1, grow);
    const Tree t_max = fit_leaf_labels(grown, parts.part2); // prune with part-2 counts
    const PruneSequence seq = prune_sequence(t_max, parts.part2);
    const std::vector<Tree> candidates = sequence_trees(seq);
    const SelectionResult sel = holdout_select(candidates, parts.part3);

    ReplicateRecord r;
    r.N = N;
    r.n1 = scheme.n1;
    r.n2 = scheme.n2;
    r.n3 = scheme.n3;
    r.seed = scheme.seed;
    r.K = seq.K();
    r.tmax_leaves = t_max.leaf_count();
    r.k_selected = sel.index;
    r.leaves_selected = sel.tree.leaf_count();
    r.h = dist.margin();
    r.V = vc_dimension_half_spaces(dist.dim());
    r.alpha_n1V = penalty_scale_alpha(static_cast<double>(r.n1), static_cast<double>(r.V));

    const Rational h_exact = dist.margin_exact();
    r.per_k_excess.reserve(candidates.size());
    for (const Tree& cand : candidates) {
        const Rational loss = excess_loss_exact(dist, cand);
        // margin inequality, both sides exact
        if (loss < h_exact * disagreement_volume_exact(dist, cand))
            throw IntegrityError("run_m1: margin inequality violated");
        r.per_k_excess.push_back(to_double(loss));
    }
    r.margin_checked = true;
    r.excess_loss_sel = r.per_k_excess[static_cast<std::size_t>(sel.index - 1)];
    r.excess_loss_best_k = *std::min_element(r.per_k_excess.begin(), r.per_k_excess.end());

    r.oracle_inf =
        penalized_infimum_dp(t_max, node_label_losses(dist, t_max), 1.0 / (r.h * static_cast<double>(r.n2)))
            .value;
    r.holdout_bound = holdout_gap_bound(r.K, r.n3, r.h, 1.0, 1.0);
    check_structure(r, seq);
    return r;
}

ReplicateRecord run_m2(const TiledDistribution& dist, long long N, const SplitScheme& scheme,
                       const GrowConfig& grow) {
    if (scheme.method != Method::M2) throw InputError("run_m2: scheme method must be M2");
    scheme.validate(N);
    const SplitParts parts = sample_and_split(dist, N, scheme);

    const Tree t_max = grow_maximal(parts.part1, grow); // grown and pruned on the same part
    const PruneSequence seq = prune_sequence(t_max, parts.part1);
    const std::vector<Tree> candidates = sequence_trees(seq);
    const SelectionResult sel = holdout_select(candidates, parts.part3);

    ReplicateRecord r;
    r.N = N;
    r.n1 = scheme.n1;
    r.n2 = 0;
    r.n3 = scheme.n3;
    r.seed = scheme.seed;
    r.K = seq.K();
    r.tmax_leaves = t_max.leaf_count();
    r.k_selected = sel.index;
    r.leaves_selected = sel.tree.leaf_count();
    r.h = dist.margin();
    r.V = vc_dimension_half_spaces(dist.dim());
    r.alpha_n1V = penalty_scale_alpha(static_cast<double>(r.n1), static_cast<double>(r.V));

    const Rational h_exact = dist.margin_exact();
    const auto bayes = [&](std::span<const double> x) { return dist.bayes_label_at(x); };
    r.per_k_excess.reserve(candidates.size());
    r.per_k_empirical_excess.reserve(candidates.size());
    for (const Tree& cand : candidates) {
        r.per_k_excess.push_back(excess_loss(dist, cand));
        const Rational emp = empirical_excess_loss_exact(dist, cand, parts.part1);
        // empirical margin inequality on the design grid, both sides exact
        const Rational dn2 = empirical_distance_sq_exact(
            [&](std::span<const double> x) { return predict(cand, x); }, bayes, parts.part1);
        if (emp < h_exact * dn2) throw IntegrityError("run_m2: empirical margin inequality violated");
        r.per_k_empirical_excess.push_back(to_double(emp));
    }
    r.margin_checked = true;
    r.excess_loss_sel = r.per_k_excess[static_cast<std::size_t>(sel.index - 1)];
    r.excess_loss_best_k = *std::min_element(r.per_k_excess.begin(), r.per_k_excess.end());
    r.empirical_excess_sel = r.per_k_empirical_excess[static_cast<std::size_t>(sel.index - 1)];

    r.oracle_inf = penalized_infimum_dp(t_max, node_label_losses_empirical(dist, t_max, parts.part1),
                                        r.alpha_n1V / (r.h * static_cast<double>(r.n1)))
                       .value;
    r.holdout_bound = holdout_gap_bound(r.K, r.n3, r.h, 1.0, 1.0);
    check_structure(r, seq);
    return r;
}

double median(std::vector<double> values) {
    if (values.empty()) throw InputError("median: no values");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

std::vector<double> collect(const BoundReport& rep, double (*get)(const ReplicateRecord&)) {
    std::vector<double> out;
    out.reserve(rep.replicates.size());
    for (const ReplicateRecord& r : rep.replicates) out.push_back(get(r));
    return out;
}

} // namespace

double BoundReport::median_excess() const {
    return median(collect(*this, [](const ReplicateRecord& r) { return r.excess_loss_sel; }));
}

double BoundReport::median_gap() const {
    return median(collect(*this, [](const ReplicateRecord& r) {
        return r.excess_loss_sel - r.excess_loss_best_k;
    }));
}

double BoundReport::median_K() const {
    return median(collect(*this, [](const ReplicateRecord& r) { return static_cast<double>(r.K); }));
}

double BoundReport::c_hat() const {
    std::vector<double> ratios;
    ratios.reserve(replicates.size());
    for (const ReplicateRecord& r : replicates) {
        const double loss = method == Method::M2 ? r.empirical_excess_sel : r.excess_loss_sel;
        ratios.push_back(loss / (r.oracle_inf + r.holdout_bound));
    }
    return median(std::move(ratios));
}

BoundReport run_replicates(const TiledDistribution& dist, Method method, long long N, int reps,
                           std::uint64_t base_seed, const GrowConfig& grow) {
    if (reps < 1) throw InputError("run_replicates: reps must be positive");
    BoundReport report;
    report.method = method;
    for (int rep = 0; rep < reps; ++rep) {
        SplitScheme scheme = default_scheme(method, N, base_seed + static_cast<std::uint64_t>(rep));
        ReplicateRecord r = method == Method::M1 ? run_m1(dist, N, scheme, grow)
                                                 : run_m2(dist, N, scheme, grow);
        r.rep = rep;
        report.replicates.push_back(std::move(r));
    }
    return report;
}

TiledDistribution resolve_distribution(const std::string& spec, int dim, int cells, double margin) {
    if (spec.rfind("preset:", 0) == 0) {
        const std::string name = spec.substr(7);
        if (name == "tiles") return TiledDistribution::tiles(dim, cells, margin);
        if (name == "zero-error") return TiledDistribution::zero_error(dim, cells);
        if (name == "no-margin") return TiledDistribution::no_margin(dim, cells);
        throw InputError("unknown distribution preset '" + name + "'");
    }
    return TiledDistribution::load_file(spec);
}

TiledDistribution SweepConfig::make_distribution() const {
    return resolve_distribution(dist_spec, dim, cells, margin);
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
    SweepConfig c;
    try {
        if (j.contains("dist")) c.dist_spec = j.at("dist").get<std::string>();
        if (j.contains("dim")) c.dim = j.at("dim").get<int>();
        if (j.contains("cells")) c.cells = j.at("cells").get<int>();
        if (j.contains("margin")) c.margin = j.at("margin").get<double>();
        if (j.contains("method")) c.method = method_from_string(j.at("method").get<std::string>());
        c.Ns = j.at("N").get<std::vector<long long>>();
        c.reps = j.at("reps").get<int>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("min_node_size")) c.grow.min_node_size = j.at("min_node_size").get<long long>();
        if (j.contains("max_depth")) c.grow.max_depth = j.at("max_depth").get<int>();
        if (j.contains("max_leaves")) c.grow.max_leaves = j.at("max_leaves").get<long long>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("sweep config: ") + e.what());
    }
    if (c.Ns.empty()) throw ConfigError("sweep config: N list must be nonempty");
    if (c.reps < 1) throw ConfigError("sweep config: reps must be positive");
    return c;
}

SweepConfig SweepConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("sweep config: cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("sweep config: parse failure in " + path + ": " + e.what());
    }
    return from_json(j);
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string report_csv_header() {
    return "rep,N,n1,n2,n3,K,leaves_selected,k_selected,excess_loss_sel,excess_loss_best_k,"
           "oracle_inf,holdout_bound,h,V,alpha_n1V,seed";
}

std::string report_csv_row(const ReplicateRecord& r) {
    std::string row;
    row += std::to_string(r.rep) + "," + std::to_string(r.N) + "," + std::to_string(r.n1) + "," +
           std::to_string(r.n2) + "," + std::to_string(r.n3) + "," + std::to_string(r.K) + "," +
           std::to_string(r.leaves_selected) + "," + std::to_string(r.k_selected) + ",";
    row += fmt17(r.excess_loss_sel) + "," + fmt17(r.excess_loss_best_k) + "," + fmt17(r.oracle_inf) +
           "," + fmt17(r.holdout_bound) + "," + fmt17(r.h) + "," + std::to_string(r.V) + "," +
           fmt17(r.alpha_n1V) + "," + std::to_string(r.seed);
    return row;
}

void sweep(const SweepConfig& config, const std::string& out_dir) {
    const TiledDistribution dist = config.make_distribution();
    std::filesystem::create_directories(out_dir);
    std::ofstream runs(std::filesystem::path(out_dir) / "runs.csv", std::ios::binary);
    std::ofstream summary(std::filesystem::path(out_dir) / "summary.csv", std::ios::binary);
    if (!runs || !summary) throw InputError("sweep: cannot write under " + out_dir);

    runs << report_csv_header() << "\n";
    summary << "N,reps,median_excess_loss_sel,median_gap,median_K,c_hat,h,V\n";
    for (long long N : config.Ns) {
        const BoundReport report =
            run_replicates(dist, config.method, N, config.reps, config.seed, config.grow);
        for (const ReplicateRecord& r : report.replicates) runs << report_csv_row(r) << "\n";
        summary << N << "," << config.reps << "," << fmt17(report.median_excess()) << ","
                << fmt17(report.median_gap()) << "," << fmt17(report.median_K()) << ","
                << fmt17(report.c_hat()) << "," << fmt17(dist.margin()) << ","
                << vc_dimension_half_spaces(dist.dim()) << "\n";
    }
}

} // namespace cartlab
