// Command-line front end: grow, prune, select, oracle-check, run, sweep.
//
// Exit codes: 0 success, 1 input/config error, 2 integrity or oracle
// disagreement, 3 resource cap exceeded.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "cartlab/distribution.hpp"
#include "cartlab/growing.hpp"
#include "cartlab/loss.hpp"
#include "cartlab/oracle.hpp"
#include "cartlab/pipeline.hpp"
#include "cartlab/pruning.hpp"
#include "cartlab/selection.hpp"

namespace {

using namespace cartlab;

struct DistOptions {
    std::string spec = "preset:tiles";
    int dim = 2;
    int cells = 2;
    double margin = 0.6;

    TiledDistribution resolve() const { return resolve_distribution(spec, dim, cells, margin); }
};

void add_dist_options(CLI::App* cmd, DistOptions& opt) {
    cmd->add_option("--dist", opt.spec,
                    "distribution file or preset:{tiles,zero-error,no-margin}");
    cmd->add_option("--dim", opt.dim, "preset dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--cells", opt.cells, "preset cells per axis")->check(CLI::PositiveNumber);
    cmd->add_option("--margin", opt.margin, "tiles preset margin");
}

void add_grow_options(CLI::App* cmd, GrowConfig& grow) {
    cmd->add_option("--min-node-size", grow.min_node_size, "minimum points per child")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-depth", grow.max_depth, "depth cap (0 = unbounded)");
    cmd->add_option("--max-leaves", grow.max_leaves, "leaf cap (0 = unbounded)");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"CART binary classifier: growing, exact cost-complexity pruning, "
                 "hold-out selection and brute-force verification"};
    app.require_subcommand(1);

    // ---- grow ----
    auto* grow_cmd = app.add_subcommand("grow", "grow a maximal tree and write it as JSON");
    DistOptions grow_dist;
    GrowConfig grow_cfg;
    std::string grow_sample_path, grow_out = "tree.json", grow_dump_sample;
    long long grow_n = 0;
    std::uint64_t grow_seed = 0;
    grow_cmd->add_option("--sample", grow_sample_path, "training sample CSV");
    add_dist_options(grow_cmd, grow_dist);
    grow_cmd->add_option("--n", grow_n, "points to draw when sampling from --dist");
    grow_cmd->add_option("--seed", grow_seed, "sampling seed");
    add_grow_options(grow_cmd, grow_cfg);
    grow_cmd->add_option("--out", grow_out, "output tree JSON path");
    grow_cmd->add_option("--dump-sample", grow_dump_sample, "also write the training sample CSV");

    // ---- prune ----
    auto* prune_cmd = app.add_subcommand("prune", "prune a tree into its nested sequence");
    std::string prune_tree_path, prune_sample_path, prune_out = "sequence.json";
    prune_cmd->add_option("--tree", prune_tree_path, "tree JSON")->required();
    prune_cmd->add_option("--sample", prune_sample_path, "pruning sample CSV")->required();
    prune_cmd->add_option("--out", prune_out, "output sequence JSON path");

    // ---- select ----
    auto* select_cmd = app.add_subcommand("select", "hold-out selection among a pruned sequence");
    std::string select_seq_path, select_test_path;
    select_cmd->add_option("--seq", select_seq_path, "sequence JSON")->required();
    select_cmd->add_option("--test", select_test_path, "test sample CSV")->required();

    // ---- oracle-check ----
    auto* oracle_cmd = app.add_subcommand(
        "oracle-check", "compare the pruning algorithm against brute-force enumeration");
    std::string oracle_tree_path, oracle_sample_path;
    std::vector<std::string> oracle_alphas;
    bool oracle_auto = false;
    long long oracle_cap = kDefaultEnumerationCap;
    oracle_cmd->add_option("--tree", oracle_tree_path, "tree JSON")->required();
    oracle_cmd->add_option("--sample", oracle_sample_path, "sample CSV")->required();
    oracle_cmd->add_option("--alphas", oracle_alphas,
                           "temperatures to probe (rationals like 3/10 or decimals)")
        ->delimiter(',');
    oracle_cmd->add_flag("--auto", oracle_auto, "probe 5 temperatures per sequence interval");
    oracle_cmd->add_option("--cap", oracle_cap, "enumeration cap");

    // ---- run ----
    auto* run_cmd = app.add_subcommand("run", "one M1/M2 experiment against a known distribution");
    DistOptions run_dist;
    GrowConfig run_grow;
    std::string run_method = "m1", run_split, run_out;
    long long run_n = 3000;
    std::uint64_t run_seed = 0;
    int run_reps = 1;
    run_cmd->add_option("--method", run_method, "m1 or m2");
    add_dist_options(run_cmd, run_dist);
    run_cmd->add_option("--n", run_n, "total sample size N")->check(CLI::PositiveNumber);
    run_cmd->add_option("--split", run_split, "n1,n2,n3 (default thirds for m1, 2/3+1/3 for m2)");
    run_cmd->add_option("--seed", run_seed, "base seed");
    run_cmd->add_option("--reps", run_reps, "replicates (seed+rep each)")->check(CLI::PositiveNumber);
    add_grow_options(run_cmd, run_grow);
    run_cmd->add_option("--out", run_out, "directory for report CSV (default: stdout only)");

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "replicate sweep driven by a JSON config");
    std::string sweep_config_path, sweep_out = "sweep-out";
    sweep_cmd->add_option("--config", sweep_config_path, "sweep config JSON")->required();
    sweep_cmd->add_option("--out", sweep_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (grow_cmd->parsed()) {
        LabeledSample sample = [&] {
            if (!grow_sample_path.empty()) return read_sample_csv_file(grow_sample_path);
            if (grow_n < 1) throw InputError("grow: need --sample or --dist with --n");
            return grow_dist.resolve().sample(grow_n, grow_seed);
        }();
        if (!grow_dump_sample.empty()) write_sample_csv_file(grow_dump_sample, sample);
        const Tree tree = grow_maximal(sample, grow_cfg);
        save_tree_file(grow_out, tree);
        std::cout << "grew tree: " << tree.leaf_count() << " leaves, depth " << tree.depth()
                  << " -> " << grow_out << "\n";
        return 0;
    }

    if (prune_cmd->parsed()) {
        const Tree loaded = load_tree_file(prune_tree_path);
        const LabeledSample sample = read_sample_csv_file(prune_sample_path);
        const Tree fitted = fit_leaf_labels(loaded, sample);
        const PruneSequence seq = prune_sequence(fitted, sample);
        save_sequence_file(prune_out, seq);
        std::cout << "pruned: K=" << seq.K() << " subtrees -> " << prune_out << "\n";
        return 0;
    }

    if (select_cmd->parsed()) {
        const auto entries = load_sequence_file(select_seq_path);
        const LabeledSample test = read_sample_csv_file(select_test_path);
        std::vector<Tree> candidates;
        candidates.reserve(entries.size());
        for (const auto& e : entries) candidates.push_back(e.tree);
        const SelectionResult sel = holdout_select(candidates, test);
        std::cout << "k,leaves,test_error_num,test_error_den,test_error,selected\n";
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const long long wrong = misclassification_count(candidates[i], test);
            std::cout << (i + 1) << "," << candidates[i].leaf_count() << "," << wrong << ","
                      << test.size() << ","
                      << fmt17(static_cast<double>(wrong) / static_cast<double>(test.size())) << ","
                      << (static_cast<int>(i + 1) == sel.index ? 1 : 0) << "\n";
        }
        return 0;
    }

    if (oracle_cmd->parsed()) {
        const Tree loaded = load_tree_file(oracle_tree_path);
        const LabeledSample sample = read_sample_csv_file(oracle_sample_path);
        const Tree fitted = fit_leaf_labels(loaded, sample);
        const PruneSequence seq = prune_sequence(fitted, sample);
        const PrunedEnumeration oracle(fitted, oracle_cap);

        std::vector<Rational> probes;
        for (const std::string& a : oracle_alphas) probes.push_back(parse_rational(a));
        if (oracle_auto || probes.empty()) {
            const auto& entries = seq.entries();
            for (std::size_t k = 0; k < entries.size(); ++k) {
                const Rational lo = entries[k].alpha;
                const Rational hi =
                    k + 1 < entries.size() ? entries[k + 1].alpha : entries[k].alpha + 1;
                for (int j = 0; j < 5; ++j) probes.push_back(lo + (hi - lo) * j / 5);
            }
        }
        long long mismatches = 0;
        for (const Rational& alpha : probes) {
            if (alpha < 0) throw InputError("oracle-check: negative temperature");
            const Tree& algorithmic = seq.t_alpha(alpha);
            const Tree brute = oracle.smallest_minimizer(alpha);
            if (trees_equal(algorithmic, brute)) {
                std::cout << "OK      alpha=" << format_rational(alpha)
                          << " leaves=" << brute.leaf_count() << "\n";
            } else {
                ++mismatches;
                std::cout << "MISMATCH alpha=" << format_rational(alpha)
                          << " algorithm_leaves=" << algorithmic.leaf_count()
                          << " brute_force_leaves=" << brute.leaf_count() << "\n";
            }
        }
        if (mismatches) {
            std::cout << "verdict: DISAGREE (" << mismatches << "/" << probes.size() << ")\n";
            throw IntegrityError("oracle-check: pruning disagrees with brute force");
        }
        std::cout << "verdict: AGREE (" << probes.size() << " temperatures, " << oracle.size()
                  << " subtrees enumerated)\n";
        return 0;
    }

    if (run_cmd->parsed()) {
        const TiledDistribution dist = run_dist.resolve();
        const Method method = method_from_string(run_method);
        std::vector<ReplicateRecord> records;
        for (int rep = 0; rep < run_reps; ++rep) {
            SplitScheme scheme = default_scheme(method, run_n, run_seed + static_cast<std::uint64_t>(rep));
            if (!run_split.empty()) {
                std::istringstream ss(run_split);
                char c1 = 0, c2 = 0;
                if (!(ss >> scheme.n1 >> c1 >> scheme.n2 >> c2 >> scheme.n3) || c1 != ',' || c2 != ',')
                    throw InputError("run: --split must be n1,n2,n3");
            }
            ReplicateRecord r = method == Method::M1 ? run_m1(dist, run_n, scheme, run_grow)
                                                     : run_m2(dist, run_n, scheme, run_grow);
            r.rep = rep;
            records.push_back(std::move(r));
        }
        std::cout << report_csv_header() << "\n";
        for (const ReplicateRecord& r : records) std::cout << report_csv_row(r) << "\n";
        if (!run_out.empty()) {
            std::filesystem::create_directories(run_out);
            std::ofstream out(std::filesystem::path(run_out) / "report.csv", std::ios::binary);
            if (!out) throw InputError("run: cannot write under " + run_out);
            out << report_csv_header() << "\n";
            for (const ReplicateRecord& r : records) out << report_csv_row(r) << "\n";
        }
        return 0;
    }

    if (sweep_cmd->parsed()) {
        const SweepConfig config = SweepConfig::load_file(sweep_config_path);
        sweep(config, sweep_out);
        std::cout << "sweep complete -> " << sweep_out << "/runs.csv, " << sweep_out
                  << "/summary.csv\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const cartlab::IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return 2;
    } catch (const cartlab::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
