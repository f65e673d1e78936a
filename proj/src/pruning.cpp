#include "cartlab/pruning.hpp"

#include <algorithm>
#include <fstream>

namespace cartlab {

Rational penalized_cost(const Tree& tree, const LabeledSample& sample, const Rational& alpha) {
    if (alpha < 0) throw InputError("penalized_cost: alpha must be nonnegative");
    if (sample.empty()) throw InputError("penalized_cost: empty sample");
    return empirical_error(tree, sample) + alpha * tree.leaf_count() / Rational(sample.size());
}

Rational weakest_link(const Tree& tree, int node_id) {
    if (node_id < 0 || node_id >= tree.node_count()) throw InputError("weakest_link: bad node id");
    const Tree::Node& nd = tree.node(node_id);
    if (nd.is_leaf()) throw InputError("weakest_link: node is a leaf");
    if (!tree.fitted()) throw StateError("weakest_link: tree is not fitted");
    const long long collapse = std::min(nd.n0, nd.n1);
    const long long branch = tree.branch_error_count(node_id);
    const long long leaves = tree.leaf_count_below(node_id);
    // critical temperature of C_alpha = gamma_n + alpha |T~| / n, in
    // misclassification counts: collapsing t trades (branch, leaves) for
    // (collapse, 1) and breaks even at this alpha
    return Rational(collapse - branch, leaves - 1);
}

namespace {

// Bottom-up exact minimization of error_count + alpha * leaves. Cost ties
// collapse, which yields the minimizer that is a pruned subtree of every
// other minimizer.
struct DpResult {
    Rational cost;
    std::vector<char> collapse; // per node of the input tree
};

DpResult minimize(const Tree& tree, const Rational& alpha) {
    const int n = tree.node_count();
    DpResult res;
    res.collapse.assign(static_cast<std::size_t>(n), 0);
    std::vector<Rational> best(static_cast<std::size_t>(n));
    for (int id = n - 1; id >= 0; --id) { // children precede parents in reverse pre-order
        const Tree::Node& nd = tree.node(id);
        const Rational leaf_cost = Rational(std::min(nd.n0, nd.n1)) + alpha;
        if (nd.is_leaf()) {
            best[static_cast<std::size_t>(id)] = leaf_cost;
            res.collapse[static_cast<std::size_t>(id)] = 1;
            continue;
        }
        const Rational branch_cost = best[static_cast<std::size_t>(nd.left)] +
                                     best[static_cast<std::size_t>(nd.right)];
        if (leaf_cost <= branch_cost) {
            best[static_cast<std::size_t>(id)] = leaf_cost;
            res.collapse[static_cast<std::size_t>(id)] = 1;
        } else {
            best[static_cast<std::size_t>(id)] = branch_cost;
        }
    }
    res.cost = best[0];
    return res;
}

Tree materialize(const Tree& tree, const std::vector<char>& collapse) {
    std::vector<Tree::Node> nodes;
    const auto emit = [&](auto&& self, int src) -> int {
        const Tree::Node& nd = tree.node(src);
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<std::size_t>(id)].n0 = nd.n0;
        nodes[static_cast<std::size_t>(id)].n1 = nd.n1;
        nodes[static_cast<std::size_t>(id)].label = nd.n1 > nd.n0 ? 1 : 0;
        if (!nd.is_leaf() && !collapse[static_cast<std::size_t>(src)]) {
            nodes[static_cast<std::size_t>(id)].feature = nd.feature;
            nodes[static_cast<std::size_t>(id)].threshold = nd.threshold;
            const int li = self(self, nd.left);
            const int ri = self(self, nd.right);
            nodes[static_cast<std::size_t>(id)].left = li;
            nodes[static_cast<std::size_t>(id)].right = ri;
        }
        return id;
    };
    emit(emit, tree.root());
    return Tree::from_nodes(tree.dim(), std::move(nodes));
}

} // namespace

Tree smallest_minimizing_subtree(const Tree& fitted, const Rational& alpha) {
    if (alpha < 0) throw InputError("smallest_minimizing_subtree: alpha must be nonnegative");
    if (!fitted.fitted()) throw StateError("smallest_minimizing_subtree: tree is not fitted");
    return materialize(fitted, minimize(fitted, alpha).collapse);
}

PruneSequence::PruneSequence(Tree t_max, long long n, std::vector<PruneEntry> entries)
    : t_max_(std::move(t_max)), n_(n), entries_(std::move(entries)) {
    if (entries_.empty()) throw InputError("PruneSequence: no entries");
    if (entries_.front().alpha != 0) throw IntegrityError("PruneSequence: first alpha must be 0");
    for (std::size_t k = 1; k < entries_.size(); ++k) {
        if (!(entries_[k - 1].alpha < entries_[k].alpha))
            throw IntegrityError("PruneSequence: temperatures must increase strictly");
        if (entries_[k].tree.leaf_count() >= entries_[k - 1].tree.leaf_count() ||
            !is_pruned_subtree(entries_[k].tree, entries_[k - 1].tree))
            throw IntegrityError("PruneSequence: trees must shrink strictly");
    }
    if (!entries_.back().tree.node(0).is_leaf())
        throw IntegrityError("PruneSequence: last tree must be the root");
}

int PruneSequence::t_alpha_index(const Rational& alpha) const {
    if (alpha < 0) throw InputError("t_alpha: alpha must be nonnegative");
    int k = 0;
    while (k + 1 < K() && entries_[static_cast<std::size_t>(k) + 1].alpha <= alpha) ++k;
    return k;
}

const Tree& PruneSequence::t_alpha(const Rational& alpha) const {
    return entries_[static_cast<std::size_t>(t_alpha_index(alpha))].tree;
}

PruneSequence prune_sequence(const Tree& t_max, const LabeledSample& sample) {
    if (sample.empty()) throw InputError("prune_sequence: empty sample");
    if (!t_max.fitted() || t_max.sample_size() != sample.size())
        throw StateError("prune_sequence: tree is not fitted on this sample");

    std::vector<PruneEntry> entries;
    Tree current = smallest_minimizing_subtree(t_max, 0);
    entries.push_back(PruneEntry{current, Rational(0)});
    while (!current.node(0).is_leaf()) {
        Rational alpha;
        bool first = true;
        for (int id = 0; id < current.node_count(); ++id) {
            if (current.node(id).is_leaf()) continue;
            const Rational g = weakest_link(current, id);
            if (first || g < alpha) {
                alpha = g;
                first = false;
            }
        }
        current = smallest_minimizing_subtree(current, alpha);
        entries.push_back(PruneEntry{current, alpha});
    }
    return PruneSequence(t_max, sample.size(), std::move(entries));
}

nlohmann::json sequence_to_json(const PruneSequence& seq) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PruneEntry& e : seq.entries()) {
        const long long leaves = e.tree.leaf_count();
        long long err = 0;
        for (const Tree::Node& nd : e.tree.nodes())
            if (nd.is_leaf()) err += std::min(nd.n0, nd.n1);
        arr.push_back(nlohmann::json{{"alpha_num", to_int64(numerator(e.alpha), "alpha")},
                                     {"alpha_den", to_int64(denominator(e.alpha), "alpha")},
                                     {"leaves", leaves},
                                     {"train_error_num", err},
                                     {"train_error_den", seq.n()},
                                     {"tree", tree_to_json(e.tree)}});
    }
    return arr;
}

std::vector<SequenceFileEntry> sequence_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw InputError("sequence json: expected a nonempty array");
    std::vector<SequenceFileEntry> out;
    try {
        for (const auto& e : j) {
            SequenceFileEntry entry;
            entry.alpha = Rational(e.at("alpha_num").get<long long>(),
                                   e.at("alpha_den").get<long long>());
            entry.leaves = e.at("leaves").get<long long>();
            entry.train_error = Rational(e.at("train_error_num").get<long long>(),
                                         e.at("train_error_den").get<long long>());
            entry.tree = tree_from_json(e.at("tree"));
            out.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("sequence json: ") + e.what());
    }
    return out;
}

std::vector<SequenceFileEntry> load_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("sequence json: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("sequence json: parse failure in " + path + ": " + e.what());
    }
    return sequence_from_json(j);
}

void save_sequence_file(const std::string& path, const PruneSequence& seq) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("sequence json: cannot write " + path);
    out << sequence_to_json(seq).dump(2) << "\n";
}

} // namespace cartlab
