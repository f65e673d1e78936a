#include "cartlab/oracle.hpp"

#include <algorithm>
#include <string>

namespace cartlab {

namespace {

constexpr long long kCountSaturated = (1LL << 62);

long long count_below(const Tree& tree, int id) {
    const Tree::Node& nd = tree.node(id);
    if (nd.is_leaf()) return 1;
    const long long l = count_below(tree, nd.left);
    const long long r = count_below(tree, nd.right);
    if (l >= kCountSaturated / (r > 0 ? r : 1)) return kCountSaturated;
    const long long prod = l * r;
    return prod >= kCountSaturated - 1 ? kCountSaturated : 1 + prod;
}

using Mask = std::vector<std::uint64_t>;

void mask_set(Mask& m, int bit) { m[static_cast<std::size_t>(bit) / 64] |= 1ULL << (bit % 64); }

bool mask_subset(const Mask& a, const Mask& b) {
    for (std::size_t w = 0; w < a.size(); ++w)
        if (a[w] & ~b[w]) return false;
    return true;
}

Mask mask_union(const Mask& a, const Mask& b) {
    Mask out(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) out[w] = a[w] | b[w];
    return out;
}

bool mask_test(const Mask& m, int bit) {
    return (m[static_cast<std::size_t>(bit) / 64] >> (bit % 64)) & 1ULL;
}

Tree materialize_mask(const Tree& tree, const Mask& internal) {
    std::vector<Tree::Node> nodes;
    const auto emit = [&](auto&& self, int src) -> int {
        const Tree::Node& nd = tree.node(src);
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<std::size_t>(id)].n0 = nd.n0;
        nodes[static_cast<std::size_t>(id)].n1 = nd.n1;
        nodes[static_cast<std::size_t>(id)].label = nd.n1 > nd.n0 ? 1 : 0;
        if (!nd.is_leaf() && mask_test(internal, src)) {
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

// Enumerates all pruned subtrees of the branch at `id` as profiles of
// (internal-node mask, accumulated leaf value, leaf count). LeafValue is
// any additive payload: misclassification counts or label losses.
template <class LeafValue, class LeafFn>
struct Enumerator {
    const Tree& tree;
    const LeafFn& leaf_value;
    long long cap;
    std::size_t words;

    struct Item {
        Mask mask;
        LeafValue value;
        int leaves;
    };

    std::vector<Item> run(int id) {
        const Tree::Node& nd = tree.node(id);
        Item collapsed{Mask(words, 0), leaf_value(id), 1};
        if (nd.is_leaf()) return {std::move(collapsed)};
        const auto lefts = run(nd.left);
        const auto rights = run(nd.right);
        const long long total = 1 + static_cast<long long>(lefts.size()) *
                                        static_cast<long long>(rights.size());
        if (total > cap)
            throw ResourceError("pruned-subtree enumeration exceeds cap: " +
                                std::to_string(count_below(tree, 0)) + " subtrees");
        std::vector<Item> out;
        out.reserve(static_cast<std::size_t>(total));
        out.push_back(std::move(collapsed));
        for (const Item& l : lefts)
            for (const Item& r : rights) {
                Item combined{mask_union(l.mask, r.mask), l.value + r.value, l.leaves + r.leaves};
                mask_set(combined.mask, id);
                out.push_back(std::move(combined));
            }
        return out;
    }
};

} // namespace

long long count_pruned_subtrees(const Tree& tree) { return count_below(tree, tree.root()); }

void for_each_pruned_subtree(const Tree& tree, const std::function<void(const Tree&)>& fn,
                             long long cap) {
    const long long total = count_pruned_subtrees(tree);
    if (total > cap)
        throw ResourceError("pruned-subtree enumeration exceeds cap: " + std::to_string(total) +
                            " subtrees");
    const std::size_t words = (static_cast<std::size_t>(tree.node_count()) + 63) / 64;
    const auto leaf_value = [&](int id) {
        const Tree::Node& nd = tree.node(id);
        return std::min(nd.n0, nd.n1);
    };
    Enumerator<long long, decltype(leaf_value)> en{tree, leaf_value, cap, words};
    for (const auto& item : en.run(tree.root())) fn(materialize_mask(tree, item.mask));
}

PrunedEnumeration::PrunedEnumeration(const Tree& tree, long long cap) : tree_(&tree) {
    const long long total = count_pruned_subtrees(tree);
    if (total > cap)
        throw ResourceError("pruned-subtree enumeration exceeds cap: " + std::to_string(total) +
                            " subtrees");
    const std::size_t words = (static_cast<std::size_t>(tree.node_count()) + 63) / 64;
    const auto leaf_value = [&](int id) {
        const Tree::Node& nd = tree.node(id);
        return std::min(nd.n0, nd.n1);
    };
    Enumerator<long long, decltype(leaf_value)> en{tree, leaf_value, cap, words};
    for (auto& item : en.run(tree.root()))
        profiles_.push_back(Profile{std::move(item.mask), item.value, item.leaves});
}

Tree PrunedEnumeration::materialize(const Profile& p) const {
    return materialize_mask(*tree_, p.internal_mask);
}

Tree PrunedEnumeration::smallest_minimizer(const Rational& alpha) const {
    if (alpha < 0) throw InputError("smallest_minimizer: alpha must be nonnegative");
    // cost in count units: error_count + alpha * leaves (== n * C_alpha)
    Rational best_cost;
    std::vector<const Profile*> minimizers;
    for (const Profile& p : profiles_) {
        Rational cost = Rational(p.error_count) + alpha * p.leaves;
        if (minimizers.empty() || cost < best_cost) {
            best_cost = std::move(cost);
            minimizers.clear();
            minimizers.push_back(&p);
        } else if (cost == best_cost) {
            minimizers.push_back(&p);
        }
    }
    const Profile* smallest = minimizers.front();
    for (const Profile* p : minimizers)
        if (p->leaves < smallest->leaves) smallest = p;
    for (const Profile* p : minimizers)
        if (!mask_subset(smallest->internal_mask, p->internal_mask))
            throw IntegrityError("smallest_minimizer: no minimizer dominates all others");
    return materialize(*smallest);
}

Tree brute_force_t_alpha(const Tree& t_max, const LabeledSample& sample, const Rational& alpha,
                         long long cap) {
    if (!t_max.fitted() || t_max.sample_size() != sample.size())
        throw StateError("brute_force_t_alpha: tree is not fitted on this sample");
    return PrunedEnumeration(t_max, cap).smallest_minimizer(alpha);
}

OracleInfimum oracle_penalized_infimum(const TiledDistribution& dist, const Tree& t_max, double h,
                                       long long n, double scale, long long cap) {
    if (!(h > 0.0 && h <= 1.0)) throw InputError("oracle_penalized_infimum: h must lie in (0,1]");
    if (n < 1) throw InputError("oracle_penalized_infimum: n must be positive");
    const long long total = count_pruned_subtrees(t_max);
    if (total > cap)
        throw ResourceError("pruned-subtree enumeration exceeds cap: " + std::to_string(total) +
                            " subtrees");
    const NodeLabelLosses losses = node_label_losses(dist, t_max);
    const std::size_t words = (static_cast<std::size_t>(t_max.node_count()) + 63) / 64;
    const auto leaf_value = [&](int id) {
        return std::min(losses.if_zero[static_cast<std::size_t>(id)],
                        losses.if_one[static_cast<std::size_t>(id)]);
    };
    const double beta = scale / (h * static_cast<double>(n));
    Enumerator<double, decltype(leaf_value)> en{t_max, leaf_value, cap, words};
    bool first = true;
    OracleInfimum best;
    Mask best_mask;
    for (const auto& item : en.run(t_max.root())) {
        const double value = item.value + beta * item.leaves;
        if (first || value < best.value) {
            first = false;
            best.value = value;
            best_mask = item.mask;
        }
    }
    best.argmin = materialize_mask(t_max, best_mask);
    return best;
}

PenalizedInfimum penalized_infimum_dp(const Tree& tree, const NodeLabelLosses& losses, double beta) {
    const int n = tree.node_count();
    if (static_cast<int>(losses.if_zero.size()) != n || static_cast<int>(losses.if_one.size()) != n)
        throw InputError("penalized_infimum_dp: losses do not match the tree");
    std::vector<double> best(static_cast<std::size_t>(n));
    std::vector<int> leaves(static_cast<std::size_t>(n));
    for (int id = n - 1; id >= 0; --id) {
        const Tree::Node& nd = tree.node(id);
        const double leaf_cost =
            std::min(losses.if_zero[static_cast<std::size_t>(id)],
                     losses.if_one[static_cast<std::size_t>(id)]) +
            beta;
        if (nd.is_leaf()) {
            best[static_cast<std::size_t>(id)] = leaf_cost;
            leaves[static_cast<std::size_t>(id)] = 1;
            continue;
        }
        const double branch_cost =
            best[static_cast<std::size_t>(nd.left)] + best[static_cast<std::size_t>(nd.right)];
        if (leaf_cost <= branch_cost) {
            best[static_cast<std::size_t>(id)] = leaf_cost;
            leaves[static_cast<std::size_t>(id)] = 1;
        } else {
            best[static_cast<std::size_t>(id)] = branch_cost;
            leaves[static_cast<std::size_t>(id)] =
                leaves[static_cast<std::size_t>(nd.left)] + leaves[static_cast<std::size_t>(nd.right)];
        }
    }
    return PenalizedInfimum{best[0], leaves[0]};
}

} // namespace cartlab
