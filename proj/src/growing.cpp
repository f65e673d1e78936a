#include "cartlab/growing.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace cartlab {

double gini(long long n0, long long n1) {
    if (n0 < 0 || n1 < 0 || n0 + n1 < 1) throw InputError("gini: node must hold at least one point");
    const double n = static_cast<double>(n0 + n1);
    const double p = static_cast<double>(n1) / n;
    return 2.0 * p * (1.0 - p);
}

namespace {

// Exact fraction comparison on 64-bit counts; products fit in 128 bits at
// every sample size this project handles.
struct Frac64 {
    long long num = 0;
    long long den = 1;
};

int cmp(const Frac64& a, const Frac64& b) {
    const __int128 lhs = static_cast<__int128>(a.num) * b.den;
    const __int128 rhs = static_cast<__int128>(b.num) * a.den;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

// Size-weighted child impurity up to the constant factor 2/n:
// nl0*nl1/nl + nr0*nr1/nr, as an exact fraction over common denominator.
Frac64 split_score(long long nl0, long long nl1, long long nr0, long long nr1) {
    const long long nl = nl0 + nl1;
    const long long nr = nr0 + nr1;
    return Frac64{nl0 * nl1 * nr + nr0 * nr1 * nl, nl * nr};
}

struct NodeView {
    std::vector<long long> idx; // rows of the sample in this node
    long long n0 = 0, n1 = 0;
};

std::optional<Split> best_split_view(const LabeledSample& sample, const NodeView& view,
                                     long long min_node_size) {
    const long long n = static_cast<long long>(view.idx.size());
    if (view.n0 == 0 || view.n1 == 0) return std::nullopt; // pure
    const Frac64 parent{view.n0 * view.n1, n};

    bool found = false;
    Split best{};
    Frac64 best_score{};
    std::vector<long long> order;
    for (int feature = 0; feature < sample.dim(); ++feature) {
        order = view.idx;
        std::sort(order.begin(), order.end(), [&](long long a, long long b) {
            return sample.x(a)[static_cast<std::size_t>(feature)] <
                   sample.x(b)[static_cast<std::size_t>(feature)];
        });
        long long nl0 = 0, nl1 = 0;
        for (long long i = 0; i + 1 < n; ++i) {
            if (sample.y(order[static_cast<std::size_t>(i)]) == 0)
                ++nl0;
            else
                ++nl1;
            const double lo = sample.x(order[static_cast<std::size_t>(i)])[static_cast<std::size_t>(feature)];
            const double hi = sample.x(order[static_cast<std::size_t>(i + 1)])[static_cast<std::size_t>(feature)];
            if (!(lo < hi)) continue; // candidates sit between distinct values only
            const long long nl = i + 1;
            const long long nr = n - nl;
            if (nl < min_node_size || nr < min_node_size) continue;
            const Frac64 score = split_score(nl0, nl1, view.n0 - nl0, view.n1 - nl1);
            if (cmp(score, parent) >= 0) continue; // must strictly decrease impurity
            if (!found || cmp(score, best_score) < 0) {
                found = true;
                best_score = score;
                best = Split{feature, (lo + hi) / 2.0};
            }
            // equal scores keep the earlier (lower feature, lower threshold) candidate
        }
    }
    if (!found) return std::nullopt;
    return best;
}

} // namespace

std::optional<Split> best_split(const LabeledSample& node_sample, long long min_node_size) {
    if (node_sample.empty()) throw InputError("best_split: empty sample");
    if (min_node_size < 1) throw InputError("best_split: min_node_size must be positive");
    NodeView view;
    view.idx.resize(static_cast<std::size_t>(node_sample.size()));
    std::iota(view.idx.begin(), view.idx.end(), 0LL);
    for (long long i = 0; i < node_sample.size(); ++i)
        (node_sample.y(i) == 0 ? view.n0 : view.n1)++;
    return best_split_view(node_sample, view, min_node_size);
}

Tree grow_maximal(const LabeledSample& sample, const GrowConfig& config) {
    if (sample.empty()) throw InputError("grow_maximal: empty sample");
    if (config.min_node_size < 1) throw InputError("grow_maximal: min_node_size must be positive");
    if (config.max_depth < 0 || config.max_leaves < 0)
        throw InputError("grow_maximal: caps must be positive when set");

    struct WorkNode {
        NodeView view;
        int depth = 0;
        int feature = -1;
        double threshold = 0.0;
        int left = -1, right = -1;
    };
    std::vector<WorkNode> work;
    {
        WorkNode root;
        root.view.idx.resize(static_cast<std::size_t>(sample.size()));
        std::iota(root.view.idx.begin(), root.view.idx.end(), 0LL);
        for (long long i = 0; i < sample.size(); ++i)
            (sample.y(i) == 0 ? root.view.n0 : root.view.n1)++;
        work.push_back(std::move(root));
    }

    // Expansion in creation order; each accepted split adds one leaf.
    std::deque<int> frontier{0};
    long long leaves = 1;
    while (!frontier.empty()) {
        const int id = frontier.front();
        frontier.pop_front();
        if (config.max_leaves > 0 && leaves >= config.max_leaves) break;
        if (config.max_depth > 0 && work[static_cast<std::size_t>(id)].depth >= config.max_depth)
            continue;
        const auto split =
            best_split_view(sample, work[static_cast<std::size_t>(id)].view, config.min_node_size);
        if (!split) continue;

        WorkNode left, right;
        left.depth = right.depth = work[static_cast<std::size_t>(id)].depth + 1;
        for (long long row : work[static_cast<std::size_t>(id)].view.idx) {
            const bool goes_left =
                sample.x(row)[static_cast<std::size_t>(split->feature)] <= split->threshold;
            WorkNode& child = goes_left ? left : right;
            child.view.idx.push_back(row);
            (sample.y(row) == 0 ? child.view.n0 : child.view.n1)++;
        }
        work[static_cast<std::size_t>(id)].feature = split->feature;
        work[static_cast<std::size_t>(id)].threshold = split->threshold;
        work[static_cast<std::size_t>(id)].view.idx.clear();
        work[static_cast<std::size_t>(id)].view.idx.shrink_to_fit();

        const int li = static_cast<int>(work.size());
        work.push_back(std::move(left));
        const int ri = static_cast<int>(work.size());
        work.push_back(std::move(right));
        work[static_cast<std::size_t>(id)].left = li;
        work[static_cast<std::size_t>(id)].right = ri;
        frontier.push_back(li);
        frontier.push_back(ri);
        ++leaves;
    }

    // Re-number into the canonical pre-order arena.
    std::vector<Tree::Node> nodes;
    nodes.reserve(work.size());
    const auto emit = [&](auto&& self, int wid) -> int {
        const WorkNode& w = work[static_cast<std::size_t>(wid)];
        const int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<std::size_t>(id)].n0 = w.view.n0;
        nodes[static_cast<std::size_t>(id)].n1 = w.view.n1;
        nodes[static_cast<std::size_t>(id)].label = w.view.n1 > w.view.n0 ? 1 : 0;
        if (w.feature >= 0) {
            nodes[static_cast<std::size_t>(id)].feature = w.feature;
            nodes[static_cast<std::size_t>(id)].threshold = w.threshold;
            const int li = self(self, w.left);
            const int ri = self(self, w.right);
            nodes[static_cast<std::size_t>(id)].left = li;
            nodes[static_cast<std::size_t>(id)].right = ri;
        }
        return id;
    };
    // counts were moved into children during splitting; restore from leaves
    const auto fill_counts = [&](auto&& self, int wid) -> std::pair<long long, long long> {
        WorkNode& w = work[static_cast<std::size_t>(wid)];
        if (w.feature < 0) return {w.view.n0, w.view.n1};
        const auto [l0, l1] = self(self, w.left);
        const auto [r0, r1] = self(self, w.right);
        w.view.n0 = l0 + r0;
        w.view.n1 = l1 + r1;
        return {w.view.n0, w.view.n1};
    };
    fill_counts(fill_counts, 0);
    emit(emit, 0);
    return Tree::from_nodes(sample.dim(), std::move(nodes));
}

} // namespace cartlab
