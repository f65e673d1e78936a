#include "cartlab/tree.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace cartlab {

Tree Tree::single_leaf(int dim, int label, long long n0, long long n1) {
    if (dim < 1) throw InputError("Tree: dim must be positive");
    Node leaf;
    leaf.label = label;
    leaf.n0 = n0;
    leaf.n1 = n1;
    Tree t;
    t.dim_ = dim;
    t.nodes_.push_back(leaf);
    return t;
}

Tree Tree::from_nodes(int dim, std::vector<Node> nodes) {
    if (dim < 1) throw InputError("Tree: dim must be positive");
    if (nodes.empty()) throw InputError("Tree: node arena is empty");
    const int n = static_cast<int>(nodes.size());
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (int id = 0; id < n; ++id) {
        const Node& nd = nodes[static_cast<std::size_t>(id)];
        if (nd.is_leaf()) {
            if (nd.left != -1 || nd.right != -1) throw InputError("Tree: leaf with children");
            if (nd.label != 0 && nd.label != 1) throw InputError("Tree: leaf label must be 0 or 1");
        } else {
            if (nd.feature >= dim) throw InputError("Tree: split feature out of range");
            // pre-order: children live strictly after their parent
            if (nd.left <= id || nd.right <= id || nd.left >= n || nd.right >= n)
                throw InputError("Tree: arena is not in pre-order");
            if (++seen[static_cast<std::size_t>(nd.left)] > 1 ||
                ++seen[static_cast<std::size_t>(nd.right)] > 1)
                throw InputError("Tree: node referenced twice");
        }
    }
    for (int id = 1; id < n; ++id)
        if (!seen[static_cast<std::size_t>(id)]) throw InputError("Tree: unreachable node");
    Tree t;
    t.dim_ = dim;
    t.nodes_ = std::move(nodes);
    return t;
}

int Tree::leaf_count() const {
    int leaves = 0;
    for (const Node& nd : nodes_)
        if (nd.is_leaf()) ++leaves;
    return leaves;
}

int Tree::depth() const {
    // pre-order guarantees parents precede children
    std::vector<int> depth(nodes_.size(), 0);
    int best = 0;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const Node& nd = nodes_[id];
        best = std::max(best, depth[id]);
        if (!nd.is_leaf()) {
            depth[static_cast<std::size_t>(nd.left)] = depth[id] + 1;
            depth[static_cast<std::size_t>(nd.right)] = depth[id] + 1;
        }
    }
    return best;
}

int Tree::leaf_count_below(int id) const {
    const Node& nd = node(id);
    if (nd.is_leaf()) return 1;
    return leaf_count_below(nd.left) + leaf_count_below(nd.right);
}

long long Tree::branch_error_count(int id) const {
    const Node& nd = node(id);
    if (nd.is_leaf()) return std::min(nd.n0, nd.n1);
    return branch_error_count(nd.left) + branch_error_count(nd.right);
}

int predict_leaf(const Tree& tree, std::span<const double> x) {
    if (static_cast<int>(x.size()) != tree.dim()) throw InputError("predict: dimension mismatch");
    int id = tree.root();
    while (!tree.node(id).is_leaf()) {
        const Tree::Node& nd = tree.node(id);
        id = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return id;
}

int predict(const Tree& tree, std::span<const double> x) { return tree.node(predict_leaf(tree, x)).label; }

Tree fit_leaf_labels(const Tree& tree, const LabeledSample& sample) {
    if (sample.empty()) throw InputError("fit_leaf_labels: empty sample");
    if (sample.dim() != tree.dim()) throw InputError("fit_leaf_labels: dimension mismatch");
    std::vector<Tree::Node> nodes = tree.nodes();
    for (Tree::Node& nd : nodes) nd.n0 = nd.n1 = 0;
    for (long long i = 0; i < sample.size(); ++i) {
        const auto x = sample.x(i);
        const int label = sample.y(i);
        int id = 0;
        for (;;) {
            Tree::Node& nd = nodes[static_cast<std::size_t>(id)];
            if (label == 0)
                ++nd.n0;
            else
                ++nd.n1;
            if (nd.is_leaf()) break;
            id = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
    }
    for (Tree::Node& nd : nodes) nd.label = nd.n1 > nd.n0 ? 1 : 0; // tie -> 0
    return Tree::from_nodes(tree.dim(), std::move(nodes));
}

long long misclassification_count(const Tree& tree, const LabeledSample& sample) {
    if (sample.empty()) throw InputError("empirical_error: empty sample");
    long long wrong = 0;
    for (long long i = 0; i < sample.size(); ++i)
        if (predict(tree, sample.x(i)) != sample.y(i)) ++wrong;
    return wrong;
}

Rational empirical_error(const Tree& tree, const LabeledSample& sample) {
    return Rational(misclassification_count(tree, sample), sample.size());
}

namespace {

bool prunes_onto(const Tree& t1, int id1, const Tree& t2, int id2) {
    const Tree::Node& a = t1.node(id1);
    if (a.is_leaf()) return true; // collapsing below here is allowed
    const Tree::Node& b = t2.node(id2);
    if (b.is_leaf()) return false;
    if (a.feature != b.feature || a.threshold != b.threshold) return false;
    return prunes_onto(t1, a.left, t2, b.left) && prunes_onto(t1, a.right, t2, b.right);
}

} // namespace

bool is_pruned_subtree(const Tree& t1, const Tree& t2) {
    if (t1.dim() != t2.dim()) return false;
    return prunes_onto(t1, t1.root(), t2, t2.root());
}

namespace {

bool nodes_equal(const Tree& a, int ia, const Tree& b, int ib, bool labels, bool counts) {
    const Tree::Node& na = a.node(ia);
    const Tree::Node& nb = b.node(ib);
    if (na.is_leaf() != nb.is_leaf()) return false;
    if (counts && (na.n0 != nb.n0 || na.n1 != nb.n1)) return false;
    if (na.is_leaf()) return !labels || na.label == nb.label;
    if (na.feature != nb.feature || na.threshold != nb.threshold) return false;
    return nodes_equal(a, na.left, b, nb.left, labels, counts) &&
           nodes_equal(a, na.right, b, nb.right, labels, counts);
}

} // namespace

bool trees_equal(const Tree& a, const Tree& b, bool compare_labels, bool compare_counts) {
    if (a.dim() != b.dim()) return false;
    return nodes_equal(a, a.root(), b, b.root(), compare_labels, compare_counts);
}

std::uint64_t structural_digest(const Tree& tree) {
    // FNV-1a over the pre-order stream of node kinds and split payloads
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xFF;
            h *= 1099511628211ULL;
        }
    };
    for (const Tree::Node& nd : tree.nodes()) {
        if (nd.is_leaf()) {
            mix(0x6C656166ULL); // "leaf"
        } else {
            mix(static_cast<std::uint64_t>(nd.feature) + 1);
            std::uint64_t bits;
            static_assert(sizeof bits == sizeof nd.threshold);
            std::memcpy(&bits, &nd.threshold, sizeof bits);
            mix(bits);
        }
    }
    return h;
}

double empirical_distance_sq(const Tree& f, const Tree& g, const LabeledSample& grid) {
    return empirical_distance_sq([&](std::span<const double> x) { return predict(f, x); },
                                 [&](std::span<const double> x) { return predict(g, x); }, grid);
}

namespace {

void collect_boxes(const Tree& tree, int id, Box box, std::vector<std::pair<int, Box>>& leaves,
                   std::vector<Box>* all) {
    if (all) (*all)[static_cast<std::size_t>(id)] = box;
    const Tree::Node& nd = tree.node(id);
    if (nd.is_leaf()) {
        leaves.emplace_back(id, std::move(box));
        return;
    }
    Box left = box;
    left.hi[static_cast<std::size_t>(nd.feature)] =
        std::min(left.hi[static_cast<std::size_t>(nd.feature)], nd.threshold);
    Box right = std::move(box);
    right.lo[static_cast<std::size_t>(nd.feature)] =
        std::max(right.lo[static_cast<std::size_t>(nd.feature)], nd.threshold);
    collect_boxes(tree, nd.left, std::move(left), leaves, all);
    collect_boxes(tree, nd.right, std::move(right), leaves, all);
}

Box unit_box(int dim) {
    Box b;
    b.lo.assign(static_cast<std::size_t>(dim), 0.0);
    b.hi.assign(static_cast<std::size_t>(dim), 1.0);
    return b;
}

} // namespace

std::vector<std::pair<int, Box>> leaf_boxes(const Tree& tree) {
    std::vector<std::pair<int, Box>> leaves;
    collect_boxes(tree, tree.root(), unit_box(tree.dim()), leaves, nullptr);
    return leaves;
}

std::vector<Box> node_boxes(const Tree& tree) {
    std::vector<Box> all(static_cast<std::size_t>(tree.node_count()));
    std::vector<std::pair<int, Box>> leaves;
    collect_boxes(tree, tree.root(), unit_box(tree.dim()), leaves, &all);
    return all;
}

namespace {

nlohmann::json node_to_json(const Tree& tree, int id) {
    const Tree::Node& nd = tree.node(id);
    if (nd.is_leaf())
        return nlohmann::json{{"leaf", {{"label", nd.label}, {"n0", nd.n0}, {"n1", nd.n1}}}};
    return nlohmann::json{{"split", {{"feature", nd.feature}, {"threshold", nd.threshold}}},
                          {"left", node_to_json(tree, nd.left)},
                          {"right", node_to_json(tree, nd.right)}};
}

int node_from_json(const nlohmann::json& j, std::vector<Tree::Node>& nodes) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (j.contains("leaf")) {
        const auto& leaf = j.at("leaf");
        nodes[static_cast<std::size_t>(id)].label = leaf.at("label").get<int>();
        nodes[static_cast<std::size_t>(id)].n0 = leaf.at("n0").get<long long>();
        nodes[static_cast<std::size_t>(id)].n1 = leaf.at("n1").get<long long>();
        return id;
    }
    const auto& split = j.at("split");
    const int feature = split.at("feature").get<int>();
    const double threshold = split.at("threshold").get<double>();
    const int left = node_from_json(j.at("left"), nodes);
    const int right = node_from_json(j.at("right"), nodes);
    Tree::Node& nd = nodes[static_cast<std::size_t>(id)];
    nd.feature = feature;
    nd.threshold = threshold;
    nd.left = left;
    nd.right = right;
    // counts of an internal node are the sums below it
    nd.n0 = nodes[static_cast<std::size_t>(left)].n0 + nodes[static_cast<std::size_t>(right)].n0;
    nd.n1 = nodes[static_cast<std::size_t>(left)].n1 + nodes[static_cast<std::size_t>(right)].n1;
    nd.label = nd.n1 > nd.n0 ? 1 : 0;
    return id;
}

} // namespace

nlohmann::json tree_to_json(const Tree& tree) {
    return nlohmann::json{{"format", "cartlab-tree"},
                          {"version", 1},
                          {"dim", tree.dim()},
                          {"root", node_to_json(tree, tree.root())}};
}

Tree tree_from_json(const nlohmann::json& j) {
    try {
        if (j.contains("format") && j.at("format").get<std::string>() != "cartlab-tree")
            throw InputError("tree json: unexpected format tag");
        const int dim = j.at("dim").get<int>();
        std::vector<Tree::Node> nodes;
        node_from_json(j.at("root"), nodes);
        return Tree::from_nodes(dim, std::move(nodes));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("tree json: ") + e.what());
    }
}

Tree load_tree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("tree json: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("tree json: parse failure in " + path + ": " + e.what());
    }
    return tree_from_json(j);
}

void save_tree_file(const std::string& path, const Tree& tree) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("tree json: cannot write " + path);
    out << tree_to_json(tree).dump(2) << "\n";
}

} // namespace cartlab
