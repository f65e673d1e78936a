#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cartlab/rational.hpp"
#include "cartlab/sample.hpp"

namespace cartlab {

// Axis-parallel question "x[feature] <= threshold"; a positive answer
// routes to the left child.
struct Split {
    int feature = 0;
    double threshold = 0.0;
};

// Binary axis-parallel decision tree stored as an arena in pre-order
// (root at index 0, children after their parent). Leaves carry a label and
// the class counts (n0, n1) of the sample they were fitted on; internal
// nodes carry the same counts aggregated over their subtree so that
// collapsing a node into a leaf is a local operation. Trees are immutable
// after construction; fitting returns a new value.
class Tree {
public:
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int label = 0;
        long long n0 = 0;
        long long n1 = 0;

        bool is_leaf() const { return feature < 0; }
    };

    Tree() = default;

    static Tree single_leaf(int dim, int label = 0, long long n0 = 0, long long n1 = 0);
    // Validates shape (binary, pre-order, labels in {0,1}) and takes ownership.
    static Tree from_nodes(int dim, std::vector<Node> nodes);

    int dim() const { return dim_; }
    int root() const { return 0; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    const std::vector<Node>& nodes() const { return nodes_; }

    int leaf_count() const;
    int internal_count() const { return node_count() - leaf_count(); }
    int depth() const;
    long long sample_size() const { return nodes_.empty() ? 0 : nodes_[0].n0 + nodes_[0].n1; }
    bool fitted() const { return sample_size() > 0; }

    int leaf_count_below(int id) const;
    // Sum over the leaves below id of min(n0, n1).
    long long branch_error_count(int id) const;

private:
    int dim_ = 0;
    std::vector<Node> nodes_;
};

// Label of the unique leaf whose region contains x.
int predict(const Tree& tree, std::span<const double> x);
// Arena index of that leaf.
int predict_leaf(const Tree& tree, std::span<const double> x);

// Same topology with every node's counts set from the sample routed through
// it and every label set by majority vote (ties and empty nodes -> 0).
Tree fit_leaf_labels(const Tree& tree, const LabeledSample& sample);

long long misclassification_count(const Tree& tree, const LabeledSample& sample);
// Empirical misclassification rate as an exact count/n rational.
Rational empirical_error(const Tree& tree, const LabeledSample& sample);

// True iff t1 can be obtained from t2 by collapsing internal nodes of t2
// into leaves (same root; split-wise containment).
bool is_pruned_subtree(const Tree& t1, const Tree& t2);

// Structure, splits and (optionally) leaf labels / counts.
bool trees_equal(const Tree& a, const Tree& b, bool compare_labels = true, bool compare_counts = false);

// Pre-order structural digest used for duplicate detection.
std::uint64_t structural_digest(const Tree& tree);

// Fraction of grid points on which the two classifiers disagree. For 0/1
// classifiers this equals the mean squared difference on the grid.
template <class F, class G>
double empirical_distance_sq(F&& f, G&& g, const LabeledSample& grid) {
    if (grid.empty()) throw InputError("empirical_distance_sq: empty grid");
    long long diff = 0;
    for (long long i = 0; i < grid.size(); ++i)
        if (f(grid.x(i)) != g(grid.x(i))) ++diff;
    return static_cast<double>(diff) / static_cast<double>(grid.size());
}

double empirical_distance_sq(const Tree& f, const Tree& g, const LabeledSample& grid);

template <class F, class G>
Rational empirical_distance_sq_exact(F&& f, G&& g, const LabeledSample& grid) {
    if (grid.empty()) throw InputError("empirical_distance_sq: empty grid");
    long long diff = 0;
    for (long long i = 0; i < grid.size(); ++i)
        if (f(grid.x(i)) != g(grid.x(i))) ++diff;
    return Rational(diff, grid.size());
}

// Axis-aligned routing region of a node, intersected with [0,1]^dim.
// A left child owns [lo, threshold] and a right child (threshold, hi]; the
// shared endpoint has measure zero, so interval lengths partition volume.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

std::vector<std::pair<int, Box>> leaf_boxes(const Tree& tree);
std::vector<Box> node_boxes(const Tree& tree);

// File schema (versioned):
//   {"format":"cartlab-tree","version":1,"dim":d,"root":<node>}
// where <node> is {"split":{"feature":j,"threshold":s},
//                  "left":<node>,"right":<node>}
// for an internal node and {"leaf":{"label":a,"n0":c0,"n1":c1}} for a leaf.
nlohmann::json tree_to_json(const Tree& tree);
Tree tree_from_json(const nlohmann::json& j);
Tree load_tree_file(const std::string& path);
void save_tree_file(const std::string& path, const Tree& tree);

} // namespace cartlab
