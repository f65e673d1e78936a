#pragma once

#include <optional>

#include "cartlab/sample.hpp"
#include "cartlab/tree.hpp"

namespace cartlab {

struct GrowConfig {
    long long min_node_size = 1; // minimum points per child
    int max_depth = 0;           // 0 = unbounded
    long long max_leaves = 0;    // 0 = unbounded
};

// Gini impurity 2 p (1 - p) with p = n1 / (n0 + n1).
double gini(long long n0, long long n1);

// The split minimizing the size-weighted child Gini impurity over all
// features and all midpoints between consecutive distinct feature values,
// with both children receiving at least min_node_size points. Candidates
// are compared in exact arithmetic; ties break toward the lower feature
// index, then the lower threshold. Empty unless some admissible split
// strictly decreases the weighted impurity.
std::optional<Split> best_split(const LabeledSample& node_sample, long long min_node_size = 1);

// Recursive partitioning until no admissible split remains or a cap is
// hit; leaves are labeled by majority vote. With a max_leaves cap, nodes
// are expanded in creation (breadth-first) order. Deterministic.
Tree grow_maximal(const LabeledSample& sample, const GrowConfig& config = {});

} // namespace cartlab
