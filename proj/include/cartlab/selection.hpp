#pragma once

#include <vector>

#include "cartlab/rational.hpp"
#include "cartlab/sample.hpp"
#include "cartlab/tree.hpp"

namespace cartlab {

struct SelectionResult {
    int index = 0; // 1-based position in the candidate list
    Tree tree;
    Rational test_error;
};

// argmin of the empirical test error over the candidates (exact rational
// comparison). Ties break toward fewer leaves, then the larger index.
SelectionResult holdout_select(const std::vector<Tree>& candidates, const LabeledSample& test);

// Additive cost of selecting among K candidates with a test sample of size
// n3 under margin h: c1 * h^-1 * log(K) / n3 + c2 * h^-1 / n3. The
// constants are supplied by the caller (reported, never asserted).
double holdout_gap_bound(long long K, long long n3, double h, double c1, double c2);

} // namespace cartlab
