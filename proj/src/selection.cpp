#include "cartlab/selection.hpp"

#include <cmath>

namespace cartlab {

SelectionResult holdout_select(const std::vector<Tree>& candidates, const LabeledSample& test) {
    if (candidates.empty()) throw InputError("holdout_select: no candidates");
    if (test.empty()) throw InputError("holdout_select: empty test sample");

    int best = -1;
    long long best_wrong = 0;
    int best_leaves = 0;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
        const long long wrong = misclassification_count(candidates[static_cast<std::size_t>(i)], test);
        const int leaves = candidates[static_cast<std::size_t>(i)].leaf_count();
        // ties: fewer leaves, then the later candidate
        const bool take = best < 0 || wrong < best_wrong || (wrong == best_wrong && leaves <= best_leaves);
        if (take) {
            best = i;
            best_wrong = wrong;
            best_leaves = leaves;
        }
    }
    return SelectionResult{best + 1, candidates[static_cast<std::size_t>(best)],
                           Rational(best_wrong, test.size())};
}

double holdout_gap_bound(long long K, long long n3, double h, double c1, double c2) {
    if (K < 1) throw InputError("holdout_gap_bound: K must be positive");
    if (n3 < 1) throw InputError("holdout_gap_bound: n3 must be positive");
    if (!(h > 0.0 && h <= 1.0)) throw InputError("holdout_gap_bound: h must lie in (0,1]");
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw InputError("holdout_gap_bound: constants must be positive");
    const double n = static_cast<double>(n3);
    return c1 / h * std::log(static_cast<double>(K)) / n + c2 / (h * n);
}

} // namespace cartlab
