#pragma once

#include <functional>
#include <vector>

#include "cartlab/distribution.hpp"
#include "cartlab/loss.hpp"
#include "cartlab/rational.hpp"
#include "cartlab/sample.hpp"
#include "cartlab/tree.hpp"

namespace cartlab {

inline constexpr long long kDefaultEnumerationCap = 1'000'000;

// Number of pruned subtrees: 1 for a leaf, 1 + count(L) * count(R) for an
// internal node. Saturates at a large sentinel instead of overflowing.
long long count_pruned_subtrees(const Tree& tree);

// Calls fn once per pruned subtree (each satisfies is_pruned_subtree).
// Throws ResourceError with the computed count when it exceeds cap.
void for_each_pruned_subtree(const Tree& tree, const std::function<void(const Tree&)>& fn,
                             long long cap = kDefaultEnumerationCap);

// Cached enumeration of all pruned subtrees of a fitted tree, as bitmasks
// of kept-internal nodes plus their error counts and leaf counts. Used to
// answer many temperature queries against one tree cheaply.
class PrunedEnumeration {
public:
    explicit PrunedEnumeration(const Tree& tree, long long cap = kDefaultEnumerationCap);

    long long size() const { return static_cast<long long>(profiles_.size()); }

    struct Profile {
        std::vector<std::uint64_t> internal_mask; // bit i set = node i kept internal
        long long error_count = 0;                // sum over leaves of min(n0,n1)
        int leaves = 0;
    };
    const std::vector<Profile>& profiles() const { return profiles_; }

    Tree materialize(const Profile& p) const;

    // Exact minimizer of error_count + alpha * leaves that is a pruned
    // subtree of every other minimizer; IntegrityError if no minimizer
    // dominates all others (which would falsify the enumeration).
    Tree smallest_minimizer(const Rational& alpha) const;

private:
    const Tree* tree_;
    std::vector<Profile> profiles_;
};

// argmin over all pruned subtrees of C_alpha, with the smallest-minimizer
// tie rule, by exhaustive enumeration. The tree must be fitted on `sample`.
Tree brute_force_t_alpha(const Tree& t_max, const LabeledSample& sample, const Rational& alpha,
                         long long cap = kDefaultEnumerationCap);

// inf over pruned subtrees T of
//   [ sum over leaves of min-label excess loss ] + scale * h^-1 * |T~| / n,
// where the per-leaf minimum realizes the best classifier on T's partition.
struct OracleInfimum {
    double value = 0.0;
    Tree argmin;
};
OracleInfimum oracle_penalized_infimum(const TiledDistribution& dist, const Tree& t_max, double h,
                                       long long n, double scale,
                                       long long cap = kDefaultEnumerationCap);

// Same minimization without enumeration: bottom-up dynamic program over
// per-node label losses with per-leaf penalty beta. Scales to trees far
// beyond the enumeration cap; verified against the enumeration at desk
// scale.
struct PenalizedInfimum {
    double value = 0.0;
    int leaves = 0;
};
PenalizedInfimum penalized_infimum_dp(const Tree& tree, const NodeLabelLosses& losses, double beta);

} // namespace cartlab
