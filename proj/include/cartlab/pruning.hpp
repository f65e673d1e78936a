#pragma once

#include <vector>

#include <json.hpp>

#include "cartlab/rational.hpp"
#include "cartlab/sample.hpp"
#include "cartlab/tree.hpp"

namespace cartlab {

// Penalized cost C_alpha(T) = gamma_n(T) + alpha * |leaves| / n, computed
// exactly. The tree must be fitted; n is the sample size.
Rational penalized_cost(const Tree& tree, const LabeledSample& sample, const Rational& alpha);

// Critical temperature of an internal node t: the alpha at which collapsing
// the branch rooted at t into a leaf stops increasing C_alpha, i.e.
//   g(t) = (collapse_errors - branch_errors) / (leaves(t) - 1)
// in misclassification counts. Nonnegative for majority-vote fits.
Rational weakest_link(const Tree& tree, int node_id);

// The unique pruned subtree minimizing C_alpha that is itself a pruned
// subtree of every other minimizer. Bottom-up minimization; cost ties
// collapse.
Tree smallest_minimizing_subtree(const Tree& fitted, const Rational& alpha);

struct PruneEntry {
    Tree tree;
    Rational alpha;
};

// The nested sequence T_1 > T_2 > ... > T_K = {root} with its strictly
// increasing breakpoint temperatures 0 = alpha_1 < ... < alpha_K: T_1
// minimizes C_0, and each following entry is the smallest minimizer at the
// next critical temperature of the current tree. For every alpha in
// [alpha_k, alpha_{k+1}) the smallest minimizer of C_alpha over all pruned
// subtrees of T_max is exactly T_k.
class PruneSequence {
public:
    PruneSequence(Tree t_max, long long n, std::vector<PruneEntry> entries);

    const std::vector<PruneEntry>& entries() const { return entries_; }
    int K() const { return static_cast<int>(entries_.size()); }
    const Tree& t_max() const { return t_max_; }
    long long n() const { return n_; }

    // Entry with the largest alpha_k <= alpha.
    const Tree& t_alpha(const Rational& alpha) const;
    int t_alpha_index(const Rational& alpha) const; // 0-based

private:
    Tree t_max_;
    long long n_ = 0;
    std::vector<PruneEntry> entries_;
};

PruneSequence prune_sequence(const Tree& t_max, const LabeledSample& sample);

// Export schema: a JSON array of entries
//   {"alpha_num":p,"alpha_den":q,"leaves":L,
//    "train_error_num":e,"train_error_den":n,"tree":<tree file object>}.
nlohmann::json sequence_to_json(const PruneSequence& seq);

struct SequenceFileEntry {
    Rational alpha;
    long long leaves = 0;
    Rational train_error;
    Tree tree;
};
std::vector<SequenceFileEntry> sequence_from_json(const nlohmann::json& j);
std::vector<SequenceFileEntry> load_sequence_file(const std::string& path);
void save_sequence_file(const std::string& path, const PruneSequence& seq);

} // namespace cartlab
