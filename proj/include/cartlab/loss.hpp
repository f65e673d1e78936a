#pragma once

#include <vector>

#include "cartlab/distribution.hpp"
#include "cartlab/rational.hpp"
#include "cartlab/tree.hpp"

namespace cartlab {

// Closed-form loss integrals for leaf-constant classifiers against a tiled
// distribution. Both the tree leaves and the distribution cells are
// axis-aligned boxes, so intersection volumes are products of interval
// overlaps; every quantity below is computed in exact rational arithmetic
// over the (exactly representable) double endpoints and weights.

// Excess misclassification probability of labeling `box` with `label`:
// sum over cells of vol(box n cell) * |2 eta_c - 1| * [label != bayes_c].
Rational box_label_loss_exact(const TiledDistribution& dist, const Box& box, int label);

// Volume of `box` on which `label` differs from the Bayes label.
Rational box_disagreement_volume_exact(const TiledDistribution& dist, const Box& box, int label);

// l(f*, f) for the tree classifier f: zero iff f agrees with the Bayes
// classifier almost everywhere.
Rational excess_loss_exact(const TiledDistribution& dist, const Tree& tree);
double excess_loss(const TiledDistribution& dist, const Tree& tree);

// Volume of {f != f*}.
Rational disagreement_volume_exact(const TiledDistribution& dist, const Tree& tree);

// Empirical excess loss conditionally on a grid of design points:
// (1/n) sum_i [f(X_i) != f*(X_i)] * |2 eta(X_i) - 1|.
Rational empirical_excess_loss_exact(const TiledDistribution& dist, const Tree& tree,
                                     const LabeledSample& grid);
double empirical_excess_loss(const TiledDistribution& dist, const Tree& tree,
                             const LabeledSample& grid);

// Per-node label losses for every node's routing region, as doubles:
// first = loss if the node were a leaf labeled 0, second = labeled 1.
// Exact excess variant integrates against the distribution; the empirical
// variant sums |2 eta(X_i) - 1| over grid points routed through the node.
struct NodeLabelLosses {
    std::vector<double> if_zero;
    std::vector<double> if_one;
};
NodeLabelLosses node_label_losses(const TiledDistribution& dist, const Tree& tree);
NodeLabelLosses node_label_losses_empirical(const TiledDistribution& dist, const Tree& tree,
                                            const LabeledSample& grid);

} // namespace cartlab
