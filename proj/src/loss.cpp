#include "cartlab/loss.hpp"

#include <algorithm>
#include <cmath>

namespace cartlab {

namespace {

struct CellOverlap {
    long long index; // per-axis cell index
    Rational length; // exact overlap of the box interval with the cell
};

// Overlaps of [lo, hi] with the cells [k/r, (k+1)/r); all endpoints are
// doubles, hence exact rationals.
std::vector<CellOverlap> axis_overlaps(double lo, double hi, int r) {
    std::vector<CellOverlap> out;
    if (!(lo < hi)) return out;
    const Rational rlo(lo), rhi(hi);
    long long first = static_cast<long long>(std::floor(lo * r));
    long long last = static_cast<long long>(std::ceil(hi * r));
    first = std::max(first - 1, 0LL);
    last = std::min(last + 1, static_cast<long long>(r));
    for (long long k = first; k < last; ++k) {
        const Rational cell_lo(k, r);
        const Rational cell_hi(k + 1, r);
        const Rational a = std::max(rlo, cell_lo);
        const Rational b = std::min(rhi, cell_hi);
        if (b > a) out.push_back({k, b - a});
    }
    return out;
}

// Accumulates f(flat_cell_index, volume) over every grid cell meeting the box.
template <class Fn>
void for_each_cell_overlap(const TiledDistribution& dist, const Box& box, Fn&& fn) {
    const int d = dist.dim();
    const int r = dist.cells_per_axis();
    std::vector<std::vector<CellOverlap>> per_axis(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        per_axis[static_cast<std::size_t>(j)] =
            axis_overlaps(box.lo[static_cast<std::size_t>(j)], box.hi[static_cast<std::size_t>(j)], r);
        if (per_axis[static_cast<std::size_t>(j)].empty()) return;
    }
    std::vector<std::size_t> pick(static_cast<std::size_t>(d), 0);
    for (;;) {
        long long flat = 0;
        Rational vol = 1;
        for (int j = 0; j < d; ++j) {
            const CellOverlap& ov = per_axis[static_cast<std::size_t>(j)][pick[static_cast<std::size_t>(j)]];
            flat = flat * r + ov.index;
            vol *= ov.length;
        }
        fn(flat, vol);
        int j = d - 1;
        for (; j >= 0; --j) {
            if (++pick[static_cast<std::size_t>(j)] < per_axis[static_cast<std::size_t>(j)].size()) break;
            pick[static_cast<std::size_t>(j)] = 0;
        }
        if (j < 0) break;
    }
}

Rational cell_weight(const TiledDistribution& dist, long long cell) {
    // |2 eta - 1|, exact because scaling by 2 and subtracting 1 are exact
    // double operations on [0,1].
    const double eta = dist.eta_table()[static_cast<std::size_t>(cell)];
    Rational w = Rational(2) * Rational(eta) - 1;
    if (w < 0) w = -w;
    return w;
}

} // namespace

Rational box_label_loss_exact(const TiledDistribution& dist, const Box& box, int label) {
    Rational total = 0;
    for_each_cell_overlap(dist, box, [&](long long cell, const Rational& vol) {
        if (label != dist.bayes_label_cell(cell)) total += vol * cell_weight(dist, cell);
    });
    return total;
}

Rational box_disagreement_volume_exact(const TiledDistribution& dist, const Box& box, int label) {
    Rational total = 0;
    for_each_cell_overlap(dist, box, [&](long long cell, const Rational& vol) {
        if (label != dist.bayes_label_cell(cell)) total += vol;
    });
    return total;
}

Rational excess_loss_exact(const TiledDistribution& dist, const Tree& tree) {
    if (dist.dim() != tree.dim()) throw InputError("excess_loss: dimension mismatch");
    Rational total = 0;
    for (const auto& [id, box] : leaf_boxes(tree))
        total += box_label_loss_exact(dist, box, tree.node(id).label);
    return total;
}

double excess_loss(const TiledDistribution& dist, const Tree& tree) {
    return to_double(excess_loss_exact(dist, tree));
}

Rational disagreement_volume_exact(const TiledDistribution& dist, const Tree& tree) {
    if (dist.dim() != tree.dim()) throw InputError("disagreement_volume: dimension mismatch");
    Rational total = 0;
    for (const auto& [id, box] : leaf_boxes(tree))
        total += box_disagreement_volume_exact(dist, box, tree.node(id).label);
    return total;
}

Rational empirical_excess_loss_exact(const TiledDistribution& dist, const Tree& tree,
                                     const LabeledSample& grid) {
    if (grid.empty()) throw InputError("empirical_excess_loss: empty grid");
    if (dist.dim() != tree.dim() || grid.dim() != tree.dim())
        throw InputError("empirical_excess_loss: dimension mismatch");
    Rational total = 0;
    for (long long i = 0; i < grid.size(); ++i) {
        const auto x = grid.x(i);
        if (predict(tree, x) != dist.bayes_label_at(x))
            total += cell_weight(dist, dist.cell_index(x));
    }
    return total / grid.size();
}

double empirical_excess_loss(const TiledDistribution& dist, const Tree& tree,
                             const LabeledSample& grid) {
    return to_double(empirical_excess_loss_exact(dist, tree, grid));
}

NodeLabelLosses node_label_losses(const TiledDistribution& dist, const Tree& tree) {
    if (dist.dim() != tree.dim()) throw InputError("node_label_losses: dimension mismatch");
    const auto boxes = node_boxes(tree);
    NodeLabelLosses out;
    out.if_zero.resize(boxes.size());
    out.if_one.resize(boxes.size());
    for (std::size_t id = 0; id < boxes.size(); ++id) {
        out.if_zero[id] = to_double(box_label_loss_exact(dist, boxes[id], 0));
        out.if_one[id] = to_double(box_label_loss_exact(dist, boxes[id], 1));
    }
    return out;
}

NodeLabelLosses node_label_losses_empirical(const TiledDistribution& dist, const Tree& tree,
                                            const LabeledSample& grid) {
    if (grid.empty()) throw InputError("node_label_losses_empirical: empty grid");
    if (dist.dim() != tree.dim() || grid.dim() != tree.dim())
        throw InputError("node_label_losses_empirical: dimension mismatch");
    NodeLabelLosses out;
    out.if_zero.assign(static_cast<std::size_t>(tree.node_count()), 0.0);
    out.if_one.assign(static_cast<std::size_t>(tree.node_count()), 0.0);
    const double n = static_cast<double>(grid.size());
    for (long long i = 0; i < grid.size(); ++i) {
        const auto x = grid.x(i);
        const int bayes = dist.bayes_label_at(x);
        const double w = std::abs(2.0 * dist.eta_at(x) - 1.0) / n;
        // charge w to the wrong label along the routing path
        int id = 0;
        for (;;) {
            if (bayes == 1)
                out.if_zero[static_cast<std::size_t>(id)] += w;
            else
                out.if_one[static_cast<std::size_t>(id)] += w;
            const Tree::Node& nd = tree.node(id);
            if (nd.is_leaf()) break;
            id = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
    }
    return out;
}

} // namespace cartlab
