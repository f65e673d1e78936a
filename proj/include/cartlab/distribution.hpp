#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cartlab/rational.hpp"
#include "cartlab/rng.hpp"
#include "cartlab/sample.hpp"

namespace cartlab {

// Joint distribution of (X, Y) on [0,1]^dim x {0,1}: X is uniform, and the
// conditional probability eta(x) = P(Y=1 | X=x) is constant on each cell of
// a uniform axis-aligned grid with cells_per_axis cells per dimension.
// Because the Bayes classifier is constant on the same grid, losses and
// margins are computable in closed form.
//
// Cells are half-open [a,b) with the last cell closed; a point on an
// interior boundary belongs to the higher-index cell. The flat cell index
// is row-major with coordinate 0 varying slowest.
class TiledDistribution {
public:
    TiledDistribution(int dim, int cells_per_axis, std::vector<double> eta_table);

    int dim() const { return dim_; }
    int cells_per_axis() const { return cells_; }
    long long cell_count() const { return static_cast<long long>(eta_.size()); }
    const std::vector<double>& eta_table() const { return eta_; }

    long long cell_index(std::span<const double> x) const;
    double eta_at(std::span<const double> x) const;

    // 1 iff eta >= 1/2 (the boundary case counts as 1).
    int bayes_label_at(std::span<const double> x) const;
    int bayes_label_cell(long long cell) const { return eta_[static_cast<std::size_t>(cell)] >= 0.5 ? 1 : 0; }

    // Largest h such that |2 eta(X) - 1| > h' holds a.s. for every h' < h;
    // equivalently the minimum of |2 eta - 1| over cells.
    double margin() const;
    Rational margin_exact() const;

    // n i.i.d. draws; per point the draw order is x_0, ..., x_{dim-1}, then
    // one uniform u with label = (u < eta(x)). Deterministic given seed.
    LabeledSample sample(long long n, std::uint64_t seed) const;
    LabeledSample sample_with(SplitMix64& gen, long long n) const;

    // Named presets. Cell parity below means the parity of the sum of
    // per-axis cell indices (a checkerboard).
    //  tiles:      eta = (1-m)/2 on even cells, (1+m)/2 on odd cells.
    //  zero_error: eta = 0 on even cells, 1 on odd cells (Y is a function of X).
    //  no_margin:  eta_i = 1/2 +- 1/(2(i+2)) with the sign from cell parity,
    //              so |2 eta - 1| decays toward 0 across the table.
    static TiledDistribution tiles(int dim, int cells_per_axis, double margin);
    static TiledDistribution zero_error(int dim, int cells_per_axis);
    static TiledDistribution no_margin(int dim, int cells_per_axis);

    // File schema: {"format":"cartlab-dist","version":1,
    //               "dim":d,"cells_per_axis":r,"eta":[...]}
    static TiledDistribution from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static TiledDistribution load_file(const std::string& path);
    void save_file(const std::string& path) const;

private:
    int dim_;
    int cells_;
    std::vector<double> eta_;
};

} // namespace cartlab
