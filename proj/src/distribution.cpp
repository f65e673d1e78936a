#include "cartlab/distribution.hpp"

#include <cmath>
#include <fstream>

namespace cartlab {

namespace {

long long checked_cell_count(int dim, int cells) {
    long long total = 1;
    for (int j = 0; j < dim; ++j) {
        if (total > (1LL << 40) / cells) throw InputError("TiledDistribution: grid too large");
        total *= cells;
    }
    return total;
}

} // namespace

TiledDistribution::TiledDistribution(int dim, int cells_per_axis, std::vector<double> eta_table)
    : dim_(dim), cells_(cells_per_axis), eta_(std::move(eta_table)) {
    if (dim_ < 1) throw InputError("TiledDistribution: dim must be positive");
    if (cells_ < 1) throw InputError("TiledDistribution: cells_per_axis must be positive");
    const long long expected = checked_cell_count(dim_, cells_);
    if (static_cast<long long>(eta_.size()) != expected)
        throw InputError("TiledDistribution: eta table must have cells_per_axis^dim entries");
    for (double e : eta_)
        if (!(e >= 0.0 && e <= 1.0)) throw InputError("TiledDistribution: eta entries must lie in [0,1]");
}

long long TiledDistribution::cell_index(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw InputError("TiledDistribution: dimension mismatch");
    long long idx = 0;
    for (int j = 0; j < dim_; ++j) {
        const double c = x[static_cast<std::size_t>(j)];
        if (!(c >= 0.0 && c <= 1.0)) throw InputError("TiledDistribution: coordinate outside [0,1]");
        long long k = static_cast<long long>(std::floor(c * cells_));
        if (k >= cells_) k = cells_ - 1; // x == 1 falls in the last (closed) cell
        idx = idx * cells_ + k;
    }
    return idx;
}

double TiledDistribution::eta_at(std::span<const double> x) const {
    return eta_[static_cast<std::size_t>(cell_index(x))];
}

int TiledDistribution::bayes_label_at(std::span<const double> x) const {
    return eta_at(x) >= 0.5 ? 1 : 0;
}

double TiledDistribution::margin() const {
    double best = 1.0;
    for (double e : eta_) best = std::min(best, std::abs(2.0 * e - 1.0));
    return best;
}

Rational TiledDistribution::margin_exact() const {
    // 2*eta and the subtraction of 1 are exact in doubles for eta in [0,1],
    // so the double margin() is already the exact value.
    Rational best = 1;
    for (double e : eta_) {
        Rational w = Rational(2) * Rational(e) - 1;
        if (w < 0) w = -w;
        if (w < best) best = w;
    }
    return best;
}

LabeledSample TiledDistribution::sample(long long n, std::uint64_t seed) const {
    SplitMix64 gen(seed);
    return sample_with(gen, n);
}

LabeledSample TiledDistribution::sample_with(SplitMix64& gen, long long n) const {
    if (n < 1) throw InputError("TiledDistribution::sample: n must be positive");
    LabeledSample out(dim_);
    std::vector<double> coords(static_cast<std::size_t>(dim_));
    for (long long i = 0; i < n; ++i) {
        for (int j = 0; j < dim_; ++j) coords[static_cast<std::size_t>(j)] = gen.next_unit();
        const double u = gen.next_unit();
        out.add(coords, u < eta_at(coords) ? 1 : 0);
    }
    return out;
}

namespace {

int flat_parity(long long flat, int dim, int cells) {
    int parity = 0;
    for (int j = 0; j < dim; ++j) {
        parity ^= static_cast<int>(flat % cells) & 1;
        flat /= cells;
    }
    return parity;
}

} // namespace

TiledDistribution TiledDistribution::tiles(int dim, int cells_per_axis, double margin) {
    if (!(margin >= 0.0 && margin <= 1.0)) throw InputError("tiles preset: margin must lie in [0,1]");
    const long long total = checked_cell_count(dim, cells_per_axis);
    const double lo = (1.0 - margin) / 2.0;
    const double hi = (1.0 + margin) / 2.0;
    std::vector<double> eta(static_cast<std::size_t>(total));
    for (long long i = 0; i < total; ++i)
        eta[static_cast<std::size_t>(i)] = flat_parity(i, dim, cells_per_axis) ? hi : lo;
    return TiledDistribution(dim, cells_per_axis, std::move(eta));
}

TiledDistribution TiledDistribution::zero_error(int dim, int cells_per_axis) {
    const long long total = checked_cell_count(dim, cells_per_axis);
    std::vector<double> eta(static_cast<std::size_t>(total));
    for (long long i = 0; i < total; ++i)
        eta[static_cast<std::size_t>(i)] = flat_parity(i, dim, cells_per_axis) ? 1.0 : 0.0;
    return TiledDistribution(dim, cells_per_axis, std::move(eta));
}

TiledDistribution TiledDistribution::no_margin(int dim, int cells_per_axis) {
    const long long total = checked_cell_count(dim, cells_per_axis);
    std::vector<double> eta(static_cast<std::size_t>(total));
    for (long long i = 0; i < total; ++i) {
        const double delta = 0.5 / static_cast<double>(i + 2);
        const int sign = flat_parity(i, dim, cells_per_axis) ? 1 : -1;
        eta[static_cast<std::size_t>(i)] = 0.5 + sign * delta;
    }
    return TiledDistribution(dim, cells_per_axis, std::move(eta));
}

TiledDistribution TiledDistribution::from_json(const nlohmann::json& j) {
    try {
        if (j.contains("format") && j.at("format").get<std::string>() != "cartlab-dist")
            throw InputError("distribution json: unexpected format tag");
        const int dim = j.at("dim").get<int>();
        const int cells = j.at("cells_per_axis").get<int>();
        auto eta = j.at("eta").get<std::vector<double>>();
        return TiledDistribution(dim, cells, std::move(eta));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("distribution json: ") + e.what());
    }
}

nlohmann::json TiledDistribution::to_json() const {
    return nlohmann::json{{"format", "cartlab-dist"},
                          {"version", 1},
                          {"dim", dim_},
                          {"cells_per_axis", cells_},
                          {"eta", eta_}};
}

TiledDistribution TiledDistribution::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("distribution json: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("distribution json: parse failure in " + path + ": " + e.what());
    }
    return from_json(j);
}

void TiledDistribution::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("distribution json: cannot write " + path);
    out << to_json().dump(2) << "\n";
}

} // namespace cartlab
