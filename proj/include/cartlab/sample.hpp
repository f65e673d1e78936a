#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cartlab/errors.hpp"

namespace cartlab {

struct LabeledPoint {
    std::vector<double> x; // coordinates in [0,1]
    int y = 0;             // label in {0,1}
};

// Feature rows live in one flat buffer; samples are immutable once built
// and safe to share across concurrent readers.
class LabeledSample {
public:
    explicit LabeledSample(int dim);

    int dim() const { return dim_; }
    long long size() const { return static_cast<long long>(ys_.size()); }
    bool empty() const { return ys_.empty(); }

    std::span<const double> x(long long i) const {
        return {xs_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }
    int y(long long i) const { return ys_[static_cast<std::size_t>(i)]; }

    void add(std::span<const double> coords, int label);
    void add(const LabeledPoint& p);

    LabeledPoint point(long long i) const;
    LabeledSample subset(std::span<const long long> indices) const;

private:
    int dim_;
    std::vector<double> xs_;
    std::vector<std::int8_t> ys_;
};

// CSV interchange: header "x0,...,x{d-1},y", decimal floats, labels 0/1,
// UTF-8 with LF line endings. Floats are written with 17 significant
// digits so a round-trip reproduces the sample exactly.
LabeledSample read_sample_csv(std::istream& in);
LabeledSample read_sample_csv_file(const std::string& path);
void write_sample_csv(std::ostream& out, const LabeledSample& sample);
void write_sample_csv_file(const std::string& path, const LabeledSample& sample);

} // namespace cartlab
