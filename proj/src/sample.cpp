#include "cartlab/sample.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cartlab {

LabeledSample::LabeledSample(int dim) : dim_(dim) {
    if (dim < 1) throw InputError("LabeledSample: dim must be positive");
}

void LabeledSample::add(std::span<const double> coords, int label) {
    if (static_cast<int>(coords.size()) != dim_)
        throw InputError("LabeledSample: point dimension mismatch");
    if (label != 0 && label != 1) throw InputError("LabeledSample: label must be 0 or 1");
    for (double c : coords)
        if (!(c >= 0.0 && c <= 1.0)) throw InputError("LabeledSample: coordinate outside [0,1]");
    xs_.insert(xs_.end(), coords.begin(), coords.end());
    ys_.push_back(static_cast<std::int8_t>(label));
}

void LabeledSample::add(const LabeledPoint& p) { add(std::span<const double>(p.x), p.y); }

LabeledPoint LabeledSample::point(long long i) const {
    const auto coords = x(i);
    return LabeledPoint{std::vector<double>(coords.begin(), coords.end()), y(i)};
}

LabeledSample LabeledSample::subset(std::span<const long long> indices) const {
    LabeledSample out(dim_);
    out.xs_.reserve(indices.size() * static_cast<std::size_t>(dim_));
    out.ys_.reserve(indices.size());
    for (long long i : indices) {
        const auto coords = x(i);
        out.xs_.insert(out.xs_.end(), coords.begin(), coords.end());
        out.ys_.push_back(static_cast<std::int8_t>(y(i)));
    }
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

LabeledSample read_sample_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("sample csv: missing header");
    const auto header = split_fields(line);
    if (header.size() < 2 || header.back() != "y")
        throw InputError("sample csv: header must be x0,...,x{d-1},y");
    const int dim = static_cast<int>(header.size()) - 1;
    for (int j = 0; j < dim; ++j)
        if (header[static_cast<std::size_t>(j)] != "x" + std::to_string(j))
            throw InputError("sample csv: header must be x0,...,x{d-1},y");

    LabeledSample sample(dim);
    std::vector<double> coords(static_cast<std::size_t>(dim));
    long long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (static_cast<int>(fields.size()) != dim + 1)
            throw InputError("sample csv: wrong field count at line " + std::to_string(line_no));
        try {
            for (int j = 0; j < dim; ++j) coords[static_cast<std::size_t>(j)] = std::stod(fields[static_cast<std::size_t>(j)]);
            const int label = std::stoi(fields.back());
            sample.add(coords, label);
        } catch (const InputError&) {
            throw;
        } catch (const std::exception&) {
            throw InputError("sample csv: bad value at line " + std::to_string(line_no));
        }
    }
    return sample;
}

LabeledSample read_sample_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("sample csv: cannot open " + path);
    return read_sample_csv(in);
}

void write_sample_csv(std::ostream& out, const LabeledSample& sample) {
    for (int j = 0; j < sample.dim(); ++j) out << "x" << j << ",";
    out << "y\n";
    char buf[40];
    for (long long i = 0; i < sample.size(); ++i) {
        const auto coords = sample.x(i);
        for (double c : coords) {
            std::snprintf(buf, sizeof buf, "%.17g", c);
            out << buf << ",";
        }
        out << sample.y(i) << "\n";
    }
}

void write_sample_csv_file(const std::string& path, const LabeledSample& sample) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings everywhere
    if (!out) throw InputError("sample csv: cannot write " + path);
    write_sample_csv(out, sample);
}

} // namespace cartlab
