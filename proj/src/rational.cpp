#include "cartlab/rational.hpp"

#include <cctype>

namespace cartlab {

long long to_int64(const BigInt& v, const char* what) {
    static const BigInt lo = std::numeric_limits<long long>::min();
    static const BigInt hi = std::numeric_limits<long long>::max();
    if (v < lo || v > hi) throw InputError(std::string(what) + ": value does not fit in 64 bits");
    return v.convert_to<long long>();
}

namespace {

bool is_integer_text(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    const auto bad = [&] { return InputError("parse_rational: cannot parse '" + text + "'"); };
    if (text.empty()) throw bad();

    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (!is_integer_text(num) || !is_integer_text(den)) throw bad();
        const BigInt d(den);
        if (d == 0) throw bad();
        return Rational(BigInt(num), d);
    }

    const auto dot = text.find('.');
    if (dot != std::string::npos) {
        const std::string whole = text.substr(0, dot);
        const std::string frac = text.substr(dot + 1);
        if (frac.empty() || !is_integer_text(frac)) throw bad();
        std::string head = whole.empty() ? std::string("0") : whole;
        bool negative = false;
        if (head == "+" || head == "-") {
            negative = head == "-";
            head = "0";
        } else if (!is_integer_text(head)) {
            throw bad();
        } else if (head[0] == '-') {
            negative = true;
            head = head.substr(1);
        } else if (head[0] == '+') {
            head = head.substr(1);
        }
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt num = BigInt(head) * scale + BigInt(frac);
        if (negative) num = -num;
        return Rational(num, scale);
    }

    if (!is_integer_text(text)) throw bad();
    return Rational(BigInt(text));
}

std::string format_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

} // namespace cartlab
