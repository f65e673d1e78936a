#include <doctest.h>

#include <sstream>

#include "cartlab/rational.hpp"
#include "cartlab/rng.hpp"
#include "cartlab/sample.hpp"

using namespace cartlab;

TEST_CASE("sample validation") {
    LabeledSample s(2);
    CHECK_THROWS_AS(s.add(std::vector<double>{0.5}, 1), InputError);
    CHECK_THROWS_AS(s.add(std::vector<double>{0.5, 1.5}, 1), InputError);
    CHECK_THROWS_AS(s.add(std::vector<double>{0.5, 0.5}, 2), InputError);
    s.add(std::vector<double>{0.5, 1.0}, 1);
    CHECK(s.size() == 1);
    CHECK_THROWS_AS(LabeledSample(0), InputError);
}

TEST_CASE("csv round-trip is exact") {
    LabeledSample s(2);
    SplitMix64 gen(3);
    for (int i = 0; i < 50; ++i)
        s.add(std::vector<double>{gen.next_unit(), gen.next_unit()},
              static_cast<int>(gen.next_below(2)));

    std::ostringstream out;
    write_sample_csv(out, s);
    const std::string text = out.str();
    CHECK(text.rfind("x0,x1,y\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos); // LF only

    std::istringstream in(text);
    const LabeledSample back = read_sample_csv(in);
    REQUIRE(back.size() == s.size());
    for (long long i = 0; i < s.size(); ++i) {
        CHECK(back.y(i) == s.y(i));
        for (int j = 0; j < 2; ++j) CHECK(back.x(i)[j] == s.x(i)[j]); // bit-exact
    }
}

TEST_CASE("csv rejects malformed input") {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_sample_csv(in);
    };
    CHECK_THROWS_AS((void)parse(""), InputError);
    CHECK_THROWS_AS((void)parse("a,b\n"), InputError);
    CHECK_THROWS_AS((void)parse("x0,y\n0.5\n"), InputError);
    CHECK_THROWS_AS((void)parse("x0,y\n0.5,7\n"), InputError);
    CHECK_THROWS_AS((void)parse("x0,y\nnope,1\n"), InputError);
    CHECK(parse("x0,y\n0.5,1\n\n").size() == 1); // trailing blank line ok
}

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("3/10") == Rational(3, 10));
    CHECK(parse_rational("-3/10") == Rational(-3, 10));
    CHECK(parse_rational("7") == 7);
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("-1.5") == Rational(-3, 2));
    CHECK(format_rational(Rational(3, 10)) == "3/10");
    CHECK(format_rational(Rational(4)) == "4");
    CHECK_THROWS_AS((void)parse_rational(""), InputError);
    CHECK_THROWS_AS((void)parse_rational("x"), InputError);
    CHECK_THROWS_AS((void)parse_rational("1/0"), InputError);
    CHECK_THROWS_AS((void)parse_rational("1.2.3"), InputError);
}

TEST_CASE("splitmix64 reference stream") {
    // first outputs for seed 1234567, from the public reference sequence
    SplitMix64 gen(1234567);
    CHECK(gen.next_u64() == 6457827717110365317ULL);
    CHECK(gen.next_u64() == 3203168211198807973ULL);
    SplitMix64 unit(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = unit.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    SplitMix64 bounded(7);
    for (int i = 0; i < 1000; ++i) CHECK(bounded.next_below(13) < 13);
}
