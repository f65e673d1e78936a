#include <doctest.h>

#include "cartlab/growing.hpp"
#include "helpers.hpp"

using namespace cartlab;
namespace ct = cartlab::testing;

namespace {

LabeledSample points1d(std::initializer_list<std::pair<double, int>> rows) {
    LabeledSample s(1);
    for (const auto& [x, y] : rows) s.add(std::vector<double>{x}, y);
    return s;
}

} // namespace

TEST_CASE("gini impurity") {
    CHECK(gini(5, 0) == 0.0);
    CHECK(gini(5, 5) == 0.5);
    CHECK(gini(3, 1) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK_THROWS_AS(gini(0, 0), InputError);
}

TEST_CASE("best split on small samples") {
    SUBCASE("pure node has no split") {
        CHECK(!best_split(points1d({{0.1, 0}, {0.9, 0}})));
    }
    SUBCASE("separable sample splits at the gap midpoint") {
        const auto split = best_split(points1d({{0.1, 0}, {0.2, 0}, {0.8, 1}, {0.9, 1}}));
        REQUIRE(split.has_value());
        CHECK(split->feature == 0);
        CHECK(split->threshold == 0.5);
    }
    SUBCASE("min_node_size can forbid every candidate") {
        CHECK(!best_split(points1d({{0.1, 0}, {0.9, 1}}), 2));
    }
    CHECK_THROWS_AS(best_split(LabeledSample(1)), InputError);
}

TEST_CASE("best split beats every candidate in an exact scan") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto s = ct::lattice_sample(2, 30, 6, 1000 + seed);
        const auto chosen = best_split(s);
        const auto candidates = ct::scan_all_splits(s, 1);

        long long n0 = 0, n1 = 0;
        for (long long i = 0; i < s.size(); ++i) (s.y(i) == 0 ? n0 : n1)++;
        const Rational parent_score = Rational(n0 * n1, n0 + n1);

        if (!chosen) {
            for (const auto& c : candidates) CHECK(c.score >= parent_score);
            continue;
        }
        Rational chosen_score;
        bool found = false;
        for (const auto& c : candidates)
            if (c.split.feature == chosen->feature && c.split.threshold == chosen->threshold) {
                chosen_score = c.score;
                found = true;
            }
        REQUIRE(found);
        CHECK(chosen_score < parent_score);
        for (const auto& c : candidates) {
            CHECK(chosen_score <= c.score);
            // exact tie-break: lower feature, then lower threshold
            if (c.score == chosen_score)
                CHECK((chosen->feature < c.split.feature ||
                       (chosen->feature == c.split.feature &&
                        chosen->threshold <= c.split.threshold)));
        }
    }
}

TEST_CASE("growing small samples") {
    SUBCASE("pure sample yields a single leaf") {
        const Tree t = grow_maximal(points1d({{0.2, 1}, {0.4, 1}, {0.8, 1}}));
        CHECK(t.node_count() == 1);
        CHECK(t.node(0).label == 1);
        CHECK(t.node(0).n1 == 3);
    }
    SUBCASE("separable 1-d sample reaches zero training error at depth 1") {
        const auto s = points1d({{0.1, 0}, {0.2, 0}, {0.8, 1}, {0.9, 1}});
        const Tree t = grow_maximal(s);
        CHECK(t.depth() == 1);
        CHECK(t.leaf_count() == 2);
        CHECK(misclassification_count(t, s) == 0);
    }
    CHECK_THROWS_AS(grow_maximal(LabeledSample(1)), InputError);
    CHECK_THROWS_AS(grow_maximal(points1d({{0.5, 1}}), GrowConfig{0, 0, 0}), InputError);
}

TEST_CASE("grown trees: structure invariants") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = ct::lattice_sample(2, 64, 8, 2000 + seed);
        const Tree t = grow_maximal(s);

        // every split leaves the error count no larger
        for (int id = 0; id < t.node_count(); ++id) {
            const Tree::Node& nd = t.node(id);
            if (nd.is_leaf()) continue;
            const Tree::Node& l = t.node(nd.left);
            const Tree::Node& r = t.node(nd.right);
            CHECK(std::min(l.n0, l.n1) + std::min(r.n0, r.n1) <= std::min(nd.n0, nd.n1));
            CHECK(l.n0 + r.n0 == nd.n0);
            CHECK(l.n1 + r.n1 == nd.n1);
        }
        CHECK(t.leaf_count() <= s.size());

        // maximal growth stops only at pure or unsplittable leaves
        for (int id = 0; id < t.node_count(); ++id) {
            const Tree::Node& nd = t.node(id);
            if (!nd.is_leaf()) continue;
            if (nd.n0 > 0 && nd.n1 > 0) {
                // re-collect the rows of this leaf and ask for a split
                LabeledSample leaf_rows(2);
                for (long long i = 0; i < s.size(); ++i)
                    if (predict_leaf(t, s.x(i)) == id) leaf_rows.add(s.point(i));
                CHECK(!best_split(leaf_rows));
            }
        }
    }
}

TEST_CASE("growing is deterministic") {
    const auto s = ct::lattice_sample(3, 80, 8, 42);
    const Tree a = grow_maximal(s);
    const Tree b = grow_maximal(s);
    CHECK(trees_equal(a, b, true, true));
}

TEST_CASE("caps bound the grown tree") {
    const auto s = ct::lattice_sample(2, 100, 16, 7);
    const Tree depth2 = grow_maximal(s, GrowConfig{1, 2, 0});
    CHECK(depth2.depth() <= 2);
    const Tree leaves5 = grow_maximal(s, GrowConfig{1, 0, 5});
    CHECK(leaves5.leaf_count() <= 5);
    const Tree chunky = grow_maximal(s, GrowConfig{20, 0, 0});
    for (const Tree::Node& nd : chunky.nodes())
        if (nd.is_leaf()) CHECK(nd.n0 + nd.n1 >= 20);
}
