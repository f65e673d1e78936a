#include <doctest.h>

#include <sstream>

#include "cartlab/tree.hpp"
#include "helpers.hpp"

using namespace cartlab;
namespace ct = cartlab::testing;

namespace {

Tree stump(double threshold, int left_label, int right_label) {
    std::vector<Tree::Node> nodes(3);
    nodes[0].feature = 0;
    nodes[0].threshold = threshold;
    nodes[0].left = 1;
    nodes[0].right = 2;
    nodes[1].label = left_label;
    nodes[2].label = right_label;
    return Tree::from_nodes(1, std::move(nodes));
}

} // namespace

TEST_CASE("prediction routing") {
    CHECK(predict(Tree::single_leaf(3, 1), std::vector<double>{0.1, 0.2, 0.3}) == 1);
    const Tree t = stump(0.5, 0, 1);
    CHECK(predict(t, std::vector<double>{0.3}) == 0);
    CHECK(predict(t, std::vector<double>{0.5}) == 0); // <= goes left
    CHECK(predict(t, std::vector<double>{0.7}) == 1);
    CHECK_THROWS_AS(predict(t, std::vector<double>{0.1, 0.2}), InputError);
}

TEST_CASE("prediction equals the leaf-region membership oracle") {
    SplitMix64 gen(42);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Tree t = ct::random_tree(2, 10, 8, 500 + seed);
        const auto regions = ct::leaf_regions(t);
        std::vector<double> x(2);
        for (int trial = 0; trial < 100; ++trial) {
            x[0] = gen.next_unit();
            x[1] = gen.next_unit();
            const auto leaf = ct::containing_leaf(regions, x);
            REQUIRE(leaf.has_value()); // leaf regions partition the cube
            CHECK(*leaf == predict_leaf(t, x));
        }
    }
}

TEST_CASE("fitting leaf counts and majority labels") {
    LabeledSample s(1);
    s.add(std::vector<double>{0.1}, 1);
    s.add(std::vector<double>{0.2}, 1);
    s.add(std::vector<double>{0.3}, 0);
    s.add(std::vector<double>{0.9}, 0);
    s.add(std::vector<double>{0.8}, 1);

    const Tree fitted = fit_leaf_labels(stump(0.5, 0, 0), s);
    CHECK(fitted.node(fitted.node(0).left).n0 == 1);
    CHECK(fitted.node(fitted.node(0).left).n1 == 2);
    CHECK(fitted.node(fitted.node(0).left).label == 1); // majority
    CHECK(fitted.node(fitted.node(0).right).n0 == 1);
    CHECK(fitted.node(fitted.node(0).right).n1 == 1);
    CHECK(fitted.node(fitted.node(0).right).label == 0); // tie breaks to 0
    CHECK(fitted.node(0).n0 + fitted.node(0).n1 == 5);

    SUBCASE("empty leaves get counts (0,0) and label 0") {
        LabeledSample left_only(1);
        left_only.add(std::vector<double>{0.1}, 1);
        const Tree f2 = fit_leaf_labels(stump(0.5, 0, 1), left_only);
        CHECK(f2.node(f2.node(0).right).n0 == 0);
        CHECK(f2.node(f2.node(0).right).n1 == 0);
        CHECK(f2.node(f2.node(0).right).label == 0);
    }
    SUBCASE("idempotent on the same sample") {
        const Tree once = fit_leaf_labels(stump(0.5, 0, 0), s);
        const Tree twice = fit_leaf_labels(once, s);
        CHECK(trees_equal(once, twice, true, true));
    }
    CHECK_THROWS_AS(fit_leaf_labels(stump(0.5, 0, 0), LabeledSample(1)), InputError);
}

TEST_CASE("majority fit minimizes the empirical error over all labelings") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const Tree t = ct::random_tree(2, 9, 6, 700 + seed);
        const auto s = ct::lattice_sample(2, 40, 8, 800 + seed);
        const Tree fitted = fit_leaf_labels(t, s);
        CHECK(misclassification_count(fitted, s) == ct::best_labeling_error(t, s));
    }
}

TEST_CASE("empirical error as an exact rational") {
    LabeledSample s(1);
    for (int i = 0; i < 4; ++i) s.add(std::vector<double>{0.2 * (i + 1)}, i == 3 ? 1 : 0);
    const Tree zeros = Tree::single_leaf(1, 0);
    CHECK(empirical_error(zeros, s) == Rational(1, 4));
    const Tree ones = Tree::single_leaf(1, 1);
    CHECK(empirical_error(ones, s) == Rational(3, 4));
    LabeledSample perfect(1);
    perfect.add(std::vector<double>{0.5}, 0);
    CHECK(empirical_error(zeros, perfect) == 0);
    CHECK(empirical_error(ones, perfect) == 1);
    CHECK_THROWS_AS(empirical_error(zeros, LabeledSample(1)), InputError);
}

TEST_CASE("misclassification decomposes over leaves as min(n0, n1)") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Tree t = ct::random_tree(2, 8, 6, 60 + seed);
        const auto s = ct::lattice_sample(2, 50, 8, 160 + seed);
        const Tree fitted = fit_leaf_labels(t, s);
        long long per_leaf = 0;
        for (const Tree::Node& nd : fitted.nodes())
            if (nd.is_leaf()) per_leaf += std::min(nd.n0, nd.n1);
        CHECK(misclassification_count(fitted, s) == per_leaf);
        CHECK(fitted.branch_error_count(0) == per_leaf);
    }
}

TEST_CASE("pruned-subtree relation") {
    const Tree t = ct::random_tree(2, 10, 8, 90);
    CHECK(is_pruned_subtree(t, t)); // reflexive
    CHECK(is_pruned_subtree(Tree::single_leaf(2, 0), t));

    SUBCASE("random collapses stay below, grafts do not") {
        SplitMix64 gen(17);
        for (int trial = 0; trial < 20; ++trial) {
            const Tree big = ct::random_tree(2, 10, 8, 300 + trial);
            // collapse a random internal node
            std::vector<int> internals;
            for (int id = 0; id < big.node_count(); ++id)
                if (!big.node(id).is_leaf()) internals.push_back(id);
            if (internals.empty()) continue;
            const int victim =
                internals[gen.next_below(static_cast<std::uint64_t>(internals.size()))];
            std::vector<Tree::Node> nodes;
            const auto emit = [&](auto&& self, int src) -> int {
                const Tree::Node& nd = big.node(src);
                const int id = static_cast<int>(nodes.size());
                nodes.push_back(Tree::Node{});
                nodes[id].label = nd.label;
                if (!nd.is_leaf() && src != victim) {
                    nodes[id].feature = nd.feature;
                    nodes[id].threshold = nd.threshold;
                    const int li = self(self, nd.left);
                    const int ri = self(self, nd.right);
                    nodes[id].left = li;
                    nodes[id].right = ri;
                }
                return id;
            };
            emit(emit, 0);
            const Tree collapsed = Tree::from_nodes(2, std::move(nodes));
            CHECK(is_pruned_subtree(collapsed, big));
            if (collapsed.node_count() < big.node_count()) CHECK(!is_pruned_subtree(big, collapsed));
        }
    }

    SUBCASE("partial order on generated triples") {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const Tree c = ct::random_tree(1, 6, 8, 400 + seed);
            const Tree b = ct::random_tree(1, 6, 8, 400 + seed); // same generator, same tree
            CHECK(is_pruned_subtree(b, c));
            CHECK(is_pruned_subtree(c, b));
            CHECK(trees_equal(b, c)); // antisymmetry: mutual implies equal topology
        }
    }

    SUBCASE("transitive along collapse chains") {
        const auto collapse_first_internal = [](const Tree& src) {
            int victim = -1;
            for (int id = 0; id < src.node_count() && victim < 0; ++id)
                if (!src.node(id).is_leaf()) victim = id;
            std::vector<Tree::Node> nodes;
            const auto emit = [&](auto&& self, int sid) -> int {
                const Tree::Node& nd = src.node(sid);
                const int id = static_cast<int>(nodes.size());
                nodes.push_back(Tree::Node{});
                nodes[id].label = nd.label;
                if (!nd.is_leaf() && sid != victim) {
                    nodes[id].feature = nd.feature;
                    nodes[id].threshold = nd.threshold;
                    const int li = self(self, nd.left);
                    const int ri = self(self, nd.right);
                    nodes[id].left = li;
                    nodes[id].right = ri;
                }
                return id;
            };
            emit(emit, 0);
            return Tree::from_nodes(src.dim(), std::move(nodes));
        };
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const Tree t0 = ct::random_tree(2, 8, 8, 450 + seed);
            if (t0.internal_count() < 2) continue;
            const Tree t1 = collapse_first_internal(t0);
            const Tree t2 = collapse_first_internal(t1);
            CHECK(is_pruned_subtree(t1, t0));
            CHECK(is_pruned_subtree(t2, t1));
            CHECK(is_pruned_subtree(t2, t0)); // transitivity
        }
    }
}

TEST_CASE("empirical distance is the disagreement fraction") {
    const auto grid = ct::lattice_sample(2, 100, 16, 5);
    const Tree f = ct::random_tree(2, 8, 8, 6);
    const Tree g = ct::random_tree(2, 8, 8, 7);
    long long diff = 0;
    for (long long i = 0; i < grid.size(); ++i)
        if (predict(f, grid.x(i)) != predict(g, grid.x(i))) ++diff;
    CHECK(empirical_distance_sq(f, g, grid) ==
          static_cast<double>(diff) / static_cast<double>(grid.size()));
    CHECK(empirical_distance_sq(f, f, grid) == 0.0);
    // pointwise flipped copy disagrees everywhere
    std::vector<Tree::Node> nodes = f.nodes();
    for (auto& nd : nodes) nd.label = 1 - nd.label;
    const Tree flipped = Tree::from_nodes(2, std::move(nodes));
    CHECK(empirical_distance_sq(f, flipped, grid) == 1.0);
    CHECK_THROWS_AS(empirical_distance_sq(f, g, LabeledSample(2)), InputError);
}

TEST_CASE("tree json round-trip preserves predictions") {
    const Tree t = fit_leaf_labels(ct::random_tree(2, 12, 8, 21), ct::lattice_sample(2, 60, 8, 22));
    const Tree back = tree_from_json(tree_to_json(t));
    CHECK(trees_equal(t, back, true, true));
    SplitMix64 gen(23);
    std::vector<double> x(2);
    for (int i = 0; i < 1000; ++i) {
        x[0] = gen.next_unit();
        x[1] = gen.next_unit();
        CHECK(predict(t, x) == predict(back, x));
    }
}

TEST_CASE("arena validation rejects malformed trees") {
    std::vector<Tree::Node> nodes(2);
    nodes[0].feature = 0;
    nodes[0].threshold = 0.5;
    nodes[0].left = 1;
    nodes[0].right = 1; // same child twice
    CHECK_THROWS_AS(Tree::from_nodes(1, std::move(nodes)), InputError);

    std::vector<Tree::Node> cyclic(2);
    cyclic[0].feature = 0;
    cyclic[0].threshold = 0.5;
    cyclic[0].left = 0; // child before parent
    cyclic[0].right = 1;
    CHECK_THROWS_AS(Tree::from_nodes(1, std::move(cyclic)), InputError);
}
