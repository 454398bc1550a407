#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "spantree/rng.hpp"
#include "spantree/trees.hpp"
#include "support/fixtures.hpp"

using namespace spantree;
using spantree::testing::UnionFind;

namespace {

std::vector<Instance> grid_points(int gamma, int dims = 3) {
    Rng rng(1234);
    return testing::random_instances(rng, gamma, dims, 5.0);
}

bool is_spanning_tree(const LabeledTree& t, int gamma) {
    if (t.edges.size() != static_cast<std::size_t>(gamma - 1)) return false;
    UnionFind uf(gamma);
    for (const auto& [i, j] : t.edges)
        if (!uf.unite(i, j)) return false;
    return true;
}

std::set<std::pair<int, int>> edge_set(const LabeledTree& t) {
    return {t.edges.begin(), t.edges.end()};
}

// Distance to segment by dense parameter scan; slow but independent.
double scan_segment_distance(const std::vector<double>& z, const std::vector<double>& a,
                             const std::vector<double>& b, int samples = 100000) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const double t = static_cast<double>(s) / static_cast<double>(samples - 1);
        double acc = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            const double p = a[k] + t * (b[k] - a[k]);
            acc += (z[k] - p) * (z[k] - p);
        }
        best = std::min(best, std::sqrt(acc));
    }
    return best;
}

}  // namespace

TEST_CASE("pruefer decode matches hand-traced sequences") {
    const auto as_set = [](const std::vector<std::pair<int, int>>& edges) {
        return std::set<std::pair<int, int>>(edges.begin(), edges.end());
    };
    CHECK(decode_pruefer({}, 2) == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(as_set(decode_pruefer({0}, 3)) == std::set<std::pair<int, int>>{{0, 1}, {0, 2}});
    CHECK(as_set(decode_pruefer({2, 3}, 4)) ==
          std::set<std::pair<int, int>>{{0, 2}, {1, 3}, {2, 3}});
    // star at node 0
    CHECK(as_set(decode_pruefer({0, 0}, 4)) ==
          std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}});
}

TEST_CASE("pruefer decode rejects malformed input") {
    CHECK_THROWS(decode_pruefer({}, 1));
    CHECK_THROWS(decode_pruefer({0, 1}, 3));
    CHECK_THROWS(decode_pruefer({3}, 3));
    CHECK_THROWS(decode_pruefer({-1}, 3));
}

TEST_CASE("enumeration satisfies the Cayley count with distinct valid trees") {
    const std::vector<std::pair<int, std::size_t>> expected = {
        {2, 1}, {3, 3}, {4, 16}, {5, 125}};
    for (const auto& [gamma, count] : expected) {
        const auto trees = enumerate_spanning_trees(grid_points(gamma));
        CHECK(trees.size() == count);
        std::set<std::set<std::pair<int, int>>> distinct;
        for (const auto& t : trees) {
            CHECK(is_spanning_tree(t, gamma));
            distinct.insert(edge_set(t));
        }
        CHECK(distinct.size() == count);
    }
}

TEST_CASE("gamma=4 enumeration equals brute-force acyclic subsets of K4") {
    const auto points = grid_points(4);
    const auto trees = enumerate_spanning_trees(points);
    std::set<std::set<std::pair<int, int>>> from_pruefer;
    for (const auto& t : trees) from_pruefer.insert(edge_set(t));

    // all 3-subsets of the 6 edges of K4 that are connected and acyclic
    std::vector<std::pair<int, int>> k4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) k4.emplace_back(i, j);
    std::set<std::set<std::pair<int, int>>> brute;
    int candidates = 0;
    for (std::size_t a = 0; a < k4.size(); ++a)
        for (std::size_t b = a + 1; b < k4.size(); ++b)
            for (std::size_t c = b + 1; c < k4.size(); ++c) {
                ++candidates;
                UnionFind uf(4);
                if (uf.unite(k4[a].first, k4[a].second) &&
                    uf.unite(k4[b].first, k4[b].second) &&
                    uf.unite(k4[c].first, k4[c].second))
                    brute.insert({k4[a], k4[b], k4[c]});
            }
    CHECK(candidates == 20);
    CHECK(brute.size() == 16);
    CHECK(from_pruefer == brute);
}

TEST_CASE("enumeration validates inputs") {
    CHECK_THROWS(enumerate_spanning_trees(grid_points(1)));
    CHECK_THROWS(enumerate_spanning_trees(grid_points(7)));         // above default cap
    CHECK_NOTHROW(enumerate_spanning_trees(grid_points(7), 7));     // cap raised
    auto pts = grid_points(3);
    pts[1].features.push_back(0.0);
    CHECK_THROWS(enumerate_spanning_trees(pts));
}

TEST_CASE("tree geometry: lengths and weight sum") {
    std::vector<Instance> pts = {{{0.0, 0.0}, 1, 0}, {{3.0, 0.0}, 1, 1}, {{3.0, 4.0}, 1, 2}};
    const auto t = build_tree(pts, {2});
    // edges {0,2},{1,2}: lengths 5 and 4
    REQUIRE(t.edges.size() == 2);
    CHECK(t.weight_sum == doctest::Approx(9.0));
}

TEST_CASE("weight sum is invariant under node relabeling") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        auto pts = testing::random_instances(rng, 4, 3, 2.0);
        const auto trees = enumerate_spanning_trees(pts);
        // relabel: rotate the point order, find the geometrically equal tree
        std::vector<Instance> rotated = {pts[1], pts[2], pts[3], pts[0]};
        const auto trees_rot = enumerate_spanning_trees(rotated);
        for (const auto& t : trees) {
            std::set<std::set<int>> geo;  // edges as id pairs
            for (const auto& [i, j] : t.edges)
                geo.insert({t.node_ids[static_cast<std::size_t>(i)],
                            t.node_ids[static_cast<std::size_t>(j)]});
            bool found = false;
            for (const auto& r : trees_rot) {
                std::set<std::set<int>> geo_r;
                for (const auto& [i, j] : r.edges)
                    geo_r.insert({r.node_ids[static_cast<std::size_t>(i)],
                                  r.node_ids[static_cast<std::size_t>(j)]});
                if (geo_r == geo) {
                    CHECK(r.weight_sum == doctest::Approx(t.weight_sum).epsilon(1e-12));
                    found = true;
                    break;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("point_to_edge_distance handles the three projection regimes") {
    const std::vector<double> xi = {0.0, 0.0};
    const std::vector<double> xj = {2.0, 0.0};

    auto [d1, p1] = point_to_edge_distance(std::vector<double>{1.0, 1.0}, xi, xj);
    CHECK(d1 == doctest::Approx(1.0));
    CHECK(p1);

    auto [d2, p2] = point_to_edge_distance(std::vector<double>{3.0, 0.0}, xi, xj);
    CHECK(d2 == doctest::Approx(1.0));
    CHECK_FALSE(p2);

    // t = 0 boundary is included in the projection branch
    auto [d3, p3] = point_to_edge_distance(std::vector<double>{0.0, 1.0}, xi, xj);
    CHECK(d3 == doctest::Approx(1.0));
    CHECK(p3);

    // degenerate edge
    auto [d4, p4] = point_to_edge_distance(std::vector<double>{1.0, 0.0}, xi, xi);
    CHECK(d4 == doctest::Approx(1.0));
    CHECK_FALSE(p4);

    CHECK_THROWS(point_to_edge_distance(std::vector<double>{1.0}, xi, xj));
}

TEST_CASE("point_to_edge_distance agrees with a dense segment scan") {
    Rng rng(2024);
    int checked = 0;
    while (checked < 200) {  // smaller sample here; the acceptance suite runs 1000
        const auto z = testing::random_point(rng, 3, 2.0);
        const auto a = testing::random_point(rng, 3, 2.0);
        const auto b = testing::random_point(rng, 3, 2.0);
        const double seg = euclidean_distance(a, b);
        const double d = point_to_edge_distance(z, a, b).first;
        if (seg == 0.0 || d < 0.01 * seg) continue;  // scan resolution limit
        const double ref = scan_segment_distance(z, a, b, 10000);
        CHECK(d == doctest::Approx(ref).epsilon(1e-4));

        // symmetry is exact
        CHECK(point_to_edge_distance(z, b, a).first == d);
        ++checked;
    }
}

TEST_CASE("point_to_tree_distance reports per-edge and minimum distances") {
    std::vector<Instance> pts = {{{0.0, 0.0}, 1, 0}, {{1.0, 0.0}, 1, 1}, {{1.0, 1.0}, 1, 2}};
    LabeledTree t;
    t.nodes = {pts[0].features, pts[1].features, pts[2].features};
    t.node_ids = {0, 1, 2};
    t.edges = {{0, 1}, {1, 2}};
    t.edge_lengths = {1.0, 1.0};
    t.weight_sum = 2.0;

    const auto td = point_to_tree_distance(std::vector<double>{5.0, 5.0}, t);
    REQUIRE(td.per_edge.size() == 2);
    CHECK(td.per_edge[0] == doctest::Approx(std::sqrt(41.0)));
    CHECK(td.per_edge[1] == doctest::Approx(std::sqrt(32.0)));
    CHECK(td.min_dist == doctest::Approx(std::sqrt(32.0)));

    const auto at_vertex = point_to_tree_distance(std::vector<double>{1.0, 0.0}, t);
    CHECK(at_vertex.min_dist == 0.0);

    const std::vector<double> z = {1.0, 1.0};
    LabeledTree single;
    single.nodes = {{0.0, 0.0}, {2.0, 0.0}};
    single.node_ids = {0, 1};
    single.edges = {{0, 1}};
    single.edge_lengths = {2.0};
    single.weight_sum = 2.0;
    CHECK(point_to_tree_distance(z, single).min_dist == doctest::Approx(1.0));
}

TEST_CASE("tree_threshold picks the alpha quantile of sorted lengths") {
    LabeledTree t;
    t.nodes = {{0.0}, {1.0}, {2.0}, {3.0}};
    t.node_ids = {0, 1, 2, 3};
    t.edges = {{0, 1}, {1, 2}, {2, 3}};
    t.edge_lengths = {3.0, 1.0, 2.0};

    CHECK(tree_threshold(t, 0.5) == 2.0);  // median of {1,2,3}
    CHECK(tree_threshold(t, 0.0) == 1.0);
    CHECK(tree_threshold(t, 1.0) == 3.0);  // clamped to the top

    LabeledTree single;
    single.nodes = {{0.0}, {4.0}};
    single.node_ids = {0, 1};
    single.edges = {{0, 1}};
    single.edge_lengths = {4.0};
    CHECK(tree_threshold(single, 0.0) == 4.0);
    CHECK(tree_threshold(single, 0.77) == 4.0);

    LabeledTree four;
    four.nodes = {{0.0}, {1.0}, {2.0}, {3.0}, {4.0}};
    four.node_ids = {0, 1, 2, 3, 4};
    four.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    four.edge_lengths = {1.0, 2.0, 3.0, 4.0};
    CHECK(tree_threshold(four, 0.5) == 3.0);  // floor(0.5*4) = 2 -> third value
}

TEST_CASE("tree_threshold is monotone in alpha and bounded by the extremes") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pts = testing::random_instances(rng, 5, 2, 3.0);
        const auto trees = enumerate_spanning_trees(pts);
        const auto& t = trees[rng.below(trees.size())];
        double prev = -1.0;
        for (double alpha = 0.0; alpha <= 1.0; alpha += 0.1) {
            const double th = tree_threshold(t, alpha);
            CHECK(th >= prev);
            CHECK(th >= *std::min_element(t.edge_lengths.begin(), t.edge_lengths.end()));
            CHECK(th <= *std::max_element(t.edge_lengths.begin(), t.edge_lengths.end()));
            prev = th;
        }
    }
}
