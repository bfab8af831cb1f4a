#include <doctest.h>

#include <cmath>
#include <random>

#include "dynlay/metrics.hpp"
#include "support/oracles.hpp"

using namespace dynlay;

TEST_SUITE("metrics")
{
    TEST_CASE("segment predicate examples")
    {
        CHECK(segments_properly_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
        CHECK_FALSE(segments_properly_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
        CHECK_FALSE(segments_properly_intersect({0, 0}, {1, 1}, {1, 1}, {2, 0}));
    }

    TEST_CASE("collinear overlap counts, collinear touching does not")
    {
        CHECK(segments_properly_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
        CHECK_FALSE(segments_properly_intersect({0, 0}, {1, 0}, {1, 0}, {2, 0}));
        CHECK_FALSE(segments_properly_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
    }

    TEST_CASE("a zero-length segment crosses nothing")
    {
        CHECK_FALSE(segments_properly_intersect({1, 1}, {1, 1}, {0, 0}, {2, 2}));
        CHECK_FALSE(segments_properly_intersect({0, 0}, {2, 2}, {1, 1}, {1, 1}));
        CHECK_FALSE(segments_properly_intersect({1, 0}, {1, 0}, {0, 0}, {2, 0}));
        CHECK_FALSE(segments_properly_intersect({1, 1}, {1, 1}, {1, 1}, {1, 1}));
        CHECK_FALSE(oracle::segments_cross({1, 1}, {1, 1}, {0, 0}, {2, 2}));
    }

    TEST_CASE("edge_crossings examples")
    {
        Layout square;
        square.positions = {{"a", {0, 0}}, {"b", {1, 0}}, {"c", {1, 1}}, {"d", {0, 1}}};
        const EdgeList all{{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}, {"a", "c"}, {"b", "d"}};
        CHECK(edge_crossings(square, all) == 1);

        Layout star;
        star.positions = {{"h", {0, 0}}, {"1", {1, 0}}, {"2", {-1, 0}}, {"3", {0, 1}}, {"4", {0, -1}}};
        CHECK(edge_crossings(star, {{"h", "1"}, {"h", "2"}, {"h", "3"}, {"h", "4"}}) == 0);
        CHECK(edge_crossings(star, {}) == 0);
    }

    TEST_CASE("ec_vm examples")
    {
        auto series = [](std::vector<std::size_t> ecs) {
            MetricSeries s;
            for (auto e : ecs)
                s.push_back(MetricSample{0, 0, e, 0, 0, 0, true});
            return s;
        };
        CHECK(ec_vm(series({5, 3, 9})) == 6);
        CHECK(ec_vm(series({4, 4, 4})) == 0);
        CHECK(ec_vm(series({7})) == 0);
        CHECK_THROWS(ec_vm({}));
    }

    TEST_CASE("edge_length_sd examples")
    {
        Layout l;
        l.positions = {{"a", {0, 0}}, {"b", {1, 0}}, {"c", {0, 3}}};
        CHECK(edge_length_sd(l, {{"a", "b"}, {"a", "c"}}) == doctest::Approx(1.0));
        Layout eq;
        eq.positions = {{"a", {0, 0}}, {"b", {2, 0}}, {"c", {0, 2}}};
        CHECK(edge_length_sd(eq, {{"a", "b"}, {"a", "c"}}) == doctest::Approx(0.0));
        CHECK_THROWS(edge_length_sd(l, {}));
    }

    TEST_CASE("sample on an edgeless graph records ec_sd 0 with a flag")
    {
        Graph g;
        UpdateBatch b;
        b.added_nodes = {"a"};
        g.apply_update(b);
        Layout l;
        l.positions["a"] = {1, 1};
        const MetricSample m = sample_metrics(g, l, 0.5, 3);
        CHECK(m.ec == 0);
        CHECK(m.ec_sd == 0.0);
        CHECK_FALSE(m.ec_sd_defined);
        CHECK(m.node_count == 1);
        CHECK(m.iteration == 3);
    }

    TEST_CASE("property: crossing count matches the parametric oracle and is invariant under similarity maps")
    {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        for (int trial = 0; trial < 100; ++trial) {
            Graph g = oracle::random_graph(rng, 2 + static_cast<int>(rng() % 29), 60);
            const auto idx = oracle::index_graph(g);
            std::vector<Position> pos;
            Layout l;
            for (const auto& id : idx.ids) {
                pos.push_back({u(rng), u(rng)});
                l.positions[id] = pos.back();
            }
            const EdgeList edges = g.undirected_edges();
            const std::size_t want = oracle::count_crossings(pos, idx.edges);
            REQUIRE(edge_crossings(l, edges) == want);

            const double angle = u(rng), scale = 0.1 + u(rng), tx = u(rng) - 5, ty = u(rng) - 5;
            Layout moved = l;
            for (auto& [id, p] : moved.positions)
                p = {scale * (std::cos(angle) * p.x - std::sin(angle) * p.y) + tx,
                     scale * (std::sin(angle) * p.x + std::cos(angle) * p.y) + ty};
            CHECK(edge_crossings(moved, edges) == want);
            if (!edges.empty()) {
                CHECK(edge_length_sd(moved, edges) ==
                      doctest::Approx(scale * edge_length_sd(l, edges)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("property: ec_vm is zero exactly when the series is constant")
    {
        std::mt19937_64 rng(22);
        for (int trial = 0; trial < 50; ++trial) {
            MetricSeries s;
            const std::size_t n = 1 + rng() % 8;
            for (std::size_t i = 0; i < n; ++i)
                s.push_back(MetricSample{0, 0, rng() % 3, 0, 0, 0, true});
            bool constant = true;
            for (const auto& m : s)
                constant = constant && m.ec == s.front().ec;
            CHECK((ec_vm(s) == 0) == constant);
        }
    }
}
