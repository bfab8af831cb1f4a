#include <doctest.h>

#include <cmath>

#include "dynlay/models/force_atlas2.hpp"
#include "dynlay/models/fruchterman_reingold.hpp"
#include "support/oracles.hpp"

using namespace dynlay;
using namespace dynlay::models;

namespace {

Graph pair_graph()
{
    Graph g;
    UpdateBatch b;
    b.added_nodes = {"a", "b"};
    b.added_edges = {{"a", "b", 1.0, 0.0}};
    g.apply_update(b);
    return g;
}

std::vector<Position> random_positions(Rng& rng, std::size_t n, double side)
{
    std::uniform_real_distribution<double> u(0.0, side);
    std::vector<Position> p(n);
    for (auto& q : p)
        q = {u(rng), u(rng)};
    return p;
}

}  // namespace

TEST_SUITE("fr")
{
    TEST_CASE("force law examples")
    {
        CHECK(fr_repulsion(1.0, 2.0) == 0.5);
        CHECK(fr_attraction(1.0, 2.0) == 4.0);
        CHECK(fr_ideal_distance(1.0, Canvas{100, 100}, 100) == doctest::Approx(10.0));
    }

    TEST_CASE("doubling the node count shrinks k by sqrt(2)")
    {
        const double k100 = fr_ideal_distance(1.0, Canvas{100, 100}, 100);
        const double k200 = fr_ideal_distance(1.0, Canvas{100, 100}, 200);
        CHECK(k100 / k200 == doctest::Approx(std::sqrt(2.0)));
    }

    TEST_CASE("pair at the ideal distance has zero net displacement")
    {
        const Topology topo = pair_graph().topology();
        const auto d = fr_displacements(topo, {{3, 4}, {3.6, 4.8}}, 1.0, 1e-9);
        CHECK(std::abs(d[0].x) <= 1e-9);
        CHECK(std::abs(d[0].y) <= 1e-9);
        CHECK(std::abs(d[1].x) <= 1e-9);
        CHECK(std::abs(d[1].y) <= 1e-9);
    }

    TEST_CASE("zero temperature moves nothing")
    {
        Rng g_rng(1);
        const Graph g = oracle::random_connected_graph(g_rng, 10, 5);
        FruchtermanReingoldParams p;
        p.initial_temperature = 0.0;
        FruchtermanReingold fr(p);
        Layout layout;
        Rng rng(2);
        ModelContext ctx{&rng};
        fr.init_section(g, layout, ctx);
        const auto before = layout.positions;
        const StepReport r = fr.iteration_step(g, layout, ctx);
        CHECK(r.moved == 0);
        CHECK(layout.positions == before);
    }

    TEST_CASE("displacements are translation invariant")
    {
        Rng rng(4);
        for (int trial = 0; trial < 20; ++trial) {
            const Graph g = oracle::random_connected_graph(rng, 12, 6);
            const Topology topo = g.topology();
            auto pos = random_positions(rng, topo.size(), 50);
            auto moved = pos;
            for (auto& p : moved)
                p = {p.x + 13.25, p.y - 7.5};
            const auto a = fr_displacements(topo, pos, 5.0, 1e-6);
            const auto b = fr_displacements(topo, moved, 5.0, 1e-6);
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(b[i].x == doctest::Approx(a[i].x).epsilon(1e-9).scale(1.0));
                CHECK(b[i].y == doctest::Approx(a[i].y).epsilon(1e-9).scale(1.0));
            }
        }
    }

    TEST_CASE("temperature cools between updates and is reset by an update")
    {
        Rng g_rng(1);
        Graph g = oracle::random_connected_graph(g_rng, 10, 5);
        FruchtermanReingold fr;
        Layout layout;
        Rng rng(2);
        ModelContext ctx{&rng};
        fr.init_section(g, layout, ctx);
        const double t0 = fr.initial_temperature();
        CHECK(t0 == doctest::Approx(0.1 * layout.canvas.min_side()));
        double t = fr.temperature();
        for (int i = 0; i < 50; ++i) {
            fr.iteration_step(g, layout, ctx);
            REQUIRE(fr.temperature() <= t);
            REQUIRE(fr.temperature() >= 0.0);
            t = fr.temperature();
        }
        const double k_before = fr.k_ideal();
        fr.on_update(g, layout, DeltaReport{}, ctx);
        CHECK(fr.temperature() == t);
        CHECK(fr.k_ideal() == k_before);

        UpdateBatch b;
        b.added_nodes = {"new"};
        b.added_edges = {{"new", "n0", 1.0, 0.0}};
        fr.on_update(g, layout, g.apply_update(b), ctx);
        CHECK(fr.temperature() == doctest::Approx(0.3 * t0));
        CHECK(fr.k_ideal() == doctest::Approx(fr_ideal_distance(1.0, layout.canvas, 11)));
    }

    TEST_CASE("positions stay on the canvas")
    {
        Rng g_rng(3);
        const Graph g = oracle::random_connected_graph(g_rng, 30, 30);
        FruchtermanReingold fr;
        Layout layout;
        layout.canvas = {40, 20};
        Rng rng(5);
        ModelContext ctx{&rng};
        fr.init_section(g, layout, ctx);
        for (int i = 0; i < 100; ++i) {
            fr.iteration_step(g, layout, ctx);
            for (const auto& [id, p] : layout.positions) {
                REQUIRE(p.x >= 0.0);
                REQUIRE(p.x <= 40.0);
                REQUIRE(p.y >= 0.0);
                REQUIRE(p.y <= 20.0);
            }
        }
    }
}

TEST_SUITE("fa2")
{
    TEST_CASE("degree-scaled repulsion example")
    {
        CHECK(fa2_repulsion(1.0, 1, 2, 2.0) == 3.0);
    }

    TEST_CASE("node speed: zero swing is the maximum, more swing is never faster")
    {
        const double ks = 0.1, gs = 2.0, cap = 10.0, fmag = 1.0;
        const double top = fa2_node_speed(ks, gs, 0.0, fmag, cap);
        CHECK(top == doctest::Approx(ks * gs));
        Rng rng(1);
        std::uniform_real_distribution<double> u(0.0, 100.0);
        for (int i = 0; i < 1000; ++i) {
            const double swing = u(rng);
            const double s1 = fa2_node_speed(ks, gs, swing, fmag, cap);
            const double s2 = fa2_node_speed(ks, gs, 2.0 * swing, fmag, cap);
            REQUIRE(s1 <= top);
            REQUIRE(s2 <= s1);
            REQUIRE(s2 >= 0.0);
        }
        CHECK(fa2_node_speed(ks, 1e6, 0.0, 1e3, cap) * 1e3 <= cap + 1e-12);
    }

    TEST_CASE("connected pair at its equilibrium has zero net force")
    {
        // Degree 1 each, k_r = 2: repulsion 8 / d balances attraction d at d = sqrt(8).
        const Topology topo = pair_graph().topology();
        ForceAtlas2Params p;
        p.gravity = 0.0;
        const double d = std::sqrt(8.0);
        const auto f = fa2_forces(topo, {{1, 1}, {1 + d, 1}}, p, {0, 0}, 1e-9);
        CHECK(std::abs(f[0].x) <= 1e-9);
        CHECK(std::abs(f[0].y) <= 1e-9);
        CHECK(std::abs(f[1].x) <= 1e-9);
    }

    TEST_CASE("forces without gravity are translation invariant")
    {
        Rng rng(7);
        ForceAtlas2Params p;
        p.gravity = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Graph g = oracle::random_connected_graph(rng, 12, 6);
            const Topology topo = g.topology();
            auto pos = random_positions(rng, topo.size(), 50);
            auto moved = pos;
            for (auto& q : moved)
                q = {q.x - 4.5, q.y + 21.0};
            const auto a = fa2_forces(topo, pos, p, {0, 0}, 1e-6);
            const auto b = fa2_forces(topo, moved, p, {100, 100}, 1e-6);
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(b[i].x == doctest::Approx(a[i].x).epsilon(1e-9).scale(1.0));
                CHECK(b[i].y == doctest::Approx(a[i].y).epsilon(1e-9).scale(1.0));
            }
        }
    }

    TEST_CASE("steps keep global speed non-negative and positions finite")
    {
        Rng g_rng(2);
        Graph g = oracle::random_connected_graph(g_rng, 25, 15);
        ForceAtlas2 fa2;
        Layout layout;
        Rng rng(3);
        ModelContext ctx{&rng};
        fa2.init_section(g, layout, ctx);
        for (int i = 0; i < 200; ++i) {
            fa2.iteration_step(g, layout, ctx);
            REQUIRE(fa2.global_speed() >= 0.0);
            for (const auto& [id, q] : layout.positions) {
                REQUIRE(std::isfinite(q.x));
                REQUIRE(std::isfinite(q.y));
            }
        }
        const auto before = layout.positions;
        fa2.on_update(g, layout, DeltaReport{}, ctx);
        CHECK(layout.positions == before);
    }
}
