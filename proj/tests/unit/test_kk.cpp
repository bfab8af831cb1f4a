#include <doctest.h>

#include <cmath>

#include "dynlay/models/kamada_kawai.hpp"
#include "support/oracles.hpp"

using namespace dynlay;
using namespace dynlay::models;

namespace {

Graph path_graph(int n)
{
    Graph g;
    UpdateBatch b;
    for (int i = 0; i < n; ++i) {
        b.added_nodes.push_back("n" + std::to_string(i));
        if (i > 0)
            b.added_edges.push_back({"n" + std::to_string(i - 1), "n" + std::to_string(i), 1.0, 0.0});
    }
    g.apply_update(b);
    return g;
}

KamadaKawaiState two_slot_state(double l, double k)
{
    KamadaKawaiState s;
    s.slots = {"i", "m"};
    s.slot_of = {{"i", 0}, {"m", 1}};
    for (int r = 0; r < 2; ++r) {
        s.hops.grow(1);
        s.ideal.grow(0.0);
        s.stiffness.grow(0.0);
    }
    s.ideal(1, 0) = l;
    s.stiffness(1, 0) = k;
    s.diameter = 1;
    s.base_length = 100;
    return s;
}

// From-scratch matrices on the final graph, computed without the model.
void check_against_scratch(const KamadaKawai& kk, const Graph& g, const Canvas& canvas)
{
    const auto idx = oracle::index_graph(g);
    const auto hops = oracle::all_pairs_hops(idx.ids.size(), idx.edges);
    int diam = 0;
    for (const auto& row : hops)
        for (int h : row)
            if (h != oracle::kInf)
                diam = std::max(diam, h);
    const double unit = canvas.min_side() / std::max(diam, 1);
    const auto& s = kk.state();
    REQUIRE(s.size() == g.node_count());
    REQUIRE(s.hops.size() == g.node_count());
    for (std::size_t a = 0; a < idx.ids.size(); ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            const std::size_t sa = s.slot_of.at(idx.ids[a]);
            const std::size_t sb = s.slot_of.at(idx.ids[b]);
            const int want_d = hops[a][b] == oracle::kInf ? kUnreachable : hops[a][b];
            REQUIRE(s.hops(sa, sb) == want_d);
            const double want_l = unit * (hops[a][b] == oracle::kInf ? diam + 1 : hops[a][b]);
            REQUIRE(oracle::relative_error(s.ideal(sa, sb), want_l) <= 1e-12);
            REQUIRE(oracle::relative_error(s.stiffness(sa, sb), 1.0 / (want_l * want_l)) <= 1e-12);
        }
    }
}

}  // namespace

TEST_SUITE("kk")
{
    TEST_CASE("ideal spring length examples")
    {
        CHECK(ideal_length(100, 4, 2) == 50.0);
        CHECK(ideal_length(100, 4, 4) == 100.0);
        CHECK(ideal_length(100, 4, kUnreachable) == 125.0);
        CHECK(ideal_length(100, 0, kUnreachable) == 100.0);

        const Graph g = path_graph(5);
        const auto row = kk_init_lij(g, "n0", Canvas{100, 200});
        REQUIRE(row.size() == 5);
        CHECK(row[0] == 0.0);
        CHECK(row[2] == 50.0);
        CHECK(row[4] == 100.0);

        const Graph single = path_graph(1);
        CHECK(kk_init_lij(single, "n0", Canvas{}).empty());
    }

    TEST_CASE("init fills hop counts and substitutes unreachable pairs")
    {
        Graph g = path_graph(3);
        UpdateBatch b;
        b.added_nodes = {"iso"};
        g.apply_update(b);
        KamadaKawai kk;
        Layout layout;
        layout.canvas = {100, 100};
        Rng rng(1);
        ModelContext ctx{&rng};
        kk.init_section(g, layout, ctx);
        const auto& s = kk.state();
        CHECK(s.hops(s.slot_of.at("n0"), s.slot_of.at("n2")) == 2);
        CHECK(s.diameter == 2);
        const double l = s.ideal(s.slot_of.at("iso"), s.slot_of.at("n0"));
        CHECK(std::isfinite(l));
        CHECK(l == doctest::Approx(150.0));
        CHECK(layout.positions.size() == 4);
    }

    TEST_CASE("spring energy examples")
    {
        auto s = two_slot_state(2, 0.25);
        Layout layout;
        layout.positions = {{"i", {0, 0}}, {"m", {5, 0}}};
        CHECK(kk_energy(s, layout) == doctest::Approx(1.125));
        s.stiffness(1, 0) = 0.5;
        CHECK(kk_energy(s, layout) == doctest::Approx(2.25));
        layout.positions["m"] = {2, 0};
        CHECK(kk_energy(s, layout) == 0.0);
    }

    TEST_CASE("delta_m examples")
    {
        const auto s = two_slot_state(2, 0.25);
        Layout layout;
        layout.positions = {{"i", {0, 0}}, {"m", {3, 4}}};
        CHECK(kk_delta_m(s, layout, "m") == doctest::Approx(0.75));

        const std::vector<Spring> springs{{Position{0, 0}, 2.0, 0.25}};
        const PartialGradient pg = spring_gradient({3, 4}, springs, 1e-6);
        CHECK(pg.dx == doctest::Approx(0.45));
        CHECK(pg.dy == doctest::Approx(0.6));
        CHECK(pg.magnitude() == doctest::Approx(0.75));

        layout.positions = {{"i", {-17, 40}}, {"m", {-14, 44}}};
        CHECK(kk_delta_m(s, layout, "m") == doctest::Approx(0.75));

        layout.positions = {{"i", {0, 0}}, {"m", {1.2, 1.6}}};
        CHECK(kk_delta_m(s, layout, "m") == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("coincident nodes give a finite gradient")
    {
        const auto s = two_slot_state(2, 0.25);
        Layout layout;
        layout.positions = {{"i", {1, 1}}, {"m", {1, 1}}};
        CHECK(std::isfinite(kk_delta_m(s, layout, "m")));
    }

    TEST_CASE("two-node step moves strictly toward the equilibrium")
    {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const Graph g = path_graph(2);
            KamadaKawai kk(KamadaKawaiParams{1e-9, 1.0, 50});
            Layout layout;
            layout.canvas = {100, 100};
            Rng rng(seed);
            ModelContext ctx{&rng};
            kk.init_section(g, layout, ctx);
            const double l = kk.state().ideal(1, 0);
            const double before = std::abs(euclidean(layout, "n0", "n1") - l);
            kk.iteration_step(g, layout, ctx);
            const double after = std::abs(euclidean(layout, "n0", "n1") - l);
            CHECK(after < before);
            // One step runs the inner loop to Delta_m <= 1e-9, i.e. |d - l| <= 1e-9 l^2.
            CHECK(after <= 1e-4);
        }
    }

    TEST_CASE("inner loop strictly decreases delta_m and energy never rises")
    {
        Rng g_rng(2);
        const Graph g = oracle::random_connected_graph(g_rng, 15, 8);
        KamadaKawai kk(KamadaKawaiParams{1e-4, 1.0, 50});
        Layout layout;
        layout.canvas = {100, 100};
        Rng rng(3);
        ModelContext ctx{&rng};
        kk.init_section(g, layout, ctx);
        double energy = kk_energy(kk.state(), layout);
        for (int step = 0; step < 300; ++step) {
            kk.iteration_step(g, layout, ctx);
            const auto& trace = kk.last_inner_trace();
            for (std::size_t i = 1; i < trace.size(); ++i)
                REQUIRE(trace[i] < trace[i - 1]);
            const double next = kk_energy(kk.state(), layout);
            REQUIRE(next <= energy + 1e-9);
            energy = next;
        }
    }

    TEST_CASE("converged layout does not move")
    {
        const Graph g = path_graph(2);
        KamadaKawai kk;
        Layout layout;
        layout.canvas = {100, 100};
        Rng rng(1);
        ModelContext ctx{&rng};
        kk.init_section(g, layout, ctx);
        layout.positions["n0"] = {0, 0};
        layout.positions["n1"] = {100, 0};
        const Layout before = layout;
        const StepReport r = kk.iteration_step(g, layout, ctx);
        CHECK(r.converged);
        CHECK(r.moved == 0);
        CHECK(layout.positions == before.positions);
        CHECK(kk.is_good_layout(g, layout));
    }

    TEST_CASE("entry task updates hop counts and keeps positions")
    {
        Graph g = path_graph(3);
        KamadaKawai kk;
        Layout layout;
        layout.canvas = {100, 100};
        Rng rng(1);
        ModelContext ctx{&rng};
        kk.init_section(g, layout, ctx);
        const auto old = layout.positions;
        auto& s = kk.state();
        CHECK(s.hops(s.slot_of.at("n0"), s.slot_of.at("n2")) == 2);

        UpdateBatch close;
        close.added_edges = {{"n0", "n2", 1.0, 0.0}};
        kk.on_update(g, layout, g.apply_update(close), ctx);
        CHECK(s.hops(s.slot_of.at("n0"), s.slot_of.at("n2")) == 1);
        CHECK(layout.positions == old);

        UpdateBatch iso;
        iso.added_nodes = {"iso"};
        kk.on_update(g, layout, g.apply_update(iso), ctx);
        CHECK(s.hops(s.slot_of.at("iso"), s.slot_of.at("n0")) == kUnreachable);
        for (const auto& [id, p] : old)
            CHECK(layout.at(id) == p);

        UpdateBatch drop;
        drop.removed_nodes = {"n1"};
        const std::size_t size = s.size();
        kk.on_update(g, layout, g.apply_update(drop), ctx);
        CHECK(s.size() == size - 1);
        CHECK(s.hops.size() == size - 1);
        CHECK(s.ideal.size() == size - 1);
        CHECK_FALSE(s.slot_of.count("n1"));
        check_against_scratch(kk, g, layout.canvas);
    }

    TEST_CASE("property: incremental matrices equal a from-scratch rebuild")
    {
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            CAPTURE(seed);
            Rng rng(seed);
            Graph g = oracle::random_graph(rng, 12, 10);
            KamadaKawai kk;
            Layout layout;
            layout.canvas = {80, 120};
            ModelContext ctx{&rng};
            kk.init_section(g, layout, ctx);
            int fresh = 0;
            for (int step = 0; step < 25; ++step) {
                UpdateBatch b;
                const auto& nodes = g.nodes();
                if (rng() % 3 == 0 && nodes.size() > 2)
                    b.removed_nodes.push_back(nodes[rng() % nodes.size()]);
                if (rng() % 2 == 0 && g.edge_count() > 0) {
                    const Edge& e = g.edges()[rng() % g.edge_count()];
                    if (std::find(b.removed_nodes.begin(), b.removed_nodes.end(), e.src) ==
                            b.removed_nodes.end() &&
                        std::find(b.removed_nodes.begin(), b.removed_nodes.end(), e.dst) ==
                            b.removed_nodes.end())
                        b.removed_edges.push_back(e);
                }
                const std::string id = "f" + std::to_string(fresh++);
                b.added_nodes.push_back(id);
                for (int k = 0; k < 3 && !nodes.empty(); ++k) {
                    const NodeId& u = nodes[rng() % nodes.size()];
                    if (std::find(b.removed_nodes.begin(), b.removed_nodes.end(), u) ==
                        b.removed_nodes.end())
                        b.added_edges.push_back(rng() % 2 ? Edge{id, u, 1.0, 0.0} : Edge{u, id, 1.0, 0.0});
                }
                kk.on_update(g, layout, g.apply_update(b), ctx);
                check_against_scratch(kk, g, layout.canvas);
            }
        }
    }
}
