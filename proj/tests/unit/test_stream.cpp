#include <doctest.h>

#include <limits>
#include <sstream>
#include <thread>

#include "dynlay/stream.hpp"

using namespace dynlay;

namespace {

std::vector<TemporalEdge> rows(std::vector<std::tuple<NodeId, NodeId, double>> list)
{
    std::vector<TemporalEdge> out;
    for (auto& [u, v, t] : list)
        out.push_back({u, v, 1.0, t});
    return out;
}

}  // namespace

TEST_SUITE("stream")
{
    TEST_CASE("normalize_timestamps examples")
    {
        const auto z = normalize_timestamps({100, 300, 500});
        CHECK(z == std::vector<double>{0, 150, 300});
        CHECK(normalize_timestamps({42}) == std::vector<double>{0});
        CHECK(normalize_timestamps({7, 7, 7}) == std::vector<double>{0, 0, 0});
        CHECK_THROWS(normalize_timestamps({}));
    }

    TEST_CASE("normalize_timestamps maps endpoints bit-exactly")
    {
        Rng rng(5);
        std::uniform_real_distribution<double> u(1e9, 2e9);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> raw(2 + rng() % 50);
            for (auto& x : raw)
                x = u(rng);
            const auto z = normalize_timestamps(raw);
            const auto lo = std::min_element(raw.begin(), raw.end()) - raw.begin();
            const auto hi = std::max_element(raw.begin(), raw.end()) - raw.begin();
            CHECK(z[lo] == 0.0);
            CHECK(z[hi] == 300.0);
        }
    }

    TEST_CASE("gaussian with zero spread is exactly the mean")
    {
        Rng rng(1);
        for (int i = 0; i < 1000; ++i)
            REQUIRE(sample_interval(GaussianSpec{10, 0}, rng) == 10.0);
    }

    TEST_CASE("uniform draws stay in range")
    {
        Rng rng(2);
        for (int i = 0; i < 10000; ++i) {
            const double x = sample_interval(UniformSpec{5, 15}, rng);
            REQUIRE(x >= 5.0);
            REQUIRE(x <= 15.0);
        }
    }

    TEST_CASE("poisson(10) large-sample mean and variance")
    {
        Rng rng(3);
        const int n = 100000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = sample_interval(PoissonSpec{10}, rng);
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        CHECK(mean >= 9.9);
        CHECK(mean <= 10.1);
        CHECK(std::abs(var - 10.0) <= 0.5);
    }

    TEST_CASE("negative gaussian draws are floored")
    {
        Rng rng(4);
        for (int i = 0; i < 10000; ++i)
            REQUIRE(sample_interval(GaussianSpec{0.5, 5}, rng) >= kMinInterval);
    }

    TEST_CASE("samplers are reproducible for a fixed seed")
    {
        for (const DistributionSpec spec :
             {DistributionSpec{GaussianSpec{10, 1}}, DistributionSpec{PoissonSpec{10}},
              DistributionSpec{UniformSpec{5, 15}}}) {
            Rng a(9), b(9);
            for (int i = 0; i < 100; ++i)
                REQUIRE(sample_interval(spec, a) == sample_interval(spec, b));
        }
    }

    TEST_CASE("invalid specs are rejected")
    {
        CHECK_THROWS(validate(GaussianSpec{-1, 1}));
        CHECK_THROWS(validate(PoissonSpec{0}));
        CHECK_THROWS(validate(UniformSpec{15, 5}));
    }

    TEST_CASE("build_schedule groups equal timestamps and adds unseen endpoints")
    {
        Rng rng(1);
        const auto s = build_schedule(rows({{"a", "b", 5}, {"b", "c", 5}}), std::nullopt, 300, rng);
        REQUIRE(s.size() == 1);
        CHECK(s[0].batch.added_edges.size() == 2);
        CHECK(s[0].batch.added_nodes == std::vector<NodeId>{"a", "b", "c"});

        const auto t = build_schedule(rows({{"a", "b", 1}}), std::nullopt, 300, rng, {"a"});
        REQUIRE(t.size() == 1);
        CHECK(t[0].batch.added_nodes == std::vector<NodeId>{"b"});
        CHECK(build_schedule({}, std::nullopt, 300, rng).empty());
    }

    TEST_CASE("synthetic schedule uses cumulative sampled intervals")
    {
        Rng rng(1);
        const auto s = build_schedule(rows({{"a", "b", 1}, {"b", "c", 2}, {"c", "d", 9}}),
                                      GaussianSpec{10, 0}, 300, rng);
        REQUIRE(s.size() == 3);
        CHECK(s[0].arrival == 10.0);
        CHECK(s[1].arrival == 20.0);
        CHECK(s[2].arrival == 30.0);
    }

    TEST_CASE("property: every dataset edge lands in exactly one batch, arrivals non-decreasing")
    {
        Rng rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<TemporalEdge> data;
            const int m = 1 + static_cast<int>(rng() % 200);
            for (int i = 0; i < m; ++i)
                data.push_back({"n" + std::to_string(rng() % 30), "n" + std::to_string(rng() % 30),
                                1.0, static_cast<double>(rng() % 40)});
            for (const bool native : {true, false}) {
                std::optional<DistributionSpec> spec;
                if (!native)
                    spec = PoissonSpec{3};
                const auto s = build_schedule(data, spec, 300, rng);
                std::size_t total = 0;
                for (std::size_t i = 0; i < s.size(); ++i) {
                    total += s[i].batch.added_edges.size();
                    if (i > 0)
                        CHECK(s[i].arrival >= s[i - 1].arrival);
                }
                CHECK(total == data.size());
            }
        }
    }

    TEST_CASE("internal clock source delivers each batch once, in order")
    {
        UpdateSchedule sched;
        for (double t : {1.0, 2.0, 3.0}) {
            ScheduledBatch b;
            b.arrival = t;
            b.batch.at = t;
            sched.push_back(b);
        }
        InternalClockSource src(sched);
        CHECK(src.poll(0.5).empty());
        CHECK(src.next_arrival() == 1.0);
        CHECK(src.poll(1.5).size() == 1);
        CHECK(src.poll(1.9).empty());
        const auto rest = src.poll(std::numeric_limits<double>::infinity());
        REQUIRE(rest.size() == 2);
        CHECK(rest[0].at == 2.0);
        CHECK(rest[1].at == 3.0);
        CHECK(src.exhausted());
        CHECK_FALSE(src.next_arrival());

        sched[0].arrival = 5.0;
        CHECK_THROWS(InternalClockSource(sched));
    }

    TEST_CASE("wire format messages")
    {
        std::unordered_set<NodeId> known{"a"};
        std::string err;
        auto b = parse_stream_message("ADD_EDGE a b 1.0", known, err);
        REQUIRE(b);
        CHECK(b->added_nodes == std::vector<NodeId>{"b"});
        REQUIRE(b->added_edges.size() == 1);
        CHECK(b->added_edges[0].weight == 1.0);

        CHECK(parse_stream_message("ADD_NODE z", known, err)->added_nodes.size() == 1);
        CHECK(parse_stream_message("DEL_NODE z", known, err)->removed_nodes.size() == 1);
        CHECK(parse_stream_message("DEL_EDGE a b", known, err)->removed_edges.size() == 1);
        CHECK_FALSE(parse_stream_message("ADD_EDGE a", known, err));
        CHECK_FALSE(parse_stream_message("ADD_EDGE a b heavy", known, err));
        CHECK_FALSE(parse_stream_message("FROB x", known, err));
        CHECK(err.find("unknown verb") != std::string::npos);
    }

    TEST_CASE("stream adapter: garbage yields a diagnostic, bursts keep order")
    {
        StreamAdapter s;
        s.feed_line("this is not a message");
        CHECK(s.poll(0).empty());
        CHECK(s.diagnostics().size() == 1);

        for (int i = 0; i < 5; ++i)
            s.feed_line("ADD_NODE v" + std::to_string(i));
        const auto got = s.poll(2.0);
        REQUIRE(got.size() == 5);
        for (int i = 0; i < 5; ++i) {
            CHECK(got[i].added_nodes[0] == "v" + std::to_string(i));
            CHECK(got[i].at == 2.0);
        }
        CHECK_FALSE(s.exhausted());
        s.close();
        CHECK(s.exhausted());
    }

    TEST_CASE("stream adapter: concurrent feed loses and duplicates nothing")
    {
        StreamAdapter s;
        std::ostringstream text;
        for (int i = 0; i < 2000; ++i)
            text << "ADD_NODE n" << i << "\n";
        std::istringstream in(text.str());
        std::thread reader([&] { s.feed(in); });
        std::vector<UpdateBatch> seen;
        while (!s.exhausted()) {
            auto got = s.poll(0);
            seen.insert(seen.end(), got.begin(), got.end());
        }
        reader.join();
        auto tail = s.poll(0);
        seen.insert(seen.end(), tail.begin(), tail.end());
        REQUIRE(seen.size() == 2000);
        for (int i = 0; i < 2000; ++i)
            REQUIRE(seen[i].added_nodes[0] == "n" + std::to_string(i));
    }
}
