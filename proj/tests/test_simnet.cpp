#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "rlnc/simnet.hpp"

using namespace rlnc;

namespace {

const gf::Context& ctx()
{
    return gf::Context::default_gf256();
}

std::vector<simnet::SwitchNode> chain_switches(std::size_t count, std::size_t g, std::size_t n,
                                               simnet::SenderMode mode,
                                               std::size_t replicas,
                                               std::uint64_t budget = 0)
{
    std::vector<simnet::SwitchNode> nodes;
    for (std::size_t i = 0; i < count; ++i) {
        simnet::SwitchNode node;
        node.config.max_generations = 8;
        node.config.replicas_per_trigger = replicas;
        node.config.params = codec::CodingParams{g, n, &ctx(), gf::MulAlgorithm::LogTable};
        node.config.mode = (i == 0 && mode == simnet::SenderMode::Systematic)
                               ? pipeline::SwitchMode::Encode
                               : pipeline::SwitchMode::Recode;
        node.mul_budget_per_tick = budget;
        nodes.push_back(node);
    }
    return nodes;
}

std::vector<gf::Element> combine(const codec::SourceSymbolMatrix& sources,
                                 const std::vector<gf::Element>& cv, std::size_t n)
{
    std::vector<gf::Element> out(n, 0);
    for (std::size_t i = 0; i < cv.size(); ++i)
        for (std::size_t k = 0; k < n; ++k)
            out[k] ^= ctx().mul_peasant(cv[i], sources.rows[i][k]);
    return out;
}

} // namespace

TEST_CASE("loss-free run decodes and flushes")
{
    const std::size_t g = 4, n = 4;
    const auto topo = simnet::Topology::chain(1, 0.0);
    simnet::SenderBehavior sender{simnet::SenderMode::Systematic, 1, 1, 2};
    simnet::RunTrace trace;
    const auto metrics = simnet::run(
        topo, chain_switches(1, g, n, sender.mode, g), sender, 7, &trace);

    CHECK(metrics.generations_attempted == 1);
    CHECK(metrics.generations_decoded == 1);
    CHECK(metrics.packets_lost == 0);
    CHECK(metrics.packets_sent == metrics.packets_delivered);
    // ack propagated upstream at loss 0: no buffered generation remains
    CHECK(metrics.active_slots_at_end == 0);
    // every delivered payload is consistent with the ground truth
    REQUIRE(trace.sources.size() == 1);
    for (const auto& d : trace.delivered)
        CHECK(d.payload.coded_symbols ==
              combine(trace.sources[d.generation_id], d.payload.coding_vector, n));
}

TEST_CASE("total loss on the only link decodes nothing")
{
    const auto topo = simnet::Topology::chain(1, 1.0);
    simnet::SenderBehavior sender{simnet::SenderMode::Systematic, 3, 1, 2};
    const auto metrics =
        simnet::run(topo, chain_switches(1, 4, 4, sender.mode, 4), sender, 9);
    CHECK(metrics.generations_decoded == 0);
    CHECK(metrics.packets_delivered == 0);
    CHECK(metrics.packets_lost == metrics.packets_sent);
}

TEST_CASE("identical seeds give identical metrics")
{
    const auto topo = simnet::Topology::chain(2, 0.3);
    simnet::SenderBehavior sender{simnet::SenderMode::PreCoded, 4, 1, 3};
    const auto switches = chain_switches(2, 8, 4, sender.mode, 8);
    const auto a = simnet::run(topo, switches, sender, 42);
    const auto b = simnet::run(topo, switches, sender, 42);
    const auto c = simnet::run(topo, switches, sender, 43);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("recoding chain at loss 0 delivers sound payloads and decodes")
{
    const std::size_t g = 8, n = 4;
    const auto topo = simnet::Topology::chain(1, 0.0);
    simnet::SenderBehavior sender{simnet::SenderMode::PreCoded, 2, 1, 2};
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        simnet::RunTrace trace;
        const auto metrics = simnet::run(
            topo, chain_switches(1, g, n, sender.mode, g), sender, seed, &trace);
        CHECK(metrics.generations_decoded == 2);
        CHECK(metrics.active_slots_at_end == 0);
        for (const auto& d : trace.delivered)
            CHECK(d.payload.coded_symbols ==
                  combine(trace.sources[d.generation_id], d.payload.coding_vector, n));
    }
}

TEST_CASE("monotone stress: more link loss never decodes more")
{
    simnet::SenderBehavior sender{simnet::SenderMode::Systematic, 6, 1, 3};
    const auto switches = chain_switches(1, 4, 4, sender.mode, 6);
    const double losses[] = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::uint64_t prev = ~0ull;
    for (const double loss : losses) {
        std::uint64_t decoded = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed)
            decoded += simnet::run(simnet::Topology::chain(1, loss), switches, sender, seed)
                           .generations_decoded;
        CHECK(decoded <= prev);
        prev = decoded;
    }
}

TEST_CASE("config validation")
{
    simnet::SenderBehavior sender{simnet::SenderMode::Systematic, 1, 1, 1};
    const auto switches = chain_switches(1, 4, 4, sender.mode, 4);

    simnet::Topology bad_links = simnet::Topology::chain(1, 0.0);
    bad_links.links.pop_back();
    CHECK_THROWS_AS(simnet::run(bad_links, switches, sender, 1), simnet::ConfigError);

    simnet::Topology bad_loss = simnet::Topology::chain(1, 1.5);
    CHECK_THROWS_AS(simnet::run(bad_loss, switches, sender, 1), simnet::ConfigError);

    auto mismatched = chain_switches(2, 4, 4, sender.mode, 4);
    mismatched[1].config.params.generation_size = 8;
    CHECK_THROWS_AS(
        simnet::run(simnet::Topology::chain(2, 0.0), mismatched, sender, 1),
        simnet::ConfigError);

    auto wrong_mode = chain_switches(1, 4, 4, sender.mode, 4);
    wrong_mode[0].config.mode = pipeline::SwitchMode::Recode;
    CHECK_THROWS_AS(
        simnet::run(simnet::Topology::chain(1, 0.0), wrong_mode, sender, 1),
        simnet::ConfigError);
}

TEST_CASE("sweep")
{
    simnet::SweepSettings settings;
    settings.field = &ctx();
    settings.replicas_per_trigger = 4;
    settings.generations = 2;
    settings.redundancy = 2;

    SUBCASE("empty grid rejected")
    {
        CHECK_THROWS_AS(simnet::sweep({}, {1}, settings), simnet::ConfigError);
        CHECK_THROWS_AS(
            simnet::sweep({{4, 4, simnet::SenderMode::Systematic, 0.0}}, {}, settings),
            simnet::ConfigError);
    }

    SUBCASE("single-cell sweep equals run")
    {
        const simnet::SweepCell cell{4, 4, simnet::SenderMode::Systematic, 0.0};
        const auto rows = simnet::sweep({cell}, {5}, settings);
        REQUIRE(rows.size() == 2); // one data row + one aggregate row
        CHECK(!rows[0].aggregate);
        CHECK(rows[1].aggregate);
        CHECK(rows[0].metrics == rows[1].metrics);

        simnet::SenderBehavior sender{cell.mode, settings.generations,
                                      settings.inter_packet_gap, settings.redundancy};
        const auto direct = simnet::run(
            simnet::Topology::chain(1, 0.0),
            chain_switches(1, 4, 4, cell.mode, settings.replicas_per_trigger), sender, 5);
        CHECK(rows[0].metrics == direct);
    }

    SUBCASE("mean over seeds")
    {
        const simnet::SweepCell cell{4, 4, simnet::SenderMode::Systematic, 0.5};
        const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        const auto rows = simnet::sweep({cell}, seeds, settings);
        REQUIRE(rows.size() == 11);
        double mean = 0;
        for (std::size_t i = 0; i < 10; ++i)
            mean += static_cast<double>(rows[i].metrics.generations_decoded);
        mean /= 10.0;
        CHECK(rows[10].aggregate);
        CHECK(rows[10].mean_generations_decoded == doctest::Approx(mean));
    }

    SUBCASE("operation count grows with G and recoding outcosts coding")
    {
        std::vector<simnet::SweepCell> grid;
        for (const std::size_t g : {4, 8, 16, 32}) {
            grid.push_back({g, 4, simnet::SenderMode::Systematic, 0.0});
            grid.push_back({g, 4, simnet::SenderMode::PreCoded, 0.0});
        }
        settings.max_generations = 8;
        const auto rows = simnet::sweep(grid, {3}, settings);
        std::uint64_t prev_cod = 0, prev_recod = 0;
        for (std::size_t i = 0; i + 1 < rows.size(); i += 4) {
            const auto& cod = rows[i + 1];     // aggregate of the cod cell
            const auto& recod = rows[i + 3];   // aggregate of the recod cell
            REQUIRE(cod.aggregate);
            REQUIRE(recod.aggregate);
            CHECK(cod.metrics.mul_operation_count > prev_cod);
            CHECK(recod.metrics.mul_operation_count > prev_recod);
            CHECK(recod.metrics.mul_operation_count > cod.metrics.mul_operation_count);
            prev_cod = cod.metrics.mul_operation_count;
            prev_recod = recod.metrics.mul_operation_count;
        }
    }

    SUBCASE("csv emission has the documented header and row count")
    {
        const simnet::SweepCell cell{4, 2, simnet::SenderMode::Systematic, 0.0};
        const auto rows = simnet::sweep({cell}, {1, 2}, settings);
        std::ostringstream os;
        simnet::write_sweep_csv(os, rows, {"seed=1"});
        const std::string text = os.str();
        CHECK(text.find("# seed=1\n") == 0);
        CHECK(text.find("generation_size,symbols_per_packet,mode,loss,seed,agg,") !=
              std::string::npos);
        std::size_t lines = 0;
        for (const char c : text)
            if (c == '\n')
                ++lines;
        CHECK(lines == 1 + 1 + 3); // metadata + header + 2 data rows + 1 aggregate
    }
}

TEST_CASE("multiplication benchmark")
{
    CHECK_THROWS_AS(simnet::bench_mul_backends(ctx(), 0), std::invalid_argument);
    const auto result = simnet::bench_mul_backends(ctx(), 200000);
    CHECK(result.iterations == 200000);
    CHECK(result.peasant_seconds > 0.0);
    CHECK(result.table_seconds > 0.0);
}
