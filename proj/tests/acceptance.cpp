// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "rlnc/nc_switch.hpp"
#include "rlnc/simnet.hpp"
#include "rlnc/wire.hpp"

using namespace rlnc;

namespace {

int failures = 0;
std::vector<std::string> notes;

void report(int id, const char* name, bool pass, const std::string& detail = {})
{
    std::printf("[%s] %2d %s%s%s\n", pass ? "PASS" : "FAIL", id, name,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass)
        ++failures;
}

const gf::Context& ctx()
{
    return gf::Context::default_gf256();
}

codec::SourceSymbolMatrix random_sources(std::size_t g, std::size_t n, std::mt19937_64& rng)
{
    codec::SourceSymbolMatrix m;
    m.rows.assign(g, std::vector<gf::Element>(n));
    for (auto& row : m.rows)
        for (auto& e : row)
            e = static_cast<gf::Element>(rng());
    return m;
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

// 1. mul_table == mul_peasant on all 65536 pairs in under a second
void criterion_multiplier_oracle()
{
    const auto t0 = std::chrono::steady_clock::now();
    bool equal = true;
    for (unsigned a = 0; a < 256 && equal; ++a)
        for (unsigned b = 0; b < 256; ++b)
            if (ctx().mul_table(static_cast<gf::Element>(a), static_cast<gf::Element>(b)) !=
                ctx().mul_peasant(static_cast<gf::Element>(a), static_cast<gf::Element>(b))) {
                equal = false;
                break;
            }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << "65536 pairs in " << secs << " s";
    report(1, "multiplier oracle equivalence", equal && secs < 1.0, os.str());
}

// 2. field axioms: exhaustive identity/inverse, 1e5 random triples
void criterion_field_axioms()
{
    bool ok = true;
    for (unsigned a = 0; a < 256; ++a) {
        const auto e = static_cast<gf::Element>(a);
        if (ctx().mul_table(e, 1) != e || ctx().mul_table(1, e) != e)
            ok = false;
        if (a != 0 && ctx().mul_table(e, ctx().inverse(e)) != 1)
            ok = false;
    }
    std::mt19937 rng(2026);
    for (int i = 0; i < 100000; ++i) {
        const auto a = static_cast<gf::Element>(rng());
        const auto b = static_cast<gf::Element>(rng());
        const auto c = static_cast<gf::Element>(rng());
        if (ctx().mul_table(ctx().mul_table(a, b), c) != ctx().mul_table(a, ctx().mul_table(b, c)))
            ok = false;
        if (ctx().mul_table(a, static_cast<gf::Element>(b ^ c)) !=
            (ctx().mul_table(a, b) ^ ctx().mul_table(a, c)))
            ok = false;
    }
    report(2, "field axioms", ok, "identity/inverse exhaustive, 1e5 random triples");
}

// 3. 1000-seed decode round trip at (4,4), (8,4), (16,8)
void criterion_round_trip()
{
    const std::pair<std::size_t, std::size_t> shapes[] = {{4, 4}, {8, 4}, {16, 8}};
    std::size_t trials = 0, exact = 0;
    for (const auto& [g, n] : shapes) {
        const codec::CodingParams params{g, n, &ctx(), gf::MulAlgorithm::LogTable};
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            std::mt19937_64 rng(seed * 3 + g);
            const auto sources = random_sources(g, n, rng);
            codec::DecoderState state(params);
            codec::CoefficientSource coeffs(seed ^ (g << 20));
            std::size_t guard = 0;
            while (state.rank() < g && guard++ < 64 * g)
                state.consume(codec::encode(params, sources, coeffs));
            ++trials;
            if (state.rank() == g && state.recover() == sources)
                ++exact;
        }
    }
    std::ostringstream os;
    os << exact << "/" << trials << " exact recoveries";
    report(3, "decode round trip", exact == trials, os.str());
}

// 4. loss-free sender -> recoder -> receiver, 1000 seeds: all payloads sound,
//    all generations decoded
void criterion_recode_soundness()
{
    const std::size_t g = 8, n = 4;
    const auto topo = simnet::Topology::chain(1, 0.0);
    simnet::SwitchNode node;
    node.config.max_generations = 4;
    node.config.replicas_per_trigger = g;
    node.config.params = codec::CodingParams{g, n, &ctx(), gf::MulAlgorithm::LogTable};
    node.config.mode = pipeline::SwitchMode::Recode;
    simnet::SenderBehavior sender{simnet::SenderMode::PreCoded, 1, 1, 2};

    std::size_t sound = 0, decoded = 0, delivered_total = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        simnet::RunTrace trace;
        const auto metrics = simnet::run(topo, {node}, sender, seed, &trace);
        decoded += metrics.generations_decoded;
        for (const auto& d : trace.delivered) {
            ++delivered_total;
            if (d.payload.coded_symbols ==
                combine(trace.sources[d.generation_id], d.payload.coding_vector, n))
                ++sound;
        }
    }
    std::ostringstream os;
    os << sound << "/" << delivered_total << " payloads sound, " << decoded
       << "/1000 generations decoded";
    report(4, "recode soundness", sound == delivered_total && decoded == 1000, os.str());
}

// 5. Monte-Carlo independence probability vs the closed form, 3-sigma
void criterion_independence_probability()
{
    const codec::CodingParams params{8, 1, &ctx(), gf::MulAlgorithm::LogTable};
    codec::CoefficientSource coeffs(20260823);
    const double est = codec::independence_probability_estimate(params, 10000, coeffs);
    double p = 1.0;
    for (int i = 1; i <= 8; ++i)
        p *= 1.0 - std::pow(256.0, -i);
    const double sigma = std::sqrt(p * (1.0 - p) / 10000.0);
    std::ostringstream os;
    os << "estimate " << est << ", closed form " << p << ", 3-sigma " << 3 * sigma;
    report(5, "independence probability", std::abs(est - p) <= 3.0 * sigma, os.str());
}

// 6. 1e6 random byte strings never crash; 10000 valid packets round-trip
void criterion_wire_fuzz()
{
    std::mt19937_64 rng(606);
    bool ok = true;
    for (int i = 0; i < 1000000; ++i) {
        std::vector<std::uint8_t> bytes(rng() % 48);
        for (auto& b : bytes)
            b = static_cast<std::uint8_t>(rng());
        try {
            (void)wire::deserialize(bytes);
        } catch (const wire::WireError&) {
        } catch (...) {
            ok = false;
        }
    }
    std::size_t round_tripped = 0;
    for (int i = 0; i < 10000; ++i) {
        wire::RlncPacket p;
        p.outer.generation_id = static_cast<std::uint16_t>(rng());
        p.outer.generation_size = static_cast<std::uint8_t>(1 + rng() % 255);
        p.outer.symbol_size = static_cast<std::uint8_t>(1 + rng() % 4);
        const unsigned type = rng() % 3;
        p.inner.packet_type = static_cast<wire::PacketType>(type);
        if (p.inner.packet_type != wire::PacketType::Ack) {
            p.inner.symbol_count = static_cast<std::uint8_t>(1 + rng() % 16);
            p.symbols.resize(static_cast<std::size_t>(p.inner.symbol_count) *
                             p.outer.symbol_size);
            for (auto& b : p.symbols)
                b = static_cast<std::uint8_t>(rng());
            if (p.inner.packet_type == wire::PacketType::Coded) {
                p.coding_vector.resize(p.outer.generation_size);
                for (auto& b : p.coding_vector)
                    b = static_cast<std::uint8_t>(rng());
            }
        }
        const auto bytes = wire::serialize(p);
        if (wire::deserialize(bytes) == p && wire::serialize(wire::deserialize(bytes)) == bytes)
            ++round_tripped;
    }
    std::ostringstream os;
    os << "1e6 fuzz inputs, " << round_tripped << "/10000 byte-identical round trips";
    report(6, "wire fuzz", ok && round_tripped == 10000, os.str());
}

// 7. scripted switch trace with region-overlap auditing
void criterion_switch_contract()
{
    const std::size_t g = 4, n = 4, replicas = 3;
    pipeline::SwitchConfig cfg;
    cfg.max_generations = 4;
    cfg.replicas_per_trigger = replicas;
    cfg.params = codec::CodingParams{g, n, &ctx(), gf::MulAlgorithm::LogTable};
    cfg.mode = pipeline::SwitchMode::Encode;
    pipeline::NcSwitch sw(cfg);

    bool ok = true;
    const auto audit = [&] {
        const auto regions = sw.active_regions();
        for (std::size_t i = 0; i < regions.size(); ++i)
            for (std::size_t j = i + 1; j < regions.size(); ++j)
                if (!(regions[i].base + regions[i].length <= regions[j].base ||
                      regions[j].base + regions[j].length <= regions[i].base))
                    ok = false;
    };

    std::mt19937_64 rng(707);
    const auto sources = random_sources(g, n, rng);
    wire::RlncPacket pkt;
    pkt.outer = {9, g, 8, 1};
    pkt.inner = {wire::PacketType::Uncoded, n};

    for (std::size_t j = 0; j + 1 < g; ++j) {
        pkt.symbols.assign(sources.rows[j].begin(), sources.rows[j].end());
        const auto out = sw.ingress(pkt);
        audit();
        if (out.size() != 1 || out[0].kind != pipeline::EgressEvent::Kind::Drop ||
            out[0].reason != pipeline::DropReason::BufferedAwaitingFill)
            ok = false;
    }
    pkt.symbols.assign(sources.rows[g - 1].begin(), sources.rows[g - 1].end());
    const auto trigger = sw.ingress(pkt);
    audit();
    if (trigger.size() != replicas)
        ok = false;
    for (const auto& ev : trigger)
        if (ev.kind != pipeline::EgressEvent::Kind::Emit ||
            ev.packet.inner.packet_type != wire::PacketType::Coded)
            ok = false;

    sw.ingress(wire::make_ack(9, cfg.params));
    audit();
    if (sw.active_generations() != 0)
        ok = false;
    const auto late = sw.ingress(pkt);
    audit();
    if (late.size() != 1 || late[0].kind != pipeline::EgressEvent::Kind::Drop ||
        late[0].reason != pipeline::DropReason::AlreadyAcked)
        ok = false;

    report(7, "switch contract", ok,
           "G-1 buffered drops, exact replica fan-out, ack flush, AlreadyAcked");
}

// 8. budgeted sweep: drop rate non-decreasing in G, recod >= cod, < 60 s
void criterion_trend_reproduction()
{
    const auto t0 = std::chrono::steady_clock::now();
    simnet::SweepSettings settings;
    settings.field = &ctx();
    settings.replicas_per_trigger = 4;
    settings.generations = 4;
    settings.redundancy = 2;
    settings.max_generations = 8;
    settings.mul_budget_per_tick = 300;

    std::vector<simnet::SweepCell> grid;
    for (const std::size_t g : {4, 8, 16, 32}) {
        grid.push_back({g, 4, simnet::SenderMode::Systematic, 0.0});
        grid.push_back({g, 4, simnet::SenderMode::PreCoded, 0.0});
    }
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto rows = simnet::sweep(grid, seeds, settings);

    std::vector<double> cod_rate, recod_rate;
    for (const auto& row : rows)
        if (row.aggregate && row.error.empty()) {
            if (row.cell.mode == simnet::SenderMode::Systematic)
                cod_rate.push_back(row.mean_overload_drop_rate);
            else
                recod_rate.push_back(row.mean_overload_drop_rate);
        }
    bool ok = cod_rate.size() == 4 && recod_rate.size() == 4;
    for (std::size_t i = 0; ok && i < 4; ++i) {
        if (i > 0 && (cod_rate[i] < cod_rate[i - 1] || recod_rate[i] < recod_rate[i - 1]))
            ok = false;
        if (recod_rate[i] < cod_rate[i])
            ok = false;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && secs < 60.0;
    std::ostringstream os;
    os << "cod";
    for (const double r : cod_rate)
        os << ' ' << r;
    os << ", recod";
    for (const double r : recod_rate)
        os << ' ' << r;
    os << ", " << secs << " s";
    report(8, "trend reproduction", ok, os.str());
}

// 9. exact multiplication counts: G*n per encoded packet, G*(G+n) recoded
void criterion_cost_model()
{
    bool ok = true;
    const std::pair<std::size_t, std::size_t> shapes[] = {{4, 4}, {8, 4}, {16, 8}, {32, 4}};
    for (const auto& [g, n] : shapes) {
        const codec::CodingParams params{g, n, &ctx(), gf::MulAlgorithm::LogTable};
        std::mt19937_64 rng(g * 131 + n);
        const auto sources = random_sources(g, n, rng);
        codec::CoefficientSource coeffs(g);
        std::uint64_t encode_muls = 0;
        std::vector<codec::CodedPayload> buffered;
        for (std::size_t j = 0; j < g; ++j)
            buffered.push_back(codec::encode(params, sources, coeffs, &encode_muls));
        if (encode_muls != static_cast<std::uint64_t>(g) * n * g) // g packets encoded
            ok = false;
        std::uint64_t recode_muls = 0;
        (void)codec::recode(params, buffered, coeffs, &recode_muls);
        if (recode_muls != static_cast<std::uint64_t>(g) * (g + n))
            ok = false;
        if (recode_muls <= static_cast<std::uint64_t>(g) * n)
            ok = false;
    }
    report(9, "cost model", ok, "encode G*n, recode G*(G+n) per emitted packet");
}

// 10. wall-clock direction: peasant slower than log/antilog lookups
void criterion_benchmark_direction()
{
    const auto result = simnet::bench_mul_backends(ctx(), 2000000);
    std::ostringstream os;
    os << "peasant " << result.peasant_seconds << " s, logtable " << result.table_seconds
       << " s, ratio " << result.ratio() << " (direction asserted, magnitude reported only)";
    report(10, "benchmark direction", result.peasant_seconds > result.table_seconds, os.str());
}

} // namespace

int main()
{
    criterion_multiplier_oracle();
    criterion_field_axioms();
    criterion_round_trip();
    criterion_recode_soundness();
    criterion_independence_probability();
    criterion_wire_fuzz();
    criterion_switch_contract();
    criterion_trend_reproduction();
    criterion_cost_model();
    criterion_benchmark_direction();
    if (failures)
        std::printf("%d criterion(s) failed\n", failures);
    else
        std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
