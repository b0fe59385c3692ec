#include "rlnc/simnet.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include "rlnc/wire.hpp"

namespace rlnc::simnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Linear combination of the source rows under a fixed coding vector.
codec::CodedPayload combine(const codec::CodingParams& params,
                            const codec::SourceSymbolMatrix& sources,
                            const std::vector<gf::Element>& coding_vector)
{
    const gf::Context& f = *params.field;
    codec::CodedPayload out;
    out.coding_vector = coding_vector;
    out.coded_symbols.assign(params.symbols_per_packet, 0);
    for (std::size_t i = 0; i < params.generation_size; ++i)
        for (std::size_t k = 0; k < params.symbols_per_packet; ++k)
            out.coded_symbols[k] ^=
                f.mul(coding_vector[i], sources.rows[i][k], params.mul_algorithm);
    return out;
}

bool full_rank(const codec::CodingParams& params,
               const std::vector<std::vector<gf::Element>>& vectors)
{
    codec::DecoderState probe(params);
    for (const auto& v : vectors) {
        codec::CodedPayload p;
        p.coding_vector = v;
        p.coded_symbols.assign(params.symbols_per_packet, 0);
        probe.consume(p);
    }
    return probe.rank() == params.generation_size;
}

struct Event {
    std::uint64_t tick;
    std::uint64_t seq;
    std::size_t node;
    int direction; // +1 toward receiver, -1 toward sender
    wire::RlncPacket packet;
};

struct EventOrder {
    bool operator()(const Event& a, const Event& b) const
    {
        return a.tick != b.tick ? a.tick > b.tick : a.seq > b.seq;
    }
};

} // namespace

Topology Topology::chain(std::size_t switch_count, double loss, std::uint64_t delay)
{
    Topology t;
    t.switch_count = switch_count;
    t.links.assign(switch_count + 1, Link{loss, delay});
    return t;
}

const char* to_string(SenderMode mode)
{
    return mode == SenderMode::Systematic ? "cod" : "recod";
}

RunMetrics run(const Topology& topology, std::vector<SwitchNode> switches,
               const SenderBehavior& sender, std::uint64_t seed, RunTrace* trace)
{
    if (topology.links.size() != topology.switch_count + 1)
        throw ConfigError("chain of k switches needs k+1 links");
    for (const Link& link : topology.links)
        if (link.loss_probability < 0.0 || link.loss_probability > 1.0)
            throw ConfigError("link loss probability must be in [0, 1]");
    if (switches.size() != topology.switch_count)
        throw ConfigError("switch config count disagrees with topology");

    const codec::CodingParams* params = nullptr;
    for (std::size_t i = 0; i < switches.size(); ++i) {
        const auto& p = switches[i].config.params;
        if (params == nullptr)
            params = &p;
        else if (p.generation_size != params->generation_size ||
                 p.symbols_per_packet != params->symbols_per_packet || p.field != params->field)
            throw ConfigError("coding params inconsistent across switches");
        const pipeline::SwitchMode expected =
            (i == 0 && sender.mode == SenderMode::Systematic) ? pipeline::SwitchMode::Encode
                                                              : pipeline::SwitchMode::Recode;
        if (switches[i].config.mode != expected)
            throw ConfigError("switch mode inconsistent with its position and the sender mode");
    }
    codec::CodingParams sender_params;
    if (params == nullptr) {
        throw ConfigError("at least one switch is required");
    }
    sender_params = *params;
    const std::size_t g = sender_params.generation_size;
    const std::size_t n = sender_params.symbols_per_packet;

    // independent deterministic streams: sender data, sender coefficients,
    // per-link loss, per-switch coefficients
    std::mt19937_64 data_rng(splitmix64(seed ^ 0x646174610000ull));
    codec::CoefficientSource sender_coeffs(splitmix64(seed ^ 0x636F656666ull));
    std::vector<std::mt19937_64> link_rng;
    for (std::size_t i = 0; i < topology.links.size(); ++i)
        link_rng.emplace_back(splitmix64(seed ^ (0x6C696E6Bull + i)));

    std::vector<pipeline::NcSwitch> devices;
    devices.reserve(switches.size());
    for (std::size_t i = 0; i < switches.size(); ++i) {
        pipeline::SwitchConfig cfg = switches[i].config;
        cfg.coeff_seed = splitmix64(seed ^ (0x73770000ull + i)) ^ cfg.coeff_seed;
        devices.emplace_back(cfg);
    }

    RunMetrics metrics;
    metrics.generations_attempted = sender.generations;

    std::priority_queue<Event, std::vector<Event>, EventOrder> queue;
    std::uint64_t seq = 0;
    const std::size_t receiver_node = topology.switch_count + 1;

    const auto send = [&](std::size_t from, int direction, wire::RlncPacket packet,
                          std::uint64_t tick) {
        const std::size_t link = direction > 0 ? from : from - 1;
        ++metrics.packets_sent;
        if (uniform01(link_rng[link]) < topology.links[link].loss_probability) {
            ++metrics.packets_lost;
            return;
        }
        ++metrics.packets_delivered;
        queue.push(Event{tick + topology.links[link].delay_ticks, seq++,
                         direction > 0 ? from + 1 : from - 1, direction, std::move(packet)});
    };

    // ground-truth sources and the sender's fixed schedule
    std::vector<codec::SourceSymbolMatrix> sources(sender.generations);
    {
        const gf::Context& f = *sender_params.field;
        std::uint64_t tick = 0;
        for (std::size_t gen = 0; gen < sender.generations; ++gen) {
            auto& src = sources[gen];
            src.rows.assign(g, std::vector<gf::Element>(n));
            for (auto& row : src.rows)
                for (auto& e : row)
                    e = static_cast<gf::Element>(data_rng() & (f.size() - 1u));

            wire::OuterHeader outer;
            outer.generation_id = static_cast<std::uint16_t>(gen);
            outer.generation_size = static_cast<std::uint8_t>(g);
            outer.field_size_log2 = static_cast<std::uint8_t>(f.bit_width());
            outer.symbol_size = 1;

            std::vector<wire::RlncPacket> packets;
            if (sender.mode == SenderMode::Systematic) {
                for (std::size_t j = 0; j < g + sender.redundancy; ++j) {
                    wire::RlncPacket pkt;
                    pkt.outer = outer;
                    pkt.inner.packet_type = wire::PacketType::Uncoded;
                    pkt.inner.symbol_count = static_cast<std::uint8_t>(n);
                    pkt.symbols.assign(src.rows[j % g].begin(), src.rows[j % g].end());
                    packets.push_back(std::move(pkt));
                }
            } else {
                // the first G coding vectors are redrawn as a batch until
                // they span the generation, so a loss-free chain always
                // hands the recoder a decodable buffer
                std::vector<std::vector<gf::Element>> batch;
                do {
                    batch.clear();
                    for (std::size_t j = 0; j < g; ++j)
                        batch.push_back(sender_coeffs.draw(f, g));
                } while (!full_rank(sender_params, batch));
                for (std::size_t j = 0; j < g + sender.redundancy; ++j) {
                    const auto vec = j < g ? batch[j] : sender_coeffs.draw(f, g);
                    const codec::CodedPayload payload = combine(sender_params, src, vec);
                    wire::RlncPacket pkt;
                    pkt.outer = outer;
                    pkt.inner.packet_type = wire::PacketType::Coded;
                    pkt.inner.symbol_count = static_cast<std::uint8_t>(n);
                    pkt.coding_vector.assign(payload.coding_vector.begin(),
                                             payload.coding_vector.end());
                    pkt.symbols.assign(payload.coded_symbols.begin(),
                                       payload.coded_symbols.end());
                    packets.push_back(std::move(pkt));
                }
            }
            for (auto& pkt : packets) {
                send(0, +1, std::move(pkt), tick);
                tick += sender.inter_packet_gap;
            }
        }
    }
    if (trace)
        trace->sources = sources;

    // receiver state
    std::map<std::uint16_t, codec::DecoderState> decoders;
    std::map<std::uint16_t, std::size_t> uncoded_seen;
    std::vector<bool> decoded(sender.generations, false);

    // per-switch per-tick budget accounting
    std::vector<std::pair<std::uint64_t, std::uint64_t>> budget_used(switches.size(), {0, 0});

    while (!queue.empty()) {
        Event ev = queue.top();
        queue.pop();

        if (ev.node == 0) {
            continue; // acks reaching the sender need no action
        }

        if (ev.node >= 1 && ev.node <= topology.switch_count) {
            const std::size_t idx = ev.node - 1;
            pipeline::NcSwitch& sw = devices[idx];

            if (ev.packet.inner.packet_type == wire::PacketType::Ack) {
                for (auto& out : sw.ingress(ev.packet))
                    if (out.kind == pipeline::EgressEvent::Kind::Emit)
                        send(ev.node, -1, std::move(out.packet), ev.tick);
                continue;
            }

            ++metrics.switch_ingress_packets;
            const std::size_t fill = sw.fill_count(ev.packet.outer.generation_id).value_or(0);
            const bool triggers = fill + 1 >= g;
            if (triggers)
                ++metrics.switch_trigger_attempts;
            const std::uint64_t budget = switches[idx].mul_budget_per_tick;
            if (budget > 0) {
                auto& [tick_mark, used] = budget_used[idx];
                if (tick_mark != ev.tick) {
                    tick_mark = ev.tick;
                    used = 0;
                }
                const std::uint64_t per_packet =
                    sw.config().mode == pipeline::SwitchMode::Encode
                        ? static_cast<std::uint64_t>(g) * n
                        : static_cast<std::uint64_t>(g) * (g + n);
                const std::uint64_t cost =
                    triggers ? sw.config().replicas_per_trigger * per_packet : 0;
                if (used + cost > budget) {
                    ++metrics.overload_dropped;
                    continue;
                }
                used += cost;
            }
            for (auto& out : sw.ingress(ev.packet))
                if (out.kind == pipeline::EgressEvent::Kind::Emit)
                    send(ev.node, +1, std::move(out.packet), ev.tick);
            continue;
        }

        // receiver
        if (ev.packet.inner.packet_type == wire::PacketType::Ack)
            continue;
        const std::uint16_t gen = ev.packet.outer.generation_id;
        codec::CodedPayload payload;
        if (ev.packet.inner.packet_type == wire::PacketType::Coded) {
            payload.coding_vector.assign(ev.packet.coding_vector.begin(),
                                         ev.packet.coding_vector.end());
        } else {
            // systematic packet straight off the wire: unit vector in
            // arrival order (only reachable on a switchless chain)
            const std::size_t j = uncoded_seen[gen]++;
            if (j >= g)
                continue;
            payload.coding_vector.assign(g, 0);
            payload.coding_vector[j] = 1;
        }
        payload.coded_symbols.assign(ev.packet.symbols.begin(), ev.packet.symbols.end());

        auto [it, inserted] = decoders.try_emplace(gen, sender_params);
        codec::DecoderState& state = it->second;
        if (state.consume(payload) == codec::InnovationResult::Redundant)
            ++metrics.redundant_packets_received;
        if (trace)
            trace->delivered.push_back({gen, payload});
        if (state.rank() == g && gen < decoded.size() && !decoded[gen]) {
            decoded[gen] = true;
            ++metrics.generations_decoded;
            send(receiver_node, -1, wire::make_ack(gen, sender_params), ev.tick);
        }
    }

    for (const auto& sw : devices) {
        metrics.mul_operation_count += sw.mul_count();
        metrics.active_slots_at_end += sw.active_generations();
    }
    for (const auto& [gen, state] : decoders)
        metrics.mul_operation_count += state.mul_count();
    return metrics;
}

std::vector<SweepRow> sweep(const std::vector<SweepCell>& grid,
                            const std::vector<std::uint64_t>& seeds,
                            const SweepSettings& settings)
{
    if (grid.empty() || seeds.empty())
        throw ConfigError("sweep needs a non-empty grid and at least one seed");
    const gf::Context& field = settings.field ? *settings.field : gf::Context::default_gf256();

    std::vector<SweepRow> rows;
    for (const SweepCell& cell : grid) {
        codec::CodingParams params{cell.generation_size, cell.symbols_per_packet, &field,
                                   settings.mul_algorithm};
        std::vector<SwitchNode> switches;
        for (std::size_t i = 0; i < settings.switch_count; ++i) {
            SwitchNode node;
            node.config.max_generations = settings.max_generations;
            node.config.replicas_per_trigger = settings.replicas_per_trigger;
            node.config.params = params;
            node.config.mode = (i == 0 && cell.mode == SenderMode::Systematic)
                                   ? pipeline::SwitchMode::Encode
                                   : pipeline::SwitchMode::Recode;
            node.mul_budget_per_tick = settings.mul_budget_per_tick;
            switches.push_back(node);
        }
        SenderBehavior sender;
        sender.mode = cell.mode;
        sender.generations = settings.generations;
        sender.inter_packet_gap = settings.inter_packet_gap;
        sender.redundancy = settings.redundancy;
        const Topology topo =
            Topology::chain(settings.switch_count, cell.loss, settings.link_delay);

        double sum_drop_rate = 0.0;
        double sum_decoded = 0.0;
        RunMetrics sum;
        std::size_t ok = 0;
        for (const std::uint64_t seed : seeds) {
            SweepRow row;
            row.cell = cell;
            row.seed = seed;
            try {
                row.metrics = run(topo, switches, sender, seed);
                row.mean_overload_drop_rate = row.metrics.overload_drop_rate();
                row.mean_generations_decoded =
                    static_cast<double>(row.metrics.generations_decoded);
                sum_drop_rate += row.mean_overload_drop_rate;
                sum_decoded += row.mean_generations_decoded;
                sum.packets_sent += row.metrics.packets_sent;
                sum.packets_lost += row.metrics.packets_lost;
                sum.packets_delivered += row.metrics.packets_delivered;
                sum.generations_attempted += row.metrics.generations_attempted;
                sum.generations_decoded += row.metrics.generations_decoded;
                sum.redundant_packets_received += row.metrics.redundant_packets_received;
                sum.switch_ingress_packets += row.metrics.switch_ingress_packets;
                sum.switch_trigger_attempts += row.metrics.switch_trigger_attempts;
                sum.overload_dropped += row.metrics.overload_dropped;
                sum.mul_operation_count += row.metrics.mul_operation_count;
                sum.active_slots_at_end += row.metrics.active_slots_at_end;
                ++ok;
            } catch (const std::exception& ex) {
                row.error = ex.what();
            }
            rows.push_back(std::move(row));
        }
        SweepRow agg;
        agg.cell = cell;
        agg.aggregate = true;
        if (ok > 0) {
            agg.metrics.packets_sent = sum.packets_sent / ok;
            agg.metrics.packets_lost = sum.packets_lost / ok;
            agg.metrics.packets_delivered = sum.packets_delivered / ok;
            agg.metrics.generations_attempted = sum.generations_attempted / ok;
            agg.metrics.generations_decoded = sum.generations_decoded / ok;
            agg.metrics.redundant_packets_received = sum.redundant_packets_received / ok;
            agg.metrics.switch_ingress_packets = sum.switch_ingress_packets / ok;
            agg.metrics.switch_trigger_attempts = sum.switch_trigger_attempts / ok;
            agg.metrics.overload_dropped = sum.overload_dropped / ok;
            agg.metrics.mul_operation_count = sum.mul_operation_count / ok;
            agg.metrics.active_slots_at_end = sum.active_slots_at_end / ok;
            agg.mean_overload_drop_rate = sum_drop_rate / static_cast<double>(ok);
            agg.mean_generations_decoded = sum_decoded / static_cast<double>(ok);
        } else {
            agg.error = "all seeds failed";
        }
        rows.push_back(std::move(agg));
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& metadata)
{
    for (const auto& line : metadata)
        os << "# " << line << "\n";
    os << "generation_size,symbols_per_packet,mode,loss,seed,agg,packets_sent,packets_lost,"
          "packets_delivered,generations_attempted,generations_decoded,"
          "redundant_packets_received,switch_ingress_packets,switch_trigger_attempts,overload_dropped,"
          "overload_drop_rate,mul_operation_count,error\n";
    for (const SweepRow& row : rows) {
        os << row.cell.generation_size << ',' << row.cell.symbols_per_packet << ','
           << to_string(row.cell.mode) << ',' << row.cell.loss << ',';
        if (row.aggregate)
            os << ",1,";
        else
            os << row.seed << ",0,";
        os << row.metrics.packets_sent << ',' << row.metrics.packets_lost << ','
           << row.metrics.packets_delivered << ',' << row.metrics.generations_attempted << ','
           << row.metrics.generations_decoded << ',' << row.metrics.redundant_packets_received
           << ',' << row.metrics.switch_ingress_packets << ',' << row.metrics.switch_trigger_attempts
           << ',' << row.metrics.overload_dropped
           << ','
           << (row.aggregate ? row.mean_overload_drop_rate : row.metrics.overload_drop_rate())
           << ',' << row.metrics.mul_operation_count << ',' << row.error << "\n";
    }
}

BenchResult bench_mul_backends(const gf::Context& ctx, std::uint64_t iterations,
                               std::uint64_t seed)
{
    if (iterations == 0)
        throw std::invalid_argument("iterations must be >= 1");

    constexpr std::size_t kStream = 1u << 14;
    std::mt19937_64 rng(seed);
    std::vector<std::pair<gf::Element, gf::Element>> operands(kStream);
    for (auto& [a, b] : operands) {
        a = static_cast<gf::Element>(rng() & (ctx.size() - 1u));
        b = static_cast<gf::Element>(rng() & (ctx.size() - 1u));
    }
    for (const auto& [a, b] : operands)
        if (ctx.mul_peasant(a, b) != ctx.mul_table(a, b))
            throw std::logic_error("multiplication backends disagree");

    using clock = std::chrono::steady_clock;
    volatile gf::Element sink = 0;

    const auto t0 = clock::now();
    {
        gf::Element acc = 0;
        for (std::uint64_t i = 0; i < iterations; ++i) {
            const auto& [a, b] = operands[i & (kStream - 1)];
            acc ^= ctx.mul_peasant(a, b);
        }
        sink = sink ^ acc;
    }
    const auto t1 = clock::now();
    {
        gf::Element acc = 0;
        for (std::uint64_t i = 0; i < iterations; ++i) {
            const auto& [a, b] = operands[i & (kStream - 1)];
            acc ^= ctx.mul_table(a, b);
        }
        sink = sink ^ acc;
    }
    const auto t2 = clock::now();
    (void)sink;

    BenchResult result;
    result.iterations = iterations;
    result.peasant_seconds = std::chrono::duration<double>(t1 - t0).count();
    result.table_seconds = std::chrono::duration<double>(t2 - t1).count();
    return result;
}

} // namespace rlnc::simnet
