#ifndef RLNC_SIMNET_HPP
#define RLNC_SIMNET_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlnc/codec.hpp"
#include "rlnc/nc_switch.hpp"

namespace rlnc::simnet {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Link {
    double loss_probability = 0.0; // Bernoulli per traversal, both directions
    std::uint64_t delay_ticks = 1;
};

/// Chain topology: Sender -> switch_0 -> ... -> switch_{k-1} -> Receiver.
/// links[i] connects node i to node i+1; links.size() == switch_count + 1.
struct Topology {
    std::size_t switch_count = 1;
    std::vector<Link> links;

    static Topology chain(std::size_t switch_count, double loss, std::uint64_t delay = 1);
};

enum class SenderMode {
    Systematic, // uncoded source packets, switches encode
    PreCoded,   // sender encodes, switches recode
};

const char* to_string(SenderMode mode);

struct SenderBehavior {
    SenderMode mode = SenderMode::Systematic;
    std::size_t generations = 1;
    std::uint64_t inter_packet_gap = 1;
    std::size_t redundancy = 2; // extra packets per generation beyond G
};

struct SwitchNode {
    pipeline::SwitchConfig config;
    std::uint64_t mul_budget_per_tick = 0; // field muls per tick; 0 = unlimited
};

struct RunMetrics {
    std::uint64_t packets_sent = 0;      // link traversal attempts
    std::uint64_t packets_lost = 0;      // lost to link loss draws
    std::uint64_t packets_delivered = 0; // survived the link
    std::uint64_t generations_attempted = 0;
    std::uint64_t generations_decoded = 0;
    std::uint64_t redundant_packets_received = 0;
    std::uint64_t switch_ingress_packets = 0;  // data packets offered to switches
    std::uint64_t switch_trigger_attempts = 0; // packets that would trigger coding
    std::uint64_t overload_dropped = 0;        // dropped by the processing budget
    std::uint64_t mul_operation_count = 0;     // switches + receiver decoders
    std::uint64_t active_slots_at_end = 0;     // buffered generations left in switches

    bool operator==(const RunMetrics&) const = default;

    /// Fraction of coding opportunities lost to the processing budget.
    double overload_drop_rate() const
    {
        return switch_trigger_attempts == 0
                   ? 0.0
                   : static_cast<double>(overload_dropped) /
                         static_cast<double>(switch_trigger_attempts);
    }
};

/// Optional ground-truth capture for soundness checks.
struct RunTrace {
    std::vector<codec::SourceSymbolMatrix> sources; // one per generation
    struct Delivered {
        std::uint16_t generation_id;
        codec::CodedPayload payload;
    };
    std::vector<Delivered> delivered; // coded payloads consumed by the receiver
};

/// Deterministic event loop over the chain. Switch coefficient seeds, link
/// loss draws, and sender data are all derived from seed; identical inputs
/// give identical metrics.
RunMetrics run(const Topology& topology, std::vector<SwitchNode> switches,
               const SenderBehavior& sender, std::uint64_t seed, RunTrace* trace = nullptr);

struct SweepCell {
    std::size_t generation_size;
    std::size_t symbols_per_packet;
    SenderMode mode;
    double loss;
};

struct SweepSettings {
    const gf::Context* field = nullptr;
    gf::MulAlgorithm mul_algorithm = gf::MulAlgorithm::LogTable;
    std::size_t switch_count = 1;
    std::size_t max_generations = 8;
    std::size_t replicas_per_trigger = 4;
    std::size_t generations = 4;
    std::uint64_t inter_packet_gap = 1;
    std::size_t redundancy = 2;
    std::uint64_t mul_budget_per_tick = 0;
    std::uint64_t link_delay = 1;
};

struct SweepRow {
    SweepCell cell;
    std::uint64_t seed = 0; // meaningless when aggregate
    bool aggregate = false; // mean over the cell's seeds
    RunMetrics metrics;     // aggregate rows hold truncated integer means
    double mean_overload_drop_rate = 0.0;
    double mean_generations_decoded = 0.0;
    std::string error; // non-empty when the cell's run failed
};

/// One run per (cell, seed) plus one aggregate mean row per cell. Run
/// failures are recorded in the row, never abort the sweep.
std::vector<SweepRow> sweep(const std::vector<SweepCell>& grid,
                            const std::vector<std::uint64_t>& seeds,
                            const SweepSettings& settings);

/// Stable CSV column order; leading '#' lines are reproducibility metadata.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     const std::vector<std::string>& metadata = {});

struct BenchResult {
    std::uint64_t iterations = 0;
    double peasant_seconds = 0.0;
    double table_seconds = 0.0;

    double ratio() const { return peasant_seconds / table_seconds; }
};

/// Times both multiplication backends over an identical operand stream and
/// cross-checks their products. iterations must be >= 1.
BenchResult bench_mul_backends(const gf::Context& ctx, std::uint64_t iterations,
                               std::uint64_t seed = 0x9E3779B97F4A7C15ull);

} // namespace rlnc::simnet

#endif
