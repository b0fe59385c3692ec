#ifndef RLNC_NC_SWITCH_HPP
#define RLNC_NC_SWITCH_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rlnc/codec.hpp"
#include "rlnc/wire.hpp"

namespace rlnc::pipeline {

struct SwitchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidReplicaCount : SwitchError {
    using SwitchError::SwitchError;
};

enum class SwitchMode {
    Encode, // incoming traffic is systematic, switch encodes
    Recode, // incoming traffic is already coded, switch recodes
};

struct SwitchConfig {
    std::size_t max_generations = 8;
    std::size_t replicas_per_trigger = 1;
    codec::CodingParams params;
    SwitchMode mode = SwitchMode::Encode;
    std::uint64_t coeff_seed = 0;
    std::size_t ack_memory = 64; // recently-acked generation ids remembered
};

enum class DropReason {
    BufferedAwaitingFill,
    AlreadyAcked,
    GenerationTableFull,
    ParamMismatch,
};

const char* to_string(DropReason reason);

struct EgressEvent {
    enum class Kind {
        Emit,
        Drop,
    };
    Kind kind;
    wire::RlncPacket packet;            // valid for Emit
    DropReason reason = DropReason::BufferedAwaitingFill; // valid for Drop

    static EgressEvent emit(wire::RlncPacket p)
    {
        return EgressEvent{Kind::Emit, std::move(p), DropReason::BufferedAwaitingFill};
    }
    static EgressEvent drop(DropReason r) { return EgressEvent{Kind::Drop, {}, r}; }
};

using SwitchOutput = std::vector<EgressEvent>;

/// Single-threaded packet-processing state machine: ingress buffering,
/// replication decision, egress coding, ACK flush. Buffering uses one flat
/// element array partitioned among generations via per-slot base offsets.
class NcSwitch {
public:
    explicit NcSwitch(SwitchConfig config);

    SwitchOutput ingress(const wire::RlncPacket& packet);

    /// Frees the generation's buffer slot; unknown ids are a no-op.
    void handle_ack(std::uint16_t generation_id);

    /// Runtime reconfiguration of the replica count; throws
    /// InvalidReplicaCount for k = 0.
    void control_set_replicas(std::size_t k);

    /// Produces one coded payload from a filled generation buffer; throws
    /// InsufficientBuffer below fill.
    codec::CodedPayload egress_code(std::uint16_t generation_id);

    const SwitchConfig& config() const { return config_; }
    std::size_t active_generations() const { return slot_of_.size(); }
    std::optional<std::size_t> fill_count(std::uint16_t generation_id) const;
    std::uint64_t mul_count() const { return mul_count_; }

    struct Region {
        std::uint16_t generation_id;
        std::size_t base;
        std::size_t length;
    };
    /// Occupied storage regions, for overlap auditing.
    std::vector<Region> active_regions() const;

private:
    struct Slot {
        std::uint16_t generation_id = 0;
        std::size_t fill = 0;
    };

    std::size_t slot_stride() const;
    bool recently_acked(std::uint16_t generation_id) const;
    SwitchOutput emit_replicas(std::uint16_t generation_id, const wire::OuterHeader& outer,
                               std::uint8_t symbol_count);

    SwitchConfig config_;
    codec::CoefficientSource coeffs_;
    std::vector<gf::Element> storage_;       // max_generations * G * (n + G)
    std::vector<std::size_t> base_offset_;   // per-slot base into storage_
    std::vector<std::optional<Slot>> slots_;
    std::unordered_map<std::uint16_t, std::size_t> slot_of_;
    std::deque<std::uint16_t> acked_ring_;
    std::uint64_t mul_count_ = 0;
};

} // namespace rlnc::pipeline

#endif
