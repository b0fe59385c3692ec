#ifndef RLNC_WIRE_HPP
#define RLNC_WIRE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlnc/codec.hpp"

namespace rlnc::wire {

struct WireError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Truncated : WireError {
    Truncated(std::size_t expected_, std::size_t actual_);
    std::size_t expected;
    std::size_t actual;
};
struct UnknownPacketType : WireError {
    using WireError::WireError;
};
struct UnsupportedFieldSize : WireError {
    using WireError::WireError;
};
struct InvariantViolation : WireError {
    explicit InvariantViolation(const std::string& field);
    std::string field;
};

enum class PacketType : std::uint8_t {
    Uncoded = 0,
    Coded = 1,
    Ack = 2,
};

// Reserved for future pcap export (local-experimental EtherType); the
// simulator exchanges packets as opaque datagrams.
inline constexpr std::uint16_t kEtherType = 0x88B5;

struct OuterHeader {
    std::uint16_t generation_id = 0;
    std::uint8_t generation_size = 0; // G
    std::uint8_t field_size_log2 = 8; // m; only 8 supported in v1
    std::uint8_t symbol_size = 1;     // bytes per symbol

    bool operator==(const OuterHeader&) const = default;
};

struct InnerHeader {
    PacketType packet_type = PacketType::Uncoded;
    std::uint8_t symbol_count = 0; // n; 0 for Ack

    bool operator==(const InnerHeader&) const = default;
};

struct RlncPacket {
    OuterHeader outer;
    InnerHeader inner;
    std::vector<std::uint8_t> coding_vector; // present iff Coded; G bytes
    std::vector<std::uint8_t> symbols;       // symbol_count * symbol_size bytes; empty for Ack

    bool operator==(const RlncPacket&) const = default;
};

/// Serialized length: 5 (outer) + 2 (inner) + [G if Coded] + [n * symbol_size
/// unless Ack].
std::size_t serialized_size(const RlncPacket& p);

/// Big-endian, field-declaration order, no padding. Throws
/// InvariantViolation naming the offending field.
std::vector<std::uint8_t> serialize(const RlncPacket& p);

/// Parses or throws; never reads past the declared lengths, trailing bytes
/// are rejected.
RlncPacket deserialize(std::span<const std::uint8_t> bytes);

RlncPacket make_ack(std::uint16_t generation_id, const codec::CodingParams& params);

} // namespace rlnc::wire

#endif
