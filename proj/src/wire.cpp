#include "rlnc/wire.hpp"

#include <string>

namespace rlnc::wire {

Truncated::Truncated(std::size_t expected_, std::size_t actual_)
    : WireError("packet length mismatch: expected " + std::to_string(expected_) + " bytes, got " +
                std::to_string(actual_)),
      expected(expected_),
      actual(actual_)
{
}

InvariantViolation::InvariantViolation(const std::string& field_)
    : WireError("packet invariant violated: " + field_), field(field_)
{
}

namespace {

constexpr std::size_t kHeaderBytes = 7; // 5 outer + 2 inner

void validate(const RlncPacket& p)
{
    if (p.outer.generation_size == 0)
        throw InvariantViolation("generation_size");
    if (p.outer.field_size_log2 != 8)
        throw InvariantViolation("field_size_log2");
    if (p.outer.symbol_size == 0)
        throw InvariantViolation("symbol_size");
    switch (p.inner.packet_type) {
    case PacketType::Ack:
        if (p.inner.symbol_count != 0)
            throw InvariantViolation("symbol_count");
        if (!p.coding_vector.empty())
            throw InvariantViolation("coding_vector");
        if (!p.symbols.empty())
            throw InvariantViolation("symbols");
        break;
    case PacketType::Uncoded:
        if (!p.coding_vector.empty())
            throw InvariantViolation("coding_vector");
        [[fallthrough]];
    case PacketType::Coded:
        if (p.inner.symbol_count == 0)
            throw InvariantViolation("symbol_count");
        if (p.inner.packet_type == PacketType::Coded &&
            p.coding_vector.size() != p.outer.generation_size)
            throw InvariantViolation("coding_vector");
        if (p.symbols.size() !=
            static_cast<std::size_t>(p.inner.symbol_count) * p.outer.symbol_size)
            throw InvariantViolation("symbols");
        break;
    default:
        throw InvariantViolation("packet_type");
    }
}

} // namespace

std::size_t serialized_size(const RlncPacket& p)
{
    std::size_t len = kHeaderBytes;
    if (p.inner.packet_type == PacketType::Coded)
        len += p.outer.generation_size;
    if (p.inner.packet_type != PacketType::Ack)
        len += static_cast<std::size_t>(p.inner.symbol_count) * p.outer.symbol_size;
    return len;
}

std::vector<std::uint8_t> serialize(const RlncPacket& p)
{
    validate(p);
    std::vector<std::uint8_t> out;
    out.reserve(serialized_size(p));
    out.push_back(static_cast<std::uint8_t>(p.outer.generation_id >> 8));
    out.push_back(static_cast<std::uint8_t>(p.outer.generation_id & 0xFF));
    out.push_back(p.outer.generation_size);
    out.push_back(p.outer.field_size_log2);
    out.push_back(p.outer.symbol_size);
    out.push_back(static_cast<std::uint8_t>(p.inner.packet_type));
    out.push_back(p.inner.symbol_count);
    out.insert(out.end(), p.coding_vector.begin(), p.coding_vector.end());
    out.insert(out.end(), p.symbols.begin(), p.symbols.end());
    return out;
}

RlncPacket deserialize(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kHeaderBytes)
        throw Truncated(kHeaderBytes, bytes.size());

    RlncPacket p;
    p.outer.generation_id =
        static_cast<std::uint16_t>((static_cast<std::uint16_t>(bytes[0]) << 8) | bytes[1]);
    p.outer.generation_size = bytes[2];
    p.outer.field_size_log2 = bytes[3];
    p.outer.symbol_size = bytes[4];
    const std::uint8_t type_byte = bytes[5];
    p.inner.symbol_count = bytes[6];

    if (type_byte > static_cast<std::uint8_t>(PacketType::Ack))
        throw UnknownPacketType("unknown packet type " + std::to_string(type_byte));
    p.inner.packet_type = static_cast<PacketType>(type_byte);
    if (p.outer.field_size_log2 != 8)
        throw UnsupportedFieldSize("only GF(2^8) packets are supported, got m = " +
                                   std::to_string(p.outer.field_size_log2));
    if (p.outer.generation_size == 0)
        throw InvariantViolation("generation_size");
    if (p.outer.symbol_size == 0)
        throw InvariantViolation("symbol_size");
    if (p.inner.packet_type == PacketType::Ack) {
        if (p.inner.symbol_count != 0)
            throw InvariantViolation("symbol_count");
    } else if (p.inner.symbol_count == 0) {
        throw InvariantViolation("symbol_count");
    }

    const std::size_t expected = serialized_size(p);
    if (bytes.size() != expected)
        throw Truncated(expected, bytes.size());

    std::size_t off = kHeaderBytes;
    if (p.inner.packet_type == PacketType::Coded) {
        p.coding_vector.assign(bytes.begin() + off, bytes.begin() + off + p.outer.generation_size);
        off += p.outer.generation_size;
    }
    if (p.inner.packet_type != PacketType::Ack)
        p.symbols.assign(bytes.begin() + off, bytes.end());
    return p;
}

RlncPacket make_ack(std::uint16_t generation_id, const codec::CodingParams& params)
{
    RlncPacket p;
    p.outer.generation_id = generation_id;
    p.outer.generation_size = static_cast<std::uint8_t>(params.generation_size);
    p.outer.field_size_log2 = static_cast<std::uint8_t>(params.field->bit_width());
    p.outer.symbol_size = 1;
    p.inner.packet_type = PacketType::Ack;
    p.inner.symbol_count = 0;
    return p;
}

} // namespace rlnc::wire
