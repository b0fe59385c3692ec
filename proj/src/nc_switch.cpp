#include "rlnc/nc_switch.hpp"

#include <algorithm>

namespace rlnc::pipeline {

const char* to_string(DropReason reason)
{
    switch (reason) {
    case DropReason::BufferedAwaitingFill:
        return "BufferedAwaitingFill";
    case DropReason::AlreadyAcked:
        return "AlreadyAcked";
    case DropReason::GenerationTableFull:
        return "GenerationTableFull";
    case DropReason::ParamMismatch:
        return "ParamMismatch";
    }
    return "?";
}

NcSwitch::NcSwitch(SwitchConfig config) : config_(std::move(config)), coeffs_(config_.coeff_seed)
{
    if (config_.max_generations == 0)
        throw SwitchError("max_generations must be >= 1");
    if (config_.replicas_per_trigger == 0)
        throw InvalidReplicaCount("replicas_per_trigger must be >= 1");
    if (config_.params.field == nullptr || config_.params.generation_size == 0 ||
        config_.params.symbols_per_packet == 0)
        throw SwitchError("coding params incomplete");
    storage_.assign(config_.max_generations * slot_stride(), 0);
    base_offset_.resize(config_.max_generations);
    for (std::size_t s = 0; s < config_.max_generations; ++s)
        base_offset_[s] = s * slot_stride();
    slots_.resize(config_.max_generations);
}

std::size_t NcSwitch::slot_stride() const
{
    const std::size_t g = config_.params.generation_size;
    const std::size_t n = config_.params.symbols_per_packet;
    return g * (n + g); // symbol area plus, in Recode mode, coefficient area
}

bool NcSwitch::recently_acked(std::uint16_t generation_id) const
{
    return std::find(acked_ring_.begin(), acked_ring_.end(), generation_id) != acked_ring_.end();
}

std::optional<std::size_t> NcSwitch::fill_count(std::uint16_t generation_id) const
{
    const auto it = slot_of_.find(generation_id);
    if (it == slot_of_.end())
        return std::nullopt;
    return slots_[it->second]->fill;
}

std::vector<NcSwitch::Region> NcSwitch::active_regions() const
{
    std::vector<Region> regions;
    for (std::size_t s = 0; s < slots_.size(); ++s)
        if (slots_[s])
            regions.push_back({slots_[s]->generation_id, base_offset_[s], slot_stride()});
    return regions;
}

void NcSwitch::control_set_replicas(std::size_t k)
{
    if (k == 0)
        throw InvalidReplicaCount("replica count must be >= 1");
    config_.replicas_per_trigger = k;
}

void NcSwitch::handle_ack(std::uint16_t generation_id)
{
    const auto it = slot_of_.find(generation_id);
    if (it == slot_of_.end())
        return;
    slots_[it->second].reset();
    slot_of_.erase(it);
    if (!recently_acked(generation_id)) {
        acked_ring_.push_back(generation_id);
        while (acked_ring_.size() > config_.ack_memory)
            acked_ring_.pop_front();
    }
}

codec::CodedPayload NcSwitch::egress_code(std::uint16_t generation_id)
{
    const std::size_t g = config_.params.generation_size;
    const std::size_t n = config_.params.symbols_per_packet;
    const auto it = slot_of_.find(generation_id);
    if (it == slot_of_.end() || slots_[it->second]->fill < g)
        throw codec::InsufficientBuffer("generation buffer not filled");
    const std::size_t base = base_offset_[it->second];

    if (config_.mode == SwitchMode::Encode) {
        codec::SourceSymbolMatrix sources;
        sources.rows.resize(g);
        for (std::size_t r = 0; r < g; ++r)
            sources.rows[r].assign(storage_.begin() + base + r * n,
                                   storage_.begin() + base + (r + 1) * n);
        return codec::encode(config_.params, sources, coeffs_, &mul_count_);
    }

    std::vector<codec::CodedPayload> buffered(g);
    const std::size_t coeff_base = base + g * n;
    for (std::size_t r = 0; r < g; ++r) {
        buffered[r].coded_symbols.assign(storage_.begin() + base + r * n,
                                         storage_.begin() + base + (r + 1) * n);
        buffered[r].coding_vector.assign(storage_.begin() + coeff_base + r * g,
                                         storage_.begin() + coeff_base + (r + 1) * g);
    }
    return codec::recode(config_.params, buffered, coeffs_, &mul_count_);
}

SwitchOutput NcSwitch::emit_replicas(std::uint16_t generation_id, const wire::OuterHeader& outer,
                                     std::uint8_t symbol_count)
{
    SwitchOutput out;
    for (std::size_t r = 0; r < config_.replicas_per_trigger; ++r) {
        codec::CodedPayload payload = egress_code(generation_id);
        wire::RlncPacket pkt;
        pkt.outer = outer; // outer header kept from the triggering packet
        pkt.inner.packet_type = wire::PacketType::Coded;
        pkt.inner.symbol_count = symbol_count;
        pkt.coding_vector.assign(payload.coding_vector.begin(), payload.coding_vector.end());
        pkt.symbols.assign(payload.coded_symbols.begin(), payload.coded_symbols.end());
        out.push_back(EgressEvent::emit(std::move(pkt)));
    }
    return out;
}

SwitchOutput NcSwitch::ingress(const wire::RlncPacket& packet)
{
    if (packet.inner.packet_type == wire::PacketType::Ack) {
        handle_ack(packet.outer.generation_id);
        return {EgressEvent::emit(packet)}; // forward the ack upstream
    }

    const std::size_t g = config_.params.generation_size;
    const std::size_t n = config_.params.symbols_per_packet;
    const std::size_t elements =
        static_cast<std::size_t>(packet.inner.symbol_count) * packet.outer.symbol_size;
    const bool type_ok = config_.mode == SwitchMode::Encode
                             ? packet.inner.packet_type == wire::PacketType::Uncoded
                             : packet.inner.packet_type == wire::PacketType::Coded;
    if (!type_ok || packet.outer.generation_size != g ||
        packet.outer.field_size_log2 != config_.params.field->bit_width() || elements != n)
        return {EgressEvent::drop(DropReason::ParamMismatch)};

    const std::uint16_t gen = packet.outer.generation_id;
    if (recently_acked(gen))
        return {EgressEvent::drop(DropReason::AlreadyAcked)};

    auto it = slot_of_.find(gen);
    if (it == slot_of_.end()) {
        const auto free_slot =
            std::find_if(slots_.begin(), slots_.end(), [](const auto& s) { return !s; });
        if (free_slot == slots_.end())
            return {EgressEvent::drop(DropReason::GenerationTableFull)};
        const std::size_t s = static_cast<std::size_t>(free_slot - slots_.begin());
        slots_[s] = Slot{gen, 0};
        it = slot_of_.emplace(gen, s).first;
    }

    Slot& slot = *slots_[it->second];
    if (slot.fill == g) {
        // refresh trigger: emit fresh combinations until the ack arrives
        return emit_replicas(gen, packet.outer, packet.inner.symbol_count);
    }

    const std::size_t base = base_offset_[it->second];
    std::copy(packet.symbols.begin(), packet.symbols.end(),
              storage_.begin() + base + slot.fill * n);
    if (config_.mode == SwitchMode::Recode)
        std::copy(packet.coding_vector.begin(), packet.coding_vector.end(),
                  storage_.begin() + base + g * n + slot.fill * g);
    ++slot.fill;

    if (slot.fill < g)
        return {EgressEvent::drop(DropReason::BufferedAwaitingFill)};
    return emit_replicas(gen, packet.outer, packet.inner.symbol_count);
}

} // namespace rlnc::pipeline
