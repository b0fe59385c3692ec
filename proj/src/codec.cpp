#include "rlnc/codec.hpp"

#include <algorithm>
#include <string>

namespace rlnc::codec {

NotFullRank::NotFullRank(std::size_t rank_, std::size_t needed_)
    : CodecError("decoder rank " + std::to_string(rank_) + " of " + std::to_string(needed_) +
                 " degrees of freedom"),
      rank(rank_),
      needed(needed_)
{
}

namespace {

void check_params(const CodingParams& params)
{
    if (params.field == nullptr || params.generation_size == 0 || params.symbols_per_packet == 0)
        throw ShapeMismatch("coding params incomplete");
}

void check_payload_shape(const CodingParams& params, const CodedPayload& p)
{
    if (p.coding_vector.size() != params.generation_size ||
        p.coded_symbols.size() != params.symbols_per_packet)
        throw ShapeMismatch("payload dimensions disagree with coding params");
}

} // namespace

CodedPayload encode(const CodingParams& params, const SourceSymbolMatrix& sources,
                    CoefficientSource& coeffs, std::uint64_t* mul_count)
{
    check_params(params);
    const std::size_t g = params.generation_size;
    const std::size_t n = params.symbols_per_packet;
    if (sources.rows.size() != g)
        throw ShapeMismatch("source matrix row count disagrees with generation size");
    for (const auto& row : sources.rows)
        if (row.size() != n)
            throw ShapeMismatch("source row length disagrees with symbols per packet");

    const gf::Context& f = *params.field;
    CodedPayload out;
    out.coding_vector = coeffs.draw(f, g);
    out.coded_symbols.assign(n, 0);
    for (std::size_t i = 0; i < g; ++i) {
        const gf::Element c = out.coding_vector[i];
        for (std::size_t k = 0; k < n; ++k)
            out.coded_symbols[k] ^= f.mul(c, sources.rows[i][k], params.mul_algorithm);
    }
    if (mul_count)
        *mul_count += static_cast<std::uint64_t>(g) * n;
    return out;
}

CodedPayload recode(const CodingParams& params, std::span<const CodedPayload> buffered,
                    CoefficientSource& coeffs, std::uint64_t* mul_count)
{
    check_params(params);
    const std::size_t g = params.generation_size;
    const std::size_t n = params.symbols_per_packet;
    if (buffered.size() < g)
        throw InsufficientBuffer("recoding needs a filled buffer of at least G payloads");
    for (const auto& p : buffered)
        check_payload_shape(params, p);

    const gf::Context& f = *params.field;
    CodedPayload out;
    out.coding_vector.assign(g, 0);
    out.coded_symbols.assign(n, 0);
    for (const auto& p : buffered) {
        const gf::Element r = coeffs.next(f);
        for (std::size_t i = 0; i < g; ++i)
            out.coding_vector[i] ^= f.mul(r, p.coding_vector[i], params.mul_algorithm);
        for (std::size_t k = 0; k < n; ++k)
            out.coded_symbols[k] ^= f.mul(r, p.coded_symbols[k], params.mul_algorithm);
    }
    if (mul_count)
        *mul_count += static_cast<std::uint64_t>(buffered.size()) * (g + n);
    return out;
}

DecoderState::DecoderState(CodingParams params) : params_(params)
{
    check_params(params_);
}

InnovationResult DecoderState::consume(const CodedPayload& payload)
{
    check_payload_shape(params_, payload);
    const gf::Context& f = *params_.field;
    const auto alg = params_.mul_algorithm;
    const std::size_t g = params_.generation_size;
    const std::size_t n = params_.symbols_per_packet;

    std::vector<gf::Element> c = payload.coding_vector;
    std::vector<gf::Element> y = payload.coded_symbols;

    // forward elimination against existing pivots
    for (const Row& row : rows_) {
        const gf::Element factor = c[row.pivot];
        if (factor == 0)
            continue;
        for (std::size_t i = 0; i < g; ++i)
            c[i] ^= f.mul(factor, row.coeff[i], alg);
        for (std::size_t k = 0; k < n; ++k)
            y[k] ^= f.mul(factor, row.payload[k], alg);
        mul_count_ += g + n;
    }

    const auto it = std::find_if(c.begin(), c.end(), [](gf::Element e) { return e != 0; });
    if (it == c.end())
        return InnovationResult::Redundant;
    const std::size_t pivot = static_cast<std::size_t>(it - c.begin());

    // normalize the leading coefficient
    const gf::Element inv = f.inverse(c[pivot]);
    for (std::size_t i = 0; i < g; ++i)
        c[i] = f.mul(inv, c[i], alg);
    for (std::size_t k = 0; k < n; ++k)
        y[k] = f.mul(inv, y[k], alg);
    mul_count_ += g + n;

    // back-substitute into existing rows to keep reduced echelon form
    for (Row& row : rows_) {
        const gf::Element factor = row.coeff[pivot];
        if (factor == 0)
            continue;
        for (std::size_t i = 0; i < g; ++i)
            row.coeff[i] ^= f.mul(factor, c[i], alg);
        for (std::size_t k = 0; k < n; ++k)
            row.payload[k] ^= f.mul(factor, y[k], alg);
        mul_count_ += g + n;
    }

    Row fresh{pivot, std::move(c), std::move(y)};
    const auto pos = std::lower_bound(rows_.begin(), rows_.end(), pivot,
                                      [](const Row& r, std::size_t p) { return r.pivot < p; });
    rows_.insert(pos, std::move(fresh));
    return InnovationResult::Innovative;
}

SourceSymbolMatrix DecoderState::recover() const
{
    const std::size_t g = params_.generation_size;
    if (rows_.size() != g)
        throw NotFullRank(rows_.size(), g);
    SourceSymbolMatrix out;
    out.rows.reserve(g);
    for (const Row& row : rows_)
        out.rows.push_back(row.payload);
    return out;
}

double independence_probability_estimate(const CodingParams& params, std::size_t trials,
                                         CoefficientSource& coeffs)
{
    check_params(params);
    if (trials == 0)
        throw std::invalid_argument("trials must be >= 1");
    const std::size_t g = params.generation_size;
    const std::size_t n = params.symbols_per_packet;
    std::size_t successes = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        DecoderState state(params);
        for (std::size_t j = 0; j < g; ++j) {
            CodedPayload p;
            p.coding_vector = coeffs.draw(*params.field, g);
            p.coded_symbols.assign(n, 0);
            state.consume(p);
        }
        if (state.rank() == g)
            ++successes;
    }
    return static_cast<double>(successes) / static_cast<double>(trials);
}

} // namespace rlnc::codec
