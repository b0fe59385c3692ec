#ifndef RLNC_CODEC_HPP
#define RLNC_CODEC_HPP

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "rlnc/gf256.hpp"

namespace rlnc::codec {

struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeMismatch : CodecError {
    using CodecError::CodecError;
};
struct InsufficientBuffer : CodecError {
    using CodecError::CodecError;
};
struct NotFullRank : CodecError {
    NotFullRank(std::size_t rank, std::size_t needed);
    std::size_t rank;
    std::size_t needed;
};

struct CodingParams {
    std::size_t generation_size = 0;   // G, source packets per generation
    std::size_t symbols_per_packet = 0; // n, field elements per payload
    const gf::Context* field = nullptr;
    gf::MulAlgorithm mul_algorithm = gf::MulAlgorithm::LogTable;
};

/// G rows of n source symbols.
struct SourceSymbolMatrix {
    std::vector<std::vector<gf::Element>> rows;

    bool operator==(const SourceSymbolMatrix&) const = default;
};

struct CodedPayload {
    std::vector<gf::Element> coding_vector; // length G
    std::vector<gf::Element> coded_symbols; // length n

    bool operator==(const CodedPayload&) const = default;
};

/// Deterministic stream of uniform field elements. Same seed, same sequence.
class CoefficientSource {
public:
    explicit CoefficientSource(std::uint64_t seed) : rng_(seed) {}

    gf::Element next(const gf::Context& ctx)
    {
        // field size is a power of two, low bits of the draw are uniform
        return static_cast<gf::Element>(rng_() & (ctx.size() - 1u));
    }

    std::vector<gf::Element> draw(const gf::Context& ctx, std::size_t count)
    {
        std::vector<gf::Element> v(count);
        for (auto& e : v)
            e = next(ctx);
        return v;
    }

private:
    std::mt19937_64 rng_;
};

/// Random linear combination of a generation's source rows. Draws G fresh
/// coefficients from coeffs; mul_count (when given) is incremented by the
/// number of field multiplications performed.
CodedPayload encode(const CodingParams& params, const SourceSymbolMatrix& sources,
                    CoefficientSource& coeffs, std::uint64_t* mul_count = nullptr);

/// Linear combination of already-coded payloads, combining their coding
/// vectors as well, so the output vector stays relative to the original
/// sources. Requires at least G buffered payloads.
CodedPayload recode(const CodingParams& params, std::span<const CodedPayload> buffered,
                    CoefficientSource& coeffs, std::uint64_t* mul_count = nullptr);

enum class InnovationResult {
    Innovative,
    Redundant,
};

/// Incremental Gaussian elimination workspace. Rows are kept in reduced
/// row-echelon form after every consume.
class DecoderState {
public:
    explicit DecoderState(CodingParams params);

    InnovationResult consume(const CodedPayload& payload);

    /// Requires rank() == G; returns the original source matrix.
    SourceSymbolMatrix recover() const;

    std::size_t rank() const { return rows_.size(); }
    const CodingParams& params() const { return params_; }
    std::uint64_t mul_count() const { return mul_count_; }

    /// Pivot-ordered echelon rows, exposed for invariant checks.
    struct Row {
        std::size_t pivot;
        std::vector<gf::Element> coeff;
        std::vector<gf::Element> payload;
    };
    const std::vector<Row>& rows() const { return rows_; }

private:
    CodingParams params_;
    std::vector<Row> rows_;
    std::uint64_t mul_count_ = 0;
};

/// Monte-Carlo estimate of the probability that G random coding vectors are
/// linearly independent. trials must be >= 1.
double independence_probability_estimate(const CodingParams& params, std::size_t trials,
                                         CoefficientSource& coeffs);

} // namespace rlnc::codec

#endif
