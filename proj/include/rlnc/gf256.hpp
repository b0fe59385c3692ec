#ifndef RLNC_GF256_HPP
#define RLNC_GF256_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace rlnc::gf {

using Element = std::uint8_t;

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotIrreducible : FieldError {
    using FieldError::FieldError;
};
struct NotPrimitive : FieldError {
    using FieldError::FieldError;
};
struct InverseOfZero : FieldError {
    using FieldError::FieldError;
};

enum class MulAlgorithm {
    Peasant,
    LogTable,
};

/// Field parameters and precomputed log/antilog tables for GF(2^m), m <= 8.
/// Immutable after construction; safe to share across threads.
class Context {
public:
    /// Builds a context for GF(2^m). reduction_poly is the full irreducible
    /// polynomial including the x^m term (e.g. 0x11D for m = 8).
    /// Throws NotIrreducible / NotPrimitive.
    static Context build(unsigned m, unsigned reduction_poly, Element primitive_element);

    /// Shared default GF(2^8) context: x^8+x^4+x^3+x^2+1 with generator 2.
    static const Context& default_gf256();

    unsigned bit_width() const { return m_; }
    unsigned size() const { return q_; }
    unsigned reduction_poly() const { return poly_; }
    Element primitive_element() const { return generator_; }

    static Element add(Element a, Element b) { return a ^ b; }

    /// Shift-and-add multiply; runs a fixed m-iteration loop. If iterations
    /// is non-null it receives the loop trip count.
    Element mul_peasant(Element a, Element b, unsigned* iterations = nullptr) const;

    /// Log/antilog lookup multiply with the subtract-instead-of-modulo branch.
    Element mul_table(Element a, Element b) const;

    Element mul(Element a, Element b, MulAlgorithm alg) const
    {
        return alg == MulAlgorithm::Peasant ? mul_peasant(a, b) : mul_table(a, b);
    }

    /// Multiplicative inverse; throws InverseOfZero for a = 0.
    Element inverse(Element a) const;

    std::span<const Element> log_table() const { return {log_.data() + 1, q_ - 1u}; }
    std::span<const Element> antilog_table() const { return antilog_; }

    Element log_of(Element a) const { return log_[a]; }
    Element antilog_of(unsigned exponent) const { return antilog_[exponent]; }

private:
    Context() = default;

    unsigned m_ = 0;
    unsigned q_ = 0;
    unsigned poly_ = 0;
    Element generator_ = 0;
    std::vector<Element> log_;     // indexed by element value, [0] unused
    std::vector<Element> antilog_; // indexed by exponent, q-1 entries
};

} // namespace rlnc::gf

#endif
