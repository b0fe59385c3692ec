#include "rlnc/gf256.hpp"

namespace rlnc::gf {

namespace {

unsigned poly_degree(unsigned p)
{
    unsigned d = 0;
    while (p >> (d + 1))
        ++d;
    return d;
}

// Remainder of a modulo b, both polynomials over GF(2).
unsigned poly_mod(unsigned a, unsigned b)
{
    const unsigned db = poly_degree(b);
    while (a && poly_degree(a) >= db)
        a ^= b << (poly_degree(a) - db);
    return a;
}

bool is_irreducible(unsigned poly, unsigned m)
{
    if (poly_degree(poly) != m)
        return false;
    // Exhaustive trial division by every polynomial of degree 1..m-1.
    for (unsigned d = 2u; d < (1u << m); ++d) {
        if (poly_mod(poly, d) == 0)
            return false;
    }
    return true;
}

} // namespace

Context Context::build(unsigned m, unsigned reduction_poly, Element primitive_element)
{
    if (m == 0 || m > 8)
        throw FieldError("field bit-width must be in [1, 8]");
    if (!is_irreducible(reduction_poly, m))
        throw NotIrreducible("reduction polynomial is not irreducible of degree m");

    Context ctx;
    ctx.m_ = m;
    ctx.q_ = 1u << m;
    ctx.poly_ = reduction_poly;
    ctx.generator_ = primitive_element;
    if (primitive_element == 0 || primitive_element >= ctx.q_)
        throw NotPrimitive("primitive element out of range");

    ctx.log_.assign(ctx.q_, 0);
    ctx.antilog_.assign(ctx.q_ - 1u, 0);
    std::vector<bool> seen(ctx.q_, false);
    Element b = 1;
    for (unsigned i = 0; i < ctx.q_ - 1u; ++i) {
        if (seen[b])
            throw NotPrimitive("element does not generate the multiplicative group");
        seen[b] = true;
        ctx.antilog_[i] = b;
        ctx.log_[b] = static_cast<Element>(i);
        b = ctx.mul_peasant(b, primitive_element);
    }
    if (b != 1)
        throw NotPrimitive("element does not generate the multiplicative group");
    return ctx;
}

const Context& Context::default_gf256()
{
    static const Context ctx = build(8, 0x11D, 2);
    return ctx;
}

Element Context::mul_peasant(Element a, Element b, unsigned* iterations) const
{
    unsigned product = 0;
    unsigned alpha = a;
    unsigned beta = b;
    unsigned iter = 0;
    for (unsigned i = 0; i < m_; ++i) {
        product ^= (0u - (beta & 1u)) & alpha;
        const unsigned mask = (alpha >> (m_ - 1u)) & 1u;
        alpha = (alpha << 1u) ^ (poly_ & (0u - mask));
        beta >>= 1u;
        ++iter;
    }
    if (iterations)
        *iterations = iter;
    return static_cast<Element>(product);
}

Element Context::mul_table(Element a, Element b) const
{
    if (a == 0 || b == 0)
        return 0;
    unsigned sum = static_cast<unsigned>(log_[a]) + static_cast<unsigned>(log_[b]);
    if (sum >= q_ - 1u)
        sum -= q_ - 1u;
    return antilog_[sum];
}

Element Context::inverse(Element a) const
{
    if (a == 0)
        throw InverseOfZero("zero has no multiplicative inverse");
    if (a == 1)
        return 1;
    return antilog_[(q_ - 1u) - static_cast<unsigned>(log_[a])];
}

} // namespace rlnc::gf
