#pragma once

// Matrices of jets. Derivatives lower the order of a jet, so most helpers
// here first bring their operands to a common order.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "asdym/jet.hpp"
#include "asdym/ring.hpp"
#include "asdym/ring_matrix.hpp"

namespace asdym {

using JetMatrix = Matrix<Jet>;

/// Smallest jet order among the entries.
inline int order_of(const JetMatrix& m)
{
    int o = kMaxJetOrder;
    for (const auto& e : m.entries()) o = std::min(o, e.order());
    return o;
}

inline JetMatrix truncate(const JetMatrix& m, int order)
{
    return m.map([order](const Jet& e) { return truncate(e, order); });
}

inline JetMatrix partial(const JetMatrix& m, int var)
{
    return m.map([var](const Jet& e) { return partial(e, var); });
}

inline JetMatrix conj(const JetMatrix& m)
{
    return m.map([](const Jet& e) { return conj(e); });
}

/// Constant matrix with every entry a constant jet.
inline JetMatrix constant_matrix(std::initializer_list<std::initializer_list<cplx>> rows, const JetContext& ctx)
{
    const std::size_t nr = rows.size();
    const std::size_t nc = rows.begin()->size();
    JetMatrix m(nr, nc, Jet::zero(ctx));
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (const auto& v : r) m(i, j++) = Jet::constant(v, ctx);
        ++i;
    }
    return m;
}

inline JetMatrix zero_matrix(std::size_t n, const JetContext& ctx) { return JetMatrix(n, n, Jet::zero(ctx)); }

inline JetMatrix identity_matrix(std::size_t n, const JetContext& ctx)
{
    return JetMatrix::identity(n, Jet::zero(ctx));
}

/// Order-aligned arithmetic.
inline JetMatrix mul(const JetMatrix& a, const JetMatrix& b)
{
    const int o = std::min(order_of(a), order_of(b));
    return truncate(a, o) * truncate(b, o);
}

inline JetMatrix add(const JetMatrix& a, const JetMatrix& b)
{
    const int o = std::min(order_of(a), order_of(b));
    return truncate(a, o) + truncate(b, o);
}

inline JetMatrix sub(const JetMatrix& a, const JetMatrix& b)
{
    const int o = std::min(order_of(a), order_of(b));
    return truncate(a, o) - truncate(b, o);
}

inline JetMatrix commutator(const JetMatrix& a, const JetMatrix& b) { return sub(mul(a, b), mul(b, a)); }

/// Sum of any number of matrices at their common order.
inline JetMatrix sum(std::initializer_list<JetMatrix> terms)
{
    int o = kMaxJetOrder;
    for (const auto& t : terms) o = std::min(o, order_of(t));
    JetMatrix out = truncate(*terms.begin(), o);
    for (auto it = terms.begin() + 1; it != terms.end(); ++it) out += truncate(*it, o);
    return out;
}

/// Largest coefficient modulus over all entries.
inline double max_abs(const JetMatrix& m)
{
    double r = 0.0;
    for (const auto& e : m.entries()) r = std::max(r, e.max_abs());
    return r;
}

/// Frobenius norm of the value matrix.
inline double value_norm(const JetMatrix& m)
{
    double s = 0.0;
    for (const auto& e : m.entries()) s += std::norm(e.value());
    return std::sqrt(s);
}

/// max over entries of max_abs_diff, at the common order.
inline double max_abs_diff(const JetMatrix& a, const JetMatrix& b) { return max_abs(sub(a, b)); }

}  // namespace asdym
