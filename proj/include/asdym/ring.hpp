#pragma once

// Ring-element contract used by RingMatrix and the quasideterminant code.
//
// A type T is a ring element when ring_traits<T> provides
//   zero_like(x), one_like(x)   additive / multiplicative identities shaped like x
//   try_inverse(x)              two-sided inverse, or nullopt when x is not a unit
//   is_zero(x)                  exact test for exact rings, threshold test otherwise
//   magnitude(x)                pivot-ranking size (ignored by exact rings)
//   exact, commutative          compile-time flags
// and T supports +, -, * and unary minus.

#include <cmath>
#include <complex>
#include <concepts>
#include <optional>

#include <gmpxx.h>

#include "asdym/errors.hpp"
#include "asdym/jet.hpp"

namespace asdym {

using Rational = mpq_class;

template <class T>
struct ring_traits;

template <>
struct ring_traits<Rational> {
    static constexpr bool exact = true;
    static constexpr bool commutative = true;
    static Rational zero_like(const Rational&) { return 0; }
    static Rational one_like(const Rational&) { return 1; }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static std::optional<Rational> try_inverse(const Rational& x)
    {
        if (is_zero(x)) return std::nullopt;
        return Rational(1) / x;
    }
    static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
};

template <>
struct ring_traits<cplx> {
    static constexpr bool exact = false;
    static constexpr bool commutative = true;
    static cplx zero_like(const cplx&) { return 0.0; }
    static cplx one_like(const cplx&) { return 1.0; }
    static bool is_zero(const cplx& x) { return std::abs(x) == 0.0; }
    static std::optional<cplx> try_inverse(const cplx& x)
    {
        if (!(std::abs(x) > 1e-300)) return std::nullopt;
        return 1.0 / x;
    }
    static double magnitude(const cplx& x) { return std::abs(x); }
};

template <>
struct ring_traits<Jet> {
    static constexpr bool exact = false;
    static constexpr bool commutative = true;
    static Jet zero_like(const Jet& x) { return Jet::zero(x.context()); }
    static Jet one_like(const Jet& x) { return Jet::constant(1.0, x.context()); }
    static bool is_zero(const Jet& x) { return x.max_abs() == 0.0; }
    static std::optional<Jet> try_inverse(const Jet& x)
    {
        try {
            return inverse(x);
        } catch (const NearZeroValue&) {
            return std::nullopt;
        }
    }
    static double magnitude(const Jet& x) { return std::abs(x.value()); }
};

template <class T>
concept RingElement = requires(const T& a, const T& b) {
    { a + b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { -a } -> std::convertible_to<T>;
    { ring_traits<T>::zero_like(a) } -> std::convertible_to<T>;
    { ring_traits<T>::one_like(a) } -> std::convertible_to<T>;
    { ring_traits<T>::try_inverse(a) } -> std::convertible_to<std::optional<T>>;
    { ring_traits<T>::is_zero(a) } -> std::convertible_to<bool>;
    { ring_traits<T>::magnitude(a) } -> std::convertible_to<double>;
};

template <RingElement T>
T ring_inverse_or_throw(const T& x, const char* what)
{
    auto inv = ring_traits<T>::try_inverse(x);
    if (!inv) throw NonInvertibleEntry(what);
    return *std::move(inv);
}

}  // namespace asdym
