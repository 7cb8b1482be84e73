#pragma once

// Truncated multivariate Taylor series ("jets") with complex coefficients.
//
// A jet of shape (nvars, order) stores the coefficients c_a of
//     f(x0 + dx) = sum_{|a| <= order} c_a dx^a
// densely, graded by total degree and lexicographically descending inside
// each degree, e.g. for two variables: 1, x, y, x^2, xy, y^2, ...
// Because the storage is graded, the jet truncated to a lower order is a
// prefix of the coefficient vector.

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace asdym {

using cplx = std::complex<double>;

inline constexpr int kMaxJetVars = 4;
inline constexpr int kMaxJetOrder = 4;

using MultiIndex = std::array<int, kMaxJetVars>;

struct JetContext {
    int nvars = 1;
    int order = 1;
    std::vector<std::string> labels;

    /// Checks 1 <= nvars <= 4 and 0 <= order <= 4.
    void validate() const;
    bool same_shape(const JetContext& o) const { return nvars == o.nvars && order == o.order; }

    static JetContext spacetime(int order) { return {4, order, {"z", "zt", "w", "wt"}}; }
    static JetContext plane(int order) { return {2, order, {"t", "x"}}; }
};

/// Number of stored coefficients: binomial(nvars + order, order).
std::size_t jet_size(int nvars, int order);

namespace detail {
struct JetTables;
const JetTables& jet_tables(int nvars, int order);
}  // namespace detail

struct JetOptions {
    /// jet_inv fails when |value| <= inverse_threshold * max |coefficient|.
    double inverse_threshold = 1e-12;
    /// jet_exp fails when |Re value| exceeds this bound.
    double exp_bound = 700.0;
};

class Jet {
public:
    Jet() = default;
    Jet(const JetContext& ctx, std::vector<cplx> coeffs);

    static Jet constant(cplx c, const JetContext& ctx);
    static Jet variable(int i, cplx base, const JetContext& ctx);
    static Jet zero(const JetContext& ctx) { return constant(0.0, ctx); }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    JetContext context() const { return {nvars_, order_, {}}; }
    bool empty() const { return coeffs_.empty(); }
    bool same_shape(const Jet& o) const { return nvars_ == o.nvars_ && order_ == o.order_; }

    std::span<const cplx> coeffs() const { return coeffs_; }
    std::span<cplx> coeffs() { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }

    cplx value() const { return coeffs_.empty() ? cplx{} : coeffs_[0]; }
    /// Taylor coefficient c_a.
    cplx coeff(const MultiIndex& a) const;
    /// Partial derivative d^a f at the base point, a! * c_a.
    cplx derivative(const MultiIndex& a) const;
    /// Storage position of a multi-index.
    std::size_t index_of(const MultiIndex& a) const;
    const MultiIndex& multi_index(std::size_t k) const;

    /// Set when the jet came from differentiating an order-0 jet.
    bool degraded() const { return degraded_; }

    /// Largest coefficient modulus.
    double max_abs() const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(cplx s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a)
    {
        for (auto& c : a.coeffs_) c = -c;
        return a;
    }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator*(cplx s, Jet a) { return a *= s; }
    friend Jet operator*(Jet a, cplx s) { return a *= s; }
    friend Jet operator+(Jet a, cplx s)
    {
        a.coeffs_.at(0) += s;
        return a;
    }
    friend Jet operator+(cplx s, Jet a) { return std::move(a) + s; }
    friend Jet operator-(Jet a, cplx s) { return std::move(a) + (-s); }
    friend Jet operator-(cplx s, Jet a) { return (-std::move(a)) + s; }

    friend bool operator==(const Jet& a, const Jet& b)
    {
        return a.same_shape(b) && a.coeffs_ == b.coeffs_;
    }

private:
    friend Jet partial(const Jet& a, int i);
    void require_same_shape(const Jet& o, const char* op) const;

    int nvars_ = 0;
    int order_ = 0;
    bool degraded_ = false;
    std::vector<cplx> coeffs_;
};

/// Truncated convolution; same as operator*.
Jet mul(const Jet& a, const Jet& b);

/// Multiplicative inverse through the finite Neumann series of the nilpotent part.
/// Throws NearZeroValue when the value coefficient is (relatively) zero.
Jet inverse(const Jet& a, const JetOptions& opts = {});

/// exp(value) times the truncated exponential series of the nilpotent part.
Jet exp(const Jet& a, const JetOptions& opts = {});

/// d/dx_i. The result has order reduced by one; an order-0 input yields a
/// zero order-0 jet flagged as degraded.
Jet partial(const Jet& a, int i);

/// Drops every coefficient above the given total degree.
Jet truncate(const Jet& a, int order);

/// Brings a and b to the smaller of their two orders.
std::pair<Jet, Jet> common_order(const Jet& a, const Jet& b);

/// Coefficientwise complex conjugate. At a real base point with real
/// directions this is the jet of the conjugate function.
Jet conj(const Jet& a);

/// max_k |a_k - b_k| over shared coefficients (shapes must match).
double max_abs_diff(const Jet& a, const Jet& b);

/// Builds a jet from a polynomial of per-variable offsets: sum c * (x - x0)^a.
/// Used by tests that want a jet with known coefficients.
Jet jet_from_terms(const JetContext& ctx,
                   std::initializer_list<std::pair<MultiIndex, cplx>> terms);

// Convenience compositions over exp and inverse.
Jet sech(const Jet& a, const JetOptions& opts = {});
Jet tanh(const Jet& a, const JetOptions& opts = {});

}  // namespace asdym
