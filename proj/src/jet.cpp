#include "asdym/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asdym/errors.hpp"

namespace asdym {

namespace detail {

struct JetTables {
    int nvars = 0;
    int order = 0;
    std::vector<MultiIndex> indices;
    std::vector<int> degree;
    // (i, j, k) with i <= j: c_k += a_i b_j + a_j b_i (once when i == j).
    // Pairing the symmetric terms makes the product commute bit-exactly.
    struct Triple {
        std::uint16_t i, j, k;
    };
    std::vector<Triple> mul;
    // For each variable v and each k of the order-1 result:
    // result_k = factor * input_{source}.
    struct Shift {
        std::uint16_t source;
        double factor;
    };
    std::array<std::vector<Shift>, kMaxJetVars> partial;

    std::size_t find(const MultiIndex& a) const
    {
        auto it = std::find(indices.begin(), indices.end(), a);
        if (it == indices.end()) throw IndexOutOfRange("multi-index not stored in this jet");
        return static_cast<std::size_t>(it - indices.begin());
    }
};

namespace {

void enumerate_degree(int nvars, int deg, int var, MultiIndex& cur, std::vector<MultiIndex>& out)
{
    if (var == nvars - 1) {
        cur[var] = deg;
        out.push_back(cur);
        cur[var] = 0;
        return;
    }
    for (int e = deg; e >= 0; --e) {
        cur[var] = e;
        enumerate_degree(nvars, deg - e, var + 1, cur, out);
    }
    cur[var] = 0;
}

JetTables build_tables(int nvars, int order)
{
    JetTables t;
    t.nvars = nvars;
    t.order = order;
    for (int d = 0; d <= order; ++d) {
        MultiIndex cur{};
        enumerate_degree(nvars, d, 0, cur, t.indices);
    }
    for (const auto& a : t.indices) {
        int s = 0;
        for (int v = 0; v < nvars; ++v) s += a[v];
        t.degree.push_back(s);
    }
    const auto n = t.indices.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (t.degree[i] + t.degree[j] > order) continue;
            MultiIndex sum{};
            for (int v = 0; v < nvars; ++v) sum[v] = t.indices[i][v] + t.indices[j][v];
            t.mul.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                             static_cast<std::uint16_t>(t.find(sum))});
        }
    }
    if (order >= 1) {
        const auto lower = jet_size(nvars, order - 1);
        for (int v = 0; v < nvars; ++v) {
            for (std::size_t k = 0; k < lower; ++k) {
                MultiIndex up = t.indices[k];
                const double factor = up[v] + 1;
                up[v] += 1;
                t.partial[v].push_back({static_cast<std::uint16_t>(t.find(up)), factor});
            }
        }
    }
    return t;
}

}  // namespace

const JetTables& jet_tables(int nvars, int order)
{
    static const auto all = [] {
        std::vector<JetTables> v;
        for (int n = 1; n <= kMaxJetVars; ++n)
            for (int o = 0; o <= kMaxJetOrder; ++o) v.push_back(build_tables(n, o));
        return v;
    }();
    if (nvars < 1 || nvars > kMaxJetVars || order < 0 || order > kMaxJetOrder)
        throw ContextMismatch("jet shape out of range: nvars=" + std::to_string(nvars) +
                              " order=" + std::to_string(order));
    return all[static_cast<std::size_t>((nvars - 1) * (kMaxJetOrder + 1) + order)];
}

}  // namespace detail

void JetContext::validate() const
{
    if (nvars < 1 || nvars > kMaxJetVars)
        throw ContextMismatch("jet nvars must lie in [1, 4], got " + std::to_string(nvars));
    if (order < 0 || order > kMaxJetOrder)
        throw ContextMismatch("jet order must lie in [0, 4], got " + std::to_string(order));
    if (!labels.empty() && static_cast<int>(labels.size()) != nvars)
        throw ContextMismatch("jet labels must name every variable");
}

std::size_t jet_size(int nvars, int order)
{
    // binomial(nvars + order, order)
    std::size_t r = 1;
    for (int k = 1; k <= order; ++k) r = r * static_cast<std::size_t>(nvars + k) / static_cast<std::size_t>(k);
    return r;
}

Jet::Jet(const JetContext& ctx, std::vector<cplx> coeffs)
    : nvars_(ctx.nvars), order_(ctx.order), coeffs_(std::move(coeffs))
{
    ctx.validate();
    if (coeffs_.size() != jet_size(nvars_, order_))
        throw ContextMismatch("coefficient count does not match jet shape");
}

Jet Jet::constant(cplx c, const JetContext& ctx)
{
    ctx.validate();
    std::vector<cplx> v(jet_size(ctx.nvars, ctx.order));
    v[0] = c;
    return Jet(ctx, std::move(v));
}

Jet Jet::variable(int i, cplx base, const JetContext& ctx)
{
    if (i < 0 || i >= ctx.nvars)
        throw IndexOutOfRange("variable index " + std::to_string(i) + " outside [0, " +
                              std::to_string(ctx.nvars) + ")");
    Jet j = constant(base, ctx);
    if (ctx.order >= 1) j.coeffs_[static_cast<std::size_t>(1 + i)] = 1.0;
    return j;
}

std::size_t Jet::index_of(const MultiIndex& a) const
{
    return detail::jet_tables(nvars_, order_).find(a);
}

const MultiIndex& Jet::multi_index(std::size_t k) const
{
    return detail::jet_tables(nvars_, order_).indices.at(k);
}

cplx Jet::coeff(const MultiIndex& a) const { return coeffs_[index_of(a)]; }

cplx Jet::derivative(const MultiIndex& a) const
{
    double fact = 1.0;
    for (int v = 0; v < nvars_; ++v)
        for (int k = 2; k <= a[v]; ++k) fact *= k;
    return fact * coeff(a);
}

double Jet::max_abs() const
{
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

void Jet::require_same_shape(const Jet& o, const char* op) const
{
    if (!same_shape(o) || coeffs_.empty())
        throw ContextMismatch(std::string("jet ") + op + ": shape (" + std::to_string(nvars_) + "," +
                              std::to_string(order_) + ") vs (" + std::to_string(o.nvars_) + "," +
                              std::to_string(o.order_) + ")");
}

Jet& Jet::operator+=(const Jet& o)
{
    require_same_shape(o, "add");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    require_same_shape(o, "sub");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
}

Jet& Jet::operator*=(cplx s)
{
    for (auto& c : coeffs_) c *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b)
{
    a.require_same_shape(b, "mul");
    const auto& t = detail::jet_tables(a.nvars_, a.order_);
    std::vector<cplx> out(a.coeffs_.size());
    for (const auto& [i, j, k] : t.mul) {
        if (i == j)
            out[k] += a.coeffs_[i] * b.coeffs_[i];
        else
            out[k] += a.coeffs_[i] * b.coeffs_[j] + a.coeffs_[j] * b.coeffs_[i];
    }
    Jet r = a;
    r.coeffs_ = std::move(out);
    r.degraded_ = a.degraded_ || b.degraded_;
    return r;
}

Jet mul(const Jet& a, const Jet& b) { return a * b; }

namespace {

// Sum_{k=0}^{order} weights[k] * n^k for the nilpotent part n of a.
Jet nilpotent_series(const Jet& a, std::span<const cplx> weights)
{
    Jet n = a;
    n.coeffs()[0] = 0.0;
    Jet acc = Jet::constant(weights[0], a.context());
    Jet power = Jet::constant(1.0, a.context());
    for (int k = 1; k <= a.order(); ++k) {
        power = power * n;
        acc += weights[static_cast<std::size_t>(k)] * power;
    }
    return acc;
}

}  // namespace

Jet inverse(const Jet& a, const JetOptions& opts)
{
    if (a.empty()) throw ContextMismatch("inverse of an empty jet");
    const cplx v = a.value();
    const double scale = a.max_abs();
    if (scale == 0.0 || std::abs(v) <= opts.inverse_threshold * scale)
        throw NearZeroValue("jet value coefficient is numerically zero (|value| = " +
                            std::to_string(std::abs(v)) + ")");
    // 1/(v + n) = (1/v) sum_k (-n/v)^k
    std::array<cplx, kMaxJetOrder + 1> w{};
    cplx p = 1.0 / v;
    for (int k = 0; k <= a.order(); ++k) {
        w[static_cast<std::size_t>(k)] = p;
        p *= -1.0 / v;
    }
    return nilpotent_series(a, std::span<const cplx>(w.data(), static_cast<std::size_t>(a.order() + 1)));
}

Jet exp(const Jet& a, const JetOptions& opts)
{
    if (a.empty()) throw ContextMismatch("exp of an empty jet");
    const cplx v = a.value();
    if (std::abs(v.real()) > opts.exp_bound)
        throw ExpOverflow("exp argument real part " + std::to_string(v.real()) + " exceeds bound");
    std::array<cplx, kMaxJetOrder + 1> w{};
    const cplx ev = std::exp(v);
    double fact = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) fact *= k;
        w[static_cast<std::size_t>(k)] = ev / fact;
    }
    return nilpotent_series(a, std::span<const cplx>(w.data(), static_cast<std::size_t>(a.order() + 1)));
}

Jet partial(const Jet& a, int i)
{
    if (i < 0 || i >= a.nvars_) throw IndexOutOfRange("partial: variable index out of range");
    if (a.order_ == 0) {
        Jet z = Jet::zero({a.nvars_, 0, {}});
        z.degraded_ = true;
        return z;
    }
    const auto& t = detail::jet_tables(a.nvars_, a.order_);
    const auto& shifts = t.partial[static_cast<std::size_t>(i)];
    std::vector<cplx> out(shifts.size());
    for (std::size_t k = 0; k < shifts.size(); ++k) out[k] = shifts[k].factor * a.coeffs_[shifts[k].source];
    Jet r({a.nvars_, a.order_ - 1, {}}, std::move(out));
    r.degraded_ = a.degraded_;
    return r;
}

Jet truncate(const Jet& a, int order)
{
    if (order > a.order()) throw InsufficientOrder("cannot raise jet order by truncation");
    if (order == a.order()) return a;
    std::vector<cplx> v(a.coeffs().begin(), a.coeffs().begin() + static_cast<std::ptrdiff_t>(jet_size(a.nvars(), order)));
    return Jet({a.nvars(), order, {}}, std::move(v));
}

std::pair<Jet, Jet> common_order(const Jet& a, const Jet& b)
{
    const int o = std::min(a.order(), b.order());
    return {truncate(a, o), truncate(b, o)};
}

Jet conj(const Jet& a)
{
    Jet r = a;
    for (auto& c : r.coeffs()) c = std::conj(c);
    return r;
}

double max_abs_diff(const Jet& a, const Jet& b)
{
    if (!a.same_shape(b)) throw ContextMismatch("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.coeffs()[k] - b.coeffs()[k]));
    return m;
}

Jet jet_from_terms(const JetContext& ctx, std::initializer_list<std::pair<MultiIndex, cplx>> terms)
{
    Jet j = Jet::zero(ctx);
    for (const auto& [a, c] : terms) j.coeffs()[j.index_of(a)] += c;
    return j;
}

Jet sech(const Jet& a, const JetOptions& opts)
{
    return 2.0 * inverse(exp(a, opts) + exp(-a, opts), opts);
}

Jet tanh(const Jet& a, const JetOptions& opts)
{
    const Jet ep = exp(a, opts);
    const Jet em = exp(-a, opts);
    return (ep - em) * inverse(ep + em, opts);
}

}  // namespace asdym
