#include "asdym/atiyah_ward.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "asdym/quasidet.hpp"

namespace asdym {

namespace {

constexpr double kSeedTol = 1e-12;
constexpr int kChainCheckPoints = 4;

MultiIndex unit(int v)
{
    MultiIndex a{};
    a[static_cast<std::size_t>(v)] = 1;
    return a;
}

MultiIndex unit2(int v, int u)
{
    MultiIndex a{};
    ++a[static_cast<std::size_t>(v)];
    ++a[static_cast<std::size_t>(u)];
    return a;
}

cplx ipow(cplx r, int n)
{
    cplx out = 1.0;
    const cplx b = n >= 0 ? r : 1.0 / r;
    for (int k = 0; k < std::abs(n); ++k) out *= b;
    return out;
}

// Runs f, turning every "this point is singular" failure into SingularPoint.
template <class F>
auto at_point(const char* what, F&& f)
{
    try {
        return f();
    } catch (const SingularMatrix& e) {
        throw SingularPoint(std::string(what) + ": " + e.what());
    } catch (const NearZeroValue& e) {
        throw SingularPoint(std::string(what) + ": " + e.what());
    } catch (const NonInvertibleEntry& e) {
        throw SingularPoint(std::string(what) + ": " + e.what());
    }
}

JetContext spacetime_ctx(int order) { return JetContext::spacetime(order); }

}  // namespace

double harmonicity_defect(const ExpTerm& t)
{
    const auto& a = t.alpha;
    double scale = 1.0;
    for (const auto& v : a) scale = std::max(scale, std::norm(v));
    return std::abs(a[Z] * a[ZT] - a[W] * a[WT]) / scale;
}

cplx chain_ratio(const ExpTerm& t)
{
    const auto& a = t.alpha;
    return std::abs(a[WT]) >= std::abs(a[ZT]) ? -a[Z] / a[WT] : -a[W] / a[ZT];
}

DeltaChain::DeltaChain(int level, std::vector<std::vector<ExpTerm>> terms, std::vector<cplx> constants)
    : level_(level), terms_(std::move(terms)), constants_(std::move(constants))
{
    const auto n = static_cast<std::size_t>(2 * level + 1);
    if (level < 0 || terms_.size() != n || constants_.size() != n)
        throw ContextMismatch("chain data does not cover levels -l..l");
}

std::size_t DeltaChain::slot(int i) const
{
    if (i < -level_ || i > level_) throw ConfigError("level exceeds chain");
    return static_cast<std::size_t>(i + level_);
}

Jet DeltaChain::delta(int i, const std::array<cplx, 4>& x, int order, const JetOptions& opts) const
{
    const JetContext ctx = spacetime_ctx(order);
    Jet out = Jet::constant(constant(i), ctx);
    for (const auto& t : terms(i)) {
        Jet lin = Jet::zero(ctx);
        for (int v = 0; v < 4; ++v) {
            const auto k = static_cast<std::size_t>(v);
            if (t.alpha[k] != 0.0) lin += t.alpha[k] * Jet::variable(v, x[k], ctx);
        }
        out += t.c * exp(lin, opts);
    }
    return out;
}

std::uint64_t DeltaChain::hash() const
{
    std::ostringstream os;
    os.precision(17);
    os << level_;
    for (int i = -level_; i <= level_; ++i) {
        os << '|' << constant(i);
        for (const auto& t : terms(i)) {
            os << ';' << t.c;
            for (const auto& a : t.alpha) os << ',' << a;
        }
    }
    return fnv1a64(os.str());
}

namespace {

void check_chain(const DeltaChain& chain)
{
    for (int k = 0; k < kChainCheckPoints; ++k) {
        const auto pt = sample_point(0x5eed, Slice::real, static_cast<std::uint64_t>(k));
        const auto r = chain_residuals(chain, pt.x);
        if (r.chasing > kSeedTol) throw InvalidSeed("chain violates the chasing relations");
        if (r.laplace > kSeedTol) throw InvalidSeed("Delta_0 is not harmonic");
    }
}

DeltaChain user_chain(const SeedSpec& seed)
{
    int extent = 0;
    while (seed.chain.count(extent + 1) && seed.chain.count(-(extent + 1))) ++extent;
    if (!seed.chain.count(0)) throw InvalidSeed("user chain has no level 0");
    if (seed.level > extent) throw ConfigError("level exceeds chain");
    std::vector<std::vector<ExpTerm>> terms;
    std::vector<cplx> constants;
    for (int i = -extent; i <= extent; ++i) {
        terms.push_back(seed.chain.at(i));
        const auto c = seed.constants.find(i);
        constants.push_back(c == seed.constants.end() ? cplx(0.0) : c->second);
    }
    DeltaChain chain(extent, std::move(terms), std::move(constants));
    check_chain(chain);
    return chain;
}

}  // namespace

DeltaChain build_chain(const SeedSpec& seed)
{
    if (seed.level < 0) throw ConfigError("level must be >= 0");
    if (!seed.chain.empty()) return user_chain(seed);

    const int l = seed.level;
    std::vector<std::vector<ExpTerm>> terms(static_cast<std::size_t>(2 * l + 1));
    std::vector<cplx> constants(terms.size(), 0.0);
    for (const auto& [i, c] : seed.constants)
        if (i >= -l && i <= l) constants[static_cast<std::size_t>(i + l)] = c;

    std::vector<ExpTerm> dropped;
    for (std::size_t k = 0; k < seed.terms.size(); ++k) {
        const ExpTerm& t = seed.terms[k];
        const std::string name = "term " + std::to_string(k);
        if (harmonicity_defect(t) > kSeedTol) throw InvalidSeed(name + " violates az*azt = aw*awt");
        if (t.is_constant()) {
            constants[static_cast<std::size_t>(l)] += t.c;
            continue;
        }
        if (t.alpha[ZT] == 0.0 && t.alpha[WT] == 0.0)
            throw InvalidSeed(name + " has azt = awt = 0; no finite chain exists");
        const cplx rho = chain_ratio(t);
        if (rho == 0.0 && l >= 1) {
            if (!seed.allow_zero_ratio) throw ZeroRatio(name + " has chain ratio 0");
            dropped.push_back(t);
            continue;
        }
        for (int i = -l; i <= l; ++i) {
            ExpTerm ti = t;
            ti.c = t.c * ipow(rho, i);
            terms[static_cast<std::size_t>(i + l)].push_back(ti);
        }
    }
    DeltaChain chain(l, std::move(terms), std::move(constants));
    chain.dropped = std::move(dropped);
    check_chain(chain);
    return chain;
}

ChainResiduals chain_residuals(const DeltaChain& chain, const std::array<cplx, 4>& x)
{
    ChainResiduals r;
    const int l = chain.level();
    std::vector<Jet> d;
    for (int i = -l; i <= l; ++i) d.push_back(chain.delta(i, x, 2));
    for (int i = -l; i < l; ++i) {
        const Jet& a = d[static_cast<std::size_t>(i + l)];
        const Jet& b = d[static_cast<std::size_t>(i + l + 1)];
        const cplx az = a.derivative(unit(Z)), bwt = b.derivative(unit(WT));
        const cplx aw = a.derivative(unit(W)), bzt = b.derivative(unit(ZT));
        r.chasing = std::max(r.chasing, relative(std::abs(az + bwt), std::max(std::abs(az), std::abs(bwt))));
        r.chasing = std::max(r.chasing, relative(std::abs(aw + bzt), std::max(std::abs(aw), std::abs(bzt))));
    }
    const Jet& d0 = d[static_cast<std::size_t>(l)];
    const cplx lz = d0.derivative(unit2(Z, ZT));
    const cplx lw = d0.derivative(unit2(W, WT));
    r.laplace = relative(std::abs(lz - lw), std::max(std::abs(lz), std::abs(lw)));
    return r;
}

std::string to_string(Slice s)
{
    switch (s) {
    case Slice::real: return "real";
    case Slice::euclidean: return "euclidean";
    case Slice::complex: return "complex";
    }
    return "?";
}

Slice parse_slice(const std::string& name)
{
    if (name == "real") return Slice::real;
    if (name == "euclidean") return Slice::euclidean;
    if (name == "complex") return Slice::complex;
    throw ConfigError("slice: expected real, euclidean or complex, got '" + name + "'");
}

bool SpacetimePoint::consistent() const
{
    switch (slice) {
    case Slice::real:
        for (const auto& c : x)
            if (c.imag() != 0.0) return false;
        return true;
    case Slice::euclidean:
        return std::abs(x[ZT] - std::conj(x[Z])) < 1e-14 && std::abs(x[WT] + std::conj(x[W])) < 1e-14;
    case Slice::complex: return true;
    }
    return false;
}

SpacetimePoint sample_point(std::uint64_t seed, Slice slice, std::uint64_t k, double half_width)
{
    Rng rng = Rng::stream(seed, "points/" + to_string(slice), k);
    SpacetimePoint p;
    p.slice = slice;
    switch (slice) {
    case Slice::real:
        for (auto& c : p.x) c = rng.uniform(-half_width, half_width);
        break;
    case Slice::euclidean:
        p.x[Z] = rng.complex_in_box(half_width);
        p.x[W] = rng.complex_in_box(half_width);
        p.x[ZT] = std::conj(p.x[Z]);
        p.x[WT] = -std::conj(p.x[W]);
        break;
    case Slice::complex:
        for (auto& c : p.x) c = rng.complex_in_box(half_width);
        break;
    }
    return p;
}

JetMatrix toeplitz_grid(const DeltaChain& chain, int l, const SpacetimePoint& x, int order)
{
    if (l < 0 || l > chain.level()) throw ConfigError("level exceeds chain");
    std::vector<Jet> d;
    for (int i = -l; i <= l; ++i) d.push_back(chain.delta(i, x.x, order));
    const auto n = static_cast<std::size_t>(l + 1);
    JetMatrix m(n, n, d[0]);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) m(a, b) = d[a + static_cast<std::size_t>(l) - b];
    return m;
}

SolutionQuadruple aw_quadruple(const DeltaChain& chain, int l, const SpacetimePoint& x, int order)
{
    const JetMatrix d = toeplitz_grid(chain, l, x, order);
    const JetMatrix inv = at_point("Toeplitz grid D is singular", [&] { return ring_inverse(d); });
    const auto n = static_cast<std::size_t>(l);
    return {inv(0, 0), inv(n, n), inv(0, n), inv(n, 0), l, chain.hash()};
}

JetMatrix yang_matrix(const SolutionQuadruple& quad)
{
    const Jet qi = inverse(quad.q);
    return JetMatrix{{quad.p - quad.r * qi * quad.s, -(quad.r * qi)}, {qi * quad.s, qi}};
}

double yang_residual(const JetMatrix& j)
{
    if (order_of(j) < 2) throw InsufficientOrder("yang_residual needs J of order >= 2");
    const JetMatrix jinv = at_point("J is singular", [&] { return ring_inverse(j); });
    const JetMatrix t1 = partial(mul(jinv, partial(j, ZT)), Z);
    const JetMatrix t2 = partial(mul(jinv, partial(j, WT)), W);
    return relative(value_norm(sub(t1, t2)), std::max(value_norm(t1), value_norm(t2)));
}

double yang_residual(const DeltaChain& chain, int l, const SpacetimePoint& x)
{
    const auto quad = aw_quadruple(chain, l, x, 2);
    return at_point("q is singular", [&] { return yang_residual(yang_matrix(quad)); });
}

GaugeDecomposition gauge_decomposition(const SolutionQuadruple& quad)
{
    const JetContext ctx = quad.p.context();
    const Jet zero = Jet::zero(ctx);
    const Jet one = Jet::constant(1.0, ctx);
    return {JetMatrix{{quad.p, zero}, {quad.s, one}}, JetMatrix{{one, quad.r}, {zero, quad.q}}};
}

GaugePotential gauge_fields(const GaugeDecomposition& g)
{
    const JetMatrix hi = at_point("h is singular", [&] { return ring_inverse(g.h); });
    const JetMatrix hti = at_point("ht is singular", [&] { return ring_inverse(g.ht); });
    GaugePotential pot;
    for (int mu : {Z, W}) pot.a[static_cast<std::size_t>(mu)] = -mul(partial(g.h, mu), hi);
    for (int mu : {ZT, WT}) pot.a[static_cast<std::size_t>(mu)] = -mul(partial(g.ht, mu), hti);
    return pot;
}

GaugePotential gauge_fields(const SolutionQuadruple& quad) { return gauge_fields(gauge_decomposition(quad)); }

GaugeDecomposition gauge_transform(const GaugeDecomposition& d, const JetMatrix& g)
{
    const JetMatrix gi = at_point("gauge matrix is singular", [&] { return ring_inverse(g); });
    return {mul(gi, d.h), mul(gi, d.ht)};
}

GaugePotential gauge_transform(const GaugePotential& pot, const JetMatrix& g)
{
    const JetMatrix gi = at_point("gauge matrix is singular", [&] { return ring_inverse(g); });
    GaugePotential out;
    for (int mu = 0; mu < 4; ++mu) {
        const auto k = static_cast<std::size_t>(mu);
        out.a[k] = add(mul(mul(gi, pot.a[k]), g), mul(gi, partial(g, mu)));
    }
    return out;
}

JetMatrix curvature(const GaugePotential& pot, int m, int n)
{
    const auto& am = pot.a[static_cast<std::size_t>(m)];
    const auto& an = pot.a[static_cast<std::size_t>(n)];
    return sum({partial(an, m), -partial(am, n), commutator(am, an)});
}

AsdymResiduals asdym_residual(const GaugePotential& pot)
{
    for (const auto& a : pot.a)
        if (order_of(a) < 1) throw InsufficientOrder("asdym_residual needs potentials of order >= 1");
    const auto scale = [&](int m, int n) {
        const auto& am = pot.a[static_cast<std::size_t>(m)];
        const auto& an = pot.a[static_cast<std::size_t>(n)];
        return std::max({value_norm(partial(an, m)), value_norm(partial(am, n)), value_norm(commutator(am, an))});
    };
    AsdymResiduals r;
    r.f_wz = relative(value_norm(curvature(pot, W, Z)), scale(W, Z));
    r.f_wtzt = relative(value_norm(curvature(pot, WT, ZT)), scale(WT, ZT));
    r.f_zzt_minus_f_wwt = relative(value_norm(sub(curvature(pot, Z, ZT), curvature(pot, W, WT))),
                                   std::max(scale(Z, ZT), scale(W, WT)));
    return r;
}

SolutionQuadruple gamma0_apply(const SolutionQuadruple& quad)
{
    return at_point("gamma0-singular point", [&] {
        const auto& [p, q, r, s, l, h] = quad;
        SolutionQuadruple out;
        out.p = inverse(q - s * inverse(p) * r);
        out.q = inverse(p - r * inverse(q) * s);
        out.r = inverse(r - p * inverse(s) * q);
        out.s = inverse(s - q * inverse(r) * p);
        out.level = l;
        out.seed_hash = h;
        return out;
    });
}

std::pair<Jet, Jet> beta_pq(const Jet& p, const Jet& q) { return {inverse(q), inverse(p)}; }

const std::array<const char*, 6> kBacklundRelations{
    "p_S = q^-1",
    "q_S = p^-1",
    "d_zt r_S = q^-1 (d_w s) p^-1",
    "d_wt r_S = q^-1 (d_z s) p^-1",
    "d_w s_S = p^-1 (d_zt r) q^-1",
    "d_z s_S = p^-1 (d_wt r) q^-1",
};

double BacklundResiduals::max() const { return *std::max_element(rel.begin(), rel.end()); }

BacklundResiduals backlund_alpha_check(const DeltaChain& chain, int l, const SpacetimePoint& x,
                                       const std::array<int, 6>& signs)
{
    if (l + 1 > chain.level()) throw ConfigError("level exceeds chain");
    const auto low = aw_quadruple(chain, l, x, 2);
    const auto s = gamma0_apply(aw_quadruple(chain, l + 1, x, 2));
    return at_point("level-l quadruple is singular", [&] {
        const Jet pi = inverse(low.p);
        const Jet qi = inverse(low.q);
        const auto t = [](const Jet& j) { return truncate(j, 1); };
        const std::array<std::pair<Jet, Jet>, 6> rel{{
            {t(s.p), t(qi)},
            {t(s.q), t(pi)},
            {partial(s.r, ZT), t(qi) * partial(low.s, W) * t(pi)},
            {partial(s.r, WT), t(qi) * partial(low.s, Z) * t(pi)},
            {partial(s.s, W), t(pi) * partial(low.r, ZT) * t(qi)},
            {partial(s.s, Z), t(pi) * partial(low.r, WT) * t(qi)},
        }};
        BacklundResiduals out;
        for (std::size_t k = 0; k < 6; ++k) {
            const auto& [lhs, rhs] = rel[k];
            const Jet diff = lhs - cplx(signs[k]) * rhs;
            out.rel[k] = relative(diff.max_abs(), std::max(lhs.max_abs(), rhs.max_abs()));
            out.ratio[k] = rhs.value() == 0.0 ? cplx(0.0) : lhs.value() / rhs.value();
        }
        return out;
    });
}

JetMatrix bordered_matrix(const DeltaChain& chain, int l, const SpacetimePoint& x, int order)
{
    const JetMatrix d = toeplitz_grid(chain, l, x, order);
    const JetContext ctx = spacetime_ctx(order);
    const auto n = static_cast<std::size_t>(l + 2);
    JetMatrix m(n, n, Jet::zero(ctx));
    m(0, 1) = Jet::constant(-1.0, ctx);
    m(1, 0) = Jet::constant(1.0, ctx);
    for (std::size_t a = 0; a + 1 < n; ++a)
        for (std::size_t b = 0; b + 1 < n; ++b) m(a + 1, b + 1) = d(a, b);
    return m;
}

JetMatrix yang_matrix_qd(const DeltaChain& chain, int l, const SpacetimePoint& x, int order)
{
    if (l < 1) throw ConfigError("bordered Yang matrix needs level >= 1");
    const JetMatrix m = bordered_matrix(chain, l, x, order);
    const auto last = static_cast<std::size_t>(l + 1);
    return at_point("interior Delta block is singular", [&] { return block_quasidet(m, {0, last}, {0, last}); });
}

JetMatrix apply(const EquivalenceTransform& t, const JetMatrix& j)
{
    const JetContext ctx = j.sample().context();
    const auto mat = [&](const std::array<int, 4>& a) {
        return constant_matrix({{cplx(a[0]), cplx(a[1])}, {cplx(a[2]), cplx(a[3])}}, ctx);
    };
    return mat(t.p) * j * mat(t.q);
}

double gamma0_quasi_jacobi_residual(const DeltaChain& chain, int l, const SpacetimePoint& x)
{
    if (l < 1) throw ConfigError("gamma0 QuasiJacobi check needs level >= 1");
    const JetMatrix d = toeplitz_grid(chain, l, x, 2);
    const auto n = static_cast<std::size_t>(l);
    const auto quad = aw_quadruple(chain, l, x, 2);
    return at_point("QuasiJacobi pivot is singular", [&] {
        const Jet box = quasidet(d, n, n);
        const double jac = check_quasi_jacobi(d, CornerPartition{0, n, 0, n}).max_abs();
        const double corner = max_abs_diff(inverse(quad.q), box);
        return relative(std::max(jac, corner), box.max_abs());
    });
}

}  // namespace asdym
