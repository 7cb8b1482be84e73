#include "asdym/reductions.hpp"

#include <cmath>
#include <sstream>
#include <variant>

#include "asdym/errors.hpp"
#include "asdym/rng.hpp"

namespace asdym {

namespace {

const cplx I{0.0, 1.0};

int min_order(std::initializer_list<Jet> js)
{
    int o = kMaxJetOrder;
    for (const auto& j : js) o = std::min(o, j.order());
    return o;
}

void need_order(const Jet& f, int order, const char* what)
{
    if (f.order() < order)
        throw InsufficientOrder(std::string(what) + " needs a jet of order >= " + std::to_string(order));
}

// Square matrix from rows of jets or constants, every entry at the common order.
using Cell = std::variant<Jet, cplx>;

JetMatrix make(std::initializer_list<std::initializer_list<Cell>> rows, const Jet& shape)
{
    int o = shape.order();
    for (const auto& r : rows)
        for (const auto& c : r)
            if (const Jet* j = std::get_if<Jet>(&c)) o = std::min(o, j->order());
    const JetContext ctx{shape.nvars(), o, {}};
    JetMatrix m(rows.size(), rows.begin()->size(), Jet::zero(ctx));
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t k = 0;
        for (const auto& c : r) {
            if (const Jet* j = std::get_if<Jet>(&c))
                m(i, k) = truncate(*j, o);
            else
                m(i, k) = Jet::constant(std::get<cplx>(c), ctx);
            ++k;
        }
        ++i;
    }
    return m;
}

double entry_err(const Jet& a, const Jet& b)
{
    const auto [x, y] = common_order(a, b);
    return max_abs_diff(x, y);
}

std::string canonical_number(cplx c)
{
    std::ostringstream os;
    os.precision(17);
    os << c.real() << ',' << c.imag();
    return os.str();
}

}  // namespace

Jet jsum(std::initializer_list<Jet> terms)
{
    const int o = min_order(terms);
    Jet out = truncate(*terms.begin(), o);
    for (auto it = terms.begin() + 1; it != terms.end(); ++it) out += truncate(*it, o);
    return out;
}

Jet jmul(std::initializer_list<Jet> factors)
{
    const int o = min_order(factors);
    Jet out = truncate(*factors.begin(), o);
    for (auto it = factors.begin() + 1; it != factors.end(); ++it) out = out * truncate(*it, o);
    return out;
}

// ---- family (a) --------------------------------------------------------------

AnsatzA kdv_ansatz(const Jet& u)
{
    need_order(u, 2, "kdv_ansatz");
    const Jet u1 = dx(u), u2 = dx(u, 2);
    AnsatzA a;
    a.awt = make({{0.0, 0.0}, {0.5 * u, 0.0}}, u);
    a.aw = make({{0.0, -1.0}, {u, 0.0}}, u);
    a.phi = make({{0.0, 0.0}, {1.0, 0.0}}, u);
    a.az = make({{0.25 * u1, -0.5 * u}, {0.25 * jsum({u2, 2.0 * jmul({u, u})}), -0.25 * u1}}, u);
    return a;
}

AnsatzA mkdv_ansatz(const Jet& v)
{
    need_order(v, 2, "mkdv_ansatz");
    const Jet v1 = dx(v), v2 = dx(v, 2);
    const Jet vv = v * v;
    const Jet vvv = vv * v;
    AnsatzA a;
    a.aw = make({{v, -1.0}, {0.0, -v}}, v);
    a.awt = make({{0.0, 0.0}, {-0.5 * jsum({v1, vv}), 0.0}}, v);
    a.phi = make({{0.0, 0.0}, {1.0, 0.0}}, v);
    a.az = make({{0.25 * jsum({v2, -2.0 * vvv}), 0.5 * jsum({-v1, vv})}, {0.0, 0.25 * jsum({-v2, 2.0 * vvv})}}, v);
    return a;
}

AnsatzA nls_ansatz(const Jet& psi, const Jet& psibar, int eps)
{
    if (eps != 1 && eps != -1) throw ConfigError("nls: eps must be +1 or -1");
    need_order(psi, 1, "nls_ansatz");
    need_order(psibar, 1, "nls_ansatz");
    const cplx e = eps;
    const Jet pp = jmul({psi, psibar});
    AnsatzA a;
    a.phi = make({{-0.5 * I, 0.0}, {0.0, 0.5 * I}}, psi);
    a.aw = make({{0.0, -psi}, {e * psibar, 0.0}}, psi);
    a.awt = make({{0.0, 0.0}, {0.0, 0.0}}, psi);
    a.az = make({{-I * e * pp, -I * dx(psi)}, {-I * e * dx(psibar), I * e * pp}}, psi);
    return a;
}

std::array<JetMatrix, 3> reduced_residual_a(const AnsatzA& a)
{
    return {
        sum({partial(a.phi, kX), commutator(a.awt, a.phi)}),
        sum({partial(a.phi, kT), partial(a.aw, kX), -partial(a.awt, kX), commutator(a.az, a.phi),
             -commutator(a.aw, a.awt)}),
        sum({partial(a.az, kX), -partial(a.aw, kT), commutator(a.aw, a.az)}),
    };
}

// ---- family (b) --------------------------------------------------------------

AnsatzB boussinesq_ansatz(const Jet& u, const Jet& v)
{
    need_order(u, 2, "boussinesq_ansatz");
    need_order(v, 1, "boussinesq_ansatz");
    const Jet third = (1.0 / 3.0) * u;
    const Jet a = -2.0 * third;
    const Jet d = jsum({(-2.0 / 3.0) * dx(u), v});
    const Jet e = jsum({(-1.0 / 3.0) * dx(u), v});
    const Jet f = jsum({(-2.0 / 3.0) * dx(u, 2), dx(v)});
    AnsatzB m;
    m.phi_zt = make({{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}, u);
    m.phi_wt = make({{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}, u);
    m.az = make({{a, 0.0, -1.0}, {d, third, 0.0}, {f, e, third}}, u);
    m.aw = make({{0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}, {v, u, 0.0}}, u);
    return m;
}

std::array<JetMatrix, 3> reduced_residual_b(const AnsatzB& a)
{
    return {
        commutator(a.phi_wt, a.phi_zt),
        sum({partial(a.az, kX), -partial(a.aw, kT), commutator(a.aw, a.az)}),
        sum({partial(a.phi_zt, kT), -partial(a.phi_wt, kX), commutator(a.az, a.phi_zt),
             -commutator(a.aw, a.phi_wt)}),
    };
}

// ---- family (c) --------------------------------------------------------------

CartanData CartanData::make(int n, int eps)
{
    if (n < 2) throw ConfigError("toda: N must be >= 2");
    if (eps != 0 && eps != 1) throw ConfigError("toda: eps must be 0 or 1");
    CartanData cd;
    cd.n = n;
    cd.eps = eps;
    const auto m = static_cast<std::size_t>(eps == 0 ? n - 1 : n);
    cd.k.assign(m, std::vector<int>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        cd.k[i][i] += 2;
        if (eps == 0) {
            if (i + 1 < m) cd.k[i][i + 1] -= 1;
            if (i > 0) cd.k[i][i - 1] -= 1;
        } else {
            cd.k[i][(i + 1) % m] -= 1;
            cd.k[i][(i + m - 1) % m] -= 1;
        }
    }
    return cd;
}

AnsatzC toda_ansatz(const std::vector<Jet>& u, const CartanData& cd, const Jet& a0, const Jet& at0)
{
    if (u.size() != cd.fields()) throw ContextMismatch("toda: wrong number of fields");
    for (const auto& f : u) need_order(f, 1, "toda_ansatz");
    const auto n = static_cast<std::size_t>(cd.n);
    std::vector<Jet> phi;
    for (const auto& f : u) phi.push_back(exp(0.5 * f));

    std::vector<Jet> a{a0}, at{at0};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        a.push_back(jsum({a[i], 0.5 * partial(u[i], 0)}));
        at.push_back(jsum({at[i], 0.5 * partial(u[i], 1)}));
    }
    int o = a0.order();
    for (const auto& j : a) o = std::min(o, j.order());
    for (const auto& j : at) o = std::min(o, j.order());
    const JetContext ctx{u[0].nvars(), o, {}};

    AnsatzC m;
    m.az = zero_matrix(n, ctx);
    m.azt = zero_matrix(n, ctx);
    m.phi_w = zero_matrix(n, ctx);
    m.phi_wt = zero_matrix(n, ctx);
    for (std::size_t i = 0; i < n; ++i) {
        m.az(i, i) = truncate(a[i], o);
        m.azt(i, i) = -truncate(at[i], o);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        m.phi_w(i, i + 1) = truncate(phi[i], o);
        m.phi_wt(i + 1, i) = truncate(phi[i], o);
    }
    if (cd.eps == 1) {
        m.phi_w(n - 1, 0) = truncate(phi[n - 1], o);
        m.phi_wt(0, n - 1) = truncate(phi[n - 1], o);
    }
    return m;
}

std::array<JetMatrix, 3> reduced_residual_c(const AnsatzC& a)
{
    return {
        sum({partial(a.phi_w, 0), commutator(a.az, a.phi_w)}),
        sum({partial(a.phi_wt, 1), commutator(a.azt, a.phi_wt)}),
        sum({partial(a.azt, 0), -partial(a.az, 1), commutator(a.az, a.azt), commutator(a.phi_wt, a.phi_w)}),
    };
}

// ---- scalar equations --------------------------------------------------------

Jet kdv_residual(const Jet& u)
{
    need_order(u, 3, "kdv_residual");
    return jsum({dt(u), -0.25 * dx(u, 3), -1.5 * jmul({u, dx(u)})});
}

Jet mkdv_residual(const Jet& v)
{
    need_order(v, 3, "mkdv_residual");
    return jsum({dt(v), -0.25 * dx(v, 3), 1.5 * jmul({v, v, dx(v)})});
}

Jet nls_residual(const Jet& psi, const Jet& psibar, int eps)
{
    need_order(psi, 2, "nls_residual");
    return jsum({I * dt(psi), dx(psi, 2), 2.0 * eps * jmul({psi, psibar, psi})});
}

Jet nls_bar_residual(const Jet& psi, const Jet& psibar, int eps)
{
    need_order(psibar, 2, "nls_bar_residual");
    return jsum({-I * dt(psibar), dx(psibar, 2), 2.0 * eps * jmul({psibar, psi, psibar})});
}

Jet boussinesq_residual(const Jet& u)
{
    need_order(u, 4, "boussinesq_residual");
    return jsum({dt(dt(u)), (1.0 / 3.0) * dx(u, 4), (2.0 / 3.0) * dx(u * u, 2)});
}

std::vector<Jet> toda_residual(const std::vector<Jet>& u, const CartanData& cd)
{
    if (u.size() != cd.fields()) throw ContextMismatch("toda: wrong number of fields");
    std::vector<Jet> eu;
    for (const auto& f : u) {
        need_order(f, 2, "toda_residual");
        eu.push_back(exp(f));
    }
    std::vector<Jet> out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        Jet r = partial(partial(u[i], 0), 1);
        for (std::size_t j = 0; j < u.size(); ++j)
            if (cd.k[i][j] != 0) r += truncate(double(cd.k[i][j]) * eu[j], r.order());
        out.push_back(r);
    }
    return out;
}

Jet boussinesq_e1(const Jet& u, const Jet& v)
{
    return jsum({(-2.0 / 3.0) * jmul({u, dx(u)}), (-2.0 / 3.0) * dx(u, 3), -dt(v), dx(v, 2)});
}

Jet boussinesq_e2(const Jet& u, const Jet& v) { return jsum({-dt(u), -dx(u, 2), 2.0 * dx(v)}); }

// ---- mappings ----------------------------------------------------------------

std::string MappingTable::canonical() const
{
    std::ostringstream os;
    os << family;
    for (const auto& e : entries) {
        os << "|eq" << e.equation << '(' << e.row << ',' << e.col << ')';
        for (const auto& [name, c] : e.terms) os << ';' << name << '*' << canonical_number(c);
    }
    return os.str();
}

std::uint64_t MappingTable::hash() const { return fnv1a64(canonical()); }

const MappingTable& kdv_mapping()
{
    static const MappingTable t{"kdv", {{2, 1, 0, {{"kdv", -1.0}}}}};
    return t;
}

const MappingTable& mkdv_mapping()
{
    static const MappingTable t{"mkdv", {{2, 0, 0, {{"mkdv", -1.0}}}, {2, 1, 1, {{"mkdv", 1.0}}}}};
    return t;
}

const MappingTable& nls_mapping(int eps)
{
    static const MappingTable plus{"nls(eps=+1)", {{2, 0, 1, {{"nls", -I}}}, {2, 1, 0, {{"nls_bar", -I}}}}};
    static const MappingTable minus{"nls(eps=-1)", {{2, 0, 1, {{"nls", -I}}}, {2, 1, 0, {{"nls_bar", I}}}}};
    if (eps == 1) return plus;
    if (eps == -1) return minus;
    throw ConfigError("nls: eps must be +1 or -1");
}

const MappingTable& boussinesq_mapping()
{
    static const MappingTable t{"boussinesq", {{1, 2, 0, {{"E1", 1.0}}}, {1, 2, 1, {{"E2", 1.0}}}}};
    return t;
}

std::string TodaMapping::canonical() const
{
    return "toda|d_i=" + std::to_string(derivative_sign) + "*dzdzt(u_i)+" + std::to_string(coupling_sign) +
           "*sum_j(K_ij*exp(u_j))";
}

std::uint64_t TodaMapping::hash() const { return fnv1a64(canonical()); }

MappingCheck check_mapping(const MappingTable& table, const std::array<JetMatrix, 3>& residual,
                           const std::map<std::string, Jet>& scalars)
{
    MappingCheck out;
    for (int eq = 0; eq < 3; ++eq) {
        const JetMatrix& m = residual[static_cast<std::size_t>(eq)];
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) {
                const MappingEntry* hit = nullptr;
                for (const auto& e : table.entries)
                    if (e.equation == eq && e.row == r && e.col == c) hit = &e;
                if (!hit) {
                    out.other = std::max(out.other, m(r, c).max_abs());
                    continue;
                }
                Jet expected = Jet::zero(m(r, c).context());
                for (const auto& [name, coef] : hit->terms) {
                    const auto s = scalars.find(name);
                    if (s == scalars.end()) throw ConfigError("mapping refers to unknown scalar '" + name + "'");
                    expected += truncate(coef * s->second, expected.order());
                }
                out.mapped = std::max(out.mapped, entry_err(m(r, c), expected));
            }
    }
    return out;
}

TodaCheck toda_check(const std::vector<Jet>& u, const CartanData& cd, const Jet& a0, const Jet& at0)
{
    for (const auto& f : u) need_order(f, 2, "toda_check");
    const auto eqs = reduced_residual_c(toda_ansatz(u, cd, a0, at0));
    TodaCheck out;
    out.eq1 = max_abs(eqs[0]);
    out.eq2 = max_abs(eqs[1]);
    const JetMatrix& e3 = eqs[2];
    const auto n = e3.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out.off_diagonal = std::max(out.off_diagonal, e3(i, j).max_abs());

    std::vector<Jet> eu;
    for (const auto& f : u) eu.push_back(exp(f));
    for (std::size_t i = 0; i < cd.fields(); ++i) {
        const Jet d = e3(i, i) - e3((i + 1) % n, (i + 1) % n);
        Jet coupling = Jet::zero(d.context());
        for (std::size_t j = 0; j < cd.fields(); ++j)
            coupling += truncate(double(cd.k[i][j]) * eu[j], d.order());
        const Jet expected = jsum({double(kTodaMapping.derivative_sign) * partial(partial(u[i], 0), 1),
                                   double(kTodaMapping.coupling_sign) * coupling});
        out.mapped = std::max(out.mapped, entry_err(d, expected));
    }
    return out;
}

// ---- Miura -------------------------------------------------------------------

Jet miura(const Jet& v)
{
    need_order(v, 1, "miura");
    return jsum({dx(v), -(v * v)});
}

MiuraGaugeCheck miura_gauge_check(const Jet& v)
{
    need_order(v, 3, "miura_gauge_check");
    const AnsatzA k = kdv_ansatz(miura(v));
    const AnsatzA m = mkdv_ansatz(v);
    const JetMatrix g = make({{1.0, 0.0}, {-v, 1.0}}, v);
    const JetMatrix gi = make({{1.0, 0.0}, {v, 1.0}}, v);
    const auto move = [&](const JetMatrix& a, int var) { return add(mul(mul(gi, a), g), mul(gi, partial(g, var))); };

    MiuraGaugeCheck out;
    // off-shell, A_z picks up -mkdv(v) in the lower-left corner from dt g
    JetMatrix az = m.az;
    az(1, 0) = jsum({az(1, 0), -mkdv_residual(v)});
    out.err[0] = max_abs_diff(move(k.az, kT), az);
    out.err[1] = max_abs_diff(move(k.aw, kX), m.aw);
    out.err[2] = max_abs_diff(move(k.awt, kX), m.awt);
    const JetMatrix phi = mul(mul(gi, k.phi), g);
    out.err[3] = max_abs_diff(phi, m.phi);
    const int o = std::min(order_of(phi), order_of(m.phi));
    out.phi_exact = truncate(phi, o) == truncate(m.phi, o);
    return out;
}

// ---- profiles ----------------------------------------------------------------

namespace {

std::pair<Jet, Jet> tx(double t, double x, int order)
{
    const JetContext ctx = JetContext::plane(order);
    return {Jet::variable(kT, t, ctx), Jet::variable(kX, x, ctx)};
}

}  // namespace

Jet kdv_soliton(double k, double t, double x, int order)
{
    const auto [T, X] = tx(t, x, order);
    const Jet s = sech(k * (X + k * k * T));
    return 2.0 * k * k * (s * s);
}

Jet mkdv_kink(double k, double t, double x, int order)
{
    const auto [T, X] = tx(t, x, order);
    return k * tanh(k * (X - 0.5 * k * k * T));
}

std::pair<Jet, Jet> nls_soliton(double eta, double t, double x, int order)
{
    const auto [T, X] = tx(t, x, order);
    const Jet psi = eta * sech(eta * X) * exp(I * eta * eta * T);
    return {psi, conj(psi)};
}

std::pair<Jet, Jet> boussinesq_wave(double b, double t, double x, int order)
{
    const auto [T, X] = tx(t, x, order);
    const cplx c = I * 2.0 * b / std::sqrt(3.0);
    const Jet s = sech(b * (X - c * T));
    const Jet u = 3.0 * b * b * (s * s);
    const Jet v = 0.5 * jsum({dx(u), -c * u});
    return {u, v};
}

ProfileSpec parse_profile(const nlohmann::json& j)
{
    if (!j.is_object()) throw ConfigError("profile: expected a JSON object");
    ProfileSpec p;
    if (!j.contains("family") || !j["family"].is_string()) throw ConfigError("family: expected a string");
    p.family = j["family"].get<std::string>();
    static const std::map<std::string, std::string> param_of{
        {"kdv", "k"}, {"mkdv", "k"}, {"miura", "k"}, {"nls", "eta"}, {"boussinesq", "B"}};
    const auto want = param_of.find(p.family);
    if (want == param_of.end()) throw ConfigError("family: unknown profile family '" + p.family + "'");
    if (!j.contains("params") || !j["params"].is_object()) throw ConfigError("params: expected an object");
    for (const auto& [key, v] : j["params"].items()) {
        if (!v.is_number()) throw ConfigError("params." + key + ": expected a number");
        p.params[key] = v.get<double>();
    }
    if (!p.params.count(want->second)) throw ConfigError("params." + want->second + ": missing");
    if (!j.contains("grid") || !j["grid"].is_object()) throw ConfigError("grid: expected an object");
    for (const char* axis : {"t", "x"}) {
        const auto& g = j["grid"];
        if (!g.contains(axis) || !g[axis].is_array()) throw ConfigError(std::string("grid.") + axis + ": expected an array");
        auto& dst = axis[0] == 't' ? p.t : p.x;
        for (const auto& v : g[axis]) {
            if (!v.is_number()) throw ConfigError(std::string("grid.") + axis + ": expected numbers");
            dst.push_back(v.get<double>());
        }
    }
    return p;
}

namespace {

double matrix_residual(const std::array<JetMatrix, 3>& eqs, std::initializer_list<const JetMatrix*> ansatz)
{
    double scale = 0.0;
    for (const auto* m : ansatz) scale = std::max(scale, max_abs(*m));
    double raw = 0.0;
    for (const auto& e : eqs) raw = std::max(raw, max_abs(e));
    return raw / std::max(1.0, scale);
}

}  // namespace

std::vector<ProfileSample> sample_profile(const ProfileSpec& spec)
{
    constexpr int order = 4;
    std::vector<ProfileSample> out;
    for (double t : spec.t)
        for (double x : spec.x) {
            ProfileSample s{t, x, 0.0, 0.0, 0.0};
            if (spec.family == "kdv" || spec.family == "miura") {
                const double k = spec.params.at("k");
                const Jet u = spec.family == "kdv" ? kdv_soliton(k, t, x, order) : miura(mkdv_kink(k, t, x, order));
                const AnsatzA a = kdv_ansatz(u);
                s.value = u.value();
                s.scalar_residual = std::abs(kdv_residual(u).value());
                s.matrix_residual = matrix_residual(reduced_residual_a(a), {&a.az, &a.aw, &a.awt, &a.phi});
            } else if (spec.family == "mkdv") {
                const Jet v = mkdv_kink(spec.params.at("k"), t, x, order);
                const AnsatzA a = mkdv_ansatz(v);
                s.value = v.value();
                s.scalar_residual = std::abs(mkdv_residual(v).value());
                s.matrix_residual = matrix_residual(reduced_residual_a(a), {&a.az, &a.aw, &a.awt, &a.phi});
            } else if (spec.family == "nls") {
                const auto [psi, psibar] = nls_soliton(spec.params.at("eta"), t, x, order);
                const AnsatzA a = nls_ansatz(psi, psibar, 1);
                s.value = psi.value();
                s.scalar_residual = std::abs(nls_residual(psi, psibar, 1).value());
                s.matrix_residual = matrix_residual(reduced_residual_a(a), {&a.az, &a.aw, &a.awt, &a.phi});
            } else if (spec.family == "boussinesq") {
                const auto [u, v] = boussinesq_wave(spec.params.at("B"), t, x, order);
                const AnsatzB a = boussinesq_ansatz(u, v);
                s.value = u.value();
                s.scalar_residual = std::abs(boussinesq_residual(u).value());
                s.matrix_residual = matrix_residual(reduced_residual_b(a), {&a.az, &a.aw, &a.phi_zt, &a.phi_wt});
            } else {
                throw ConfigError("family: unknown profile family '" + spec.family + "'");
            }
            out.push_back(s);
        }
    return out;
}

Jet random_field(Rng& rng, const JetContext& ctx, double half_width)
{
    std::vector<cplx> c(jet_size(ctx.nvars, ctx.order));
    for (auto& v : c) v = rng.complex_in_box(half_width);
    return Jet(ctx, std::move(c));
}

}  // namespace asdym
