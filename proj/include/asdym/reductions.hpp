#pragma once

// Dimensional reductions of the ASDYM equations to KdV, mKdV, NLS,
// Boussinesq and (affine) Toda.
//
// Families (a) and (b) use plane jets in (t, x); Toda uses (z, zt). In both
// cases variable 0 is the "time" direction and variable 1 the "space" one.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "asdym/jet.hpp"
#include "asdym/jet_matrix.hpp"
#include "asdym/rng.hpp"

namespace asdym {

inline constexpr int kT = 0;
inline constexpr int kX = 1;

/// dt and dx shorthands on plane jets.
inline Jet dt(const Jet& f) { return partial(f, kT); }
inline Jet dx(const Jet& f, int n = 1)
{
    Jet out = f;
    for (int k = 0; k < n; ++k) out = partial(out, kX);
    return out;
}

/// Sum of jets at their common order.
Jet jsum(std::initializer_list<Jet> terms);
/// Product of jets at their common order.
Jet jmul(std::initializer_list<Jet> factors);

// ---- family (a): translation invariance along d_w - d_wt and d_zt ----------

struct AnsatzA {
    JetMatrix az, aw, awt, phi;  // phi = Phi_zt
};

AnsatzA kdv_ansatz(const Jet& u);
AnsatzA mkdv_ansatz(const Jet& v);
/// Independent psi, psibar; eps = +1 (focusing) or -1.
AnsatzA nls_ansatz(const Jet& psi, const Jet& psibar, int eps);

/// eq1 = Phi' + [A_wt, Phi]
/// eq2 = Phi. + A_w' - A_wt' + [A_z, Phi] - [A_w, A_wt]
/// eq3 = A_z' - A_w. + [A_w, A_z]
std::array<JetMatrix, 3> reduced_residual_a(const AnsatzA& a);

// ---- family (b): Boussinesq, 3x3 ------------------------------------------

struct AnsatzB {
    JetMatrix az, aw, phi_zt, phi_wt;
};

AnsatzB boussinesq_ansatz(const Jet& u, const Jet& v);

/// eq1 = [Phi_wt, Phi_zt]
/// eq2 = A_z' - A_w. + [A_w, A_z]
/// eq3 = Phi_zt. - Phi_wt' + [A_z, Phi_zt] - [A_w, Phi_wt]
std::array<JetMatrix, 3> reduced_residual_b(const AnsatzB& a);

// ---- family (c): Toda ------------------------------------------------------

struct CartanData {
    int n = 2;
    int eps = 0;
    /// fields() x fields() integer matrix.
    std::vector<std::vector<int>> k;

    /// eps = 0: SU(n) Cartan matrix of size n-1; eps = 1: cyclic n x n extension.
    static CartanData make(int n, int eps);
    std::size_t fields() const { return k.size(); }
};

struct AnsatzC {
    JetMatrix az, azt, phi_w, phi_wt;
};

/// phi_i = phit_i = exp(u_i / 2); a_0 and at_0 are the free parts, the
/// remaining a_i, at_i follow from a_i - a_{i+1} = -u_i,z / 2 and
/// at_i - at_{i+1} = -u_i,zt / 2.
AnsatzC toda_ansatz(const std::vector<Jet>& u, const CartanData& cd, const Jet& a0, const Jet& at0);

/// eq1 = d_z Phi_w + [A_z, Phi_w]
/// eq2 = d_zt Phi_wt + [A_zt, Phi_wt]
/// eq3 = d_z A_zt - d_zt A_z + [A_z, A_zt] + [Phi_wt, Phi_w]
std::array<JetMatrix, 3> reduced_residual_c(const AnsatzC& a);

// ---- scalar equations, as printed -------------------------------------------

/// u. - u'''/4 - 3 u u'/2
Jet kdv_residual(const Jet& u);
/// v. - v'''/4 + 3 v^2 v'/2
Jet mkdv_residual(const Jet& v);
/// i psi. + psi'' + 2 eps psi psibar psi
Jet nls_residual(const Jet& psi, const Jet& psibar, int eps);
/// -i psibar. + psibar'' + 2 eps psibar psi psibar
Jet nls_bar_residual(const Jet& psi, const Jet& psibar, int eps);
/// u.. + u''''/3 + 2 (u^2)''/3
Jet boussinesq_residual(const Jet& u);
/// d_z d_zt u_i + sum_j K_ij exp(u_j), one jet per field.
std::vector<Jet> toda_residual(const std::vector<Jet>& u, const CartanData& cd);

/// The coupled (u, v) system read off the Boussinesq ansatz:
/// E1 = -2 u u'/3 - 2 u'''/3 - v. + v'',  E2 = -u. - u'' + 2 v'.
Jet boussinesq_e1(const Jet& u, const Jet& v);
Jet boussinesq_e2(const Jet& u, const Jet& v);

// ---- frozen entry-to-scalar mappings ---------------------------------------

/// residual[equation](row, col) = sum coefficient * scalar[name]
struct MappingEntry {
    int equation;
    std::size_t row, col;
    std::vector<std::pair<std::string, cplx>> terms;
};

struct MappingTable {
    std::string family;
    std::vector<MappingEntry> entries;
    /// FNV-1a of the canonical text form.
    std::uint64_t hash() const;
    std::string canonical() const;
};

const MappingTable& kdv_mapping();
const MappingTable& mkdv_mapping();
const MappingTable& nls_mapping(int eps);
const MappingTable& boussinesq_mapping();

/// bous(u) = c_x1 dx E1 + c_t2 dt E2 + c_xx2 dx^2 E2
struct BoussinesqElimination {
    cplx dx_e1 = -2.0;
    cplx dt_e2 = -1.0;
    cplx dxx_e2 = 1.0;
};
inline constexpr BoussinesqElimination kBoussinesqElimination{};

/// Diagonal differences d_i = eq3_ii - eq3_{i+1,i+1} (cyclic for eps = 1) equal
/// derivative_sign * d_z d_zt u_i + coupling_sign * sum_j K_ij e^{u_j}.
/// The printed Toda equation has coupling sign +1 relative to the derivative.
struct TodaMapping {
    int derivative_sign = 1;
    int coupling_sign = -1;
    bool printed_sign_mismatch() const { return derivative_sign != coupling_sign; }
    std::string canonical() const;
    std::uint64_t hash() const;
};
inline constexpr TodaMapping kTodaMapping{};

/// kdv(miura(v)) = (dx - 2 v) mkdv(v)
struct MiuraFactor {
    cplx dx = 1.0;
    cplx v = -2.0;
};
inline constexpr MiuraFactor kMiuraFactor{};

struct MappingCheck {
    /// Worst |entry - mapped value| over mapped entries.
    double mapped = 0.0;
    /// Worst |entry| over all other entries.
    double other = 0.0;
};

MappingCheck check_mapping(const MappingTable& table, const std::array<JetMatrix, 3>& residual,
                           const std::map<std::string, Jet>& scalars);

struct TodaCheck {
    double eq1 = 0.0, eq2 = 0.0;
    /// off-diagonal entries of eq3
    double off_diagonal = 0.0;
    /// worst |d_i - mapped value|
    double mapped = 0.0;
};

/// u: fields() jets in (z, zt) of order >= 2. a0, at0 are the free gauge parts.
TodaCheck toda_check(const std::vector<Jet>& u, const CartanData& cd, const Jet& a0, const Jet& at0);

// ---- Miura -----------------------------------------------------------------

/// v' - v^2
Jet miura(const Jet& v);

struct MiuraGaugeCheck {
    /// |g^-1 A g + g^-1 dg - A_mkdv| for A_z, A_w, A_wt, Phi_zt.
    std::array<double, 4> err{};
    /// g^-1 Phi g == Phi coefficient for coefficient.
    bool phi_exact = false;
    double max() const { return std::max({err[0], err[1], err[2], err[3]}); }
};

/// g = [[1, 0], [-v, 1]] carries the KdV ansatz at u = miura(v) onto the mKdV
/// ansatz. v needs order >= 3 (A_z of KdV contains u''). For arbitrary v the
/// transformed A_z equals the mKdV one minus mkdv(v) in entry (1, 0); err[0]
/// measures the mismatch against that, so it vanishes identically.
MiuraGaugeCheck miura_gauge_check(const Jet& v);

// ---- closed-form profiles ----------------------------------------------------

/// 2 k^2 sech^2(k (x + k^2 t))
Jet kdv_soliton(double k, double t, double x, int order);
/// k tanh(k (x - k^2 t / 2))
Jet mkdv_kink(double k, double t, double x, int order);
/// psi = eta sech(eta x) exp(i eta^2 t), with its conjugate jet.
std::pair<Jet, Jet> nls_soliton(double eta, double t, double x, int order);
/// u = 3 B^2 sech^2(B (x - c t)), c = 2iB/sqrt(3), and v = (u' - c u) / 2.
/// The speed is complex: this sign convention has no real sech^2 wave.
std::pair<Jet, Jet> boussinesq_wave(double b, double t, double x, int order);

struct ProfileSpec {
    std::string family;
    std::map<std::string, double> params;
    std::vector<double> t, x;
};

/// { "family": "kdv", "params": { "k": 0.7 }, "grid": { "t": [...], "x": [...] } }
/// Throws ConfigError naming the offending field.
ProfileSpec parse_profile(const nlohmann::json& j);

struct ProfileSample {
    double t, x;
    cplx value;
    /// |value of the scalar residual|
    double scalar_residual;
    /// Worst reduced-ASDYM entry through the family's ansatz, relative.
    double matrix_residual;
};

std::vector<ProfileSample> sample_profile(const ProfileSpec& spec);

/// Random plane jet with coefficients in a box of the given half width.
Jet random_field(Rng& rng, const JetContext& ctx, double half_width = 1.0);

}  // namespace asdym
