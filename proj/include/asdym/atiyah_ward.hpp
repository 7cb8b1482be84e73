#pragma once

// Atiyah-Ward solutions of the anti-self-dual Yang-Mills equations.
//
// A harmonic seed Delta_0 is chased into a chain Delta_{-l..l} with
//     dDelta_i/dz = -dDelta_{i+1}/dwt,   dDelta_i/dw = -dDelta_{i+1}/dzt.
// The level-l solution comes from the inverse of the Toeplitz grid
// D_{mn} = Delta_{m-n}, 0 <= m, n <= l:
//     p = (D^-1)_00, q = (D^-1)_ll, r = (D^-1)_0l, s = (D^-1)_l0,
//     J = [[p - r q^-1 s, -r q^-1], [q^-1 s, q^-1]].
// Spacetime jets use the variable order (z, zt, w, wt).

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asdym/errors.hpp"
#include "asdym/jet.hpp"
#include "asdym/jet_matrix.hpp"
#include "asdym/rng.hpp"

namespace asdym {

enum Coord : int { Z = 0, ZT = 1, W = 2, WT = 3 };

/// c * exp(az z + azt zt + aw w + awt wt)
struct ExpTerm {
    cplx c = 1.0;
    std::array<cplx, 4> alpha{};  // indexed by Coord

    bool is_constant() const { return alpha[Z] == 0.0 && alpha[ZT] == 0.0 && alpha[W] == 0.0 && alpha[WT] == 0.0; }
};

struct SeedSpec {
    std::vector<ExpTerm> terms;
    /// Additive constant kappa_i of Delta_i. Missing levels are 0.
    std::map<int, cplx> constants{{0, 1.0}};
    int level = 0;
    /// Drop terms whose chain ratio vanishes instead of raising ZeroRatio.
    bool allow_zero_ratio = false;
    /// Optional user-supplied chain, level -> terms, validated rather than built.
    std::map<int, std::vector<ExpTerm>> chain;
};

/// |az azt - aw awt| relative to the size of the exponents.
double harmonicity_defect(const ExpTerm& t);

/// rho = -az/awt if |awt| >= |azt|, else -aw/azt.
cplx chain_ratio(const ExpTerm& t);

class DeltaChain {
public:
    DeltaChain() = default;
    DeltaChain(int level, std::vector<std::vector<ExpTerm>> terms, std::vector<cplx> constants);

    int level() const { return level_; }
    const std::vector<ExpTerm>& terms(int i) const { return terms_.at(slot(i)); }
    cplx constant(int i) const { return constants_.at(slot(i)); }

    /// Delta_i as a jet of the given order at x.
    Jet delta(int i, const std::array<cplx, 4>& x, int order, const JetOptions& opts = {}) const;

    /// Terms removed because their ratio was zero (only with allow_zero_ratio).
    std::vector<ExpTerm> dropped;
    /// FNV-1a hash of the chain data, carried as provenance.
    std::uint64_t hash() const;

private:
    std::size_t slot(int i) const;

    int level_ = 0;
    std::vector<std::vector<ExpTerm>> terms_;
    std::vector<cplx> constants_;
};

/// Builds Delta_{-level..level} from the seed (or validates seed.chain).
/// Throws InvalidSeed, ZeroRatio, ConfigError.
DeltaChain build_chain(const SeedSpec& seed);

struct ChainResiduals {
    double chasing = 0.0;
    double laplace = 0.0;
};

/// Chasing and Laplace residuals at x, relative to max(1, derivative size).
ChainResiduals chain_residuals(const DeltaChain& chain, const std::array<cplx, 4>& x);

enum class Slice { real, euclidean, complex };

std::string to_string(Slice s);
/// Throws ConfigError for an unknown name.
Slice parse_slice(const std::string& name);

struct SpacetimePoint {
    std::array<cplx, 4> x{};
    Slice slice = Slice::real;

    /// True when the coordinates satisfy the slice constraints.
    bool consistent() const;
};

/// Deterministic point k of the given slice in the box [-half_width, half_width].
SpacetimePoint sample_point(std::uint64_t seed, Slice slice, std::uint64_t k, double half_width = 1.0);

struct SolutionQuadruple {
    Jet p, q, r, s;
    int level = 0;
    std::uint64_t seed_hash = 0;
};

/// D_{mn} = Delta_{m-n}(x), 0 <= m, n <= l.
JetMatrix toeplitz_grid(const DeltaChain& chain, int l, const SpacetimePoint& x, int order);

/// Throws SingularPoint when D is not invertible at x and ConfigError
/// ("level exceeds chain") when l is beyond the chain.
SolutionQuadruple aw_quadruple(const DeltaChain& chain, int l, const SpacetimePoint& x, int order = 2);

JetMatrix yang_matrix(const SolutionQuadruple& quad);

/// Relative norm of  d_z(J^-1 d_zt J) - d_w(J^-1 d_wt J)  at the base point.
/// J needs order >= 2.
double yang_residual(const JetMatrix& j);
double yang_residual(const DeltaChain& chain, int l, const SpacetimePoint& x);

struct GaugeDecomposition {
    JetMatrix h, ht;
};

/// h = [[p, 0], [s, 1]], ht = [[1, r], [0, q]]; J = ht^-1 h.
GaugeDecomposition gauge_decomposition(const SolutionQuadruple& quad);

struct GaugePotential {
    std::array<JetMatrix, 4> a;  // A_z, A_zt, A_w, A_wt
};

/// A_z = -(d_z h) h^-1, A_w likewise; A_zt, A_wt from ht.
GaugePotential gauge_fields(const GaugeDecomposition& g);
GaugePotential gauge_fields(const SolutionQuadruple& quad);

/// (h, ht) -> (g^-1 h, g^-1 ht).
GaugeDecomposition gauge_transform(const GaugeDecomposition& d, const JetMatrix& g);
/// A_mu -> g^-1 A_mu g + g^-1 d_mu g.
GaugePotential gauge_transform(const GaugePotential& pot, const JetMatrix& g);

struct AsdymResiduals {
    double f_wz = 0.0;
    double f_wtzt = 0.0;
    double f_zzt_minus_f_wwt = 0.0;
    double max() const { return std::max({f_wz, f_wtzt, f_zzt_minus_f_wwt}); }
};

/// F_mn = d_m A_n - d_n A_m + [A_m, A_n]. Potentials need order >= 1.
JetMatrix curvature(const GaugePotential& pot, int m, int n);
AsdymResiduals asdym_residual(const GaugePotential& pot);

/// p' = (q - s p^-1 r)^-1, q' = (p - r q^-1 s)^-1,
/// r' = (r - p s^-1 q)^-1, s' = (s - q r^-1 p)^-1.
/// Throws SingularPoint at a gamma_0-singular point.
SolutionQuadruple gamma0_apply(const SolutionQuadruple& quad);

/// The algebraic part of beta on (p, q): (p, q) -> (q^-1, p^-1).
std::pair<Jet, Jet> beta_pq(const Jet& p, const Jet& q);

/// Names of the six beta relations, in the order used by BacklundResiduals.
extern const std::array<const char*, 6> kBacklundRelations;

struct BacklundResiduals {
    std::array<double, 6> rel{};
    /// lhs / rhs of each relation at the base point; used by calibration.
    std::array<cplx, 6> ratio{};
    double max() const;
};

/// S = gamma0(quad at level l+1) against the level-l quadruple, with
/// lhs - sign_k * rhs for each relation.
BacklundResiduals backlund_alpha_check(const DeltaChain& chain, int l, const SpacetimePoint& x,
                                       const std::array<int, 6>& signs);

/// The bordered (l+2)x(l+2) matrix: M_01 = -1, M_10 = 1, M_{1+m,1+k} = Delta_{m-k}.
JetMatrix bordered_matrix(const DeltaChain& chain, int l, const SpacetimePoint& x, int order);

/// Block quasideterminant of the bordered matrix over rows/cols {0, l+1}. Needs l >= 1.
JetMatrix yang_matrix_qd(const DeltaChain& chain, int l, const SpacetimePoint& x, int order = 2);

/// 2x2 signed-permutation pair (P, Q) acting as J -> P J Q.
struct EquivalenceTransform {
    std::array<int, 4> p{1, 0, 0, 1};
    std::array<int, 4> q{1, 0, 0, 1};
    bool operator==(const EquivalenceTransform&) const = default;
};

JetMatrix apply(const EquivalenceTransform& t, const JetMatrix& j);

/// Residual of the QuasiJacobi identity on D_{l+1} with corners (0,0) and (l,l),
/// together with |q_l^-1 - |D|_ll|. This is the gamma_0 relation between levels.
double gamma0_quasi_jacobi_residual(const DeltaChain& chain, int l, const SpacetimePoint& x);

/// Relative norm helper: |raw| / max(1, scale).
inline double relative(double raw, double scale) { return raw / std::max(1.0, scale); }

}  // namespace asdym
