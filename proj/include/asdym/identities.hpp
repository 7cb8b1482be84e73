#pragma once

// Randomised campaigns over the quasideterminant identities, over exact
// rationals and over 2x2 rational-matrix (noncommutative) entries.

#include <cstdint>
#include <string>
#include <vector>

#include "asdym/quasidet.hpp"
#include "asdym/rng.hpp"

namespace asdym {

using Mat2Q = Matrix<Rational>;

/// Random rational with numerator in [-9, 9] and denominator in [1, 4].
Rational random_rational(Rng& rng);
Matrix<Rational> random_rational_matrix(Rng& rng, std::size_t n);
/// 2x2 rational matrix of determinant one: a product of unit triangular factors.
Mat2Q random_unimodular2(Rng& rng);
Matrix<Mat2Q> random_block_matrix(Rng& rng, std::size_t n);
CornerPartition random_partition(Rng& rng, std::size_t n);

/// Largest |entry| as a double; zero exactly when the residual is exactly zero.
double residual_norm(const Rational& r);
double residual_norm(const Mat2Q& r);

struct FamilyStats {
    std::string family;
    std::size_t trials = 0;
    std::size_t skipped = 0;
    double max_residual = 0.0;

    double skip_rate() const { return trials ? static_cast<double>(skipped) / static_cast<double>(trials) : 0.0; }
};

struct CampaignConfig {
    std::uint64_t seed = 20171101;
    std::size_t det_ratio_trials = 100;      // per n in [2, 6]
    std::size_t rational_trials = 100;       // per n in [3, 6]
    std::size_t matrix_trials = 50;          // per n in [3, 5]
    double max_skip_rate = 0.2;
    /// Replace every trial matrix by the identity; every off-diagonal
    /// quasideterminant is then undefined, exercising the skip accounting.
    bool forced_singular = false;
};

struct CampaignReport {
    std::vector<FamilyStats> families;
    std::size_t trials = 0;
    std::size_t skipped = 0;

    double skip_rate() const { return trials ? static_cast<double>(skipped) / static_cast<double>(trials) : 0.0; }
    double max_residual() const;
    /// Every residual exactly zero and the skip rate inside budget.
    bool passed(double max_skip_rate) const;
};

/// Runs the det-ratio cross-check, QuasiJacobi, and both homological
/// relations. Trial t of family F uses Rng::stream(seed, F, t).
CampaignReport run_identity_campaign(const CampaignConfig& cfg);

}  // namespace asdym
