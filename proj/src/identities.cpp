#include "asdym/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace asdym {

Rational random_rational(Rng& rng)
{
    const long num = rng.integer(-9, 9);
    const long den = rng.integer(1, 4);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Matrix<Rational> random_rational_matrix(Rng& rng, std::size_t n)
{
    Matrix<Rational> m(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = random_rational(rng);
    return m;
}

Mat2Q random_unimodular2(Rng& rng)
{
    const auto lower = [&] { return Mat2Q{{1, 0}, {Rational(rng.integer(-3, 3)), 1}}; };
    const auto upper = [&] { return Mat2Q{{1, Rational(rng.integer(-3, 3))}, {0, 1}}; };
    Mat2Q a = lower();
    Mat2Q b = upper();
    Mat2Q c = lower();
    return a * b * c;
}

Matrix<Mat2Q> random_block_matrix(Rng& rng, std::size_t n)
{
    const Mat2Q zero(2, 2, Rational(0));
    Matrix<Mat2Q> m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = random_unimodular2(rng);
    return m;
}

CornerPartition random_partition(Rng& rng, std::size_t n)
{
    const auto pick_two = [&] {
        const auto a = static_cast<std::size_t>(rng.integer(0, static_cast<long>(n) - 1));
        auto b = static_cast<std::size_t>(rng.integer(0, static_cast<long>(n) - 2));
        if (b >= a) ++b;
        return std::pair{a, b};
    };
    const auto [rf, ri] = pick_two();
    const auto [cf, ci] = pick_two();
    return {rf, ri, cf, ci};
}

double residual_norm(const Rational& r)
{
    const double d = std::abs(r.get_d());
    return (d == 0.0 && sgn(r) != 0) ? 1e-300 : d;
}

double residual_norm(const Mat2Q& r)
{
    double m = 0.0;
    for (const auto& e : r.entries()) m = std::max(m, std::abs(e.get_d()));
    // get_d can round a tiny nonzero rational to 0; keep exactness visible.
    if (m == 0.0 && !ring_traits<Mat2Q>::is_zero(r)) m = 1e-300;
    return m;
}

double CampaignReport::max_residual() const
{
    double m = 0.0;
    for (const auto& f : families) m = std::max(m, f.max_residual);
    return m;
}

bool CampaignReport::passed(double max_skip_rate) const
{
    return max_residual() == 0.0 && skip_rate() <= max_skip_rate;
}

namespace {

template <class T>
Matrix<T> identity_like(std::size_t n, const T& like)
{
    return Matrix<T>::identity(n, like);
}

// Runs `body` for every trial; an undefined inner quasideterminant marks the
// trial as skipped instead of failed.
void run_family(FamilyStats& stats, std::size_t trials, const std::function<double(std::size_t)>& body)
{
    for (std::size_t t = 0; t < trials; ++t) {
        ++stats.trials;
        try {
            stats.max_residual = std::max(stats.max_residual, body(t));
        } catch (const NonInvertibleEntry&) {
            ++stats.skipped;
        } catch (const SingularMatrix&) {
            ++stats.skipped;
        }
    }
}

}  // namespace

CampaignReport run_identity_campaign(const CampaignConfig& cfg)
{
    CampaignReport report;
    const Mat2Q zero2(2, 2, Rational(0));

    const auto rational = [&](const std::string& family, std::size_t n, std::size_t t) {
        Rng rng = Rng::stream(cfg.seed, family + "/n" + std::to_string(n), t);
        return cfg.forced_singular ? identity_like<Rational>(n, Rational(0)) : random_rational_matrix(rng, n);
    };
    const auto blocks = [&](const std::string& family, std::size_t n, std::size_t t) {
        Rng rng = Rng::stream(cfg.seed, family + "/n" + std::to_string(n), t);
        return cfg.forced_singular ? identity_like<Mat2Q>(n, zero2) : random_block_matrix(rng, n);
    };
    const auto partition = [&](const std::string& family, std::size_t n, std::size_t t) {
        if (cfg.forced_singular) return CornerPartition::last_two(n);
        Rng rng = Rng::stream(cfg.seed, family + "/partition/n" + std::to_string(n), t);
        return random_partition(rng, n);
    };

    // det-ratio: one trial per (matrix, i, j) with both sides defined.
    {
        FamilyStats s{"det_ratio/rational"};
        for (std::size_t n = 2; n <= 6; ++n) {
            for (std::size_t t = 0; t < cfg.det_ratio_trials; ++t) {
                const auto m = rational(s.family, n, t);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        run_family(s, 1, [&](std::size_t) {
                            return residual_norm(Rational(quasidet(m, i, j) - quasidet_det_ratio(m, i, j)));
                        });
            }
        }
        report.families.push_back(s);
    }

    FamilyStats jac_q{"quasi_jacobi/rational"}, row_q{"homological_row/rational"}, col_q{"homological_col/rational"};
    for (std::size_t n = 3; n <= 6; ++n) {
        run_family(jac_q, cfg.rational_trials, [&](std::size_t t) {
            return residual_norm(check_quasi_jacobi(rational(jac_q.family, n, t), partition(jac_q.family, n, t)));
        });
        run_family(row_q, cfg.rational_trials, [&](std::size_t t) {
            return residual_norm(check_homological(rational(row_q.family, n, t), partition(row_q.family, n, t)).row);
        });
        run_family(col_q, cfg.rational_trials, [&](std::size_t t) {
            return residual_norm(check_homological(rational(col_q.family, n, t), partition(col_q.family, n, t)).col);
        });
    }

    FamilyStats jac_m{"quasi_jacobi/matrix2"}, row_m{"homological_row/matrix2"}, col_m{"homological_col/matrix2"};
    for (std::size_t n = 3; n <= 5; ++n) {
        run_family(jac_m, cfg.matrix_trials, [&](std::size_t t) {
            return residual_norm(check_quasi_jacobi(blocks(jac_m.family, n, t), partition(jac_m.family, n, t)));
        });
        run_family(row_m, cfg.matrix_trials, [&](std::size_t t) {
            return residual_norm(check_homological(blocks(row_m.family, n, t), partition(row_m.family, n, t)).row);
        });
        run_family(col_m, cfg.matrix_trials, [&](std::size_t t) {
            return residual_norm(check_homological(blocks(col_m.family, n, t), partition(col_m.family, n, t)).col);
        });
    }

    for (auto* f : {&jac_q, &row_q, &col_q, &jac_m, &row_m, &col_m}) report.families.push_back(*f);
    for (const auto& f : report.families) {
        report.trials += f.trials;
        report.skipped += f.skipped;
    }
    return report;
}

}  // namespace asdym
