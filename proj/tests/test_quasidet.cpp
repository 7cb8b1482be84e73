#include <doctest.h>

#include "asdym/identities.hpp"
#include "asdym/quasidet.hpp"
#include "test_support.hpp"

using namespace asdym;

namespace {

using MQ = Matrix<Rational>;

Rational q(long n, long d = 1)
{
    Rational r(n, d);
    r.canonicalize();
    return r;
}

MQ identity_q(std::size_t n) { return MQ::identity(n, q(0)); }

// Applies row permutation `rp` and column permutation `cp`: B(rp[i], cp[j]) = A(i, j).
template <class T>
Matrix<T> permute(const Matrix<T>& a, const std::vector<std::size_t>& rp, const std::vector<std::size_t>& cp)
{
    Matrix<T> b = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) b(rp[i], cp[j]) = a(i, j);
    return b;
}

std::vector<std::size_t> random_perm(Rng& rng, std::size_t n)
{
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[static_cast<std::size_t>(rng.integer(0, static_cast<long>(i) - 1))]);
    return p;
}

}  // namespace

TEST_CASE("ring_inverse over rationals")
{
    for (std::size_t n = 1; n <= 6; ++n) CHECK(ring_inverse(identity_q(n)) == identity_q(n));

    const MQ a{{1, 2}, {3, 4}};
    const MQ expected{{-2, 1}, {q(3, 2), q(-1, 2)}};
    CHECK(ring_inverse(a) == expected);

    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        const auto m = random_rational_matrix(rng, 5);
        const auto inv = ring_inverse(m);
        CHECK(m * inv == identity_q(5));
        CHECK(inv * m == identity_q(5));
    }
}

TEST_CASE("ring_inverse reports the pivot trace on singular input")
{
    const MQ s{{1, 2, 3}, {2, 4, 6}, {0, 1, 1}};
    try {
        (void)ring_inverse(s);
        FAIL("expected SingularMatrix");
    } catch (const SingularMatrix& e) {
        CHECK(e.step == 2);
        CHECK(e.pivot_trace.size() == 2);
    }
}

TEST_CASE("ring_inverse with noncommutative 2x2 entries is exact")
{
    Rng rng(2);
    const Mat2Q zero(2, 2, q(0));
    for (int t = 0; t < 10; ++t) {
        const auto m = random_block_matrix(rng, 4);
        const auto inv = ring_inverse(m);
        const auto id = Matrix<Mat2Q>::identity(4, zero);
        CHECK(m * inv == id);
        CHECK(inv * m == id);
    }
}

TEST_CASE("ring_inverse over complex numbers")
{
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        Matrix<cplx> m(4, 4, 0.0);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m(i, j) = testing::random_cplx(rng);
        const auto p = m * ring_inverse(m);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(p(i, j) - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
}

TEST_CASE("quasidet small cases")
{
    const MQ a{{1, 2}, {3, 4}};
    // |A|_22 = 4 - 3 * 1^-1 * 2
    CHECK(quasidet(a, 1, 1) == q(-2));
    CHECK(quasidet_det_ratio(a, 1, 1) == q(-2));
    CHECK(quasidet_det_ratio(a, 0, 1) == q(2, 3));
    CHECK(quasidet(a, 0, 1) == q(2, 3));

    const MQ one{{q(7, 3)}};
    CHECK(quasidet(one, 0, 0) == q(7, 3));
    CHECK(quasidet_det_ratio(one, 0, 0) == q(7, 3));

    CHECK_THROWS_AS(quasidet(identity_q(3), 0, 1), NonInvertibleEntry);
    CHECK_THROWS_AS(quasidet(MQ{{1, 2}, {2, 4}}, 0, 0), SingularMatrix);
    CHECK_THROWS_AS(quasidet_det_ratio(identity_q(3), 0, 1), NonInvertibleEntry);
}

TEST_CASE("2x2 quasidet with matrix entries is a Schur complement")
{
    Rng rng(4);
    const Mat2Q zero(2, 2, q(0));
    for (int t = 0; t < 10; ++t) {
        const auto a = random_unimodular2(rng);
        const auto b = random_unimodular2(rng);
        const auto c = random_unimodular2(rng);
        const auto d = random_unimodular2(rng);
        Matrix<Mat2Q> m(2, 2, zero);
        m(0, 0) = a;
        m(0, 1) = b;
        m(1, 0) = c;
        m(1, 1) = d;
        try {
            const auto q00 = quasidet(m, 0, 0);
            const auto q11 = quasidet(m, 1, 1);
            CHECK(q00 == a - b * ring_inverse(d) * c);
            CHECK(q11 == d - c * ring_inverse(a) * b);
        } catch (const Error&) {
            // Schur complement singular for this draw
        }
    }
}

TEST_CASE("quasidet agrees with the determinant ratio")
{
    Rng rng(5);
    std::size_t compared = 0;
    for (std::size_t n = 2; n <= 5; ++n)
        for (int t = 0; t < 10; ++t) {
            const auto m = random_rational_matrix(rng, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    try {
                        const auto lhs = quasidet(m, i, j);
                        const auto rhs = quasidet_det_ratio(m, i, j);
                        CHECK(lhs == rhs);
                        ++compared;
                    } catch (const Error&) {
                    }
                }
        }
    CHECK(compared > 500);
}

TEST_CASE("quasidet permutation equivariance")
{
    Rng rng(6);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 4;
        const auto m = random_rational_matrix(rng, n);
        const auto rp = random_perm(rng, n);
        const auto cp = random_perm(rng, n);
        const auto pm = permute(m, rp, cp);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                try {
                    const auto expected = quasidet(m, i, j);
                    CHECK(quasidet(pm, rp[i], cp[j]) == expected);
                } catch (const NonInvertibleEntry&) {
                }
            }
    }
}

TEST_CASE("block_quasidet")
{
    Rng rng(7);
    SUBCASE("singletons reduce to quasidet")
    {
        const auto m = random_rational_matrix(rng, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                const auto b = block_quasidet(m, {i}, {j});
                // the Schur complement is the quasideterminant; its inverse is (A^-1)_ji
                CHECK(b(0, 0) == quasidet(m, i, j));
                CHECK(ring_inverse(b)(0, 0) == ring_inverse(m)(j, i));
            }
    }
    SUBCASE("block diagonal returns the selected block")
    {
        const auto bb = random_rational_matrix(rng, 2);
        const auto dd = random_rational_matrix(rng, 2);
        MQ m(4, 4, q(0));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                m(i, j) = bb(i, j);
                m(i + 2, j + 2) = dd(i, j);
            }
        CHECK(block_quasidet(m, {0, 1}, {0, 1}) == bb);
        CHECK(block_quasidet(m, {2, 3}, {2, 3}) == dd);
    }
    SUBCASE("inverse of the block is the matching block of A^-1")
    {
        const auto m = random_rational_matrix(rng, 5);
        const auto b = block_quasidet(m, {0, 4}, {1, 3});
        const auto inv = ring_inverse(m);
        const auto binv = ring_inverse(b);
        CHECK(binv(0, 0) == inv(1, 0));
        CHECK(binv(0, 1) == inv(1, 4));
        CHECK(binv(1, 0) == inv(3, 0));
        CHECK(binv(1, 1) == inv(3, 4));
    }
    CHECK_THROWS_AS(block_quasidet(identity_q(3), {0}, {0, 1}), ContextMismatch);
}

TEST_CASE("QuasiJacobi and homological identities over rationals")
{
    Rng rng(8);
    std::size_t ok = 0;
    for (std::size_t n = 3; n <= 6; ++n)
        for (int t = 0; t < 10; ++t) {
            const auto m = random_rational_matrix(rng, n);
            const auto p = random_partition(rng, n);
            try {
                const auto jac = check_quasi_jacobi(m, p);
                const auto h = check_homological(m, p);
                CHECK(jac == 0);
                CHECK(h.row == 0);
                CHECK(h.col == 0);
                ++ok;
            } catch (const Error&) {
            }
        }
    CHECK(ok > 30);
}

TEST_CASE("identities hold with noncommutative entries")
{
    Rng rng(9);
    std::size_t ok = 0;
    for (std::size_t n = 3; n <= 4; ++n)
        for (int t = 0; t < 8; ++t) {
            const auto m = random_block_matrix(rng, n);
            const auto p = CornerPartition::last_two(n);
            try {
                const auto jac = check_quasi_jacobi(m, p);
                const auto h = check_homological(m, p);
                CHECK(ring_traits<Mat2Q>::is_zero(jac));
                CHECK(ring_traits<Mat2Q>::is_zero(h.row));
                CHECK(ring_traits<Mat2Q>::is_zero(h.col));
                ++ok;
            } catch (const Error&) {
            }
        }
    CHECK(ok > 10);
}

TEST_CASE("the entries really do not commute")
{
    Rng rng(10);
    const auto a = random_unimodular2(rng);
    auto b = random_unimodular2(rng);
    while (a * b == b * a) b = random_unimodular2(rng);
    CHECK_FALSE(a * b == b * a);
    // a naive commutative quasi-Jacobi rearrangement fails for block entries
    const auto m = random_block_matrix(rng, 3);
    const auto p = CornerPartition::last_two(3);
    const auto n = 3;
    const auto keep = [n](std::size_t x) { return complement(n, {x}); };
    const auto t_h = quasidet_of_sub(m, keep(p.row_f), keep(p.col_i), p.row_i, p.col_f);
    const auto t_g = quasidet_of_sub(m, keep(p.row_i), keep(p.col_f), p.row_f, p.col_i);
    CHECK_FALSE(t_h * t_g == t_g * t_h);
}

TEST_CASE("commutative homological factor equals a determinant ratio")
{
    Rng rng(11);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 4;
        const auto m = random_rational_matrix(rng, n);
        MQ aux = m;
        for (std::size_t j = 0; j < n; ++j) aux(n - 1, j) = (j == n - 1) ? 1 : 0;
        try {
            // |aux|_{n,n-1} = -det M^{nn} / det M^{n,n-1}
            const auto factor = quasidet(aux, n - 1, n - 2);
            const auto ratio = quasidet_det_ratio(aux, n - 1, n - 2);
            CHECK(factor == ratio);
            const auto mnn = m.submatrix(complement(n, {n - 1}), complement(n, {n - 1}));
            const auto mnh = m.submatrix(complement(n, {n - 1}), complement(n, {n - 2}));
            CHECK(factor == Rational(-leibniz_det(mnn, q(0)) / leibniz_det(mnh, q(0))));
        } catch (const Error&) {
        }
    }
}

TEST_CASE("identity campaign bookkeeping")
{
    CampaignConfig cfg;
    cfg.det_ratio_trials = 5;
    cfg.rational_trials = 5;
    cfg.matrix_trials = 3;
    const auto r = run_identity_campaign(cfg);
    CHECK(r.max_residual() == 0.0);
    CHECK(r.passed(cfg.max_skip_rate));
    CHECK(r.families.size() == 7);

    cfg.forced_singular = true;
    const auto s = run_identity_campaign(cfg);
    CHECK(s.skipped > 0);
    CHECK(s.max_residual() == 0.0);
    CHECK(s.skip_rate() > cfg.max_skip_rate);
    CHECK_FALSE(s.passed(cfg.max_skip_rate));
}
