#include <doctest.h>

#include "asdym/atiyah_ward.hpp"
#include "asdym/calibration.hpp"
#include "asdym/parallel.hpp"
#include "asdym/quasidet.hpp"
#include "asdym/sampling.hpp"
#include "test_support.hpp"

using namespace asdym;
using namespace asdym::testing;

namespace {

SpacetimePoint real_point(std::uint64_t k) { return sample_point(99, Slice::real, k); }

double jm_err(const JetMatrix& a, const JetMatrix& b) { return max_abs_diff(a, b); }

// Calls f at `want` non-singular points of the slice and returns how many points were skipped.
template <class F>
std::size_t for_points(Slice slice, std::size_t want, F&& f, std::uint64_t seed = 7)
{
    std::size_t used = 0, skipped = 0;
    for (std::uint64_t k = 0; used < want; ++k) {
        REQUIRE(k < 10 * want);
        try {
            f(sample_point(seed, slice, k));
            ++used;
        } catch (const SingularPoint&) {
            ++skipped;
        }
    }
    return skipped;
}

}  // namespace

TEST_CASE("chain of a single plane wave")
{
    const DeltaChain c = build_chain(single_term_seed(1));
    REQUIRE(c.level() == 1);
    CHECK(c.terms(1).at(0).c == cplx(-0.5));
    CHECK(c.terms(-1).at(0).c == cplx(-2.0));
    CHECK(c.terms(0).at(0).c == cplx(1.0));
    CHECK(c.constant(-1) == cplx(0.0));
    CHECK(c.constant(0) == cplx(1.0));
    CHECK(c.constant(1) == cplx(0.0));
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto r = chain_residuals(c, real_point(k).x);
        CHECK(r.chasing < 1e-12);
        CHECK(r.laplace < 1e-12);
    }
}

TEST_CASE("chain ratio picks the better conditioned quotient")
{
    ExpTerm t{1.0, {0.3, -1.2, 0.6, -0.6}};
    // |azt| > |awt|: -aw/azt
    CHECK(std::abs(chain_ratio(t) - 0.5) < 1e-15);
    ExpTerm u{1.0, {1.0, 2.0, 1.0, 2.0}};
    CHECK(chain_ratio(u) == cplx(-0.5));
}

TEST_CASE("constant and multi-term chains")
{
    SeedSpec constant;
    constant.level = 2;
    constant.constants = {{0, 3.0}, {1, 0.5}, {-2, 1.0}};
    const DeltaChain cc = build_chain(constant);
    CHECK(cc.delta(1, real_point(0).x, 2).max_abs() == 0.5);
    CHECK(chain_residuals(cc, real_point(1).x).chasing == 0.0);

    SeedSpec a = single_term_seed(2);
    SeedSpec b = single_term_seed(2);
    b.terms[0] = {0.5, {0.3, -1.2, 0.6, -0.6}};
    b.constants.clear();
    SeedSpec ab = a;
    ab.terms.push_back(b.terms[0]);
    const DeltaChain ca = build_chain(a), cb = build_chain(b), cab = build_chain(ab);
    for (std::uint64_t k = 0; k < 10; ++k) {
        const auto x = real_point(k).x;
        for (int i = -2; i <= 2; ++i) {
            const Jet sum = ca.delta(i, x, 2) + cb.delta(i, x, 2);
            CHECK(max_abs_diff(cab.delta(i, x, 2), sum) < 1e-13 * std::max(1.0, sum.max_abs()));
        }
    }
}

TEST_CASE("invalid seeds")
{
    SeedSpec s = single_term_seed(1);
    s.terms[0].alpha = {1.0, 2.0, 1.0, 2.5};
    CHECK_THROWS_AS(build_chain(s), InvalidSeed);

    s.terms[0].alpha = {1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(build_chain(s), InvalidSeed);

    s.terms[0].alpha = {0.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(build_chain(s), ZeroRatio);
    s.allow_zero_ratio = true;
    const DeltaChain c = build_chain(s);
    CHECK(c.dropped.size() == 1);
    CHECK(c.terms(0).empty());

    // level 0 never needs the ratio
    s.allow_zero_ratio = false;
    s.level = 0;
    CHECK_NOTHROW(build_chain(s));

    // constant terms fold into kappa_0
    SeedSpec k;
    k.terms.push_back({2.0, {0.0, 0.0, 0.0, 0.0}});
    k.level = 1;
    CHECK(build_chain(k).constant(0) == cplx(3.0));
}

TEST_CASE("user-supplied chains are validated")
{
    const DeltaChain built = build_chain(single_term_seed(1));
    SeedSpec user;
    for (int i = -1; i <= 1; ++i) user.chain[i] = built.terms(i);
    user.level = 1;
    const DeltaChain c = build_chain(user);
    CHECK(c.hash() == built.hash());

    user.level = 2;
    CHECK_THROWS_WITH_AS(build_chain(user), "level exceeds chain", ConfigError);

    user.level = 1;
    user.chain[1][0].c = 0.5;
    CHECK_THROWS_AS(build_chain(user), InvalidSeed);
}

TEST_CASE("sample points respect their slice")
{
    for (auto slice : {Slice::real, Slice::euclidean, Slice::complex})
        for (std::uint64_t k = 0; k < 50; ++k) {
            const auto p = sample_point(3, slice, k);
            CHECK(p.consistent());
            for (const auto& c : p.x) CHECK(std::abs(c.real()) <= 1.0);
        }
    CHECK(sample_point(3, Slice::real, 4).x == sample_point(3, Slice::real, 4).x);
    CHECK(sample_point(3, Slice::real, 4).x != sample_point(3, Slice::real, 5).x);
    CHECK_THROWS_AS(parse_slice("lorentzian"), ConfigError);
}

TEST_CASE("Atiyah-Ward quadruple")
{
    const DeltaChain c = build_chain(single_term_seed(3));
    const auto x = real_point(2);

    SUBCASE("level 0 is the seed solution")
    {
        const auto q = aw_quadruple(c, 0, x, 2);
        const Jet d0inv = inverse(c.delta(0, x.x, 2));
        for (const Jet* e : {&q.p, &q.q, &q.r, &q.s}) CHECK(max_abs_diff(*e, d0inv) < 1e-14);
    }
    SUBCASE("level 1 closed form")
    {
        const auto q = aw_quadruple(c, 1, x, 2);
        const Jet d0 = c.delta(0, x.x, 2), d1 = c.delta(1, x.x, 2), dm1 = c.delta(-1, x.x, 2);
        const Jet det = d0 * d0 - d1 * dm1;
        const Jet p1 = d0 * inverse(det);
        CHECK(max_abs_diff(q.p, p1) < 1e-12 * std::max(1.0, p1.max_abs()));
        CHECK(max_abs_diff(q.r, -(dm1 * inverse(det))) < 1e-12 * std::max(1.0, q.r.max_abs()));
        CHECK(max_abs_diff(q.s, -(d1 * inverse(det))) < 1e-12 * std::max(1.0, q.s.max_abs()));
    }
    SUBCASE("p^-1 is the (0,0) quasideterminant of D")
    {
        for (int l = 1; l <= 3; ++l) {
            const auto q = aw_quadruple(c, l, x, 2);
            const JetMatrix d = toeplitz_grid(c, l, x, 2);
            const Jet box = quasidet(d, 0, 0);
            CHECK(max_abs_diff(inverse(q.p), box) < 1e-11 * std::max(1.0, box.max_abs()));
        }
    }
    CHECK_THROWS_WITH_AS(aw_quadruple(c, 4, x, 2), "level exceeds chain", ConfigError);

    SUBCASE("singular grid")
    {
        SeedSpec z;
        z.constants = {{0, 0.0}};
        z.level = 1;
        CHECK_THROWS_AS(aw_quadruple(build_chain(z), 1, x, 2), SingularPoint);
    }
}

TEST_CASE("Yang matrix assembly")
{
    const JetContext ctx = JetContext::spacetime(2);
    const Jet one = Jet::constant(1.0, ctx), zero = Jet::zero(ctx);
    CHECK(yang_matrix({one, one, zero, zero}) == identity_matrix(2, ctx));

    const DeltaChain c = build_chain(single_term_seed(1));
    const auto x = real_point(5);
    const auto quad = aw_quadruple(c, 0, x, 2);
    const JetMatrix j = yang_matrix(quad);
    const Jet d0 = c.delta(0, x.x, 2);
    const JetMatrix expected{{zero, -one}, {one, d0}};
    CHECK(jm_err(j, expected) < 1e-13 * d0.max_abs());

    Rng rng(4);
    const SolutionQuadruple rq{random_jet(rng, ctx), random_jet(rng, ctx), random_jet(rng, ctx), random_jet(rng, ctx)};
    CHECK(yang_matrix(rq)(1, 1) == inverse(rq.q));
}

TEST_CASE("Yang's equation holds for Atiyah-Ward solutions")
{
    SeedSpec constant;
    constant.level = 1;
    constant.constants = {{0, 2.0}, {1, 0.5}, {-1, 0.25}};
    CHECK(yang_residual(build_chain(constant), 1, real_point(0)) == 0.0);

    for (const auto& [name, seed] : bundled_seeds()) {
        CAPTURE(name);
        const DeltaChain c = build_chain(seed);
        for (auto slice : {Slice::real, Slice::complex}) {
            for_points(slice, 20, [&](const SpacetimePoint& x) { CHECK(yang_residual(c, 0, x) < 1e-9); });
            for (int l = 1; l <= 3; ++l)
                for_points(slice, 20, [&](const SpacetimePoint& x) { CHECK(yang_residual(c, l, x) < 1e-8); });
        }
    }
}

TEST_CASE("Yang residual detects a non-harmonic seed")
{
    // Bypasses build_chain validation on purpose.
    const ExpTerm bad{1.0, {1.0, 2.0, 1.0, 2.5}};
    const DeltaChain c(0, {{bad}}, {1.0});
    double worst = 0.0;
    for_points(Slice::real, 5, [&](const SpacetimePoint& x) { worst = std::max(worst, yang_residual(c, 0, x)); });
    CHECK(worst > 1e-3);
}

TEST_CASE("gauge potentials")
{
    const JetContext ctx = JetContext::spacetime(2);
    SUBCASE("constant frames give zero potentials")
    {
        const Jet a = Jet::constant(2.0, ctx), b = Jet::constant(0.5, ctx);
        const auto pot = gauge_fields(SolutionQuadruple{a, a, b, b});
        for (const auto& m : pot.a) CHECK(max_abs(m) == 0.0);
        const auto r = asdym_residual(pot);
        CHECK(r.max() == 0.0);
    }
    SUBCASE("covariance and J invariance under random gauge transformations")
    {
        const DeltaChain c = build_chain(single_term_seed(2));
        Rng rng(17);
        std::size_t done = 0;
        for (std::uint64_t k = 0; done < 100; ++k) {
            REQUIRE(k < 1000);
            const auto x = sample_point(8, Slice::real, k);
            const auto quad = aw_quadruple(c, static_cast<int>(k % 3), x, 2);
            const JetMatrix g = random_gauge(rng, ctx);
            const auto d = gauge_decomposition(quad);
            const auto dg = gauge_transform(d, g);

            const JetMatrix j = mul(ring_inverse(d.ht), d.h);
            const JetMatrix jg = mul(ring_inverse(dg.ht), dg.h);
            CHECK(jm_err(j, yang_matrix(quad)) < 1e-11 * std::max(1.0, max_abs(j)));
            CHECK(jm_err(j, jg) < 1e-11 * std::max(1.0, max_abs(j)));

            const auto pot = gauge_fields(d);
            const auto moved = gauge_transform(pot, g);
            const auto direct = gauge_fields(dg);
            for (std::size_t mu = 0; mu < 4; ++mu)
                CHECK(jm_err(moved.a[mu], direct.a[mu]) < 1e-10 * std::max(1.0, max_abs(direct.a[mu])));
            ++done;
        }
    }
}

TEST_CASE("ASDYM equations hold for Atiyah-Ward solutions")
{
    for (const auto& [name, seed] : bundled_seeds()) {
        CAPTURE(name);
        const DeltaChain c = build_chain(seed);
        for (int l = 0; l <= 3; ++l)
            for_points(Slice::real, 10, [&](const SpacetimePoint& x) {
                const auto r = asdym_residual(gauge_fields(aw_quadruple(c, l, x, 2)));
                CHECK(r.max() < 1e-8);
            });
    }
    SUBCASE("a generic potential is not anti-self-dual")
    {
        Rng rng(5);
        const JetContext ctx = JetContext::spacetime(2);
        GaugePotential pot;
        for (auto& a : pot.a) a = random_gauge(rng, ctx);
        CHECK(asdym_residual(pot).max() > 1e-3);
        pot.a[0] = truncate(pot.a[0], 0);
        CHECK_THROWS_AS(asdym_residual(pot), InsufficientOrder);
    }
}

TEST_CASE("gamma_0 transformation")
{
    const JetContext ctx = JetContext::spacetime(2);
    Rng rng(23);
    for (int t = 0; t < 50; ++t) {
        const SolutionQuadruple q{random_jet(rng, ctx), random_jet(rng, ctx), random_jet(rng, ctx),
                                  random_jet(rng, ctx)};
        try {
            const auto back = gamma0_apply(gamma0_apply(q));
            for (auto [a, b] : {std::pair{&q.p, &back.p}, {&q.q, &back.q}, {&q.r, &back.r}, {&q.s, &back.s}})
                CHECK(max_abs_diff(*a, *b) < 1e-10 * std::max(1.0, a->max_abs()));
        } catch (const SingularPoint&) {
        }
        const auto [p1, q1] = beta_pq(q.p, q.q);
        const auto [p2, q2] = beta_pq(p1, q1);
        CHECK(max_abs_diff(p2, q.p) < 1e-12 * std::max(1.0, q.p.max_abs()));
        CHECK(max_abs_diff(q2, q.q) < 1e-12 * std::max(1.0, q.q.max_abs()));
    }
    const Jet lambda = Jet::constant(1.5, ctx);
    CHECK_THROWS_AS(gamma0_apply({lambda, lambda, lambda, lambda}), SingularPoint);
}

TEST_CASE("beta relations with the frozen sign vector")
{
    const DeltaChain c = build_chain(single_term_seed(4));
    CHECK(calibrate_backlund_signs(c, real_point(0)) == kBacklundSigns);
    for (int l = 0; l <= 2; ++l) {
        CAPTURE(l);
        for_points(Slice::real, 20, [&](const SpacetimePoint& x) {
            const auto r = backlund_alpha_check(c, l, x, kBacklundSigns);
            for (std::size_t k = 0; k < 6; ++k) {
                CAPTURE(kBacklundRelations[k]);
                CHECK(r.rel[k] < 1e-8);
            }
        });
    }
    // the wrong sign is detected
    std::array<int, 6> flipped = kBacklundSigns;
    flipped[3] = -flipped[3];
    CHECK(backlund_alpha_check(c, 1, real_point(1), flipped).rel[3] > 1e-3);

    SeedSpec constant;
    constant.level = 2;
    constant.constants = {{0, 2.0}, {1, 0.5}, {-1, 0.25}, {2, 0.1}};
    const auto r = backlund_alpha_check(build_chain(constant), 0, real_point(0), kBacklundSigns);
    for (std::size_t k = 2; k < 6; ++k) CHECK(r.rel[k] == 0.0);

    CHECK_THROWS_WITH_AS(backlund_alpha_check(c, 4, real_point(0), kBacklundSigns), "level exceeds chain",
                         ConfigError);
}

TEST_CASE("bordered Yang matrix")
{
    const DeltaChain c = build_chain(single_term_seed(3));
    CHECK(calibrate_bordered_transform(c, real_point(0)) == kBorderedTransform);
    CHECK(equivalence_candidates().size() == 64);
    CHECK(equivalence_candidates().front() == EquivalenceTransform{});
    for (int l = 1; l <= 3; ++l)
        for_points(Slice::real, 10, [&](const SpacetimePoint& x) {
            const JetMatrix j = yang_matrix(aw_quadruple(c, l, x, 2));
            const JetMatrix qd = yang_matrix_qd(c, l, x, 2);
            CHECK(jm_err(qd, apply(kBorderedTransform, j)) < 1e-10 * std::max(1.0, max_abs(j)));
        });
    CHECK_THROWS_AS(yang_matrix_qd(c, 0, real_point(0), 2), ConfigError);

    SUBCASE("all-constant chain, hand inversion")
    {
        SeedSpec k;
        k.level = 1;
        k.constants = {{0, 2.0}, {1, 0.5}, {-1, 3.0}};
        const JetMatrix qd = yang_matrix_qd(build_chain(k), 1, real_point(0), 2);
        const cplx d0 = 2.0, d1 = 0.5, dm1 = 3.0;
        const cplx expected[2][2] = {{1.0 / d0, dm1 / d0}, {-d1 / d0, d0 - d1 * dm1 / d0}};
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(qd(i, j).value() - expected[i][j]) < 1e-15);
    }
}

TEST_CASE("gamma_0 relation between levels is the QuasiJacobi identity")
{
    for (const auto& [name, seed] : bundled_seeds()) {
        CAPTURE(name);
        const DeltaChain c = build_chain(seed);
        for (int l = 1; l <= 3; ++l)
            for_points(Slice::real, 5, [&](const SpacetimePoint& x) {
                CHECK(gamma0_quasi_jacobi_residual(c, l, x) < 1e-10);
            });
    }
}

TEST_CASE("sampling is deterministic and resamples singular points")
{
    const DeltaChain c = build_chain(single_term_seed(2));
    SamplingConfig cfg;
    cfg.seed = 11;
    cfg.points = 50;
    const PointEval f = [&](const SpacetimePoint& x) { return std::vector<double>{yang_residual(c, 2, x)}; };

    worker_count() = 1;
    const auto serial = sample_nonsingular(cfg, f);
    worker_count() = 4;
    const auto threaded = sample_nonsingular(cfg, f);
    worker_count() = 0;
    REQUIRE(serial.points.size() == 50);
    CHECK(serial.values == threaded.values);
    CHECK(serial.skipped_singular == threaded.skipped_singular);
    // default seeds on the real slice stay well below a 5% singular rate
    CHECK(serial.skipped_singular * 20 < serial.points.size() + serial.skipped_singular);

    const auto stats = summarize(serial, {"yang"}, 1e-8);
    CHECK(stats.at(0).points == 50);
    CHECK(stats.at(0).pass());

    const PointEval never = [](const SpacetimePoint&) -> std::vector<double> { throw SingularPoint("always"); };
    cfg.points = 3;
    CHECK_THROWS_AS(sample_nonsingular(cfg, never), SingularPoint);
}

TEST_CASE("check statistics merge associatively")
{
    CheckStats a{"x", 1.0}, b{"x", 1.0}, c{"x", 1.0};
    a.add(0.1);
    b.add(0.3);
    b.add(0.2);
    c.add(0.5);
    CheckStats ab = a;
    ab.merge(b);
    ab.merge(c);
    CheckStats bc = b;
    bc.merge(c);
    CheckStats a_bc = a;
    a_bc.merge(bc);
    CHECK(ab.points == a_bc.points);
    CHECK(ab.max_rel_residual == a_bc.max_rel_residual);
    CHECK(ab.mean_rel_residual() == doctest::Approx(a_bc.mean_rel_residual()));
    CheckStats n{"nan", 1.0};
    n.add(std::nan(""));
    CHECK_FALSE(n.pass());
}

TEST_CASE("seed files")
{
    const auto seeds = bundled_seeds();
    CHECK(seeds.size() == 5);
    for (const auto& [name, s] : seeds) {
        CAPTURE(name);
        const auto round = parse_seed(to_json(s));
        CHECK(build_chain(round).hash() == build_chain(s).hash());
    }
    CHECK_THROWS_WITH_AS(parse_seed(nlohmann::json::parse(R"({"terms":[{"c":1,"az":"x","azt":1,"aw":1,"awt":1}]})")),
                         "terms[0].az: expected [re, im] or a number", ConfigError);
    CHECK_THROWS_AS(parse_seed(nlohmann::json::parse(R"({"terms":[], "levle": 2})")), ConfigError);
    CHECK_THROWS_AS(parse_seed(nlohmann::json::parse(R"({"level": -1, "constants": {}})")), ConfigError);
    CHECK_THROWS_AS(load_seed("/nonexistent/seed.json"), ConfigError);
}
