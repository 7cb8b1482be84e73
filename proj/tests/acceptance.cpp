// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "asdym/calibration.hpp"
#include "asdym/identities.hpp"
#include "asdym/report.hpp"
#include "test_support.hpp"

using namespace asdym;
using namespace asdym::testing;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Worst max_rel_residual over the checks of a suite body, and whether all pass.
struct Worst {
    double value = 0.0;
    bool pass = true;
    std::size_t points = ~std::size_t{0};

    void take(const json& checks, const std::string& filter = "")
    {
        for (const auto& [name, c] : checks.items()) {
            if (name.find(filter) == std::string::npos) continue;
            const double v = c["max_rel_residual"].is_number() ? c["max_rel_residual"].get<double>() : INFINITY;
            value = std::max(value, v);
            pass = pass && c["pass"].get<bool>();
            points = std::min(points, c["points"].get<std::size_t>());
        }
    }
};

SolutionConfig solution(const SeedSpec& seed, const std::string& name, int level, double tol, Slice slice)
{
    SolutionConfig c;
    c.seed = seed;
    c.seed_name = name;
    c.level = level;
    c.tol = tol;
    c.sampling.seed = 2024;
    c.sampling.slice = slice;
    c.sampling.points = 50;
    return c;
}

Outcome c1_quasidet()
{
    std::size_t compared = 0, undefined = 0, mismatched = 0;
    for (std::size_t n = 2; n <= 6; ++n)
        for (std::uint64_t t = 0; t < 100; ++t) {
            Rng rng = Rng::stream(1, "acceptance/quasidet/" + std::to_string(n), t);
            const auto m = random_rational_matrix(rng, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    Rational a, b;
                    try {
                        a = quasidet(m, i, j);
                        b = quasidet_det_ratio(m, i, j);
                    } catch (const Error&) {
                        ++undefined;
                        continue;
                    }
                    ++compared;
                    if (a != b) ++mismatched;
                }
        }
    return {mismatched == 0 && compared > 0,
            fmt("%zu (matrix, i, j) compared exactly, %zu mismatches, %zu undefined", compared, mismatched, undefined)};
}

Outcome c2_identities()
{
    const CampaignReport r = run_identity_campaign(CampaignConfig{});
    std::size_t trials = 0, skipped = 0;
    double worst = 0.0;
    for (const auto& f : r.families) {
        if (f.family.rfind("det_ratio", 0) == 0) continue;
        trials += f.trials;
        skipped += f.skipped;
        worst = std::max(worst, f.max_residual);
    }
    const double rate = trials ? double(skipped) / double(trials) : 1.0;
    return {worst == 0.0 && rate < 0.2 && trials > 0,
            fmt("QuasiJacobi + homological over Q and 2x2 Q-matrices: %zu trials, max residual %g, "
                "inconclusive %.1f%% (< 20%%)",
                trials, worst, 100.0 * rate)};
}

Outcome c3_seeds()
{
    Worst w;
    std::size_t seeds = 0;
    for (const auto& [name, seed] : bundled_seeds()) {
        ++seeds;
        for (Slice s : {Slice::real, Slice::complex})
            w.take(verify_suite(solution(seed, name, 0, 1e-9, s)).body["checks"], "/yang");
    }
    return {w.pass && seeds == 5 && w.points >= 50,
            fmt("%zu seeds x {real, complex}, level 0, %zu points each: max Yang residual %.3g (< 1e-9)", seeds,
                w.points, w.value)};
}

Outcome c4_solutions()
{
    Worst yang, asd;
    for (const auto& [name, seed] : bundled_seeds())
        for (Slice s : {Slice::real, Slice::complex}) {
            const json checks = verify_suite(solution(seed, name, 3, 1e-8, s)).body["checks"];
            for (int l = 1; l <= 3; ++l) {
                const std::string p = "level" + std::to_string(l) + "/";
                yang.take(checks, p + "yang");
                asd.take(checks, p + "f_");
            }
        }
    return {yang.pass && asd.pass && yang.points >= 50,
            fmt("5 seeds, l = 1..3, real and complex slices, >= %zu points: Yang %.3g, ASDYM %.3g (< 1e-8)",
                yang.points, yang.value, asd.value)};
}

Outcome c5_backlund()
{
    Worst inv, alpha;
    bool calibrated = true;
    for (const auto& [name, seed] : bundled_seeds()) {
        const auto cfg = solution(seed, name, 3, 1e-8, Slice::real);
        const json checks = backlund_suite(cfg).body["checks"];
        inv.take(checks, "gamma0_involution");
        alpha.take(checks, "alpha/");
        calibrated = calibrated && calibrate_backlund_signs(build_chain(seed), sample_point(5, Slice::real, 0)) ==
                                       kBacklundSigns;
    }
    return {inv.pass && alpha.pass && calibrated,
            fmt("gamma0 involution %.3g (< 1e-10); alpha relations 0->1, 1->2, 2->3: %.3g (< 1e-8); "
                "0->1 recalibration reproduces the frozen signs: %s",
                inv.value, alpha.value, calibrated ? "yes" : "no")};
}

Outcome c6_gauge()
{
    const DeltaChain chain = build_chain(bundled_seeds().front().second);
    const JetContext ctx = JetContext::spacetime(2);
    double inv = 0.0, cov = 0.0;
    std::size_t done = 0;
    for (std::uint64_t k = 0; done < 100 && k < 1000; ++k) {
        Rng rng = Rng::stream(6, "acceptance/gauge", k);
        const auto x = sample_point(6, Slice::real, k);
        SolutionQuadruple quad;
        try {
            quad = aw_quadruple(chain, static_cast<int>(k % 4), x, 2);
        } catch (const SingularPoint&) {
            continue;
        }
        const JetMatrix g = random_gauge(rng, ctx);
        const auto d = gauge_decomposition(quad);
        const auto dg = gauge_transform(d, g);
        const JetMatrix j = mul(ring_inverse(d.ht), d.h);
        const JetMatrix jg = mul(ring_inverse(dg.ht), dg.h);
        inv = std::max(inv, relative(max_abs_diff(j, jg), max_abs(j)));
        const auto moved = gauge_transform(gauge_fields(d), g);
        const auto direct = gauge_fields(dg);
        for (std::size_t mu = 0; mu < 4; ++mu)
            cov = std::max(cov, relative(max_abs_diff(moved.a[mu], direct.a[mu]), max_abs(direct.a[mu])));
        ++done;
    }
    return {done == 100 && inv < 1e-11 && cov < 1e-10,
            fmt("%zu random jet gauge transformations: J invariance %.3g (< 1e-11), A covariance %.3g (< 1e-10)",
                done, inv, cov)};
}

Outcome c7_bordered()
{
    Worst w;
    bool calibrated = true;
    for (const auto& [name, seed] : bundled_seeds()) {
        w.take(backlund_suite(solution(seed, name, 3, 1e-8, Slice::real)).body["checks"], "bordered_yang");
        calibrated = calibrated && calibrate_bordered_transform(build_chain(seed), sample_point(5, Slice::real, 0)) ==
                                       kBorderedTransform;
    }
    return {w.pass && calibrated,
            fmt("l = 1..3, 5 seeds: max |J_qd - P J Q| %.3g (< 1e-10); l = 1 recalibration reproduces (P, Q): %s",
                w.value, calibrated ? "yes" : "no")};
}

json reduce_body()
{
    static const json body = reduce_suite(ReduceConfig{}).body;
    return body;
}

Outcome c8_reduction_identities()
{
    const json f = reduce_body()["families"];
    Worst mapped, other;
    for (const char* fam : {"kdv", "mkdv", "nls", "boussinesq", "toda"}) {
        mapped.take(f[fam]["checks"], "identity_mapped");
        other.take(f[fam]["checks"], "identity_other");
    }
    return {mapped.pass && other.pass && mapped.points == 100,
            fmt("KdV, mKdV, NLS (eps = +-1), Boussinesq, Toda N = 2, 3 x eps = 0, 1 over %zu jets: mapped %.3g "
                "(< 1e-11), other entries %.3g (< 1e-12)",
                mapped.points, mapped.value, other.value)};
}

Outcome c9_reduction_solutions()
{
    const json f = reduce_body()["families"];
    Worst scalar, matrix;
    for (const char* fam : {"kdv", "mkdv", "nls", "boussinesq"}) {
        scalar.take(f[fam]["checks"], "solution_scalar");
        matrix.take(f[fam]["checks"], "solution_matrix");
    }
    return {scalar.pass && matrix.pass && scalar.points == 30,
            fmt("KdV soliton, mKdV kink, NLS bright soliton, Boussinesq complex wave at %zu samples: scalar %.3g "
                "(< 1e-9), reduced ASDYM %.3g (< 1e-8)",
                scalar.points, scalar.value, matrix.value)};
}

Outcome c10_miura()
{
    const json c = reduce_body()["families"]["miura"]["checks"];
    Worst kink, gauge, phi;
    kink.take(c, "/solution_scalar");
    gauge.take(c, "gauge");
    phi.take(c, "gauge_phi_exact");
    std::size_t ks = 0;
    for (const auto& [name, _] : c.items())
        if (name.find("/solution_scalar") != std::string::npos) ++ks;
    return {kink.pass && gauge.pass && ks == 3 && gauge.points == 100,
            fmt("kdv(miura(v)) on %zu kinks: %.3g (< 1e-9); gauge map on %zu random v: %.3g (< 1e-11), Phi exact: %s",
                ks, kink.value, gauge.points, gauge.value, phi.pass ? "yes" : "no")};
}

Outcome c11_jets()
{
    double leibniz = 0.0, inv = 0.0, fd = 0.0;
    std::size_t jets = 0;
    for (int nv = 1; nv <= 4; ++nv)
        for (int ord = 0; ord <= 4; ++ord)
            for (std::uint64_t t = 0; t < 10; ++t, ++jets) {
                Rng rng = Rng::stream(11, "acceptance/jet/" + std::to_string(nv) + "/" + std::to_string(ord), t);
                const JetContext ctx{nv, ord, {}};
                const Jet a = random_jet(rng, ctx), b = random_jet(rng, ctx);
                const Jet ia = inverse(a);
                if (ord >= 1)
                    for (int i = 0; i < nv; ++i) {
                        const Jet lhs = partial(a * b, i);
                        const Jet rhs = partial(a, i) * truncate(b, ord - 1) + truncate(a, ord - 1) * partial(b, i);
                        leibniz = std::max(leibniz, relative(max_abs_diff(lhs, rhs), lhs.max_abs()));
                        // d(1/a) = -a^-2 da
                        const Jet d = partial(ia, i);
                        const Jet e = -(truncate(ia, ord - 1) * truncate(ia, ord - 1) * partial(a, i));
                        inv = std::max(inv, relative(max_abs_diff(d, e), d.max_abs()));
                    }
                inv = std::max(inv, relative(max_abs_diff(a * ia, Jet::constant(1.0, ctx)), 1.0));

                // finite differences of a random expression, derivatives up to degree min(ord, 2)
                const JetContext fctx{nv, std::min(ord, 2), {}};
                const auto expr = random_expr(rng, nv, 3);
                std::vector<cplx> x0(static_cast<std::size_t>(nv));
                for (auto& v : x0) v = random_cplx(rng, 0.5);
                std::vector<Jet> vars;
                for (int i = 0; i < nv; ++i) vars.push_back(Jet::variable(i, x0[static_cast<std::size_t>(i)], fctx));
                const Jet j = expr->eval(vars, fctx);
                const auto f = [&](const std::vector<cplx>& x) { return expr->eval(x); };
                for (std::size_t k = 0; k < j.size(); ++k) {
                    const auto& m = j.multi_index(k);
                    const cplx want = fd_derivative(f, x0, m, nv);
                    fd = std::max(fd, std::abs(j.derivative(m) - want) / std::max(1.0, std::abs(want)));
                }
            }
    return {leibniz < 1e-12 && inv < 1e-10 && fd < 1e-6,
            fmt("%zu jets over nvars 1..4 x order 0..4: Leibniz %.3g (< 1e-12), inverse-derivative %.3g (< 1e-10), "
                "finite differences %.3g (< 1e-6)",
                jets, leibniz, inv, fd)};
}

std::string run_cli(const std::string& args)
{
    namespace fs = std::filesystem;
    const fs::path out = fs::temp_directory_path() / ("asdym_acceptance_" + std::to_string(::getpid()) + ".json");
    const std::string cmd = std::string(ASDYM_CLI) + " " + args + " --out " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    fs::remove(out);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return "exit " + std::to_string(WEXITSTATUS(status));
    return ss.str();
}

Outcome c12_determinism()
{
    const std::string args = "report --level 3 --rng-seed 77 --slice complex";
    const std::string a = run_cli(args + " --threads 1"), b = run_cli(args + " --threads 0");
    try {
        const json ja = json::parse(a), jb = json::parse(b);
        const bool same = strip_timestamp(ja).dump() == strip_timestamp(jb).dump();
        const bool stamped = ja.contains("timestamp") && ja["schema_version"] == "1";
        return {same && stamped, fmt("two full report runs (1 thread vs all cores): %s modulo timestamp, %zu bytes",
                                     same ? "identical" : "different", a.size())};
    } catch (const std::exception&) {
        return {false, "report run failed: " + a.substr(0, 40) + " / " + b.substr(0, 40)};
    }
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"quasideterminant vs determinant ratio", c1_quasidet},
        {"identity suite", c2_identities},
        {"seed solutions", c3_seeds},
        {"Atiyah-Ward solutions", c4_solutions},
        {"Backlund structure", c5_backlund},
        {"gauge properties", c6_gauge},
        {"bordered Yang matrix", c7_bordered},
        {"reductions, identity level", c8_reduction_identities},
        {"reductions, solution level", c9_reduction_solutions},
        {"Miura", c10_miura},
        {"jet kernel", c11_jets},
        {"determinism", c12_determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << k + 1 << ". " << criteria[k].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria pass"
              << std::endl;
    return failed ? 1 : 0;
}
