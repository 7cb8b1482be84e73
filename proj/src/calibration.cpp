#include "asdym/calibration.hpp"

#include <cmath>
#include <limits>

namespace asdym {

std::array<int, 6> calibrate_backlund_signs(const DeltaChain& chain, const SpacetimePoint& x)
{
    const auto r = backlund_alpha_check(chain, 0, x, {1, 1, 1, 1, 1, 1});
    std::array<int, 6> signs{};
    for (std::size_t k = 0; k < 6; ++k) {
        const int s = r.ratio[k].real() >= 0.0 ? 1 : -1;
        if (std::abs(r.ratio[k] - cplx(s)) > 1e-6)
            throw Error(std::string("sign calibration inconclusive for relation ") + kBacklundRelations[k]);
        signs[k] = s;
    }
    return signs;
}

std::vector<EquivalenceTransform> equivalence_candidates()
{
    std::vector<std::array<int, 4>> mats;
    for (int perm = 0; perm < 2; ++perm)
        for (int s1 : {1, -1})
            for (int s2 : {1, -1})
                mats.push_back(perm == 0 ? std::array<int, 4>{s1, 0, 0, s2} : std::array<int, 4>{0, s1, s2, 0});
    std::vector<EquivalenceTransform> out;
    for (const auto& p : mats)
        for (const auto& q : mats) out.push_back({p, q});
    return out;
}

EquivalenceTransform calibrate_bordered_transform(const DeltaChain& chain, const SpacetimePoint& x)
{
    const JetMatrix qd = yang_matrix_qd(chain, 1, x, 2);
    const JetMatrix j = yang_matrix(aw_quadruple(chain, 1, x, 2));
    EquivalenceTransform best;
    double best_err = std::numeric_limits<double>::infinity();
    for (const auto& t : equivalence_candidates()) {
        const double err = max_abs_diff(qd, apply(t, j));
        if (err < best_err) {
            best_err = err;
            best = t;
        }
    }
    return best;
}

}  // namespace asdym
