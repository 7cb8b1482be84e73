#include "asdym/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "asdym/parallel.hpp"

namespace asdym {

void CheckStats::add(double r)
{
    ++points;
    // NaN must fail the check rather than vanish in max()
    if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
    max_rel_residual = std::max(max_rel_residual, r);
    sum_rel_residual += r;
}

void CheckStats::merge(const CheckStats& o)
{
    points += o.points;
    skipped_singular += o.skipped_singular;
    max_rel_residual = std::max(max_rel_residual, o.max_rel_residual);
    sum_rel_residual += o.sum_rel_residual;
}

SampleRun sample_nonsingular(const SamplingConfig& cfg, const PointEval& f)
{
    SampleRun run;
    const std::size_t budget = std::max<std::size_t>(1, cfg.retry_factor) * cfg.points;
    std::size_t next = 0;
    while (run.points.size() < cfg.points) {
        if (next >= budget)
            throw SingularPoint("retry budget exhausted: " + std::to_string(run.points.size()) + " of " +
                                std::to_string(cfg.points) + " non-singular points after " + std::to_string(budget) +
                                " candidates");
        const std::size_t batch = std::min(budget - next, cfg.points - run.points.size() + 4);
        std::vector<SpacetimePoint> pts(batch);
        std::vector<std::optional<std::vector<double>>> out(batch);
        for (std::size_t k = 0; k < batch; ++k) pts[k] = sample_point(cfg.seed, cfg.slice, next + k, cfg.half_width);
        parallel_for(batch, [&](std::size_t k) {
            try {
                out[k] = f(pts[k]);
            } catch (const SingularPoint&) {
            } catch (const ExpOverflow&) {
            }
        });
        for (std::size_t k = 0; k < batch && run.points.size() < cfg.points; ++k) {
            if (out[k]) {
                run.points.push_back(pts[k]);
                run.values.push_back(std::move(*out[k]));
            } else {
                ++run.skipped_singular;
            }
        }
        next += batch;
    }
    return run;
}

std::vector<CheckStats> summarize(const SampleRun& run, const std::vector<std::string>& names, double tolerance)
{
    std::vector<CheckStats> out;
    for (std::size_t c = 0; c < names.size(); ++c) {
        CheckStats s{names[c], tolerance};
        s.skipped_singular = run.skipped_singular;
        for (const auto& v : run.values) s.add(v.at(c));
        out.push_back(s);
    }
    return out;
}

}  // namespace asdym
