#pragma once

// Residual statistics and point sampling with singular-point resampling.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "asdym/atiyah_ward.hpp"

namespace asdym {

struct CheckStats {
    std::string name;
    double tolerance = 0.0;
    std::size_t points = 0;
    std::size_t skipped_singular = 0;
    double max_rel_residual = 0.0;
    double sum_rel_residual = 0.0;

    void add(double r);
    /// Associative merge of two runs of the same check.
    void merge(const CheckStats& o);
    double mean_rel_residual() const { return points ? sum_rel_residual / static_cast<double>(points) : 0.0; }
    bool pass() const { return points > 0 && max_rel_residual <= tolerance; }
};

struct SamplingConfig {
    std::uint64_t seed = 1;
    Slice slice = Slice::real;
    std::size_t points = 50;
    /// Candidate budget is retry_factor * points.
    std::size_t retry_factor = 10;
    double half_width = 1.0;
};

struct SampleRun {
    std::vector<SpacetimePoint> points;
    /// values[k] holds the residuals returned for points[k].
    std::vector<std::vector<double>> values;
    std::size_t skipped_singular = 0;
};

using PointEval = std::function<std::vector<double>(const SpacetimePoint&)>;

/// Evaluates f at candidate points 0, 1, 2, ... (in parallel batches) and keeps
/// the first cfg.points at which f does not report a singular point. The result
/// does not depend on the number of threads. Throws SingularPoint when the
/// retry budget runs out.
SampleRun sample_nonsingular(const SamplingConfig& cfg, const PointEval& f);

/// One CheckStats per residual column of a run.
std::vector<CheckStats> summarize(const SampleRun& run, const std::vector<std::string>& names, double tolerance);

}  // namespace asdym
