#pragma once

// Check suites shared by the command-line tool and the acceptance run, and
// the JSON report envelope. Every suite is a pure function of its config: all
// randomness comes from the configured seed through named streams.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "asdym/identities.hpp"
#include "asdym/reductions.hpp"
#include "asdym/sampling.hpp"

namespace asdym {

inline constexpr const char* kSchemaVersion = "1";

/// { schema_version, command, timestamp, config }
nlohmann::json make_report(const std::string& command, const nlohmann::json& config);
/// Copy without the timestamp field, for comparing runs.
nlohmann::json strip_timestamp(nlohmann::json report);
std::string utc_timestamp();
std::string hex64(std::uint64_t h);

nlohmann::json to_json(const CheckStats& s);

struct SuiteResult {
    nlohmann::json body = nlohmann::json::object();
    bool pass = true;
};

// ---- quasideterminant identities ---------------------------------------------

SuiteResult identities_suite(const CampaignConfig& cfg);

// ---- Atiyah-Ward solutions -----------------------------------------------------

struct SolutionConfig {
    SeedSpec seed;
    std::string seed_name = "seed";
    int level = 2;
    /// Jet order of the quadruple; Yang and curvature residuals need 2.
    int order = 2;
    double tol = 1e-8;
    SamplingConfig sampling;
};

/// Throws ConfigError("level exceeds chain ...") when cfg.level is beyond the seed's chain.
DeltaChain solution_chain(const SolutionConfig& cfg);

/// Yang and ASDYM residuals at levels 0..cfg.level. When csv is given, the
/// Yang matrix at cfg.level is written for every kept point.
SuiteResult verify_suite(const SolutionConfig& cfg, std::ostream* csv = nullptr);

/// Yang-matrix samples only (the generate command).
SuiteResult generate_suite(const SolutionConfig& cfg, std::ostream& csv);

struct BacklundTolerances {
    double involution = 1e-10;
    double alpha = 1e-8;
    double quasi_jacobi = 1e-10;
    double bordered = 1e-10;
};

/// gamma_0 involution and the alpha = gamma_0 o beta relations for the
/// transitions 0 -> 1, ..., (level-1) -> level with the frozen sign vector,
/// the QuasiJacobi form of gamma_0, and the bordered Yang matrix.
SuiteResult backlund_suite(const SolutionConfig& cfg, const BacklundTolerances& tol = {});

// ---- reductions ----------------------------------------------------------------

struct ReduceTolerances {
    double mapped = 1e-11;
    double other = 1e-12;
    double scalar = 1e-9;
    double matrix = 1e-8;
    double miura_gauge = 1e-11;
};

struct ReduceConfig {
    std::uint64_t seed = 1;
    std::vector<std::string> families;  // empty: all
    std::size_t trials = 100;
    std::size_t samples = 30;
    std::optional<ProfileSpec> profile;
    ReduceTolerances tol;
};

const std::vector<std::string>& reduction_families();
/// "kdv,miura" -> {"kdv", "miura"}; ConfigError on an unknown name.
std::vector<std::string> parse_families(const std::string& list);

/// Identity-level and solution-level checks per family. csv receives
/// (family, t, x, re, im) rows for the profile samples.
SuiteResult reduce_suite(const ReduceConfig& cfg, std::ostream* csv = nullptr);

}  // namespace asdym
