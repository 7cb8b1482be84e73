// asdym: identity fuzzing, Atiyah-Ward solution generation and verification,
// Backlund checks and reduction suites, with JSON reports.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "asdym/parallel.hpp"
#include "asdym/report.hpp"
#include "asdym/seed_io.hpp"

using namespace asdym;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string command;
    std::string seed_file = ASDYM_DEFAULT_SEED;
    int level = 2;
    int points = 50;
    int order = 2;
    double tol = 1e-8;
    std::uint64_t rng_seed = 1;
    std::string slice = "real";
    std::string out;
    std::string csv;
    std::string families;
    std::string profile;
    int retry_factor = 10;
    double half_width = 1.0;
    bool forced_singular = false;
    double max_skip_rate = 0.2;

    json to_json() const
    {
        return {{"seed_file", seed_file}, {"level", level},           {"points", points},
                {"order", order},         {"tol", tol},               {"rng_seed", rng_seed},
                {"slice", slice},         {"families", families},     {"profile", profile},
                {"retry_factor", retry_factor}, {"half_width", half_width}, {"forced_singular", forced_singular},
                {"max_skip_rate", max_skip_rate}};
    }

    void validate() const
    {
        if (!(tol > 0.0)) throw ConfigError("tol: must be > 0");
        if (level < 0) throw ConfigError("level: must be >= 0");
        if (points < 1) throw ConfigError("points: must be >= 1");
        if (order < 2 || order > 4) throw ConfigError("order: must be in 2..4");
        if (retry_factor < 1) throw ConfigError("retry_factor: must be >= 1");
        if (!(half_width > 0.0)) throw ConfigError("half_width: must be > 0");
        if (!(max_skip_rate >= 0.0 && max_skip_rate <= 1.0)) throw ConfigError("max_skip_rate: must be in [0, 1]");
        parse_slice(slice);
        if (!families.empty()) parse_families(families);
    }
};

template <class T>
T field(const json& j, const std::string& key)
{
    const json& v = j.at(key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("config." + key + ": expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("config." + key + ": expected a string");
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("config." + key + ": expected an integer");
    } else {
        if (!v.is_number()) throw ConfigError("config." + key + ": expected a number");
    }
    return v.get<T>();
}

json read_json(const std::string& path, const std::string& what)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(what + ": cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(what + ": '" + path + "' is not valid JSON: " + e.what());
    }
}

// Paths in a config file are relative to the file.
std::string resolve(const std::string& base, const std::string& p)
{
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base).parent_path() / p).lexically_normal().string();
}

// Applies keys from the config file that were not given as flags.
void apply_config_file(RunConfig& cfg, const std::string& path, const std::set<std::string>& from_flags)
{
    const json j = read_json(path, "config");
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    auto take = [&](const std::string& key) { return j.contains(key) && !from_flags.count(key); };
    for (const auto& [key, _] : j.items()) {
        static const std::set<std::string> known{"seed_file", "level",   "points",       "order",
                                                 "tol",       "rng_seed", "slice",       "out",
                                                 "csv",       "families", "profile",     "retry_factor",
                                                 "half_width", "forced_singular", "max_skip_rate"};
        if (!known.count(key)) throw ConfigError("config." + key + ": unknown key");
    }
    if (take("seed_file")) cfg.seed_file = resolve(path, field<std::string>(j, "seed_file"));
    if (take("level")) cfg.level = field<int>(j, "level");
    if (take("points")) cfg.points = field<int>(j, "points");
    if (take("order")) cfg.order = field<int>(j, "order");
    if (take("tol")) cfg.tol = field<double>(j, "tol");
    if (take("rng_seed")) cfg.rng_seed = field<std::uint64_t>(j, "rng_seed");
    if (take("slice")) cfg.slice = field<std::string>(j, "slice");
    if (take("out")) cfg.out = resolve(path, field<std::string>(j, "out"));
    if (take("csv")) cfg.csv = resolve(path, field<std::string>(j, "csv"));
    if (take("families")) cfg.families = field<std::string>(j, "families");
    if (take("profile")) cfg.profile = resolve(path, field<std::string>(j, "profile"));
    if (take("retry_factor")) cfg.retry_factor = field<int>(j, "retry_factor");
    if (take("half_width")) cfg.half_width = field<double>(j, "half_width");
    if (take("forced_singular")) cfg.forced_singular = field<bool>(j, "forced_singular");
    if (take("max_skip_rate")) cfg.max_skip_rate = field<double>(j, "max_skip_rate");
}

SolutionConfig solution_config(const RunConfig& cfg)
{
    SolutionConfig s;
    s.seed = load_seed(cfg.seed_file);
    s.seed_name = fs::path(cfg.seed_file).stem().string();
    s.level = cfg.level;
    s.order = cfg.order;
    s.tol = cfg.tol;
    s.sampling.seed = cfg.rng_seed;
    s.sampling.slice = parse_slice(cfg.slice);
    s.sampling.points = static_cast<std::size_t>(cfg.points);
    s.sampling.retry_factor = static_cast<std::size_t>(cfg.retry_factor);
    s.sampling.half_width = cfg.half_width;
    return s;
}

CampaignConfig campaign_config(const RunConfig& cfg)
{
    CampaignConfig c;
    c.seed = cfg.rng_seed;
    c.forced_singular = cfg.forced_singular;
    c.max_skip_rate = cfg.max_skip_rate;
    return c;
}

ReduceConfig reduce_config(const RunConfig& cfg)
{
    ReduceConfig r;
    r.seed = cfg.rng_seed;
    if (!cfg.families.empty()) r.families = parse_families(cfg.families);
    if (!cfg.profile.empty()) r.profile = parse_profile(read_json(cfg.profile, "profile"));
    return r;
}

class CsvSink {
public:
    explicit CsvSink(const std::string& path)
    {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw ConfigError("csv: cannot write '" + path + "'");
    }
    std::ostream* get() { return file_.is_open() ? &file_ : nullptr; }

private:
    std::ofstream file_;
};

void write_report(const json& report, const std::string& out)
{
    const std::string text = report.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw ConfigError("out: cannot write '" + out + "'");
    f << text;
}

int run(const RunConfig& cfg)
{
    json report = make_report(cfg.command, cfg.to_json());
    bool pass = true;
    auto section = [&](const std::string& name, const SuiteResult& r) {
        report[name] = r.body;
        pass = pass && r.pass;
        std::cerr << name << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
    };

    if (cfg.command == "generate") {
        // CSV goes to stdout unless --csv is given; the report then needs --out.
        CsvSink sink(cfg.csv);
        std::ostringstream buffer;
        const auto r = generate_suite(solution_config(cfg), sink.get() ? *sink.get() : buffer);
        if (!sink.get()) std::cout << buffer.str();
        report["generate"] = r.body;
        if (!cfg.out.empty() || sink.get()) write_report(report, cfg.out);
        return 0;
    }

    CsvSink sink(cfg.csv);
    if (cfg.command == "identities" || cfg.command == "report")
        section("identities", identities_suite(campaign_config(cfg)));
    if (cfg.command == "verify" || cfg.command == "report")
        section("verify", verify_suite(solution_config(cfg), cfg.command == "verify" ? sink.get() : nullptr));
    if (cfg.command == "backlund" || cfg.command == "report") {
        auto s = solution_config(cfg);
        if (cfg.command == "report") s.level = std::max(1, s.level);
        BacklundTolerances tol;
        tol.alpha = cfg.tol;
        section("backlund", backlund_suite(s, tol));
    }
    if (cfg.command == "reduce" || cfg.command == "report")
        section("reduce", reduce_suite(reduce_config(cfg), cfg.command == "reduce" ? sink.get() : nullptr));
    report["pass"] = pass;
    write_report(report, cfg.out);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Anti-self-dual Yang-Mills solutions: identities, Atiyah-Ward ansatz, Backlund "
                 "transformations and reductions"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string config_path;
    std::size_t threads = 0;
    app.add_option("--config", config_path, "JSON config file; flags override its keys");
    std::map<std::string, CLI::Option*> flags;
    flags["seed_file"] = app.add_option("--seed-file", cfg.seed_file, "Seed JSON file");
    flags["level"] = app.add_option("--level", cfg.level, "Atiyah-Ward level l");
    flags["points"] = app.add_option("--points", cfg.points, "Non-singular sample points");
    flags["order"] = app.add_option("--order", cfg.order, "Jet order (2..4)");
    flags["tol"] = app.add_option("--tol", cfg.tol, "Relative residual tolerance");
    flags["rng_seed"] = app.add_option("--rng-seed", cfg.rng_seed, "64-bit RNG seed");
    flags["slice"] = app.add_option("--slice", cfg.slice, "real | euclidean | complex");
    flags["out"] = app.add_option("--out", cfg.out, "Report path (default stdout)");
    flags["csv"] = app.add_option("--csv", cfg.csv, "CSV sample export path");
    flags["families"] = app.add_option("--families", cfg.families, "Reduction families, comma separated");
    flags["profile"] = app.add_option("--profile", cfg.profile, "Profile JSON for soliton sampling");
    flags["retry_factor"] = app.add_option("--retry-factor", cfg.retry_factor, "Candidate budget per requested point");
    flags["half_width"] = app.add_option("--half-width", cfg.half_width, "Sampling box half width");
    flags["forced_singular"] = app.add_flag("--forced-singular", cfg.forced_singular, "Identity-matrix trial corpus");
    flags["max_skip_rate"] = app.add_option("--max-skip-rate", cfg.max_skip_rate, "Inconclusive-trial budget");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");

    for (const char* name : {"identities", "generate", "verify", "backlund", "reduce", "report"}) {
        static const std::map<std::string, std::string> help{
            {"identities", "Quasideterminant identity campaigns over exact rings"},
            {"generate", "Sample the Yang matrix of an Atiyah-Ward solution to CSV"},
            {"verify", "Yang and ASDYM residuals of an Atiyah-Ward solution"},
            {"backlund", "gamma_0 / beta structure across levels 0..l"},
            {"reduce", "Reductions to KdV, mKdV, NLS, Boussinesq, Toda and the Miura map"},
            {"report", "All suites in one report"}};
        app.add_subcommand(name, help.at(name))->callback([&cfg, name] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        worker_count() = threads;
        std::set<std::string> from_flags;
        for (const auto& [key, opt] : flags)
            if (opt->count()) from_flags.insert(key);
        if (!config_path.empty()) apply_config_file(cfg, config_path, from_flags);
        cfg.validate();
        return run(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidSeed& e) {
        std::cerr << "invalid seed: " << e.what() << "\n";
        return 2;
    } catch (const ZeroRatio& e) {
        std::cerr << "zero ratio: " << e.what() << "\n";
        return 2;
    } catch (const SingularPoint& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
