#include "asdym/seed_io.hpp"

#include <fstream>

namespace asdym {

using nlohmann::json;

cplx parse_complex(const json& j, const std::string& field)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(field + ": expected [re, im] or a number");
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

namespace {

const char* const kAlphaKeys[4] = {"az", "azt", "aw", "awt"};

ExpTerm parse_term(const json& j, const std::string& field)
{
    if (!j.is_object()) throw ConfigError(field + ": expected an object");
    ExpTerm t;
    t.c = j.contains("c") ? parse_complex(j["c"], field + ".c") : cplx(1.0);
    for (int k = 0; k < 4; ++k) {
        const std::string key = kAlphaKeys[k];
        if (!j.contains(key)) throw ConfigError(field + "." + key + ": missing");
        t.alpha[static_cast<std::size_t>(k)] = parse_complex(j[key], field + "." + key);
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "c" && key != "az" && key != "azt" && key != "aw" && key != "awt")
            throw ConfigError(field + "." + key + ": unknown key");
    }
    return t;
}

std::vector<ExpTerm> parse_terms(const json& j, const std::string& field)
{
    if (!j.is_array()) throw ConfigError(field + ": expected an array of terms");
    std::vector<ExpTerm> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_term(j[k], field + "[" + std::to_string(k) + "]"));
    return out;
}

int parse_level_key(const std::string& key, const std::string& field)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(key, &used);
        if (used == key.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(field + ": key '" + key + "' is not an integer level");
}

json terms_json(const std::vector<ExpTerm>& terms)
{
    json arr = json::array();
    for (const auto& t : terms) {
        json o;
        o["c"] = complex_json(t.c);
        for (int k = 0; k < 4; ++k) o[kAlphaKeys[k]] = complex_json(t.alpha[static_cast<std::size_t>(k)]);
        arr.push_back(o);
    }
    return arr;
}

}  // namespace

SeedSpec parse_seed(const json& j)
{
    if (!j.is_object()) throw ConfigError("seed: expected a JSON object");
    SeedSpec s;
    for (const auto& [key, _] : j.items()) {
        if (key != "terms" && key != "constants" && key != "level" && key != "allow_zero_ratio" && key != "chain" &&
            key != "name" && key != "description")
            throw ConfigError("seed." + key + ": unknown key");
    }
    if (j.contains("terms")) s.terms = parse_terms(j["terms"], "terms");
    if (j.contains("constants")) {
        const auto& c = j["constants"];
        if (!c.is_object()) throw ConfigError("constants: expected an object of level -> [re, im]");
        s.constants.clear();
        for (const auto& [key, v] : c.items())
            s.constants[parse_level_key(key, "constants")] = parse_complex(v, "constants." + key);
    }
    if (j.contains("level")) {
        if (!j["level"].is_number_integer() || j["level"].get<long>() < 0)
            throw ConfigError("level: expected a non-negative integer");
        s.level = j["level"].get<int>();
    }
    if (j.contains("allow_zero_ratio")) {
        if (!j["allow_zero_ratio"].is_boolean()) throw ConfigError("allow_zero_ratio: expected a boolean");
        s.allow_zero_ratio = j["allow_zero_ratio"].get<bool>();
    }
    if (j.contains("chain")) {
        const auto& c = j["chain"];
        if (!c.is_object()) throw ConfigError("chain: expected an object of level -> terms");
        for (const auto& [key, v] : c.items())
            s.chain[parse_level_key(key, "chain")] = parse_terms(v, "chain." + key);
    }
    if (s.terms.empty() && s.chain.empty() && !j.contains("constants"))
        throw ConfigError("terms: seed has neither terms, constants nor a chain");
    return s;
}

SeedSpec load_seed(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("seed-file: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("seed-file: '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_seed(j);
}

json to_json(const SeedSpec& seed)
{
    json j;
    j["terms"] = terms_json(seed.terms);
    json c = json::object();
    for (const auto& [k, v] : seed.constants) c[std::to_string(k)] = complex_json(v);
    j["constants"] = c;
    j["level"] = seed.level;
    j["allow_zero_ratio"] = seed.allow_zero_ratio;
    if (!seed.chain.empty()) {
        json ch = json::object();
        for (const auto& [k, v] : seed.chain) ch[std::to_string(k)] = terms_json(v);
        j["chain"] = ch;
    }
    return j;
}

}  // namespace asdym
