#pragma once

// Line-based `key = value` configuration with `#` comments. Command-line
// flags arrive as overrides in the same key namespace and win over the file.
//
// Required: scenario, N, tau, T. Domain, dimension and physical parameters
// default to the scenario preset.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kgs/errors.hpp"
#include "kgs/run_config.hpp"
#include "kgs/scenarios.hpp"

namespace kgs {

inline const std::set<std::string, std::less<>>& config_keys()
{
    static const std::set<std::string, std::less<>> keys = {
        "dimension", "a", "b", "N", "tau", "T", "kappa1", "kappa2", "mu", "gamma",
        "scenario", "strategy", "seed", "executor", "workers", "record_stride",
        "snapshot_stride", "output_dir", "amplitude", "levels", "reference", "orders",
        "bench_n", "bench_workers", "repetitions",
    };
    return keys;
}

using ConfigValues = std::map<std::string, std::string, std::less<>>;

struct ParsedConfig {
    RunConfig config;
    /// Keys given explicitly by the file or by flags.
    std::set<std::string, std::less<>> given;
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_double(std::string_view key, const std::string& text)
{
    double x = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(x))
        throw ConfigError("key '" + std::string(key) + "': not a finite number: '" + text + "'");
    return x;
}

inline std::uint64_t parse_uint(std::string_view key, const std::string& text)
{
    std::uint64_t x = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || end != text.data() + text.size())
        throw ConfigError("key '" + std::string(key) + "': not a non-negative integer: '" + text + "'");
    return x;
}

inline bool parse_bool(std::string_view key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "no" || text == "off")
        return false;
    throw ConfigError("key '" + std::string(key) + "': expected true or false, got '" + text + "'");
}

inline std::vector<std::size_t> parse_uint_list(std::string_view key, const std::string& text)
{
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_uint(key, trim(item)));
    if (out.empty())
        throw ConfigError("key '" + std::string(key) + "': empty list");
    return out;
}

inline std::optional<Strategy> parse_strategy_alias(std::string_view name)
{
    if (name == "lexicographic-forward")
        return Strategy::LexicographicForward;
    if (name == "lexicographic-reverse")
        return Strategy::LexicographicReverse;
    if (name == "seeded-random")
        return Strategy::SeededRandom;
    return parse_strategy(name);
}

inline void require(bool ok, std::string_view key, const std::string& what)
{
    if (!ok)
        throw ConfigError("key '" + std::string(key) + "': " + what);
}

} // namespace detail

/// Parses `key = value` lines. Unknown and repeated keys are rejected.
inline ConfigValues parse_config_text(std::string_view text, std::string_view source = "config")
{
    ConfigValues values;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        const std::string where = std::string(source) + ":" + std::to_string(line_no);
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (!config_keys().contains(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError(where + ": key '" + key + "' has no value");
        if (!values.emplace(key, value).second)
            throw ConfigError(where + ": key '" + key + "' given twice");
    }
    return values;
}

inline ConfigValues read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

/// Builds a validated RunConfig. `overrides` take precedence over `file`;
/// `env_workers` (normally $DPAVF_WORKERS) is the workers default.
inline ParsedConfig build_config(const ConfigValues& file, const ConfigValues& overrides,
                                 std::optional<std::string> env_workers = std::nullopt)
{
    ConfigValues v = file;
    for (const auto& [key, value] : overrides) {
        if (!config_keys().contains(key))
            throw ConfigError("unknown key '" + key + "'");
        v[key] = value;
    }

    ParsedConfig out;
    RunConfig& c = out.config;
    for (const auto& kv : v)
        out.given.insert(kv.first);

    for (const char* key : {"scenario", "N", "tau", "T"})
        if (!v.contains(key))
            throw ConfigError("missing required key '" + std::string(key) + "'");

    c.scenario = v.at("scenario");
    const auto preset = find_scenario(c.scenario);
    detail::require(preset.has_value(), "scenario", "unknown scenario '" + c.scenario + "'");
    c.dimension = preset->dimension != 0 ? preset->dimension : 2;
    c.a = preset->a;
    c.b = preset->b;
    c.params = preset->params;

    auto get = [&](std::string_view key) -> const std::string* {
        const auto it = v.find(key);
        return it == v.end() ? nullptr : &it->second;
    };

    if (auto s = get("dimension"))
        c.dimension = static_cast<int>(detail::parse_uint("dimension", *s));
    if (auto s = get("a"))
        c.a = detail::parse_double("a", *s);
    if (auto s = get("b"))
        c.b = detail::parse_double("b", *s);
    c.n = detail::parse_uint("N", v.at("N"));
    c.tau = detail::parse_double("tau", v.at("tau"));
    c.t_final = detail::parse_double("T", v.at("T"));
    if (auto s = get("kappa1"))
        c.params.kappa1 = detail::parse_double("kappa1", *s);
    if (auto s = get("kappa2"))
        c.params.kappa2 = detail::parse_double("kappa2", *s);
    if (auto s = get("mu"))
        c.params.mu = detail::parse_double("mu", *s);
    if (auto s = get("gamma"))
        c.params.gamma = detail::parse_double("gamma", *s);
    if (auto s = get("strategy")) {
        const auto st = detail::parse_strategy_alias(*s);
        detail::require(st.has_value(), "strategy", "unknown strategy '" + *s + "'");
        c.strategy = *st;
    }
    if (auto s = get("seed"))
        c.seed = detail::parse_uint("seed", *s);
    if (auto s = get("executor")) {
        const auto ex = parse_executor(*s);
        detail::require(ex.has_value(), "executor", "expected serial or phased, got '" + *s + "'");
        c.executor = *ex;
    }
    if (auto s = get("workers"))
        c.workers = detail::parse_uint("workers", *s);
    else if (env_workers && !env_workers->empty())
        c.workers = detail::parse_uint("workers (from DPAVF_WORKERS)", *env_workers);
    if (auto s = get("record_stride"))
        c.record_stride = detail::parse_uint("record_stride", *s);
    if (auto s = get("snapshot_stride"))
        c.snapshot_stride = detail::parse_uint("snapshot_stride", *s);
    if (auto s = get("output_dir"))
        c.output_dir = *s;
    if (auto s = get("amplitude"))
        c.amplitude = detail::parse_double("amplitude", *s);
    if (auto s = get("levels"))
        c.levels = detail::parse_uint("levels", *s);
    if (auto s = get("reference"))
        c.reference = detail::parse_bool("reference", *s);
    if (auto s = get("orders"))
        c.orders = detail::parse_uint("orders", *s);
    if (auto s = get("bench_n"))
        c.bench_n = detail::parse_uint_list("bench_n", *s);
    if (auto s = get("bench_workers"))
        c.bench_workers = detail::parse_uint_list("bench_workers", *s);
    if (auto s = get("repetitions"))
        c.repetitions = detail::parse_uint("repetitions", *s);

    using detail::require;
    require(c.dimension >= 1 && c.dimension <= 3, "dimension", "must be 1, 2 or 3");
    require(preset->dimension == 0 || preset->dimension == c.dimension, "dimension",
            "scenario '" + c.scenario + "' is " + std::to_string(preset->dimension) + "D");
    require(c.b > c.a, "b", "domain needs a < b");
    require(c.n >= 3, "N", "need at least 3 points per axis");
    require(c.tau > 0.0, "tau", "must be positive");
    require(c.t_final > 0.0, "T", "must be positive");
    require(c.workers >= 1, "workers", "must be at least 1");
    require(c.record_stride >= 1, "record_stride", "must be at least 1");
    require(c.amplitude >= 0.0, "amplitude", "must be non-negative");
    require(c.levels >= 3, "levels", "must be at least 3");
    require(c.repetitions >= 3, "repetitions", "must be at least 3");
    if (c.strategy == Strategy::Checkerboard)
        require(c.n % 2 == 0, "N",
                "checkerboard ordering needs even N (periodic red-black coloring is inconsistent for odd N), got "
                    + std::to_string(c.n));
    if (c.strategy == Strategy::BlockSplit)
        require(c.n >= block_split_min_n(c.workers), "workers",
                "block-split with " + std::to_string(c.workers) + " workers needs N >= "
                    + std::to_string(block_split_min_n(c.workers)));
    for (std::size_t w : c.bench_workers)
        require(w >= 1, "bench_workers", "entries must be at least 1");
    for (std::size_t n : c.bench_n) {
        require(n >= 3, "bench_n", "entries must be at least 3");
        if (c.strategy == Strategy::Checkerboard)
            require(n % 2 == 0, "bench_n", "checkerboard ordering needs even N");
    }
    return out;
}

inline ParsedConfig parse_config(const std::optional<std::filesystem::path>& path, const ConfigValues& overrides)
{
    const ConfigValues file = path ? read_config_file(*path) : ConfigValues{};
    const char* env = std::getenv("DPAVF_WORKERS");
    return build_config(file, overrides, env ? std::optional<std::string>(env) : std::nullopt);
}

/// Keys set explicitly that `command` does not use.
inline std::vector<std::string> irrelevant_keys(std::string_view command,
                                                const std::set<std::string, std::less<>>& given)
{
    std::map<std::string, std::set<std::string>, std::less<>> owners = {
        {"levels", {"convergence"}},     {"reference", {"convergence"}},  {"orders", {"energy"}},
        {"bench_n", {"bench"}},          {"bench_workers", {"bench"}},    {"repetitions", {"bench"}},
        {"snapshot_stride", {"run"}},    {"record_stride", {"run", "energy"}},
    };
    std::vector<std::string> out;
    for (const auto& key : given) {
        const auto it = owners.find(key);
        if (it != owners.end() && !it->second.contains(std::string(command)))
            out.push_back(key);
    }
    return out;
}

} // namespace kgs
