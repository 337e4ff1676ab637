#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

namespace codedlab::cli {

namespace {

enum class ValueType { U64, Double, U64List, DoubleList, Enum, String };

struct KeySpec {
    const char* name;
    ValueType type;
    const char* enum_values;  // pipe-separated, Enum only
    const char* default_value;  // nullptr: no default
};

// Keys shared by every command.
const KeySpec kCommonKeys[] = {
    {"seed", ValueType::U64, nullptr, "0"},
    {"out", ValueType::String, nullptr, ""},
    {"format", ValueType::Enum, "csv|jsonl", "csv"},
};

const KeySpec kGcKeys[] = {
    {"scheme", ValueType::Enum, "frc|brs|expander|bernoulli|bibd|weighted", nullptr},
    {"n", ValueType::U64, nullptr, nullptr},
    {"k", ValueType::U64, nullptr, nullptr},
    {"s", ValueType::U64, nullptr, nullptr},
    {"graph", ValueType::Enum, "petersen|complete|cycle|random-regular", "petersen"},
    {"degree", ValueType::U64, nullptr, "3"},
    {"design", ValueType::Enum, "fano|pairs", "fano"},
    {"v", ValueType::U64, nullptr, "5"},
    {"N", ValueType::U64, nullptr, "32"},
    {"d", ValueType::U64, nullptr, "2"},
    {"r", ValueType::U64, nullptr, nullptr},
    {"enumerate", ValueType::Enum, "auto|exhaustive|sampled", "auto"},
    {"samples", ValueType::U64, nullptr, "10000"},
    {"summary", ValueType::Enum, "none|max", "none"},
};

const KeySpec kCmmKeys[] = {
    {"scheme", ValueType::Enum,
     "matdot|polynomial|entangled|independent|setwise|weighted-cr|oversketch", nullptr},
    {"k", ValueType::U64, nullptr, "2"},
    {"n", ValueType::U64, nullptr, nullptr},
    {"r", ValueType::U64, nullptr, "2"},
    {"a", ValueType::U64, nullptr, "1"},
    {"b", ValueType::U64, nullptr, nullptr},
    {"L", ValueType::U64, nullptr, "8"},
    {"N", ValueType::U64, nullptr, "16"},
    {"M", ValueType::U64, nullptr, "8"},
    {"q", ValueType::U64, nullptr, "16"},
    {"block", ValueType::U64, nullptr, "4"},
    {"e", ValueType::U64, nullptr, "0"},
    {"trials", ValueType::U64, nullptr, "100"},
    {"sweep", ValueType::Enum, "subsets|seeds", nullptr},
};

const KeySpec kSketchKeys[] = {
    {"variant", ValueType::Enum, "gaussian|srht|countsketch|cr-sample|leverage-sample",
     nullptr},
    {"meter", ValueType::Enum, "amm|se", "amm"},
    {"norm", ValueType::Enum, "frobenius|spectral", "frobenius"},
    {"q", ValueType::U64, nullptr, nullptr},
    {"q_grid", ValueType::U64List, nullptr, nullptr},
    {"trials", ValueType::U64, nullptr, "100"},
    {"L", ValueType::U64, nullptr, "32"},
    {"N", ValueType::U64, nullptr, "16"},
    {"M", ValueType::U64, nullptr, "32"},
    {"d", ValueType::U64, nullptr, "8"},
};

const KeySpec kDescendKeys[] = {
    {"scheme", ValueType::Enum, "frc|brs|expander|bernoulli|bibd|iterative-sketching",
     nullptr},
    {"n", ValueType::U64, nullptr, nullptr},
    {"k", ValueType::U64, nullptr, nullptr},
    {"s", ValueType::U64, nullptr, "0"},
    {"graph", ValueType::Enum, "petersen|complete|cycle|random-regular", "petersen"},
    {"degree", ValueType::U64, nullptr, "3"},
    {"design", ValueType::Enum, "fano|pairs", "fano"},
    {"v", ValueType::U64, nullptr, "5"},
    {"N", ValueType::U64, nullptr, "256"},
    {"d", ValueType::U64, nullptr, "4"},
    {"iterations", ValueType::U64, nullptr, "100"},
    {"step", ValueType::Double, nullptr, "0"},
    {"delay", ValueType::Enum, "shifted-exp|deterministic|empirical", "shifted-exp"},
    {"shift", ValueType::Double, nullptr, "1"},
    {"rate", ValueType::Double, nullptr, "1"},
    {"delays", ValueType::DoubleList, nullptr, nullptr},
    {"policy", ValueType::Enum, "delay-order|fixed-set|adversarial", "delay-order"},
    {"set", ValueType::U64List, nullptr, nullptr},
};

const KeySpec kReportKeys[] = {
    {"epsilon", ValueType::Double, nullptr, "0.5"},
    {"delta", ValueType::Double, nullptr, "0.1"},
    {"q_grid", ValueType::U64List, nullptr, "8,32,128"},
    {"trials", ValueType::U64, nullptr, "200"},
    {"L", ValueType::U64, nullptr, "32"},
    {"N", ValueType::U64, nullptr, "16"},
    {"M", ValueType::U64, nullptr, "32"},
};

struct CommandSchema {
    Command command;
    const char* name;
    const KeySpec* keys;
    size_t count;
};

const CommandSchema kSchemas[] = {
    {Command::Gc, "gc", kGcKeys, std::size(kGcKeys)},
    {Command::Cmm, "cmm", kCmmKeys, std::size(kCmmKeys)},
    {Command::Sketch, "sketch", kSketchKeys, std::size(kSketchKeys)},
    {Command::Descend, "descend", kDescendKeys, std::size(kDescendKeys)},
    {Command::Report, "report", kReportKeys, std::size(kReportKeys)},
};

const CommandSchema& schema_of(Command c) {
    for (const auto& s : kSchemas)
        if (s.command == c) return s;
    fail(ErrorKind::ConfigError, "unknown command");
}

const KeySpec* find_key(const CommandSchema& schema, const std::string& name) {
    for (size_t i = 0; i < schema.count; ++i)
        if (name == schema.keys[i].name) return &schema.keys[i];
    for (const auto& k : kCommonKeys)
        if (name == k.name) return &k;
    return nullptr;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_u64(const std::string& s, uint64_t& out) {
    const std::string t = trim(s);
    if (t.empty() || t[0] == '-') return false;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && p == t.data() + t.size();
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    try {
        size_t pos = 0;
        out = std::stod(t, &pos);
        return pos == t.size() && std::isfinite(out);
    } catch (...) {
        return false;
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool enum_allows(const char* enum_values, const std::string& value) {
    for (const std::string& v : split(enum_values, '|'))
        if (v == value) return true;
    return false;
}

std::optional<std::string> check_value(const KeySpec& spec, const std::string& value) {
    switch (spec.type) {
        case ValueType::U64: {
            uint64_t v;
            if (!parse_u64(value, v))
                return "expected a nonnegative integer for '" + std::string(spec.name) + "'";
            return std::nullopt;
        }
        case ValueType::Double: {
            double v;
            if (!parse_double(value, v))
                return "expected a number for '" + std::string(spec.name) + "'";
            return std::nullopt;
        }
        case ValueType::U64List: {
            uint64_t v;
            for (const std::string& item : split(value, ','))
                if (!parse_u64(item, v))
                    return "expected a comma-separated integer list for '" +
                           std::string(spec.name) + "'";
            return std::nullopt;
        }
        case ValueType::DoubleList: {
            double v;
            for (const std::string& item : split(value, ','))
                if (!parse_double(item, v))
                    return "expected a comma-separated number list for '" +
                           std::string(spec.name) + "'";
            return std::nullopt;
        }
        case ValueType::Enum:
            if (!enum_allows(spec.enum_values, value))
                return "'" + value + "' is not one of {" + spec.enum_values + "} for '" +
                       spec.name + "'";
            return std::nullopt;
        case ValueType::String:
            return std::nullopt;
    }
    return std::nullopt;
}

void require_key(const ExperimentConfig& cfg, const char* key, const char* context,
                 std::vector<ConfigIssue>& issues) {
    if (!cfg.has(key))
        issues.push_back({0, std::string("missing required key '") + key + "' " + context});
}

// Cross-key checks that need no experiment data.
void semantic_validation(ExperimentConfig& cfg, std::vector<ConfigIssue>& issues) {
    const auto u64_or = [&](const char* key, uint64_t fallback) {
        return cfg.has(key) ? cfg.get_u64(key) : fallback;
    };
    switch (cfg.command) {
        case Command::Gc: {
            if (!cfg.has("scheme")) {
                issues.push_back({0, "missing required key 'scheme' for [gc]"});
                return;
            }
            const std::string scheme = cfg.get("scheme");
            if (scheme == "frc") {
                require_key(cfg, "n", "for scheme=frc", issues);
                require_key(cfg, "s", "for scheme=frc", issues);
                if (cfg.has("n") && cfg.has("s") && cfg.get_u64("n") % (cfg.get_u64("s") + 1) != 0)
                    issues.push_back({0, "(s+1) must divide n for scheme=frc"});
            } else if (scheme == "brs") {
                require_key(cfg, "n", "for scheme=brs", issues);
                require_key(cfg, "k", "for scheme=brs", issues);
                require_key(cfg, "s", "for scheme=brs", issues);
            } else if (scheme == "expander") {
                require_key(cfg, "s", "for scheme=expander", issues);
                const std::string graph = cfg.get("graph");
                if (graph != "petersen") require_key(cfg, "n", "for non-Petersen graphs", issues);
            } else if (scheme == "bernoulli") {
                require_key(cfg, "n", "for scheme=bernoulli", issues);
                require_key(cfg, "k", "for scheme=bernoulli", issues);
                require_key(cfg, "s", "for scheme=bernoulli", issues);
            } else if (scheme == "bibd") {
                require_key(cfg, "s", "for scheme=bibd", issues);
            } else if (scheme == "weighted") {
                for (const char* key : {"n", "k", "r", "s"})
                    require_key(cfg, key, "for scheme=weighted", issues);
                if (cfg.has("r") && cfg.has("k") && cfg.get_u64("r") > cfg.get_u64("k"))
                    issues.push_back({0, "need r <= k for scheme=weighted"});
            }
            if (cfg.has("n") && cfg.has("s") && cfg.get_u64("s") >= cfg.get_u64("n"))
                issues.push_back({0, "straggler count s must be smaller than n"});
            break;
        }
        case Command::Cmm: {
            if (!cfg.has("scheme")) {
                issues.push_back({0, "missing required key 'scheme' for [cmm]"});
                return;
            }
            const std::string scheme = cfg.get("scheme");
            const uint64_t k = u64_or("k", 2);
            if (!cfg.has("b")) cfg.values["b"] = std::to_string(k);  // canonical (a,b)=(1,k)
            if (!cfg.has("n")) {
                uint64_t n = 0;
                if (scheme == "matdot") n = 2 * k - 1;
                else if (scheme == "polynomial") n = k * k + 1;
                else if (scheme == "entangled") n = 5;
                else n = 2 * u64_or("r", 2) - 1;
                cfg.values["n"] = std::to_string(n);
            }
            if (!cfg.has("sweep"))
                cfg.values["sweep"] =
                    (scheme == "matdot" || scheme == "polynomial" || scheme == "entangled")
                        ? "subsets"
                        : "seeds";
            if (cfg.has("N") && cfg.has("k") && cfg.get_u64("N") % std::max<uint64_t>(k, 1) != 0 &&
                scheme != "oversketch" && scheme != "polynomial")
                issues.push_back({0, "k must divide the inner dimension N"});
            if (scheme == "oversketch") {
                const uint64_t q = u64_or("q", 16), block = u64_or("block", 4),
                               e = u64_or("e", 0);
                if (block == 0 || q % block != 0)
                    issues.push_back({0, "block size must divide the sketch width q"});
                else if (q / block <= e)
                    issues.push_back({0, "redundancy e must stay below q/block"});
            }
            break;
        }
        case Command::Sketch: {
            if (!cfg.has("variant")) {
                issues.push_back({0, "missing required key 'variant' for [sketch]"});
                return;
            }
            if (!cfg.has("q") && !cfg.has("q_grid"))
                issues.push_back({0, "provide q or q_grid for [sketch]"});
            break;
        }
        case Command::Descend: {
            if (!cfg.has("scheme")) {
                issues.push_back({0, "missing required key 'scheme' for [descend]"});
                return;
            }
            const std::string scheme = cfg.get("scheme");
            if (scheme == "brs" || scheme == "bernoulli") {
                require_key(cfg, "n", "for this scheme", issues);
                require_key(cfg, "k", "for this scheme", issues);
            }
            if (scheme == "frc") require_key(cfg, "n", "for scheme=frc", issues);
            if (scheme == "iterative-sketching") {
                require_key(cfg, "n", "for iterative sketching", issues);
                require_key(cfg, "k", "for iterative sketching", issues);
            }
            if (cfg.has("n") && cfg.has("s") && cfg.get_u64("s") >= cfg.get_u64("n"))
                issues.push_back({0, "straggler count s must be smaller than n"});
            if (cfg.get("policy") == "fixed-set") {
                if (!cfg.has("set"))
                    issues.push_back({0, "policy=fixed-set needs the 'set' key"});
                else if (cfg.has("s") && cfg.get_u64_list("set").size() != cfg.get_u64("s"))
                    issues.push_back({0, "'set' size must equal s"});
            }
            if (cfg.get("delay") == "deterministic" || cfg.get("delay") == "empirical") {
                if (!cfg.has("delays"))
                    issues.push_back({0, "this delay model needs the 'delays' list"});
            }
            break;
        }
        case Command::Report: {
            const auto grid = cfg.get_u64_list("q_grid");
            for (size_t i = 1; i < grid.size(); ++i)
                if (grid[i] <= grid[i - 1]) {
                    issues.push_back({0, "q_grid must be strictly ascending"});
                    break;
                }
            if (cfg.get_double("delta") < 0.0 || cfg.get_double("delta") > 1.0)
                issues.push_back({0, "delta must lie in [0,1]"});
            break;
        }
    }
}

}  // namespace

const char* to_string(Command c) {
    switch (c) {
        case Command::Gc: return "gc";
        case Command::Cmm: return "cmm";
        case Command::Sketch: return "sketch";
        case Command::Descend: return "descend";
        case Command::Report: return "report";
    }
    return "?";
}

const std::string& ExperimentConfig::get(const std::string& key) const {
    const auto it = values.find(key);
    require(it != values.end(), ErrorKind::ConfigError, "missing key '" + key + "'");
    return it->second;
}

uint64_t ExperimentConfig::get_u64(const std::string& key) const {
    uint64_t v = 0;
    require(parse_u64(get(key), v), ErrorKind::ConfigError,
            "key '" + key + "' is not an integer");
    return v;
}

double ExperimentConfig::get_double(const std::string& key) const {
    double v = 0.0;
    require(parse_double(get(key), v), ErrorKind::ConfigError,
            "key '" + key + "' is not a number");
    return v;
}

std::vector<uint64_t> ExperimentConfig::get_u64_list(const std::string& key) const {
    std::vector<uint64_t> out;
    for (const std::string& item : split(get(key), ',')) {
        uint64_t v = 0;
        require(parse_u64(item, v), ErrorKind::ConfigError,
                "key '" + key + "' is not an integer list");
        out.push_back(v);
    }
    return out;
}

std::vector<double> ExperimentConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : split(get(key), ',')) {
        double v = 0.0;
        require(parse_double(item, v), ErrorKind::ConfigError,
                "key '" + key + "' is not a number list");
        out.push_back(v);
    }
    return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const CommandSchema& schema = schema_of(command);
    const KeySpec* spec = find_key(schema, key);
    require(spec != nullptr, ErrorKind::ConfigError,
            "unknown key '" + key + "' for command [" + to_string(command) + "]");
    const auto issue = check_value(*spec, value);
    require(!issue.has_value(), ErrorKind::ConfigError, issue.value_or(""));
    values[key] = value;
}

ParseResult parse_config(const std::string& text) {
    ParseResult result;
    std::vector<std::pair<std::string, std::pair<std::string, size_t>>> entries;
    std::optional<Command> command;

    std::istringstream in(text);
    std::string raw;
    size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                result.issues.push_back({lineno, "unterminated section header"});
                continue;
            }
            const std::string name = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& s : kSchemas) {
                if (name == s.name) {
                    if (command.has_value())
                        result.issues.push_back({lineno, "more than one [command] section"});
                    command = s.command;
                    known = true;
                    break;
                }
            }
            if (!known) result.issues.push_back({lineno, "unknown command [" + name + "]"});
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            result.issues.push_back({lineno, "expected key=value, got '" + line + "'"});
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            result.issues.push_back({lineno, "empty key"});
            continue;
        }
        if (!command.has_value()) {
            result.issues.push_back({lineno, "key '" + key + "' appears before any [command] section"});
            continue;
        }
        entries.push_back({key, {value, lineno}});
    }

    if (!command.has_value()) {
        result.issues.push_back({0, "no [command] section found"});
        return result;
    }

    result.config.command = *command;
    const CommandSchema& schema = schema_of(*command);
    for (const auto& [key, vl] : entries) {
        const auto& [value, line] = vl;
        const KeySpec* spec = find_key(schema, key);
        if (spec == nullptr) {
            result.issues.push_back(
                {line, "unknown key '" + key + "' for command [" + schema.name + "]"});
            continue;
        }
        if (result.config.values.count(key) > 0) {
            result.issues.push_back({line, "duplicate key '" + key + "'"});
            continue;
        }
        if (const auto issue = check_value(*spec, value)) {
            result.issues.push_back({line, *issue});
            continue;
        }
        result.config.values[key] = value;
    }

    // defaults
    for (const auto& k : kCommonKeys)
        if (k.default_value && result.config.values.count(k.name) == 0)
            result.config.values[k.name] = k.default_value;
    for (size_t i = 0; i < schema.count; ++i)
        if (schema.keys[i].default_value && result.config.values.count(schema.keys[i].name) == 0)
            result.config.values[schema.keys[i].name] = schema.keys[i].default_value;

    if (result.issues.empty()) semantic_validation(result.config, result.issues);
    result.ok = result.issues.empty();
    return result;
}

ExperimentConfig parse_config_or_throw(const std::string& text) {
    ParseResult r = parse_config(text);
    if (r.ok) return r.config;
    std::string message;
    for (const auto& issue : r.issues) {
        if (!message.empty()) message += "\n";
        if (issue.line > 0) message += "line " + std::to_string(issue.line) + ": ";
        message += issue.message;
    }
    fail(ErrorKind::ConfigError, message);
}

}  // namespace codedlab::cli
