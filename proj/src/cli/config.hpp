#ifndef CODEDLAB_CLI_CONFIG_HPP
#define CODEDLAB_CLI_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace codedlab::cli {

enum class Command { Gc, Cmm, Sketch, Descend, Report };

const char* to_string(Command c);

struct ConfigIssue {
    size_t line = 0;  // 0 when the issue is not tied to a line
    std::string message;
};

// One experiment: a command plus a validated flat key=value map with
// defaults filled in.
struct ExperimentConfig {
    Command command = Command::Gc;
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }
    const std::string& get(const std::string& key) const;
    uint64_t get_u64(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::vector<uint64_t> get_u64_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    // Re-validates a single key against the schema; ConfigError on violation.
    void set(const std::string& key, const std::string& value);
};

// Parses `# comment`, `[command]` header, and key=value lines. Collects every
// error instead of stopping at the first.
struct ParseResult {
    bool ok = false;
    ExperimentConfig config;
    std::vector<ConfigIssue> issues;
};

ParseResult parse_config(const std::string& text);

// Convenience wrapper that throws ConfigError with all messages joined.
ExperimentConfig parse_config_or_throw(const std::string& text);

}  // namespace codedlab::cli

#endif
