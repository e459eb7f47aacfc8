#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "htsroute/domain.hpp"

namespace hts {

/// Malformed config document. line is 1-based, 0 when unknown.
class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(int line, std::string key, const std::string& message);
    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    int line_;
    std::string key_;
};

/// Parses a flat YAML mapping. Absent keys keep their defaults; unknown keys
/// are rejected. The result is validated, so ConfigError may also escape.
ScenarioConfig parse_config(std::string_view text);

/// Reads and parses a file; I/O failures surface as ConfigParseError.
ScenarioConfig load_config(const std::string& path);

/// Flat YAML document that parse_config reads back to an equal config.
std::string to_yaml(const ScenarioConfig& config);

}  // namespace hts
