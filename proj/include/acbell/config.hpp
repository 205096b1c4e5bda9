#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acbell/bell.hpp"

namespace acbell::cli {

struct ScanConfig {
    std::vector<geom::Vec2> locus_a;
    std::vector<geom::Vec2> locus_b;
};

struct NumericsConfig {
    double exclusion_radius = 1e-3;
    int quadrature_nodes = 64;
};

// One experiment description as read from a JSON config file. The layout's
// exclusion radius mirrors `numerics.exclusion_radius`.
struct ExperimentConfig {
    bell::ExperimentLayout layout;
    std::optional<ScanConfig> scan;
    NumericsConfig numerics;
};

// Carries every schema problem found, one "key.path: reason" line each.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> messages);
    const std::vector<std::string>& messages() const { return messages_; }

private:
    std::vector<std::string> messages_;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Canonical JSON form; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const ExperimentConfig& config);

}  // namespace acbell::cli
