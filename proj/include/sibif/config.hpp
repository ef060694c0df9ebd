#pragma once

#include "sibif/diagram.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sibif {

/// Settings of the evolve subcommand.
struct EvolveSpec {
    std::vector<BumpCode> codes; // empty: every nonzero code
    double lambda = 0.0;
    double t_end = 0.0;          // 0: run to the steady state
    bool has_lambda = false;
};

struct AppConfig {
    CampaignConfig campaign;
    EvolveSpec evolve;
};

/// YAML config; see README for the schema. Unknown keys are rejected.
/// Throws IoError (unreadable file) or std::invalid_argument (bad content),
/// both naming the origin.
AppConfig load_config(const std::filesystem::path& path);
AppConfig parse_config(const std::string& text, const std::string& origin = "<string>");

} // namespace sibif
