#pragma once

#include <string>
#include <vector>

#include "busgate/engines.hpp"
#include "busgate/output.hpp"

namespace busgate {

/// fig1a, fig1b, fig3a, fig3b, fig3c, fig3d, table1
const std::vector<std::string>& reproduce_targets();

struct Reproduction {
  io::Table table;
  io::Metadata metadata;
  std::vector<std::string> summary;
  std::vector<std::string> warnings;
};

/// Data series behind one figure or table. Throws ConfigError for an unknown
/// target or an impossible engine request.
Reproduction reproduce(const std::string& target, const EngineOptions& options = {});

/// Bus length used for the dense-engine figure targets: 16 when the whole
/// register fits the site cap, 10 otherwise.
int capped_bus_length(int sites_at_16, int sites_at_10, int site_cap, std::vector<std::string>& warnings);

}  // namespace busgate
