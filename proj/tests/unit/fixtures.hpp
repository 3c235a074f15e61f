#pragma once

#include <string>

#include "cogsim/range_model.hpp"

namespace fixtures {

inline std::string data_path(const std::string& rel) { return std::string(COGSIM_DATA_DIR) + "/" + rel; }

inline const cogsim::Scenario& canonical() {
  static const cogsim::Scenario s = cogsim::load_scenario_file(data_path("canonical_scenario.json"));
  return s;
}

// entry -> target, no triggers.
inline const char* kTwoHostJson = R"({
  "hosts": [
    {"host_id": "entry", "display_name": "entry", "ip": "10.0.0.1", "subnet": "red", "path_rank": null},
    {"host_id": "target", "display_name": "target", "ip": "10.0.1.1", "subnet": "lab", "path_rank": 1}
  ],
  "edges": [["entry", "target"]],
  "attack_path": ["entry", "target"],
  "entry_host": "entry",
  "triggers": [],
  "seed": 1
})";

inline cogsim::Scenario two_host() { return cogsim::load_scenario(kTwoHostJson); }

}  // namespace fixtures
