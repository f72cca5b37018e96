#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsnlife/schedule.hpp"
#include "wsnlife/topology.hpp"

namespace wsn {

// {"positions": [...], "ranges": [...], "energies": [...], "m_cs": k}
struct Instance {
  std::vector<double> positions;
  std::vector<double> ranges;
  std::vector<Energy> energies;  // sensors only
  int m_cs = 1;

  Topology topology() const { return Topology::build(positions, ranges); }
};

// Shape errors raise Error{invalid_input}; the values themselves are checked
// by Topology::build and the consumers.
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Instance& inst);
Instance load_instance(const std::filesystem::path& path);

// {"lifetime": T, "slots": [[...], ...]}
nlohmann::json to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);

nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace wsn
