#include "wsnlife/instance_io.hpp"

#include <fstream>

#include "wsnlife/errors.hpp"

namespace wsn {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::invalid_input, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <class T>
std::vector<T> number_list(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) {
    throw Error(ErrorCode::invalid_input, std::string("'") + key + "' must be an array");
  }
  std::vector<T> out;
  for (const auto& x : v) {
    if constexpr (std::is_integral_v<T>) {
      if (!x.is_number_integer()) {
        throw Error(ErrorCode::invalid_input, std::string("'") + key + "' needs integers");
      }
    } else if (!x.is_number()) {
      throw Error(ErrorCode::invalid_input, std::string("'") + key + "' needs numbers");
    }
    out.push_back(x.get<T>());
  }
  return out;
}

}  // namespace

Instance instance_from_json(const json& j) {
  Instance inst;
  inst.positions = number_list<double>(j, "positions");
  inst.ranges = number_list<double>(j, "ranges");
  inst.energies = number_list<Energy>(j, "energies");
  const json& m = field(j, "m_cs");
  if (!m.is_number_integer()) {
    throw Error(ErrorCode::invalid_input, "'m_cs' must be an integer");
  }
  inst.m_cs = m.get<int>();
  return inst;
}

json to_json(const Instance& inst) {
  return json{{"positions", inst.positions},
              {"ranges", inst.ranges},
              {"energies", inst.energies},
              {"m_cs", inst.m_cs}};
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(load_json(path));
}

json to_json(const Schedule& s) {
  json slots = json::array();
  for (const auto& p : s.slots) slots.push_back(p.nodes);
  return json{{"lifetime", s.lifetime()}, {"slots", slots}};
}

Schedule schedule_from_json(const json& j) {
  const json& slots = field(j, "slots");
  if (!slots.is_array()) throw Error(ErrorCode::invalid_input, "'slots' must be an array");
  Schedule s;
  for (const auto& slot : slots) {
    if (!slot.is_array()) throw Error(ErrorCode::invalid_input, "slot must be an array");
    ActivationProfile p;
    for (const auto& v : slot) {
      if (!v.is_number_integer()) throw Error(ErrorCode::invalid_input, "slot entries are indices");
      p.nodes.push_back(v.get<NodeIndex>());
    }
    s.slots.push_back(std::move(p));
  }
  if (j.contains("lifetime") &&
      (!j["lifetime"].is_number_integer() ||
       j["lifetime"].get<std::size_t>() != s.lifetime())) {
    throw Error(ErrorCode::invalid_input, "'lifetime' disagrees with slot count");
  }
  return s;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_input, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, path.string() + ": " + e.what());
  }
}

void save_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::invalid_input, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace wsn
