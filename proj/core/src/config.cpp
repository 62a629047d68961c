#include "mcir/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace mcir {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

template <class T>
T read(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string("config key '") + key + "' has the wrong type");
  }
}

std::uint64_t read_count(const nlohmann::json& j, const char* key) {
  const nlohmann::json& v = j.at(key);
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0),
          std::string("config key '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

template <class T, class Reader>
void read_optional(const nlohmann::json& j, const char* key, std::optional<T>& out, Reader reader) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  out = static_cast<T>(reader(j, key));
}

}  // namespace

std::size_t default_num_children(std::size_t dims) {
  if (dims <= 50) return 10;
  if (dims <= 100) return 20;
  return 30;
}

std::size_t SearchConfig::children_for(std::size_t dims) const {
  return num_children.value_or(default_num_children(dims));
}

std::size_t SearchConfig::grad_samples_for(std::size_t dims) const {
  return grad_samples.value_or(dims + 1);
}

void SearchConfig::validate() const {
  auto coefficient = [](double v, const char* name) {
    require(std::isfinite(v) && v >= 0.0, std::string(name) + ": coefficient must be >= 0");
  };
  coefficient(c_lb, "c_lb");
  coefficient(c_v, "c_v");
  coefficient(c_x, "c_x");
  require(!num_children || *num_children >= 1, "num_children must be >= 1");
  require(!grad_samples || *grad_samples >= 1, "grad_samples must be >= 1");
  require(std::isfinite(delta_fraction) && delta_fraction > 0.0 && delta_fraction <= 1.0,
          "delta_fraction must be in (0, 1]");
  require(std::isfinite(local_opt_min_improvement) && local_opt_min_improvement >= 0.0,
          "local_opt_min_improvement must be >= 0");
  require(root_child_cap >= 1, "root_child_cap must be >= 1");
  require(!step_budget || *step_budget >= 1, "step_budget must be positive");
  require(!eval_budget || *eval_budget >= 1, "eval_budget must be positive");
  require(!wall_clock_budget_ms || (std::isfinite(*wall_clock_budget_ms) && *wall_clock_budget_ms > 0.0),
          "wall_clock_budget_ms must be positive");
  require(!target_value || !std::isnan(*target_value), "target_value must be a number");
  require(step_budget || eval_budget || wall_clock_budget_ms,
          "at least one of step_budget, eval_budget, wall_clock_budget_ms must be set");
}

SearchConfig config_from_json(const nlohmann::json& input) {
  require(input.is_object(), "config must be a JSON object");
  const nlohmann::json& j =
      input.contains("config") && input.at("config").is_object() ? input.at("config") : input;

  static const std::set<std::string> known = {
      "c_lb",          "c_v",          "c_x",          "num_children",
      "local_opt_budget", "local_opt_min_improvement", "delta_fraction", "grad_samples",
      "root_child_cap", "step_budget",  "eval_budget",  "wall_clock_budget_ms",
      "target_value",  "seed",         "record_wall_clock"};
  for (const auto& [key, value] : j.items()) {
    require(known.contains(key), "unknown config key '" + key + "'");
  }

  SearchConfig c;
  auto real = [](const nlohmann::json& obj, const char* key) {
    const nlohmann::json& v = obj.at(key);
    require(v.is_number(), std::string("config key '") + key + "' must be a number");
    return v.get<double>();
  };
  if (j.contains("c_lb")) c.c_lb = real(j, "c_lb");
  if (j.contains("c_v")) c.c_v = real(j, "c_v");
  if (j.contains("c_x")) c.c_x = real(j, "c_x");
  if (j.contains("delta_fraction")) c.delta_fraction = real(j, "delta_fraction");
  if (j.contains("local_opt_min_improvement")) {
    c.local_opt_min_improvement = real(j, "local_opt_min_improvement");
  }
  if (j.contains("local_opt_budget")) c.local_opt_budget = read_count(j, "local_opt_budget");
  if (j.contains("root_child_cap")) c.root_child_cap = read_count(j, "root_child_cap");
  if (j.contains("seed")) c.seed = read_count(j, "seed");
  if (j.contains("record_wall_clock")) c.record_wall_clock = read<bool>(j, "record_wall_clock");
  read_optional(j, "num_children", c.num_children, read_count);
  read_optional(j, "grad_samples", c.grad_samples, read_count);
  read_optional(j, "step_budget", c.step_budget, read_count);
  read_optional(j, "eval_budget", c.eval_budget, read_count);
  read_optional(j, "wall_clock_budget_ms", c.wall_clock_budget_ms, real);
  read_optional(j, "target_value", c.target_value, real);
  c.validate();
  return c;
}

nlohmann::json to_json(const SearchConfig& c, std::size_t dims) {
  auto opt = [](const auto& v) -> nlohmann::json {
    if (v) return *v;
    return nullptr;
  };
  return {
      {"c_lb", c.c_lb},
      {"c_v", c.c_v},
      {"c_x", c.c_x},
      {"num_children", c.children_for(dims)},
      {"local_opt_budget", c.local_opt_budget},
      {"local_opt_min_improvement", c.local_opt_min_improvement},
      {"delta_fraction", c.delta_fraction},
      {"grad_samples", c.grad_samples_for(dims)},
      {"root_child_cap", c.root_child_cap},
      {"step_budget", opt(c.step_budget)},
      {"eval_budget", opt(c.eval_budget)},
      {"wall_clock_budget_ms", opt(c.wall_clock_budget_ms)},
      {"target_value", opt(c.target_value)},
      {"seed", c.seed},
      {"record_wall_clock", c.record_wall_clock},
  };
}

SearchConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace mcir
