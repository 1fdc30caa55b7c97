#include "aeex/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "aeex/error.hpp"

namespace aeex {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw ValidationError(what, "CONFIG_INVALID");
}

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) invalid(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) invalid("unknown key '" + key + "' in " + where);
}

double get_real(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) invalid(where + "." + key + " must be a number");
  return v.get<double>();
}

long long get_int(const json& j, const char* key, long long fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) invalid(where + "." + key + " must be an integer");
  return v.get<long long>();
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback,
                      const std::string& where) {
  const long long v = get_int(j, key, static_cast<long long>(fallback), where);
  if (v < 0) invalid(where + "." + key + " must be non-negative");
  return static_cast<std::size_t>(v);
}

Vec2 get_point(const json& j, const char* key, Vec2 fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    invalid(where + "." + key + " must be [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

std::string get_type(const json& j, const std::string& where) {
  if (!j.contains("type") || !j.at("type").is_string()) invalid(where + ".type is required");
  return j.at("type").get<std::string>();
}

ObstacleShape parse_shape(const json& j) {
  const std::string type = get_type(j, "shape");
  if (type == "disk") {
    check_keys(j, "shape", {"type", "radius"});
    return Disk{get_real(j, "radius", 1.0, "shape")};
  }
  if (type == "ellipse") {
    check_keys(j, "shape", {"type", "semi_major", "semi_minor"});
    return Ellipse{get_real(j, "semi_major", 2.0, "shape"),
                   get_real(j, "semi_minor", 1.0, "shape")};
  }
  invalid("shape.type must be 'disk' or 'ellipse'");
}

InitialCondition parse_initial(const json& j) {
  const std::string w = "initial_condition";
  const std::string type = get_type(j, w);
  if (type == "zero") {
    check_keys(j, w, {"type"});
    return ZeroVorticity{};
  }
  if (type == "gaussian") {
    check_keys(j, w, {"type", "center", "width", "circulation"});
    GaussianVortex g;
    g.center = get_point(j, "center", g.center, w);
    g.width = get_real(j, "width", g.width, w);
    g.circulation = get_real(j, "circulation", g.circulation, w);
    return g;
  }
  if (type == "ring") {
    check_keys(j, w, {"type", "radius", "width", "amplitude"});
    GaussianRing r;
    r.radius = get_real(j, "radius", r.radius, w);
    r.width = get_real(j, "width", r.width, w);
    r.amplitude = get_real(j, "amplitude", r.amplitude, w);
    return r;
  }
  if (type == "vortex_pair") {
    check_keys(j, w, {"type", "center", "separation", "width", "circulation"});
    VortexPair p;
    p.center = get_point(j, "center", p.center, w);
    p.separation = get_real(j, "separation", p.separation, w);
    p.width = get_real(j, "width", p.width, w);
    p.circulation = get_real(j, "circulation", p.circulation, w);
    return p;
  }
  invalid("initial_condition.type must be one of zero, gaussian, ring, vortex_pair");
}

json shape_json(const ObstacleShape& s) {
  if (const auto* d = std::get_if<Disk>(&s)) return {{"type", "disk"}, {"radius", d->radius}};
  const auto& e = std::get<Ellipse>(s);
  return {{"type", "ellipse"}, {"semi_major", e.semi_major}, {"semi_minor", e.semi_minor}};
}

json initial_json(const InitialCondition& ic) {
  if (std::holds_alternative<ZeroVorticity>(ic)) return {{"type", "zero"}};
  if (const auto* g = std::get_if<GaussianVortex>(&ic))
    return {{"type", "gaussian"},
            {"center", {g->center.x, g->center.y}},
            {"width", g->width},
            {"circulation", g->circulation}};
  if (const auto* r = std::get_if<GaussianRing>(&ic))
    return {{"type", "ring"}, {"radius", r->radius}, {"width", r->width},
            {"amplitude", r->amplitude}};
  const auto& p = std::get<VortexPair>(ic);
  return {{"type", "vortex_pair"},
          {"center", {p.center.x, p.center.y}},
          {"separation", p.separation},
          {"width", p.width},
          {"circulation", p.circulation}};
}

}  // namespace

SimConfig config_from_json(const json& j) {
  check_keys(j, "config",
             {"shape", "alpha", "grid", "dt", "t_end", "initial_condition", "picard_tol",
              "picard_max_iter", "diagnostics_every", "max_halvings", "snapshot_every",
              "cfl_limit", "limiter"});
  SimConfig c;
  if (j.contains("shape")) c.shape = parse_shape(j.at("shape"));
  c.alpha = get_real(j, "alpha", c.alpha, "config");
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "grid", {"n_r", "n_theta", "r_max"});
    c.n_r = get_count(g, "n_r", c.n_r, "grid");
    c.n_theta = get_count(g, "n_theta", c.n_theta, "grid");
    c.r_max = get_real(g, "r_max", c.r_max, "grid");
  }
  c.dt = get_real(j, "dt", c.dt, "config");
  c.t_end = get_real(j, "t_end", c.t_end, "config");
  if (j.contains("initial_condition")) c.initial = parse_initial(j.at("initial_condition"));
  c.picard_tol = get_real(j, "picard_tol", c.picard_tol, "config");
  c.picard_max_iter = static_cast<int>(get_int(j, "picard_max_iter", c.picard_max_iter, "config"));
  c.diagnostics_every =
      static_cast<int>(get_int(j, "diagnostics_every", c.diagnostics_every, "config"));
  c.max_halvings = static_cast<int>(get_int(j, "max_halvings", c.max_halvings, "config"));
  c.snapshot_every = static_cast<int>(get_int(j, "snapshot_every", c.snapshot_every, "config"));
  c.advect.cfl_limit = get_real(j, "cfl_limit", c.advect.cfl_limit, "config");
  if (j.contains("limiter")) {
    const json& l = j.at("limiter");
    if (l == "cell")
      c.advect.limiter = Limiter::cell;
    else if (l == "global")
      c.advect.limiter = Limiter::global;
    else
      invalid("limiter must be 'cell' or 'global'");
  }
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), "CONFIG_INVALID");
  } catch (const DomainError& e) {
    throw ValidationError(e.what(), "CONFIG_INVALID");
  }
  return c;
}

json config_to_json(const SimConfig& c) {
  return {{"shape", shape_json(c.shape)},
          {"alpha", c.alpha},
          {"grid", {{"n_r", c.n_r}, {"n_theta", c.n_theta}, {"r_max", c.r_max}}},
          {"dt", c.dt},
          {"t_end", c.t_end},
          {"initial_condition", initial_json(c.initial)},
          {"picard_tol", c.picard_tol},
          {"picard_max_iter", c.picard_max_iter},
          {"diagnostics_every", c.diagnostics_every},
          {"max_halvings", c.max_halvings},
          {"snapshot_every", c.snapshot_every},
          {"cfl_limit", c.advect.cfl_limit},
          {"limiter", c.advect.limiter == Limiter::cell ? "cell" : "global"}};
}

json read_config_json(const std::string& path) {
  if (!std::filesystem::is_regular_file(path))
    throw ValidationError("config file not found: " + path, "CONFIG_NOT_FOUND");
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path, "CONFIG_NOT_FOUND");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what(), "CONFIG_PARSE");
  }
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ValidationError("override must be KEY=VALUE: " + assignment, "CONFIG_INVALID");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &j;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    if (!node->is_object()) invalid("override path " + key + " crosses a non-object");
    node = &(*node)[parts[k]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) invalid("override path " + key + " crosses a non-object");
  (*node)[parts.back()] = std::move(value);
}

std::string config_schema() {
  return R"(config keys (all optional; defaults shown)
  shape              {"type": "disk", "radius": 1.0}
                     {"type": "ellipse", "semi_major": 2.0, "semi_minor": 1.0}
  alpha              0.2          filter length
  grid               {"n_r": 128, "n_theta": 256, "r_max": 16.0}   mapped-radius grid
  dt                 0.001
  t_end              1.0
  initial_condition  {"type": "vortex_pair", "center": [3, 0], "separation": 2.0,
                      "width": 0.5, "circulation": 1.0}
                     {"type": "gaussian", "center": [2, 0], "width": 0.3, "circulation": 1.0}
                     {"type": "ring", "radius": 2.5, "width": 0.3, "amplitude": 1.0}
                     {"type": "zero"}
  picard_tol         1e-10        relative H1 change of the velocity
  picard_max_iter    50
  diagnostics_every  10           steps between CSV rows
  max_halvings       4            dt halvings allowed on a failed step
  snapshot_every     0            steps between q snapshots (0: off)
  cfl_limit          0.5          mapped Courant bound
  limiter            "cell"       "cell" or "global"
)";
}

}  // namespace aeex
