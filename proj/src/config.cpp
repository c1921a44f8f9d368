#include "uhlab/config.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "uhlab/errors.hpp"

namespace uhlab {
namespace {

using nlohmann::json;

constexpr const char* kSchema = "uhlenbeck-config/1";

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path.empty() ? msg : path + ": " + msg, path);
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

double get_positive(const json& v, const std::string& path) {
  const double x = get_number(v, path);
  if (!(x > 0.0)) fail(path, "expected a positive number");
  return x;
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known)
      fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

std::vector<double> get_number_array(const json& v, const std::string& path,
                                     bool positive) {
  if (!v.is_array() || v.empty())
    fail(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string entry = path + "[" + std::to_string(i) + "]";
    out.push_back(positive ? get_positive(v[i], entry)
                           : get_number(v[i], entry));
  }
  return out;
}

DomainSpec parse_domain(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  if (!v.contains("kind"))
    fail(path + ".kind", "missing (disk, square, polygon, box)");
  const std::string kind = get_string(v["kind"], path + ".kind");
  try {
    if (kind == "disk") {
      check_keys(v, path, {"kind", "radius"});
      return DomainSpec::disk(
          v.contains("radius") ? get_positive(v["radius"], path + ".radius")
                               : 1.0);
    }
    if (kind == "square") {
      check_keys(v, path, {"kind", "side"});
      return DomainSpec::square(
          v.contains("side") ? get_positive(v["side"], path + ".side") : 1.0);
    }
    if (kind == "polygon") {
      check_keys(v, path, {"kind", "vertices"});
      if (!v.contains("vertices")) fail(path + ".vertices", "missing");
      const json& arr = v["vertices"];
      if (!arr.is_array() || arr.size() < 3)
        fail(path + ".vertices", "expected an array of at least 3 [x, y] pairs");
      std::vector<std::array<double, 2>> pts;
      pts.reserve(arr.size());
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string entry =
            path + ".vertices[" + std::to_string(i) + "]";
        const json& pt = arr[i];
        if (!pt.is_array() || pt.size() != 2) fail(entry, "expected [x, y]");
        pts.push_back({get_number(pt[0], entry + "[0]"),
                       get_number(pt[1], entry + "[1]")});
      }
      return DomainSpec::polygon(std::move(pts));
    }
    if (kind == "box") {
      check_keys(v, path, {"kind", "lx", "ly", "lz"});
      const double lx =
          v.contains("lx") ? get_positive(v["lx"], path + ".lx") : 1.0;
      const double ly =
          v.contains("ly") ? get_positive(v["ly"], path + ".ly") : 1.0;
      const double lz =
          v.contains("lz") ? get_positive(v["lz"], path + ".lz") : 1.0;
      return DomainSpec::box(lx, ly, lz);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path + ".kind",
       "unknown domain kind '" + kind + "' (disk, square, polygon, box)");
}

RhsSpec parse_rhs(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  if (!v.contains("kind"))
    fail(path + ".kind", "missing (constant, cos-pi-x, radial-bump)");
  const std::string kind = get_string(v["kind"], path + ".kind");
  try {
    if (kind == "constant") {
      check_keys(v, path, {"kind", "amplitude"});
      return RhsSpec::constant(v.contains("amplitude")
                                   ? get_number(v["amplitude"], path + ".amplitude")
                                   : 1.0);
    }
    if (kind == "cos-pi-x") {
      check_keys(v, path, {"kind", "amplitude"});
      return RhsSpec::cos_pi_x(v.contains("amplitude")
                                   ? get_number(v["amplitude"], path + ".amplitude")
                                   : 1.0);
    }
    if (kind == "radial-bump") {
      check_keys(v, path, {"kind", "amplitude", "width"});
      const double amplitude =
          v.contains("amplitude")
              ? get_number(v["amplitude"], path + ".amplitude")
              : 1.0;
      const double width =
          v.contains("width") ? get_positive(v["width"], path + ".width") : 0.5;
      return RhsSpec::radial_bump(amplitude, width);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path + ".kind",
       "unknown source kind '" + kind + "' (constant, cos-pi-x, radial-bump)");
}

SolveOptions parse_solver(const json& v, const std::string& path,
                          SolveOptions opts) {
  if (!v.is_object()) fail(path, "expected an object");
  check_keys(v, path, {"eps_schedule", "tol", "max_newton", "polish"});
  if (v.contains("eps_schedule")) {
    opts.eps_schedule =
        get_number_array(v["eps_schedule"], path + ".eps_schedule", true);
    for (std::size_t i = 0; i < opts.eps_schedule.size(); ++i) {
      const double e = opts.eps_schedule[i];
      if (e > 1.0)
        fail(path + ".eps_schedule[" + std::to_string(i) + "]",
             "regularization parameters live in (0, 1]");
      if (i > 0 && e >= opts.eps_schedule[i - 1])
        fail(path + ".eps_schedule[" + std::to_string(i) + "]",
             "schedule must decrease strictly");
    }
  }
  if (v.contains("tol")) opts.tol = get_positive(v["tol"], path + ".tol");
  if (v.contains("max_newton")) {
    opts.max_newton = get_int(v["max_newton"], path + ".max_newton");
    if (opts.max_newton < 1) fail(path + ".max_newton", "expected at least 1");
  }
  if (v.contains("polish")) opts.polish = get_bool(v["polish"], path + ".polish");
  return opts;
}

json domain_to_json(const DomainSpec& dom) {
  json v;
  switch (dom.kind) {
  case DomainSpec::Kind::Disk:
    v["kind"] = "disk";
    v["radius"] = dom.radius;
    break;
  case DomainSpec::Kind::Square:
    v["kind"] = "square";
    v["side"] = dom.side;
    break;
  case DomainSpec::Kind::Polygon: {
    v["kind"] = "polygon";
    json pts = json::array();
    for (const auto& p : dom.vertices) pts.push_back({p[0], p[1]});
    v["vertices"] = std::move(pts);
    break;
  }
  case DomainSpec::Kind::Box:
    v["kind"] = "box";
    v["lx"] = dom.lx;
    v["ly"] = dom.ly;
    v["lz"] = dom.lz;
    break;
  }
  return v;
}

json rhs_to_json(const RhsSpec& rhs) {
  json v;
  switch (rhs.kind) {
  case RhsSpec::Kind::Constant:
    v["kind"] = "constant";
    v["amplitude"] = rhs.amplitude;
    break;
  case RhsSpec::Kind::CosPiX:
    v["kind"] = "cos-pi-x";
    v["amplitude"] = rhs.amplitude;
    break;
  case RhsSpec::Kind::RadialBump:
    v["kind"] = "radial-bump";
    v["amplitude"] = rhs.amplitude;
    v["width"] = rhs.width;
    break;
  }
  return v;
}

} // namespace

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.domains = {DomainSpec::disk(1.0), DomainSpec::square(1.0),
                 DomainSpec::polygon({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}})};
  cfg.p_values = {1.5, 2.0, 3.0, 4.0};
  cfg.rhs = RhsSpec::constant(1.0);
  cfg.bc = BoundaryCondition::Dirichlet;
  cfg.components = 1;
  cfg.h_values = {0.05};
  cfg.kappa_values = {0.1, 0.31622776601683794, 1.0, 3.1622776601683795, 10.0};
  cfg.out_dir = "out";
  cfg.seed = 1;
  return cfg;
}

std::string default_config_json() { return config_echo_json(default_config()); }

ExperimentConfig config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("", "expected a JSON object");
  check_keys(doc, "",
             {"schema", "out_dir", "seed", "bc", "components", "domains",
              "p_values", "rhs", "h_values", "kappa_values", "solver"});
  if (!doc.contains("schema"))
    fail("schema", std::string("missing (expected \"") + kSchema + "\")");
  if (const std::string schema = get_string(doc["schema"], "schema");
      schema != kSchema)
    fail("schema", "unsupported schema '" + schema + "' (expected '" +
                       std::string(kSchema) + "')");

  ExperimentConfig cfg = default_config();
  if (doc.contains("out_dir")) cfg.out_dir = get_string(doc["out_dir"], "out_dir");
  if (doc.contains("seed")) {
    const json& v = doc["seed"];
    if (!v.is_number_integer() ||
        (v.is_number_integer() && !v.is_number_unsigned() &&
         v.get<long long>() < 0))
      fail("seed", "expected a non-negative integer");
    cfg.seed = v.get<uint64_t>();
  }
  if (doc.contains("bc")) {
    const std::string bc = get_string(doc["bc"], "bc");
    if (bc == "dirichlet")
      cfg.bc = BoundaryCondition::Dirichlet;
    else if (bc == "neumann")
      cfg.bc = BoundaryCondition::Neumann;
    else
      fail("bc", "expected 'dirichlet' or 'neumann'");
  }
  if (doc.contains("components")) {
    cfg.components = get_int(doc["components"], "components");
    if (cfg.components < 1 || cfg.components > 8)
      fail("components", "expected between 1 and 8");
  }
  if (doc.contains("domains")) {
    const json& arr = doc["domains"];
    if (!arr.is_array() || arr.empty())
      fail("domains", "expected a non-empty array");
    cfg.domains.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      cfg.domains.push_back(
          parse_domain(arr[i], "domains[" + std::to_string(i) + "]"));
  }
  if (doc.contains("p_values")) {
    cfg.p_values = get_number_array(doc["p_values"], "p_values", true);
    for (std::size_t i = 0; i < cfg.p_values.size(); ++i)
      if (!(cfg.p_values[i] > 1.0))
        fail("p_values[" + std::to_string(i) + "]",
             "power exponents must exceed 1");
  }
  if (doc.contains("rhs")) cfg.rhs = parse_rhs(doc["rhs"], "rhs");
  if (doc.contains("h_values"))
    cfg.h_values = get_number_array(doc["h_values"], "h_values", true);
  if (doc.contains("kappa_values"))
    cfg.kappa_values =
        get_number_array(doc["kappa_values"], "kappa_values", true);
  if (doc.contains("solver"))
    cfg.solver = parse_solver(doc["solver"], "solver", cfg.solver);
  return cfg;
}

std::string config_echo_json(const ExperimentConfig& cfg) {
  json doc;
  doc["schema"] = kSchema;
  doc["out_dir"] = cfg.out_dir;
  doc["seed"] = cfg.seed;
  doc["bc"] =
      cfg.bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
  doc["components"] = cfg.components;
  json domains = json::array();
  for (const DomainSpec& dom : cfg.domains) domains.push_back(domain_to_json(dom));
  doc["domains"] = std::move(domains);
  doc["p_values"] = cfg.p_values;
  doc["rhs"] = rhs_to_json(cfg.rhs);
  doc["h_values"] = cfg.h_values;
  doc["kappa_values"] = cfg.kappa_values;
  json solver;
  solver["eps_schedule"] = cfg.solver.eps_schedule;
  solver["tol"] = cfg.solver.tol;
  solver["max_newton"] = cfg.solver.max_newton;
  solver["polish"] = cfg.solver.polish;
  doc["solver"] = std::move(solver);
  return doc.dump(2);
}

std::vector<RunSetup> expand_runs(const ExperimentConfig& cfg) {
  std::vector<RunSetup> runs;
  runs.reserve(cfg.domains.size() * cfg.p_values.size() * cfg.h_values.size() *
               cfg.kappa_values.size());
  for (const DomainSpec& dom : cfg.domains) {
    for (double p : cfg.p_values) {
      for (double h : cfg.h_values) {
        for (double kappa : cfg.kappa_values) {
          RunSetup r;
          r.domain = dom;
          r.p = p;
          r.rhs = cfg.rhs;
          r.bc = cfg.bc;
          r.components = cfg.components;
          r.kappa = kappa;
          r.h = h;
          runs.push_back(std::move(r));
        }
      }
    }
  }
  return runs;
}

} // namespace uhlab
