#include "zoh/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "zoh/errors.hpp"
#include "yaml_sections.hpp"

namespace zoh::cli {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

void reject_unknown(const YAML::Node& node, const std::string& section,
                    const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(section, "must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(section + "." + key, "unknown key");
  }
}

double get_double(const YAML::Node& node, const std::string& key) {
  try {
    const double v = node.as<double>();
    if (!std::isfinite(v)) fail(key, "must be a finite number");
    return v;
  } catch (const YAML::Exception&) {
    fail(key, "must be a number");
  }
}

int get_int(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    fail(key, "must be an integer");
  }
}

std::string get_string(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(key, "must be a string");
  return node.as<std::string>();
}

Vector get_vector(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) fail(key, "must be a bracketed list of numbers");
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = get_double(node[i], key + "[" + std::to_string(i) + "]");
  }
  return v;
}

// Row-major: [[a, b], [c, d]]. An empty list yields a rows x 0 matrix when
// rows is known, otherwise 0 x 0.
Matrix get_matrix(const YAML::Node& node, const std::string& key, Eigen::Index rows_if_empty = 0) {
  if (!node.IsSequence()) fail(key, "must be a row-major list of rows");
  if (node.size() == 0) return Matrix(rows_if_empty, 0);
  const std::size_t cols = node[0].IsSequence() ? node[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(node.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string rk = key + "[" + std::to_string(i) + "]";
    if (!node[i].IsSequence() || node[i].size() != cols) fail(rk, "rows must be lists of equal length");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          get_double(node[i][j], rk + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

PlantSection parse_plant(const YAML::Node& n) {
  PlantSection p;
  reject_unknown(n, "plant", {"benchmark", "m1", "m2", "k", "d", "theta", "output", "eta0", "matrices"});
  if (n["matrices"]) {
    if (n["benchmark"]) fail("plant", "set either 'benchmark' or 'matrices', not both");
    p.kind = PlantSection::Kind::Matrices;
    const YAML::Node m = n["matrices"];
    reject_unknown(m, "plant.matrices", {"R0", "R1", "S", "Gamma", "Q", "P"});
    for (const char* k : {"R0", "R1", "S", "Gamma", "Q", "P"}) {
      if (!m[k]) fail(std::string("plant.matrices.") + k, "missing");
    }
    p.gamma = get_matrix(m["Gamma"], "plant.matrices.Gamma");
    p.r0 = get_matrix(m["R0"], "plant.matrices.R0");
    p.r1 = get_matrix(m["R1"], "plant.matrices.R1");
    p.q = get_matrix(m["Q"], "plant.matrices.Q");
    p.s = get_matrix(m["S"], "plant.matrices.S", p.gamma.rows());
    p.p = get_matrix(m["P"], "plant.matrices.P", 0);
    if (p.q.rows() == 0) p.p = Matrix(0, p.gamma.rows());
  } else {
    const std::string bench = n["benchmark"] ? get_string(n["benchmark"], "plant.benchmark") : "mass_on_car";
    if (bench != "mass_on_car") fail("plant.benchmark", "unknown benchmark '" + bench + "' (expected mass_on_car)");
    auto& mp = p.mass_on_car;
    if (n["m1"]) mp.m1 = get_double(n["m1"], "plant.m1");
    if (n["m2"]) mp.m2 = get_double(n["m2"], "plant.m2");
    if (n["k"]) mp.k = get_double(n["k"], "plant.k");
    if (n["d"]) mp.d = get_double(n["d"], "plant.d");
    if (n["theta"]) mp.theta = get_double(n["theta"], "plant.theta");
    if (n["output"]) {
      const auto o = get_string(n["output"], "plant.output");
      if (o == "car") {
        mp.output = MassOnCarOutput::Car;
      } else if (o == "ramp_mass") {
        mp.output = MassOnCarOutput::RampMass;
      } else {
        fail("plant.output", "must be 'car' or 'ramp_mass'");
      }
    }
    if (!(mp.m1 > 0)) fail("plant.m1", "must be > 0");
    if (!(mp.m2 > 0)) fail("plant.m2", "must be > 0");
    if (!(mp.k > 0)) fail("plant.k", "must be > 0");
    if (!(mp.d > 0)) fail("plant.d", "must be > 0");
    if (!(mp.theta > 0 && mp.theta < std::numbers::pi / 2)) fail("plant.theta", "must lie in (0, pi/2)");
  }
  if (n["eta0"]) p.eta0 = get_vector(n["eta0"], "plant.eta0");
  return p;
}

}  // namespace

namespace detail {

ReferenceSpec parse_reference(const YAML::Node& n) {
  reject_unknown(n, "reference", {"type", "channels", "value"});
  const std::string type = n["type"] ? get_string(n["type"], "reference.type") : "sinusoid";
  if (type == "constant") {
    if (!n["value"]) fail("reference.value", "missing");
    return ReferenceSpec::constant(get_vector(n["value"], "reference.value"));
  }
  if (type != "sinusoid") fail("reference.type", "must be 'sinusoid' or 'constant'");
  if (!n["channels"] || !n["channels"].IsSequence() || n["channels"].size() == 0) {
    fail("reference.channels", "must list at least one channel");
  }
  std::vector<std::vector<Sinusoid>> channels;
  for (std::size_t i = 0; i < n["channels"].size(); ++i) {
    const YAML::Node ch = n["channels"][i];
    const std::string ck = "reference.channels[" + std::to_string(i) + "]";
    if (!ch.IsSequence()) fail(ck, "must be a list of [amplitude, omega, phase] triples");
    std::vector<Sinusoid> terms;
    for (std::size_t j = 0; j < ch.size(); ++j) {
      const Vector t = get_vector(ch[j], ck + "[" + std::to_string(j) + "]");
      if (t.size() != 3) fail(ck + "[" + std::to_string(j) + "]", "must be [amplitude, omega, phase]");
      terms.push_back({t[0], t[1], t[2]});
    }
    channels.push_back(std::move(terms));
  }
  return ReferenceSpec::sinusoid_sum(std::move(channels));
}

FunnelSpec parse_funnel(const YAML::Node& n) {
  reject_unknown(n, "funnel", {"type", "tolerance", "a", "b", "c"});
  const std::string type = n["type"] ? get_string(n["type"], "funnel.type") : "constant";
  if (type == "constant") {
    if (!n["tolerance"]) fail("funnel.tolerance", "missing");
    const double c = get_double(n["tolerance"], "funnel.tolerance");
    if (!(c > 0)) fail("funnel.tolerance", "must be > 0");
    return FunnelSpec::constant(c);
  }
  if (type != "exponential") fail("funnel.type", "must be 'constant' or 'exponential'");
  for (const char* k : {"a", "b", "c"}) {
    if (!n[k]) fail(std::string("funnel.") + k, "missing");
  }
  const double a = get_double(n["a"], "funnel.a");
  const double b = get_double(n["b"], "funnel.b");
  const double c = get_double(n["c"], "funnel.c");
  if (!(a >= 0)) fail("funnel.a", "must be >= 0");
  if (!(b >= 0)) fail("funnel.b", "must be >= 0");
  if (!(c > 0)) fail("funnel.c", "must be > 0");
  return FunnelSpec::exponential_width(a, b, c);
}

}  // namespace detail

namespace {

using detail::parse_funnel;
using detail::parse_reference;

ControllerSection parse_controller(const YAML::Node& n) {
  reject_unknown(n, "controller", {"lambda", "variant", "alpha", "beta", "tau"});
  ControllerSection c;
  if (n["lambda"]) c.lambda = get_double(n["lambda"], "controller.lambda");
  if (!(c.lambda > 0 && c.lambda < 1)) fail("controller.lambda", "must lie in (0,1)");
  if (n["variant"]) {
    try {
      c.variant = parse_variant(get_string(n["variant"], "controller.variant"));
    } catch (const ConfigError&) {
      fail("controller.variant", "must be 'free' or 'deriv'");
    }
  }
  if (n["alpha"] && get_string(n["alpha"], "controller.alpha") != "reciprocal") {
    fail("controller.alpha", "only 'reciprocal' is supported");
  }
  if (n["beta"]) {
    c.beta = get_double(n["beta"], "controller.beta");
    if (!(*c.beta >= 0)) fail("controller.beta", "must be >= 0");
  }
  if (n["tau"]) {
    c.tau = get_double(n["tau"], "controller.tau");
    if (!(*c.tau > 0)) fail("controller.tau", "must be > 0");
  }
  return c;
}

DesignSection parse_design(const YAML::Node& n) {
  reject_unknown(n, "design", {"beta_margin", "f_max", "g_max", "g_min"});
  DesignSection d;
  if (n["beta_margin"]) d.beta_margin = get_double(n["beta_margin"], "design.beta_margin");
  if (!(d.beta_margin >= 1)) fail("design.beta_margin", "must be >= 1");
  if (n["f_max"]) {
    d.f_max = get_double(n["f_max"], "design.f_max");
    if (!(*d.f_max >= 0)) fail("design.f_max", "must be >= 0");
  }
  if (n["g_max"]) {
    d.g_max = get_double(n["g_max"], "design.g_max");
    if (!(*d.g_max > 0)) fail("design.g_max", "must be > 0");
  }
  if (n["g_min"]) {
    d.g_min = get_double(n["g_min"], "design.g_min");
    if (!(*d.g_min > 0)) fail("design.g_min", "must be > 0");
  }
  if (d.g_min && d.g_max && *d.g_min > *d.g_max) fail("design.g_min", "must not exceed design.g_max");
  return d;
}

SimSection parse_sim(const YAML::Node& n) {
  reject_unknown(n, "sim", {"horizon", "substeps", "record_stride"});
  SimSection s;
  if (n["horizon"]) s.horizon = get_double(n["horizon"], "sim.horizon");
  if (n["substeps"]) s.substeps = get_int(n["substeps"], "sim.substeps");
  if (n["record_stride"]) s.record_stride = get_int(n["record_stride"], "sim.record_stride");
  if (!(s.horizon > 0)) fail("sim.horizon", "must be > 0");
  if (s.substeps < 1) fail("sim.substeps", "must be >= 1");
  if (s.record_stride < 1) fail("sim.record_stride", "must be >= 1");
  return s;
}

}  // namespace

std::shared_ptr<const LinearIOPlant> ExperimentConfig::build_plant() const {
  try {
    std::shared_ptr<LinearIOPlant> out;
    if (plant.kind == PlantSection::Kind::MassOnCar) {
      out = std::make_shared<LinearIOPlant>(mass_on_car(plant.mass_on_car));
    } else {
      const Eigen::Index l = plant.q.rows();
      out = std::make_shared<LinearIOPlant>(plant.r0, plant.r1, plant.s, plant.gamma, plant.q,
                                            plant.p, Vector::Zero(l));
    }
    if (plant.eta0) *out = out->with_initial_internal(*plant.eta0);
    return out;
  } catch (const ConfigError& e) {
    fail("plant", e.what());
  } catch (const AssumptionViolation& e) {
    fail("plant", e.what());
  }
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: malformed YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping of sections");
  reject_unknown(root, "config", {"plant", "reference", "funnel", "controller", "design", "sim", "output"});
  for (const char* s : {"plant", "reference", "funnel", "controller", "sim"}) {
    if (!root[s]) fail(s, "section missing");
  }
  ExperimentConfig cfg;
  cfg.plant = parse_plant(root["plant"]);
  cfg.reference = parse_reference(root["reference"]);
  cfg.funnel = parse_funnel(root["funnel"]);
  cfg.controller = parse_controller(root["controller"]);
  if (root["design"]) cfg.design = parse_design(root["design"]);
  cfg.sim = parse_sim(root["sim"]);
  if (root["output"]) {
    reject_unknown(root["output"], "output", {"trace", "certificate"});
    if (root["output"]["trace"]) cfg.output.trace = get_string(root["output"]["trace"], "output.trace");
    if (root["output"]["certificate"]) {
      cfg.output.certificate = get_string(root["output"]["certificate"], "output.certificate");
    }
  }
  const auto plant = cfg.build_plant();
  if (plant->output_dim() != cfg.reference.dim()) {
    fail("reference", "number of channels must equal the plant output dimension");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const char* to_string(LawVariant v) {
  return v == LawVariant::DerivativeFree ? "free" : "deriv";
}

LawVariant parse_variant(const std::string& s) {
  if (s == "free") return LawVariant::DerivativeFree;
  if (s == "deriv") return LawVariant::DerivativeBased;
  throw ConfigError("variant: must be 'free' or 'deriv', got '" + s + "'");
}

}  // namespace zoh::cli
