#include "zoh/cli/certificate.hpp"

#include <fstream>
#include <sstream>

#include "zoh/cli/config.hpp"
#include "zoh/errors.hpp"
#include "yaml_sections.hpp"

namespace zoh::cli {

namespace detail {

void emit_funnel(YAML::Emitter& out, const FunnelSpec& f) {
  out << YAML::BeginMap;
  if (f.family() == FunnelSpec::Family::Constant) {
    out << YAML::Key << "type" << YAML::Value << "constant";
    out << YAML::Key << "tolerance" << YAML::Value << f.c();
  } else {
    out << YAML::Key << "type" << YAML::Value << "exponential";
    out << YAML::Key << "a" << YAML::Value << f.a();
    out << YAML::Key << "b" << YAML::Value << f.b();
    out << YAML::Key << "c" << YAML::Value << f.c();
  }
  out << YAML::EndMap;
}

void emit_reference(YAML::Emitter& out, const ReferenceSpec& r) {
  out << YAML::BeginMap;
  if (r.family() == ReferenceSpec::Family::Constant) {
    out << YAML::Key << "type" << YAML::Value << "constant";
    out << YAML::Key << "value" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (Eigen::Index i = 0; i < r.constant_value().size(); ++i) out << r.constant_value()[i];
    out << YAML::EndSeq;
  } else {
    out << YAML::Key << "type" << YAML::Value << "sinusoid";
    out << YAML::Key << "channels" << YAML::Value << YAML::BeginSeq;
    for (const auto& ch : r.channels()) {
      out << YAML::Flow << YAML::BeginSeq;
      for (const auto& s : ch) {
        out << YAML::Flow << YAML::BeginSeq << s.amplitude << s.omega << s.phase << YAML::EndSeq;
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
}

}  // namespace detail

namespace {

template <typename T>
void kv(YAML::Emitter& out, const char* key, const T& value) {
  out << YAML::Key << key << YAML::Value << value;
}

double req(const YAML::Node& n, const std::string& section, const char* key) {
  const YAML::Node v = n[key];
  if (!v) throw ConfigError("certificate " + section + "." + key + ": missing");
  try {
    return v.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError("certificate " + section + "." + key + ": must be a number");
  }
}

YAML::Node section(const YAML::Node& root, const char* name) {
  const YAML::Node n = root[name];
  if (!n || !n.IsMap()) throw ConfigError(std::string("certificate ") + name + ": section missing");
  return n;
}

}  // namespace

std::string certificate_to_yaml(const Certificate& cert) {
  const DesignParameters& p = cert.params;
  const DesignInputs& in = p.inputs;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  kv(out, "variant", to_string(cert.variant));
  kv(out, "tau", cert.tau);
  kv(out, "unsafe", cert.unsafe);
  out << YAML::EndMap;

  out << YAML::Key << "funnel" << YAML::Value;
  detail::emit_funnel(out, cert.funnel);
  out << YAML::Key << "reference" << YAML::Value;
  detail::emit_reference(out, cert.reference);

  out << YAML::Key << "inputs" << YAML::Value << YAML::BeginMap;
  kv(out, "alpha", "reciprocal");
  kv(out, "lambda", in.lambda);
  kv(out, "beta_margin", in.beta_margin);
  kv(out, "sup_phi", in.norms.sup_phi);
  kv(out, "inf_phi", in.norms.inf_phi);
  kv(out, "ratio", in.norms.ratio);
  kv(out, "m_phi", in.norms.m_phi);
  kv(out, "f_max", in.bounds.f_max);
  kv(out, "g_max", in.bounds.g_max);
  kv(out, "g_min", in.bounds.g_min);
  kv(out, "bounds_overridden", cert.bounds_overridden);
  kv(out, "yref_acc_bound", in.yref_acc_bound);
  kv(out, "e1_initial_norm", in.e1_initial_norm);
  out << YAML::EndMap;

  out << YAML::Key << "operating_set" << YAML::Value << YAML::BeginMap;
  kv(out, "y_bound", cert.y_bound);
  kv(out, "ydot_bound", cert.ydot_bound);
  kv(out, "eta_bound", cert.eta_bound);
  out << YAML::EndMap;

  out << YAML::Key << "parameters" << YAML::Value << YAML::BeginMap;
  kv(out, "xi", p.xi);
  kv(out, "eps1", p.eps1);
  kv(out, "alpha_xi", p.alpha_xi);
  kv(out, "alpha_eps1", p.alpha_eps1);
  kv(out, "gamma_bar", p.gamma_bar);
  kv(out, "kappa0", p.kappa0);
  kv(out, "eps_hat", p.eps_hat);
  kv(out, "E_hat", p.E_hat);
  kv(out, "beta_min", p.beta_min);
  kv(out, "beta", p.beta);
  kv(out, "beta_overridden", p.beta_overridden);
  kv(out, "F_tilde", p.F_tilde);
  kv(out, "kappa1", p.kappa1);
  out << YAML::Key << "tau_terms" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double t : p.tau_terms) out << t;
  out << YAML::EndSeq;
  kv(out, "binding_term", p.binding_term);
  kv(out, "tau_max", p.tau_max);
  kv(out, "feasible", p.feasible());
  kv(out, "input_bound", p.beta / p.lambda);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Certificate certificate_from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("certificate: malformed YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("certificate: top level must be a mapping");

  Certificate c;
  const YAML::Node run = section(root, "run");
  c.tau = req(run, "run", "tau");
  c.variant = parse_variant(run["variant"] ? run["variant"].as<std::string>() : "free");
  c.unsafe = run["unsafe"] && run["unsafe"].as<bool>();
  c.funnel = detail::parse_funnel(section(root, "funnel"));
  c.reference = detail::parse_reference(section(root, "reference"));

  const YAML::Node in = section(root, "inputs");
  DesignParameters& p = c.params;
  p.inputs.lambda = req(in, "inputs", "lambda");
  p.inputs.beta_margin = req(in, "inputs", "beta_margin");
  p.inputs.norms = {req(in, "inputs", "sup_phi"), req(in, "inputs", "inf_phi"),
                    req(in, "inputs", "ratio"), req(in, "inputs", "m_phi")};
  p.inputs.bounds = {req(in, "inputs", "f_max"), req(in, "inputs", "g_max"),
                     req(in, "inputs", "g_min")};
  p.inputs.yref_acc_bound = req(in, "inputs", "yref_acc_bound");
  p.inputs.e1_initial_norm = req(in, "inputs", "e1_initial_norm");
  c.bounds_overridden = in["bounds_overridden"] && in["bounds_overridden"].as<bool>();

  const YAML::Node os = section(root, "operating_set");
  c.y_bound = req(os, "operating_set", "y_bound");
  c.ydot_bound = req(os, "operating_set", "ydot_bound");
  c.eta_bound = req(os, "operating_set", "eta_bound");

  const YAML::Node pn = section(root, "parameters");
  const std::string ps = "parameters";
  p.xi = req(pn, ps, "xi");
  p.eps1 = req(pn, ps, "eps1");
  p.alpha_xi = req(pn, ps, "alpha_xi");
  p.alpha_eps1 = req(pn, ps, "alpha_eps1");
  p.gamma_bar = req(pn, ps, "gamma_bar");
  p.kappa0 = req(pn, ps, "kappa0");
  p.eps_hat = req(pn, ps, "eps_hat");
  p.E_hat = req(pn, ps, "E_hat");
  p.beta_min = req(pn, ps, "beta_min");
  p.beta = req(pn, ps, "beta");
  p.beta_overridden = pn["beta_overridden"] && pn["beta_overridden"].as<bool>();
  p.F_tilde = req(pn, ps, "F_tilde");
  p.kappa1 = req(pn, ps, "kappa1");
  p.lambda = p.inputs.lambda;
  const YAML::Node terms = pn["tau_terms"];
  if (!terms || !terms.IsSequence() || terms.size() != 3) {
    throw ConfigError("certificate parameters.tau_terms: must list three values");
  }
  for (std::size_t i = 0; i < 3; ++i) p.tau_terms[i] = terms[i].as<double>();
  p.binding_term = static_cast<int>(req(pn, ps, "binding_term"));
  p.tau_max = req(pn, ps, "tau_max");
  return c;
}

void write_certificate(const std::filesystem::path& path, const Certificate& cert) {
  std::ofstream out(path);
  if (!out) throw ConfigError("output.certificate: cannot write '" + path.string() + "'");
  out << certificate_to_yaml(cert);
}

Certificate read_certificate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("certificate: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return certificate_from_yaml(ss.str());
}

}  // namespace zoh::cli
