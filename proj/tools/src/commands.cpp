#include "zoh/cli/commands.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "zoh/cli/trace_io.hpp"
#include "zoh/errors.hpp"

namespace zoh::cli {

namespace {

PlantDesignRequest request_for(const ExperimentConfig& cfg) {
  PlantDesignRequest req;
  req.lambda = cfg.controller.lambda;
  req.alpha = cfg.controller.alpha;
  req.beta_margin = cfg.design.beta_margin;
  req.beta_override = cfg.controller.beta;
  return req;
}

bool has_bound_override(const DesignSection& d) { return d.f_max || d.g_max || d.g_min; }

PlantDesign design_with_overrides(const LinearIOPlant& plant, const ExperimentConfig& cfg,
                                  PlantDesignRequest req) {
  if (!has_bound_override(cfg.design)) {
    return design_for_plant(plant, cfg.reference, cfg.funnel, req);
  }
  WorstCaseBounds b{};
  if (cfg.design.f_max && cfg.design.g_max && cfg.design.g_min) {
    b = {*cfg.design.f_max, *cfg.design.g_max, *cfg.design.g_min};
  } else {
    b = design_for_plant(plant, cfg.reference, cfg.funnel, req).params.inputs.bounds;
    if (cfg.design.f_max) b.f_max = *cfg.design.f_max;
    if (cfg.design.g_max) b.g_max = *cfg.design.g_max;
    if (cfg.design.g_min) b.g_min = *cfg.design.g_min;
  }
  if (b.g_min > b.g_max) throw ConfigError("design.g_min: must not exceed g_max");
  req.bounds_override = b;
  return design_for_plant(plant, cfg.reference, cfg.funnel, req);
}

const char* term_label(int i) {
  static const char* kLabels[] = {"switching", "growth", "activation"};
  return (i >= 0 && i < 3) ? kLabels[i] : "unknown";
}

Certificate make_certificate(const ExperimentConfig& cfg, const PlantDesign& d, double tau,
                             LawVariant variant) {
  Certificate c;
  c.params = d.params;
  c.tau = tau;
  c.unsafe = !(d.params.feasible() && tau <= d.params.tau_max);
  c.variant = variant;
  c.funnel = cfg.funnel;
  c.reference = cfg.reference;
  c.y_bound = d.y_bound;
  c.ydot_bound = d.ydot_bound;
  c.eta_bound = d.eta_bound;
  c.bounds_overridden = has_bound_override(cfg.design);
  return c;
}

std::filesystem::path pick(const std::filesystem::path& flag, const std::string& configured) {
  return flag.empty() ? std::filesystem::path(configured) : flag;
}

void print_summary(std::ostream& out, const Trace& tr, const VerificationReport& rep) {
  out << "feasible=" << (tr.feasible() ? 1 : 0) << " status=" << to_string(tr.status)
      << " funnel_margin=" << format_double(rep.funnel_margin)
      << " input_max=" << format_double(rep.input_max) << " samples=" << tr.samples.size();
  if (!tr.feasible()) out << " violation_time=" << format_double(tr.violation_time);
  out << '\n';
}

int exit_for(const Trace& tr) {
  switch (tr.status) {
    case TraceStatus::Completed:
      return kExitOk;
    case TraceStatus::FunnelViolation:
      return kExitInfeasible;
    case TraceStatus::NumericalBlowup:
      return kExitBlowup;
  }
  return kExitFailure;
}

std::vector<double> parse_values(const std::string& key, const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size() || !std::isfinite(v)) {
      throw ConfigError("--grid " + key + ": cannot parse value '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--grid " + key + ": needs at least one value");
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

void emit_report_yaml(std::ostream& os, const VerificationReport& r) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "passed" << YAML::Value << r.passed();
  out << YAML::Key << "funnel_margin" << YAML::Value << r.funnel_margin;
  out << YAML::Key << "e2_max_samples" << YAML::Value << r.e2_max_samples;
  out << YAML::Key << "e2_max_dense" << YAML::Value << r.e2_max_dense;
  out << YAML::Key << "e2_max" << YAML::Value << r.e2_max;
  out << YAML::Key << "input_max" << YAML::Value << r.input_max;
  out << YAML::Key << "input_bound" << YAML::Value << r.input_bound;
  out << YAML::Key << "lemma_e1e2_ok" << YAML::Value << r.lemma_e1e2_ok;
  out << YAML::Key << "lemma_worst_offset" << YAML::Value << r.lemma_worst_offset;
  out << YAML::Key << "surrogate_gap_max" << YAML::Value << r.surrogate_gap_max;
  out << YAML::Key << "edot_max" << YAML::Value << r.edot_max;
  out << YAML::Key << "E_max" << YAML::Value << r.E_max;
  out << YAML::Key << "e2_estimate_slack" << YAML::Value << r.e2_estimate_slack;
  out << YAML::Key << "violations" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : r.violations) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "time" << YAML::Value << v.time
        << YAML::Key << "check" << YAML::Value << v.check << YAML::Key << "value" << YAML::Value
        << v.value << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  os << out.c_str() << '\n';
}

}  // namespace

Prepared prepare(const ExperimentConfig& config, std::optional<LawVariant> variant, bool unsafe) {
  auto plant = config.build_plant();
  PlantDesign design = design_with_overrides(*plant, config, request_for(config));
  const DesignParameters& dp = design.params;

  double tau = 0.0;
  if (config.controller.tau) {
    tau = *config.controller.tau;
    if (!unsafe && !dp.feasible()) {
      throw ConfigError("controller.tau: design is infeasible (tau_max = " + format_double(dp.tau_max) +
                        ", binding term " + term_label(dp.binding_term) +
                        "); pass --unsafe to run anyway");
    }
    if (!unsafe && tau > dp.tau_max) {
      throw ConfigError("controller.tau: " + format_double(tau) + " exceeds tau_max = " +
                        format_double(dp.tau_max) + "; pass --unsafe to run anyway");
    }
  } else {
    if (!dp.feasible()) {
      throw InfeasibleDesign(std::string("design: no admissible sampling time, term '") +
                                 term_label(dp.binding_term) + "' = " +
                                 format_double(dp.tau_terms[static_cast<std::size_t>(dp.binding_term)]),
                             dp.binding_term);
    }
    tau = dp.tau_max;
  }

  const LawVariant v = variant.value_or(config.controller.variant);
  SimSetup setup{plant,
                 config.reference,
                 config.funnel,
                 ControlLawConfig{dp.beta, config.controller.lambda, config.controller.alpha, v},
                 SimConfig{tau, config.sim.horizon, config.sim.substeps, Integrator::RK4Fixed,
                           config.sim.record_stride}};
  Certificate cert = make_certificate(config, design, tau, v);
  return Prepared{config, std::move(plant), std::move(design), std::move(setup), std::move(cert)};
}

std::vector<GridPoint> parse_grid(const std::string& spec) {
  std::optional<std::vector<double>> taus, lambdas, betas;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("--grid: expected key=v1,v2,... in '" + part + "'");
    const std::string key = trim(part.substr(0, eq));
    auto values = parse_values(key, part.substr(eq + 1));
    std::optional<std::vector<double>>* slot = nullptr;
    if (key == "tau") {
      slot = &taus;
      for (double t : values) {
        if (!(t > 0)) throw ConfigError("--grid tau: values must be > 0");
      }
    } else if (key == "lambda") {
      slot = &lambdas;
      for (double l : values) {
        if (!(l > 0 && l < 1)) throw ConfigError("--grid lambda: values must lie in (0,1)");
      }
    } else if (key == "beta") {
      slot = &betas;
      for (double b : values) {
        if (!(b >= 0)) throw ConfigError("--grid beta: values must be >= 0");
      }
    } else {
      throw ConfigError("--grid " + key + ": unknown key (expected tau, lambda or beta)");
    }
    if (*slot) throw ConfigError("--grid " + key + ": given twice");
    *slot = std::move(values);
  }
  if (!taus && !lambdas && !betas) throw ConfigError("--grid: empty grid");

  auto axis = [](const std::optional<std::vector<double>>& v) {
    std::vector<std::optional<double>> out;
    if (!v) {
      out.emplace_back();
    } else {
      out.assign(v->begin(), v->end());
    }
    return out;
  };
  std::vector<GridPoint> grid;
  for (const auto& t : axis(taus)) {
    for (const auto& l : axis(lambdas)) {
      for (const auto& b : axis(betas)) grid.push_back({t, l, b});
    }
  }
  return grid;
}

int worker_count() {
  if (const char* env = std::getenv("ZOHFC_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
      throw ConfigError("ZOHFC_WORKERS: must be a positive integer");
    }
    return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::vector<GridPoint>& grid,
                                std::optional<LawVariant> variant, int workers) {
  std::vector<SweepRow> rows(grid.size());
  auto run_one = [&](std::size_t i) {
    const GridPoint& g = grid[i];
    SweepRow& row = rows[i];
    row.index = i;
    ExperimentConfig cfg = config;
    if (g.lambda) cfg.controller.lambda = *g.lambda;
    if (g.beta) cfg.controller.beta = *g.beta;
    if (g.tau) cfg.controller.tau = *g.tau;
    row.lambda = cfg.controller.lambda;
    row.tau = cfg.controller.tau.value_or(0.0);
    row.beta = cfg.controller.beta.value_or(0.0);
    try {
      const Prepared p = prepare(cfg, variant, true);
      row.tau = p.setup.sim.tau;
      row.beta = p.design.params.beta;
      row.certified = !p.certificate.unsafe;
      if (!(row.tau > 0)) {
        row.status = "no_sampling_time";
        return;
      }
      const Trace tr = simulate(p.setup);
      const VerificationReport rep =
          check_trace(tr, cfg.funnel, cfg.reference, p.design.params);
      row.feasible = tr.feasible();
      row.funnel_margin = rep.funnel_margin;
      row.input_max = rep.input_max;
      row.violation_time = tr.feasible() ? 0.0 : tr.violation_time;
      row.status = to_string(tr.status);
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  };

  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) run_one(i);
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "index,tau,lambda,beta,feasible,certified,funnel_margin,input_max,violation_time,status\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    os << r.index << ',' << format_double(r.tau) << ',' << format_double(r.lambda) << ','
       << format_double(r.beta) << ',' << (r.feasible ? 1 : 0) << ',' << (r.certified ? 1 : 0)
       << ',' << format_double(r.funnel_margin) << ',' << format_double(r.input_max) << ','
       << format_double(r.violation_time) << ',' << status << '\n';
  }
}

int cmd_design(const CommandOptions& opts, std::ostream& out) {
  const ExperimentConfig cfg = load_config(opts.config);
  const Prepared p = prepare(cfg, opts.variant, opts.unsafe);
  const DesignParameters& d = p.design.params;
  const std::pair<const char*, double> fields[] = {
      {"xi", d.xi},         {"eps1", d.eps1},         {"gamma_bar", d.gamma_bar}, {"kappa0", d.kappa0},
      {"eps_hat", d.eps_hat}, {"E_hat", d.E_hat},     {"beta_min", d.beta_min},   {"beta", d.beta},
      {"F_tilde", d.F_tilde}, {"kappa1", d.kappa1},   {"input_bound", d.beta / d.lambda}};
  for (const auto& [name, value] : fields) {
    out << std::left << std::setw(12) << name << ' ' << format_double(value) << '\n';
  }
  out << format_tau_report(d);
  out << "tau = " << format_double(p.certificate.tau)
      << (p.certificate.unsafe ? "  (not certified)" : "") << '\n';
  const auto path = pick(opts.out, cfg.output.certificate);
  if (!path.empty()) {
    write_certificate(path, p.certificate);
    out << "certificate written to " << path.string() << '\n';
  } else {
    out << certificate_to_yaml(p.certificate);
  }
  return kExitOk;
}

int cmd_simulate(const CommandOptions& opts, std::ostream& out) {
  const ExperimentConfig cfg = load_config(opts.config);
  const Prepared p = prepare(cfg, opts.variant, opts.unsafe);
  const Trace tr = simulate(p.setup);
  const auto path = pick(opts.out, cfg.output.trace);
  if (!path.empty()) write_trace_csv(path, tr);
  if (!cfg.output.certificate.empty()) write_certificate(cfg.output.certificate, p.certificate);
  const VerificationReport rep = check_trace(tr, cfg.funnel, cfg.reference, p.design.params);
  print_summary(out, tr, rep);
  if (!tr.feasible()) out << tr.message << '\n';
  return exit_for(tr);
}

int cmd_verify(const CommandOptions& opts, std::ostream& out) {
  if (opts.trace.empty()) throw ConfigError("--trace: required");
  if (opts.certificate.empty()) throw ConfigError("--certificate: required");
  const Certificate cert = read_certificate(opts.certificate);
  Trace tr = read_trace_csv(opts.trace);
  if (tr.output_dim != cert.reference.dim()) {
    throw ConfigError("--trace: output dimension differs from the certificate reference");
  }
  tr.tau = cert.tau;
  tr.variant = cert.variant;
  const VerificationReport rep = check_trace(tr, cert.funnel, cert.reference, cert.params);
  out << format_report(rep);
  if (!opts.out.empty()) {
    std::ofstream f(opts.out);
    if (!f) throw ConfigError("--out: cannot write '" + opts.out.string() + "'");
    emit_report_yaml(f, rep);
  }
  return rep.passed() ? kExitOk : kExitInfeasible;
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out) {
  const ExperimentConfig cfg = load_config(opts.config);
  const auto grid = parse_grid(opts.grid);
  const auto rows = run_sweep(cfg, grid, opts.variant, worker_count());
  if (opts.out.empty()) {
    write_sweep_csv(out, rows);
  } else {
    std::ofstream f(opts.out);
    if (!f) throw ConfigError("--out: cannot write '" + opts.out.string() + "'");
    write_sweep_csv(f, rows);
    std::size_t ok = 0;
    for (const auto& r : rows) ok += r.feasible ? 1 : 0;
    out << ok << "/" << rows.size() << " grid points feasible\n";
  }
  return kExitOk;
}

int cmd_compare(const CommandOptions& opts, std::ostream& out) {
  const ExperimentConfig cfg = load_config(opts.config);
  const Prepared p = prepare(cfg, std::nullopt, opts.unsafe);
  const VariantComparison cmp = compare_variants(p.setup);
  const int m = cmp.free.output_dim;

  const std::filesystem::path dir = opts.out.empty() ? std::filesystem::path(".") : opts.out;
  std::filesystem::create_directories(dir);

  Table tracking, input;
  tracking.columns = {"t"};
  input.columns = {"t"};
  for (int i = 1; i <= m; ++i) {
    const auto s = std::to_string(i);
    for (const char* stem : {"yref", "y_free", "y_deriv"}) tracking.columns.push_back(stem + s);
    input.columns.push_back("u_free" + s);
    input.columns.push_back("u_deriv" + s);
  }
  for (const char* c : {"funnel_radius", "norm_e_free", "norm_e_deriv"}) tracking.columns.push_back(c);

  const std::size_t n = std::min(cmp.free.rows.size(), cmp.deriv.rows.size());
  for (std::size_t k = 0; k < n; ++k) {
    const TraceRow& a = cmp.free.rows[k];
    const TraceRow& b = cmp.deriv.rows[k];
    const Vector yref = reference_eval(cfg.reference, a.t).y;
    std::vector<double> tr{a.t}, in{a.t};
    for (int i = 0; i < m; ++i) {
      tr.insert(tr.end(), {yref[i], a.y[i], b.y[i]});
      in.insert(in.end(), {a.u[i], b.u[i]});
    }
    tr.insert(tr.end(), {1.0 / funnel_eval(cfg.funnel, a.t).phi, a.e.norm(), b.e.norm()});
    tracking.rows.push_back(std::move(tr));
    input.rows.push_back(std::move(in));
  }
  write_table_csv(dir / "tracking.csv", tracking);
  write_table_csv(dir / "input.csv", input);

  out << "free: " << to_string(cmp.free.status) << "  deriv: " << to_string(cmp.deriv.status)
      << "  max_input_diff=" << format_double(cmp.max_input_diff)
      << "  max_output_diff=" << format_double(cmp.max_output_diff) << '\n';
  return cmp.both_feasible() ? kExitOk : kExitInfeasible;
}

int run_guarded(int (*cmd)(const CommandOptions&, std::ostream&), const CommandOptions& opts,
                std::ostream& out, std::ostream& err) {
  try {
    return cmd(opts, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const AssumptionViolation& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfeasibleDesign& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const NumericalBlowup& e) {
    err << "numerical blowup: " << e.what() << '\n';
    return kExitBlowup;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace zoh::cli
