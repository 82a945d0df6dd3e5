#include <iostream>

#include <CLI11.hpp>

#include "zoh/cli/commands.hpp"

using namespace zoh::cli;

int main(int argc, char** argv) {
  CLI::App app{"Sample-and-hold funnel controller: design, simulate, verify"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string variant;

  auto add_variant = [&](CLI::App* sub) {
    sub->add_option("--variant", variant, "Control law: free or deriv")
        ->check(CLI::IsMember({"free", "deriv"}));
  };

  auto* design = app.add_subcommand("design", "Compute design constants and a certificate");
  design->add_option("--config", opts.config, "Experiment configuration (YAML)")->required();
  design->add_option("--out", opts.out, "Certificate output path");
  design->add_flag("--unsafe", opts.unsafe, "Accept an explicit tau above tau_max");
  add_variant(design);

  auto* simulate = app.add_subcommand("simulate", "Run the closed loop and write a CSV trace");
  simulate->add_option("--config", opts.config, "Experiment configuration (YAML)")->required();
  simulate->add_option("--out", opts.out, "Trace CSV output path");
  simulate->add_flag("--unsafe", opts.unsafe, "Accept an explicit tau above tau_max");
  add_variant(simulate);

  auto* verify = app.add_subcommand("verify", "Check a trace against a certificate");
  verify->add_option("--trace", opts.trace, "Trace CSV")->required();
  verify->add_option("--certificate", opts.certificate, "Certificate YAML")->required();
  verify->add_option("--out", opts.out, "Key-value report output path");

  auto* sweep = app.add_subcommand("sweep", "Simulate over a parameter grid");
  sweep->add_option("--config", opts.config, "Experiment configuration (YAML)")->required();
  sweep->add_option("--grid", opts.grid, "Grid, e.g. \"tau=1e-3,2e-3;beta=5,10\"")->required();
  sweep->add_option("--out", opts.out, "Sweep CSV output path");
  add_variant(sweep);

  auto* compare = app.add_subcommand("compare", "Run both laws and write figure data");
  compare->add_option("--config", opts.config, "Experiment configuration (YAML)")->required();
  compare->add_option("--out", opts.out, "Output directory");
  compare->add_flag("--unsafe", opts.unsafe, "Accept an explicit tau above tau_max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (!variant.empty()) opts.variant = parse_variant(variant);

  int (*cmd)(const CommandOptions&, std::ostream&) = nullptr;
  if (design->parsed()) cmd = cmd_design;
  if (simulate->parsed()) cmd = cmd_simulate;
  if (verify->parsed()) cmd = cmd_verify;
  if (sweep->parsed()) cmd = cmd_sweep;
  if (compare->parsed()) cmd = cmd_compare;
  return run_guarded(cmd, opts, std::cout, std::cerr);
}
