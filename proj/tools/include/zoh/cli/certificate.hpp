#pragma once

// Parameter certificates: everything cmd_verify needs to re-check a trace.

#include <filesystem>
#include <string>

#include "zoh/controller.hpp"
#include "zoh/design.hpp"
#include "zoh/signals.hpp"

namespace zoh::cli {

struct Certificate {
  DesignParameters params;
  double tau = 0.0;
  bool unsafe = false;  // tau exceeds tau_max or the design is infeasible
  LawVariant variant = LawVariant::DerivativeFree;
  FunnelSpec funnel = FunnelSpec::constant(1.0);
  ReferenceSpec reference = ReferenceSpec::constant(Vector::Zero(1));
  double y_bound = 0.0;
  double ydot_bound = 0.0;
  double eta_bound = 0.0;
  bool bounds_overridden = false;
};

std::string certificate_to_yaml(const Certificate& cert);
Certificate certificate_from_yaml(const std::string& text);

void write_certificate(const std::filesystem::path& path, const Certificate& cert);
Certificate read_certificate(const std::filesystem::path& path);

}  // namespace zoh::cli
