#pragma once

// Experiment configuration files (YAML, nested sections, row-major
// bracketed arrays).

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "zoh/controller.hpp"
#include "zoh/design.hpp"
#include "zoh/plant.hpp"
#include "zoh/signals.hpp"

namespace zoh::cli {

struct PlantSection {
  enum class Kind { MassOnCar, Matrices };
  Kind kind = Kind::MassOnCar;
  MassOnCarParams mass_on_car{};
  std::optional<Vector> eta0;
  // Populated for Kind::Matrices.
  Matrix r0, r1, s, gamma, q, p;
};

struct ControllerSection {
  double lambda = 0.7;
  LawVariant variant = LawVariant::DerivativeFree;
  AlphaSpec alpha{};
  std::optional<double> beta;
  std::optional<double> tau;
};

struct DesignSection {
  double beta_margin = 1.01;
  std::optional<double> f_max;
  std::optional<double> g_max;
  std::optional<double> g_min;
};

struct SimSection {
  double horizon = 2.0;
  int substeps = 20;
  int record_stride = 1;
};

struct OutputSection {
  std::string trace;
  std::string certificate;
};

struct ExperimentConfig {
  PlantSection plant;
  ReferenceSpec reference = ReferenceSpec::constant(Vector::Zero(1));
  FunnelSpec funnel = FunnelSpec::constant(1.0);
  ControllerSection controller;
  DesignSection design;
  SimSection sim;
  OutputSection output;

  std::shared_ptr<const LinearIOPlant> build_plant() const;
};

/// Throws ConfigError with a message of the form "<section.key>: <constraint>".
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

const char* to_string(LawVariant v);
LawVariant parse_variant(const std::string& s);

}  // namespace zoh::cli
