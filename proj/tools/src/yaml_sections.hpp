#pragma once

#include <yaml-cpp/yaml.h>

#include "zoh/signals.hpp"

namespace zoh::cli::detail {

FunnelSpec parse_funnel(const YAML::Node& n);
ReferenceSpec parse_reference(const YAML::Node& n);

void emit_funnel(YAML::Emitter& out, const FunnelSpec& f);
void emit_reference(YAML::Emitter& out, const ReferenceSpec& r);

}  // namespace zoh::cli::detail
