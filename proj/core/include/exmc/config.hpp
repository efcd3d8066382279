#pragma once

#include <optional>
#include <string>

namespace exmc {

/// Variant switches selecting a concrete model instance.
/// eis/eos only matter under feat_exs; eoimode only under the GIC extension.
struct ModelConfig {
  bool feat_exs = false;
  bool eis = false;
  bool eos = false;
  bool sea_r = false;
  bool sea_w = false;
  bool ets2 = true;
  int eoimode = 0;
  bool gic_extension = false;
  std::string name = "default";

  static std::optional<ModelConfig> by_variant_name(const std::string& name);
};

}  // namespace exmc
