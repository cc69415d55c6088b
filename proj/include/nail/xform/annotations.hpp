// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nail/inject/injectors.hpp"

namespace nail::xform {

// One fault-injection request: reroute `target` through an injector of the
// given kind, optionally gated by a condition, on scan chain `chainId`.
struct FaultAnnotation {
  std::string target;
  inject::InjectorKind kind = inject::InjectorKind::StuckAt;
  std::optional<std::string> condition;
  std::string chainId;
  std::string componentId;  // empty: defaults to the target's leaf name

  bool operator==(const FaultAnnotation&) const = default;
};

// Accepts {"chains": {"<chainId>": [{"target": ..., "injector": ...,
// "condition"?: ..., "id"?: ...}]}}. Chains keep file order; annotations keep
// array order within a chain.
std::vector<FaultAnnotation> annotations_from_json(const std::string& text);

}  // namespace nail::xform
