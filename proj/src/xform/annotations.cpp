// SPDX-License-Identifier: Apache-2.0
#include "nail/xform/annotations.hpp"

#include "json.hpp"

namespace nail::xform {

using ordered_json = nlohmann::ordered_json;

std::vector<FaultAnnotation> annotations_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    fail(ErrKind::Parse, std::string("annotation JSON: ") + e.what());
  }
  std::vector<FaultAnnotation> out;
  try {
    const auto& chains = j.at("chains");
    if (!chains.is_object()) fail(ErrKind::Parse, "annotation JSON: \"chains\" must be an object");
    for (const auto& [chainId, arr] : chains.items()) {
      if (!arr.is_array())
        fail(ErrKind::Parse, "annotation JSON: chain '" + chainId + "' must be an array");
      for (const auto& ja : arr) {
        FaultAnnotation a;
        a.chainId = chainId;
        a.target = ja.at("target").get<std::string>();
        a.kind = inject::injector_kind_from_name(ja.at("injector").get<std::string>());
        if (ja.contains("condition")) a.condition = ja.at("condition").get<std::string>();
        if (ja.contains("id")) a.componentId = ja.at("id").get<std::string>();
        out.push_back(std::move(a));
      }
    }
  } catch (const ordered_json::exception& e) {
    fail(ErrKind::Parse, std::string("annotation JSON: ") + e.what());
  }
  return out;
}

}  // namespace nail::xform
