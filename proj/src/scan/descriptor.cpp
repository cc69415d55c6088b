// SPDX-License-Identifier: Apache-2.0
#include "nail/scan/descriptor.hpp"

#include <set>

#include "json.hpp"

namespace nail::scan {

using nlohmann::json;

const char* component_kind_name(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Conditioner: return "conditioner";
    case ComponentKind::StuckAt: return "stuckAt";
    case ComponentKind::LfsrFlip: return "lfsrFlip";
    case ComponentKind::CycleWindow: return "cycleWindow";
  }
  return "?";
}

ComponentKind component_kind_from_name(const std::string& name) {
  if (name == "conditioner") return ComponentKind::Conditioner;
  if (name == "stuckAt") return ComponentKind::StuckAt;
  if (name == "lfsrFlip") return ComponentKind::LfsrFlip;
  if (name == "cycleWindow") return ComponentKind::CycleWindow;
  fail(ErrKind::Validate, "unknown component kind '" + name + "'");
}

unsigned ComponentEntry::width() const {
  unsigned w = 0;
  for (const auto& f : fields) w += f.width;
  return w;
}

const ComponentEntry* ScanChainDescriptor::find_component(
    const std::string& componentId) const {
  for (const auto& e : entries)
    if (e.componentId == componentId) return &e;
  return nullptr;
}

const FieldDesc* ScanChainDescriptor::find_field(
    const std::string& componentId, const std::string& fieldName) const {
  const auto* e = find_component(componentId);
  if (e == nullptr) return nullptr;
  for (const auto& f : e->fields)
    if (f.name == fieldName) return &f;
  return nullptr;
}

void assign_offsets(ScanChainDescriptor& d) {
  unsigned at = 0;
  for (auto& e : d.entries) {
    for (auto& f : e.fields) {
      f.offset = at;
      at += f.width;
    }
  }
  d.totalWidth = at;
}

void check_descriptor(const ScanChainDescriptor& d) {
  if (d.chainId.empty()) fail(ErrKind::Validate, "descriptor has empty chainId");
  std::set<std::string> ids;
  unsigned at = 0;
  for (const auto& e : d.entries) {
    if (e.componentId.empty())
      fail(ErrKind::Validate, "descriptor entry has empty componentId");
    if (!ids.insert(e.componentId).second)
      fail(ErrKind::Validate,
           "duplicate componentId '" + e.componentId + "' in chain '" + d.chainId + "'");
    std::set<std::string> fieldNames;
    for (const auto& f : e.fields) {
      if (f.name.empty())
        fail(ErrKind::Validate, "field with empty name in '" + e.componentId + "'");
      if (!fieldNames.insert(f.name).second)
        fail(ErrKind::Validate,
             "duplicate field '" + f.name + "' in '" + e.componentId + "'");
      if (f.width < 1 || f.width > kMaxWidth)
        fail(ErrKind::Validate, "field '" + e.componentId + "." + f.name +
                                    "' has width " + std::to_string(f.width));
      if (f.offset != at)
        fail(ErrKind::Validate, "field '" + e.componentId + "." + f.name +
                                    "' has offset " + std::to_string(f.offset) +
                                    "; expected " + std::to_string(at));
      at += f.width;
    }
  }
  if (d.totalWidth != at)
    fail(ErrKind::Validate, "descriptor totalWidth " + std::to_string(d.totalWidth) +
                                " does not match field sum " + std::to_string(at));
}

std::string descriptor_to_json(const ScanChainDescriptor& d) {
  check_descriptor(d);
  json j;
  j["chainId"] = d.chainId;
  j["totalWidth"] = d.totalWidth;
  j["entries"] = json::array();
  for (const auto& e : d.entries) {
    json je;
    je["componentId"] = e.componentId;
    je["kind"] = component_kind_name(e.kind);
    je["fields"] = json::array();
    for (const auto& f : e.fields)
      je["fields"].push_back({{"name", f.name}, {"width", f.width}, {"offset", f.offset}});
    j["entries"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

ScanChainDescriptor descriptor_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrKind::Parse, std::string("descriptor JSON: ") + e.what());
  }
  ScanChainDescriptor d;
  try {
    d.chainId = j.at("chainId").get<std::string>();
    d.totalWidth = j.at("totalWidth").get<unsigned>();
    for (const auto& je : j.at("entries")) {
      ComponentEntry e;
      e.componentId = je.at("componentId").get<std::string>();
      e.kind = component_kind_from_name(je.at("kind").get<std::string>());
      for (const auto& jf : je.at("fields")) {
        FieldDesc f;
        f.name = jf.at("name").get<std::string>();
        f.width = jf.at("width").get<unsigned>();
        f.offset = jf.at("offset").get<unsigned>();
        e.fields.push_back(std::move(f));
      }
      d.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    fail(ErrKind::Parse, std::string("descriptor JSON: ") + e.what());
  }
  check_descriptor(d);
  return d;
}

}  // namespace nail::scan
