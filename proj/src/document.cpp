#include "swaporder/document.hpp"

#include "swaporder/errors.hpp"

#if __has_include(<json.hpp>)
#include <json.hpp>
#else
#include <nlohmann/json.hpp>
#endif

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace swaporder {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) {
    throw SchemaError(where + ": expected an object");
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!names.contains(item.key())) {
      throw SchemaError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
T get_required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) {
    throw SchemaError(where + ": missing '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(where + ": bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
void get_optional(const json& j, const char* key, T& out, const std::string& where) {
  if (j.contains(key)) {
    out = get_required<T>(j, key, where);
  }
}

PathSpec parse_logical(const json& root, bool capacity_optional) {
  std::vector<LinkSpec> links;
  for (std::size_t i = 0; i < root.at("links").size(); ++i) {
    const json& link = root.at("links")[i];
    const std::string where = "links[" + std::to_string(i) + "]";
    require_object(link, where);
    reject_unknown(link, {"capacity", "success"}, where);
    LinkSpec spec;
    if (capacity_optional) {
      get_optional(link, "capacity", spec.capacity, where);
    } else {
      spec.capacity = get_required<std::int64_t>(link, "capacity", where);
    }
    spec.success = get_required<double>(link, "success", where);
    links.push_back(spec);
  }
  return PathSpec(std::move(links), get_required<std::vector<double>>(root, "swap_probs", "document"));
}

PhysicalPath parse_physical(const json& root) {
  PhysicalPath physical;
  for (std::size_t i = 0; i < root.at("links").size(); ++i) {
    const json& link = root.at("links")[i];
    const std::string where = "links[" + std::to_string(i) + "]";
    require_object(link, where);
    reject_unknown(link, {"length_km", "memory_pairs", "attempt_rate", "success_per_attempt"},
                   where);
    PhysicalLink spec;
    spec.length_km = get_required<double>(link, "length_km", where);
    spec.memory_pairs = get_required<std::int64_t>(link, "memory_pairs", where);
    if (link.contains("attempt_rate")) {
      spec.attempt_rate_per_s = get_required<double>(link, "attempt_rate", where);
    }
    if (link.contains("success_per_attempt")) {
      spec.success_per_attempt = get_required<double>(link, "success_per_attempt", where);
    }
    spec.validate();
    physical.links.push_back(spec);
  }
  physical.swap_probs = get_required<std::vector<double>>(root, "swap_probs", "document");
  if (physical.swap_probs.size() + 1 != physical.links.size()) {
    throw SchemaError("document: swap_probs must have one entry fewer than links");
  }
  for (double q : physical.swap_probs) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw SchemaError("document: swap probability outside [0, 1]");
    }
  }

  if (root.contains("hardware")) {
    const json& hw = root.at("hardware");
    require_object(hw, "hardware");
    reject_unknown(hw,
                   {"attenuation_db_per_km", "light_speed_km_per_s", "detector_efficiency",
                    "memory_efficiency", "attempt_latency_factor", "protocol_prefactor"},
                   "hardware");
    auto& h = physical.hardware;
    get_optional(hw, "attenuation_db_per_km", h.attenuation_db_per_km, "hardware");
    get_optional(hw, "light_speed_km_per_s", h.light_speed_km_per_s, "hardware");
    get_optional(hw, "detector_efficiency", h.detector_efficiency, "hardware");
    get_optional(hw, "memory_efficiency", h.memory_efficiency, "hardware");
    get_optional(hw, "attempt_latency_factor", h.attempt_latency_factor, "hardware");
    get_optional(hw, "protocol_prefactor", h.protocol_prefactor, "hardware");
    h.validate();
  }
  if (root.contains("timing")) {
    const json& tm = root.at("timing");
    require_object(tm, "timing");
    reject_unknown(tm, {"coherence_time_s", "herald_delay_s", "app_delay_s"}, "timing");
    auto& t = physical.timing;
    get_optional(tm, "coherence_time_s", t.coherence_time_s, "timing");
    get_optional(tm, "herald_delay_s", t.herald_delay_s, "timing");
    get_optional(tm, "app_delay_s", t.app_delay_s, "timing");
    if (t.coherence_time_s < 0.0 || t.herald_delay_s < 0.0 || t.app_delay_s < 0.0) {
      throw SchemaError("timing: times must be nonnegative");
    }
  }
  return physical;
}

PathDocument parse_root(const json& root) {
  require_object(root, "document");
  reject_unknown(root, {"schema", "links", "swap_probs", "hardware", "timing", "allocation"},
                 "document");
  const int schema = get_required<int>(root, "schema", "document");
  if (schema != kDocumentSchema) {
    throw SchemaError("document: unsupported schema " + std::to_string(schema));
  }
  if (!root.contains("links") || !root.at("links").is_array() || root.at("links").empty()) {
    throw SchemaError("document: 'links' must be a nonempty array");
  }

  bool any_logical = false;
  bool any_physical = false;
  for (const json& link : root.at("links")) {
    require_object(link, "links[]");
    any_logical = any_logical || link.contains("capacity") || link.contains("success");
    any_physical = any_physical || link.contains("length_km") || link.contains("memory_pairs");
  }
  if (any_logical == any_physical) {
    throw SchemaError("document: links must all be logical (capacity, success) or all physical "
                      "(length_km, memory_pairs)");
  }

  std::optional<AllocationSection> allocation;
  if (root.contains("allocation")) {
    const json& a = root.at("allocation");
    require_object(a, "allocation");
    reject_unknown(a, {"budget", "kappa"}, "allocation");
    AllocationSection section;
    section.budget = get_required<std::vector<std::int64_t>>(a, "budget", "allocation");
    get_optional(a, "kappa", section.kappa, "allocation");
    const std::size_t n = root.at("links").size();
    if (section.budget.size() != n + 1) {
      throw SchemaError("allocation: budget needs one entry per node");
    }
    if (any_logical && section.kappa.size() != n) {
      throw SchemaError("allocation: logical documents need one kappa per link");
    }
    if (any_physical && !section.kappa.empty()) {
      throw SchemaError("allocation: kappa is only meaningful for logical documents");
    }
    allocation = std::move(section);
  }

  if (any_logical) {
    if (root.contains("hardware") || root.contains("timing")) {
      throw SchemaError("document: hardware/timing belong to the physical form");
    }
    try {
      return {parse_logical(root, allocation.has_value()), allocation};
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("document: ") + e.what());
    }
  }
  try {
    return {parse_physical(root), allocation};
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("document: ") + e.what());
  }
}

}  // namespace

const PathSpec& PathDocument::logical() const {
  if (const auto* path = std::get_if<PathSpec>(&body)) {
    return *path;
  }
  throw SchemaError("expected a logical path document (links with capacity and success)");
}

const PhysicalPath& PathDocument::physical() const {
  if (const auto* path = std::get_if<PhysicalPath>(&body)) {
    return *path;
  }
  throw SchemaError("expected a physical path document (links with length_km and memory_pairs)");
}

PathDocument parse_document(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return parse_root(root);
}

PathDocument load_document(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw SchemaError("cannot open " + file.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

std::string dump_document(const PathDocument& doc, int indent) {
  json root;
  root["schema"] = kDocumentSchema;
  if (const auto* path = std::get_if<PathSpec>(&doc.body)) {
    json links = json::array();
    for (const auto& link : path->links()) {
      links.push_back({{"capacity", link.capacity}, {"success", link.success}});
    }
    root["links"] = std::move(links);
    root["swap_probs"] = path->swap_probs();
  } else {
    const auto& physical = std::get<PhysicalPath>(doc.body);
    json links = json::array();
    for (const auto& link : physical.links) {
      json j{{"length_km", link.length_km}, {"memory_pairs", link.memory_pairs}};
      if (link.attempt_rate_per_s) {
        j["attempt_rate"] = *link.attempt_rate_per_s;
      }
      if (link.success_per_attempt) {
        j["success_per_attempt"] = *link.success_per_attempt;
      }
      links.push_back(std::move(j));
    }
    root["links"] = std::move(links);
    root["swap_probs"] = physical.swap_probs;
    const auto& h = physical.hardware;
    root["hardware"] = {{"attenuation_db_per_km", h.attenuation_db_per_km},
                        {"light_speed_km_per_s", h.light_speed_km_per_s},
                        {"detector_efficiency", h.detector_efficiency},
                        {"memory_efficiency", h.memory_efficiency},
                        {"attempt_latency_factor", h.attempt_latency_factor},
                        {"protocol_prefactor", h.protocol_prefactor}};
    const auto& t = physical.timing;
    root["timing"] = {{"coherence_time_s", t.coherence_time_s},
                      {"herald_delay_s", t.herald_delay_s},
                      {"app_delay_s", t.app_delay_s}};
  }
  if (doc.allocation) {
    json a{{"budget", doc.allocation->budget}};
    if (!doc.allocation->kappa.empty()) {
      a["kappa"] = doc.allocation->kappa;
    }
    root["allocation"] = std::move(a);
  }
  return root.dump(indent) + "\n";
}

}  // namespace swaporder
