#pragma once

#include "swaporder/allocation.hpp"
#include "swaporder/estimator.hpp"
#include "swaporder/swap_engine.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace swaporder {

inline constexpr int kDocumentSchema = 1;

struct PhysicalPath {
  std::vector<PhysicalLink> links;
  std::vector<double> swap_probs;
  HardwareProfile hardware;
  TimingParams timing;

  friend bool operator==(const PhysicalPath&, const PhysicalPath&) = default;
};

/// Memory budget section of a document. `kappa` is required for logical
/// documents (capacity per memory pair) and absent for physical ones.
struct AllocationSection {
  std::vector<std::int64_t> budget;
  std::vector<double> kappa;

  friend bool operator==(const AllocationSection&, const AllocationSection&) = default;
};

/// A JSON path document. Exactly one of the logical form (links with
/// capacity/success) or the physical form (links with length_km/memory_pairs
/// plus hardware and timing).
struct PathDocument {
  std::variant<PathSpec, PhysicalPath> body;
  std::optional<AllocationSection> allocation;

  bool is_logical() const noexcept { return std::holds_alternative<PathSpec>(body); }
  /// Throws SchemaError for physical documents.
  const PathSpec& logical() const;
  const PhysicalPath& physical() const;

  friend bool operator==(const PathDocument&, const PathDocument&) = default;
};

/// Throws SchemaError on malformed JSON, unknown keys, or inconsistent counts.
PathDocument parse_document(std::string_view text);
PathDocument load_document(const std::filesystem::path& file);

/// Canonical UTF-8 JSON with "schema": 1; parse_document(dump_document(d)) == d.
std::string dump_document(const PathDocument& doc, int indent = 2);

}  // namespace swaporder
