#include "swaporder/document.hpp"
#include "swaporder/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace swaporder;

namespace {

constexpr const char* kLogical = R"({
  "schema": 1,
  "links": [{"capacity": 100, "success": 0.2}, {"capacity": 200, "success": 0.2}],
  "swap_probs": [0.5]
})";

constexpr const char* kPhysical = R"({
  "schema": 1,
  "links": [{"length_km": 40, "memory_pairs": 4},
            {"length_km": 60, "memory_pairs": 2, "attempt_rate": 900, "success_per_attempt": 0.01}],
  "swap_probs": [0.8],
  "hardware": {"attenuation_db_per_km": 0.25},
  "timing": {"coherence_time_s": 0.05, "herald_delay_s": 0.001},
  "allocation": {"budget": [6, 6, 6]}
})";

}  // namespace

TEST_CASE("logical document") {
  const PathDocument doc = parse_document(kLogical);
  REQUIRE(doc.is_logical());
  CHECK(doc.logical().link(1) == LinkSpec{200, 0.2});
  CHECK(doc.logical().swap_prob(1) == 0.5);
  CHECK_FALSE(doc.allocation.has_value());
  CHECK_THROWS_AS(doc.physical(), SchemaError);
  CHECK(parse_document(dump_document(doc)) == doc);
}

TEST_CASE("physical document") {
  const PathDocument doc = parse_document(kPhysical);
  REQUIRE_FALSE(doc.is_logical());
  const PhysicalPath& p = doc.physical();
  CHECK(p.links[0].length_km == 40.0);
  CHECK_FALSE(p.links[0].attempt_rate_per_s.has_value());
  CHECK(p.links[1].attempt_rate_per_s == 900.0);
  CHECK(p.hardware.attenuation_db_per_km == 0.25);
  CHECK(p.hardware.detector_efficiency == HardwareProfile{}.detector_efficiency);
  CHECK(p.timing.herald_delay_s == 0.001);
  REQUIRE(doc.allocation.has_value());
  CHECK(doc.allocation->budget == std::vector<std::int64_t>{6, 6, 6});
  CHECK_THROWS_AS(doc.logical(), SchemaError);
  CHECK(parse_document(dump_document(doc)) == doc);
  CHECK(parse_document(dump_document(doc, -1)) == doc);
}

TEST_CASE("logical document with allocation defaults capacity") {
  const PathDocument doc = parse_document(R"({"schema":1,
    "links":[{"success":0.3},{"success":0.4}], "swap_probs":[0.5],
    "allocation":{"budget":[4,6,4],"kappa":[2.0,3.0]}})");
  CHECK(doc.logical().link(0).capacity == 1);
  CHECK(doc.allocation->kappa == std::vector<double>{2.0, 3.0});
  CHECK(parse_document(dump_document(doc)) == doc);
}

TEST_CASE("schema errors") {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"links":[{"capacity":1,"success":0.5}],"swap_probs":[]})",
      R"({"schema":2,"links":[{"capacity":1,"success":0.5}],"swap_probs":[]})",
      R"({"schema":1,"links":[{"capacity":1,"success":0.5}],"swap_probs":[],"extra":1})",
      R"({"schema":1,"links":[{"capacity":1,"success":0.5,"color":"red"}],"swap_probs":[]})",
      R"({"schema":1,"links":[{"capacity":1,"success":1.5}],"swap_probs":[]})",
      R"({"schema":1,"links":[{"capacity":1,"success":0.5},{"capacity":1,"success":0.5}],"swap_probs":[]})",
      R"({"schema":1,"links":[{"success":0.5}],"swap_probs":[]})",
      R"({"schema":1,"links":[{"capacity":"3","success":0.5}],"swap_probs":[]})",
      R"({"schema":1,"links":[{"capacity":2,"success":0.5},{"length_km":3,"memory_pairs":1}],"swap_probs":[0.5]})",
      R"({"schema":1,"links":[{"capacity":2,"success":0.5}],"swap_probs":[],"timing":{}})",
      R"({"schema":1,"links":[{"capacity":2,"success":0.5}],"swap_probs":[],"allocation":{"budget":[2,2]}})",
      R"({"schema":1,"links":[{"capacity":2,"success":0.5}],"swap_probs":[],"allocation":{"budget":[2],"kappa":[1]}})",
      R"({"schema":1,"links":[{"length_km":3,"memory_pairs":1}],"swap_probs":[],"allocation":{"budget":[2,2],"kappa":[1]}})",
      R"({"schema":1,"links":[],"swap_probs":[]})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_document(text), SchemaError);
  }
}

TEST_CASE("load_document") {
  const auto file = std::filesystem::temp_directory_path() / "swaporder_doc_test.json";
  {
    std::ofstream out(file);
    out << kLogical;
  }
  CHECK(load_document(file) == parse_document(kLogical));
  std::filesystem::remove(file);
  CHECK_THROWS_AS(load_document(file), SchemaError);
}
