#include <doctest.h>

#include <sstream>

#include "slidecard/report.hpp"

using namespace slidecard;

TEST_CASE("empty report renders the header only") {
  CHECK(report_to_csv({}) == "window_end_slice,aip,estimate,flags\n");
  DetectionReport empty;
  empty.window_end_slice = 3;
  CHECK(report_to_csv({empty}) == "window_end_slice,aip,estimate,flags\n");
}

TEST_CASE("rows are ordered estimate desc, ties by aip asc, two decimals") {
  DetectionReport r;
  r.window_end_slice = 299;
  r.entries = {
      {0x0A000002, 1536.0, false},
      {0x0A000009, 2000.5, false},
      {0x0A000001, 1536.0, false},
  };
  CHECK(report_to_csv({r}) ==
        "window_end_slice,aip,estimate,flags\n"
        "299,10.0.0.9,2000.50,\n"
        "299,10.0.0.1,1536.00,\n"
        "299,10.0.0.2,1536.00,\n");
}

TEST_CASE("flags column carries partial and saturation markers") {
  DetectionReport r;
  r.window_end_slice = 5;
  r.partial = true;
  r.entries = {{0x0A000001, 100.0, true}};
  const std::string csv = report_to_csv({r});
  CHECK(csv.find("5,10.0.0.1,100.00,partial|saturated\n") != std::string::npos);
}

TEST_CASE("csv reader accepts reports and truth files alike") {
  std::istringstream report_in(
      "window_end_slice,aip,estimate,flags\n"
      "7,10.0.0.1,123.45,partial\n"
      "8,10.0.0.2,99.00,\n");
  auto rows = read_report_csv(report_in, "r");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].window_end_slice == 7);
  CHECK(rows[0].aip == 0x0A000001);
  CHECK(rows[0].value == doctest::Approx(123.45));
  CHECK(rows[0].flags == "partial");

  std::istringstream truth_in(
      "window_end_slice,aip,exact_cardinality\n"
      "7,10.0.0.1,2048\n");
  auto truth = read_report_csv(truth_in, "t");
  REQUIRE(truth.size() == 1);
  CHECK(truth[0].value == 2048.0);
}
