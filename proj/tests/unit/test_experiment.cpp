#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mtsf/experiment.hpp"

using namespace mtsf;

namespace {

ExperimentConfig small_fixed() {
  ExperimentConfig c;
  c.model = model::Thomas{};
  c.half_widths = {5.0, 5.0};
  c.replicates = 6;
  c.seed = 7;
  c.norms = {0.0, 1.0, 2.5};
  c.imax = 4;
  return c;
}

ExperimentConfig small_cv() {
  auto c = small_fixed();
  c.taper_mode = TaperMode::cv;
  c.replicates = 3;
  c.cv.nodes = {0.0, 2.0};
  c.cv.candidates = {1, 2, 3, 5};
  c.cv.pilot_imax = 3;
  c.cv.pair_spacing = 0.5;
  c.cv.radial_offsets = {-0.2, 0.2};
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("quantiles") {
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.05) == doctest::Approx(1.15));
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.95) == doctest::Approx(3.85));
  CHECK(quantile({5.0}, 0.3) == 5.0);
  CHECK_THROWS(quantile({}, 0.5));
  CHECK_THROWS(quantile({1.0}, 1.5));
}

TEST_CASE("records aggregate the replicate estimates") {
  const auto c = small_fixed();
  const auto res = run_experiment(c, 1);
  CHECK(res.model == "thomas");
  REQUIRE(res.records.size() == 3);
  REQUIRE(res.estimates.size() == 3);
  CHECK(res.selected.empty());
  for (std::size_t f = 0; f < 3; ++f) {
    const auto& e = res.estimates[f];
    REQUIRE(e.size() == 6);
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= 6.0;
    const auto& r = res.records[f];
    CHECK(r.mean == doctest::Approx(mean).epsilon(1e-14));
    CHECK(r.q05 == quantile(e, 0.05));
    CHECK(r.q95 == quantile(e, 0.95));
    CHECK(r.k_norm == c.norms[f]);
    CHECK(r.replicates == 6);
    CHECK(r.taper_mode == "fixed:4");
  }
  CHECK(res.records[0].theory == 6.0);

  auto one = c;
  one.replicates = 1;
  const auto single = run_experiment(one, 1);
  for (const auto& r : single.records) CHECK(r.q05 == r.mean);
  CHECK(single.estimates[1][0] == res.estimates[1][0]);
}

TEST_CASE("worker count does not change results") {
  for (const auto& c : {small_fixed(), small_cv()}) {
    const auto a = to_csv(run_experiment(c, 1));
    const auto b = to_csv(run_experiment(c, 3));
    CHECK(a == b);
  }
}

TEST_CASE("cross-validated tapers") {
  const auto c = small_cv();
  const auto res = run_experiment(c, 1);
  REQUIRE(res.selected.size() == 3);
  for (const auto& s : res.selected) {
    REQUIRE(s.size() == 2);
    for (int i : s) CHECK((i == 1 || i == 2 || i == 3 || i == 5));
  }
  for (const auto& r : res.records) CHECK(r.taper_mode == "cv");
}

TEST_CASE("csv output is frozen") {
  const auto csv = to_csv(run_experiment(small_fixed(), 1));
  CHECK(csv.rfind(std::string(kExperimentCsvHeader) + "\n", 0) == 0);
  CHECK(csv == slurp(std::string(MTSF_TEST_DATA) + "/thomas_small.csv"));
}

}
