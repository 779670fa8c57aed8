#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <random>

#include "dfadma/shuffletest.hpp"
#include "dfadma/synth.hpp"

using namespace dfadma;

namespace {

ReturnSeries series_of(const Eigen::VectorXd& v) {
  ReturnSeries r;
  r.values = v;
  std::chrono::sys_days day{Date{std::chrono::year{2000}, std::chrono::January, std::chrono::day{1}}};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    r.dates.emplace_back(day);
    day += std::chrono::days{1};
  }
  return r;
}

Eigen::VectorXd gaussian(Eigen::Index n, std::uint64_t seed) { return standard_normals(static_cast<std::size_t>(n), seed); }

}  // namespace

TEST_CASE("shuffle: singleton and multiset preservation") {
  const auto one = series_of(Eigen::VectorXd::Constant(1, 0.3));
  CHECK(shuffle(one, 9).values == one.values);

  const auto r = series_of(gaussian(257, 1));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = shuffle(r, seed);
    CHECK(s.dates == r.dates);
    std::vector<double> a(r.values.begin(), r.values.end()), b(s.values.begin(), s.values.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("shuffle: permutations of three elements are uniform") {
  const auto r = series_of(Eigen::Vector3d(1, 2, 3));
  std::map<std::array<double, 3>, int> counts;
  const int draws = 6000;
  for (int i = 0; i < draws; ++i) {
    const auto s = shuffle(r, derive_seed(424242, static_cast<std::uint64_t>(i)));
    ++counts[{s.values(0), s.values(1), s.values(2)}];
  }
  REQUIRE(counts.size() == 6);
  double chi2 = 0.0;
  for (const auto& [perm, c] : counts) {
    CHECK(std::abs(static_cast<double>(c) / draws - 1.0 / 6.0) <= 0.02);
    chi2 += std::pow(c - draws / 6.0, 2) / (draws / 6.0);
  }
  CHECK(chi2 < 20.52);  // chi-square(5) upper 0.001 point
}

TEST_CASE("derive_seed separates replicates and attempts") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(7, 3, 2) == derive_seed(7, 3, 2));
}

TEST_CASE("two_tailed_p") {
  const std::vector<double> ens{0.45, 0.50, 0.55};
  CHECK(two_tailed_p(0.52, ens) == 2.0 / 3.0);

  const std::vector<double> generic{0.41, 0.47, 0.52, 0.58, 0.57};
  const double mean = (0.41 + 0.47 + 0.52 + 0.58 + 0.57) / 5.0;
  CHECK(two_tailed_p(mean, generic) == 1.0);

  const std::vector<double> single{0.5};
  for (double h : {0.1, 0.5, 0.9}) {
    const double p = two_tailed_p(h, single);
    CHECK((p == 0.0 || p == 1.0));
  }
  CHECK_THROWS_AS(two_tailed_p(0.5, std::vector<double>{}), InsufficientDataError);
}

TEST_CASE("property: p is non-increasing in |H - mean|") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.5, 0.03);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> ens(200);
    for (auto& v : ens) v = g(rng);
    const double mean = std::accumulate(ens.begin(), ens.end(), 0.0) / 200.0;
    double prev = 2.0;
    for (double d = 0.0; d < 0.15; d += 0.001) {
      const double p = two_tailed_p(mean + d, ens);
      CHECK(p <= prev);
      CHECK(p == two_tailed_p(mean - d, ens));
      prev = p;
    }
    CHECK(prev == 0.0);
  }
}

TEST_CASE("property: p over ensemble members steps through the rank grid") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 1; n <= 12; ++n) {
    std::vector<double> ens(n);
    for (auto& v : ens) v = u(rng);
    std::vector<double> ps;
    for (double h : ens) ps.push_back(two_tailed_p(h, ens));
    std::sort(ps.begin(), ps.end());
    // Deviations are distinct almost surely: p values are exactly 0, 1/n, ..., (n-1)/n.
    for (std::size_t k = 0; k < n; ++k)
      CHECK(ps[k] == static_cast<double>(k) / static_cast<double>(n));
  }
}

TEST_CASE("quantile_sorted interpolates between closest ranks") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.025) == doctest::Approx(1.075));
  CHECK(quantile_sorted(v, 0.975) == doctest::Approx(3.925));
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  CHECK(quantile_sorted(std::vector<double>{7.0}, 0.5) == 7.0);
}

TEST_CASE("efficiency_test: consistency and determinism across thread counts") {
  const auto r = series_of(gaussian(2048, 77));
  const auto grid = default_scales(r.size());
  for (const Method m : {Method{DmaMethod{0.0}}, Method{DmaMethod{0.5}}, Method{DfaMethod{1}}}) {
    for (const auto policy : {RangePolicy::full(), RangePolicy::automatic(15)}) {
      ShuffleTestOptions one{200, 99, 1};
      ShuffleTestOptions many{200, 99, 4};
      const auto a = efficiency_test(r, m, grid, policy, one);
      const auto b = efficiency_test(r, m, grid, policy, many);
      CHECK(a.ensemble == b.ensemble);
      CHECK(a.p == b.p);
      CHECK(a.fit.H == b.fit.H);

      CHECK(a.ensemble.size() == 200);
      CHECK(two_tailed_p(a.fit.H, a.ensemble) == a.p);
      CHECK(a.q025 <= a.mean_hs);
      CHECK(a.mean_hs <= a.q975);
      CHECK(a.p >= 0.0);
      CHECK(a.p <= 1.0);
      CHECK(a.rejected == (a.p < 0.01));
      CHECK(a.redraws == 0);

      // Replicates use the original's range.
      const auto ff = fluctuation(profile(r), grid, m);
      CHECK(a.range == resolve_range(ff, policy));
      const auto fit_grid = grid.restricted(a.range.lo, a.range.hi);
      const auto replay = shuffle(r, derive_seed(99, 17));
      CHECK(estimate_exponent(replay.values, m, fit_grid, a.range) == a.ensemble[17]);
    }
  }
}

TEST_CASE("efficiency_test: different seeds give different ensembles") {
  const auto r = series_of(gaussian(1024, 5));
  const auto grid = default_scales(r.size());
  const auto a = efficiency_test(r, DfaMethod{1}, grid, RangePolicy::full(), {50, 1, 1});
  const auto b = efficiency_test(r, DfaMethod{1}, grid, RangePolicy::full(), {50, 2, 1});
  CHECK(a.ensemble != b.ensemble);
  CHECK(a.fit.H == b.fit.H);
}

TEST_CASE("efficiency_test: degenerate inputs") {
  const auto flat = series_of(Eigen::VectorXd::Zero(1024));
  const auto grid = default_scales(flat.size());
  CHECK_THROWS_AS(efficiency_test(flat, DfaMethod{1}, grid, RangePolicy::full(), {10, 1, 1}),
                  DegenerateInputError);
  CHECK_THROWS_AS(shuffle_ensemble(flat.values, DfaMethod{1}, grid, {grid.front(), grid.back()},
                                   10, 1, 1),
                  NumericalError);
  const auto r = series_of(gaussian(1024, 5));
  CHECK_THROWS_AS(efficiency_test(r, DfaMethod{1}, grid, RangePolicy::full(), {0, 1, 1}), ConfigError);
}

TEST_CASE("efficiency_test: single replicate") {
  const auto r = series_of(gaussian(1024, 8));
  const auto res = efficiency_test(r, DmaMethod{0.5}, default_scales(r.size()), RangePolicy::full(),
                                   {1, 3, 1});
  CHECK((res.p == 0.0 || res.p == 1.0));
  CHECK(res.mean_hs == res.ensemble[0]);
}

TEST_CASE("summary line") {
  ShuffleTestResult r;
  r.method = "CDMA";
  r.fit.H = 0.401;
  r.mean_hs = 0.497;
  r.p = 0.001;
  r.rejected = true;
  const auto line = summary_line(r);
  CHECK(line.find("CDMA") != std::string::npos);
  CHECK(line.find("REJECTED") != std::string::npos);
  CHECK(line.find("p=0.0010") != std::string::npos);
}
