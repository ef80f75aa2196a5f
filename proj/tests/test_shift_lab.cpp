#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "krglm/error.hpp"
#include "krglm/shift_lab.hpp"

using namespace krglm;

TEST_CASE("synthetic mixture masses") {
  for (std::size_t n : {1000u, 4000u}) {
    const SyntheticScenario sc{n, 0.4, 21};
    const auto s = gen_synthetic(sc);
    REQUIRE(s.source.rows() == n);
    REQUIRE(s.target_x.rows() == n);
    const double b = std::pow(static_cast<double>(n), 0.4);
    const double p = b / (b + 1.0);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
    double src_low = 0, tgt_low = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = s.source(i, 0), x0 = s.target_x(i, 0);
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
      src_low += x < 0.5;
      tgt_low += x0 < 0.5;
      CHECK(s.target_truth[i] == synthetic_truth(x0));
      CHECK(std::abs(s.target_truth[i]) <= 1.5);
      const double y = s.source.responses()[i];
      CHECK((y == 0.0 || y == 1.0));
    }
    CHECK(std::abs(src_low / n - p) <= 4 * se);
    CHECK(std::abs(tgt_low / n - (1 - p)) <= 4 * se);
  }
  CHECK(synthetic_truth(0.0) == 1.5);
  CHECK(synthetic_truth(0.5) == doctest::Approx(-1.5));
  CHECK_THROWS_AS(gen_synthetic({7, 0.4, 1}), InputError);
  CHECK_THROWS_AS(gen_synthetic({0, 0.4, 1}), InputError);
}

TEST_CASE("no shift gives uniform covariates") {
  const std::size_t n = 4000;
  const auto s = gen_synthetic({n, 0.0, 3});
  for (const Dataset* d : {&s.source, &s.target_x}) {
    std::vector<double> x(d->covariates());
    std::sort(x.begin(), x.end());
    double ks = 0;
    for (std::size_t i = 0; i < n; ++i)
      ks = std::max({ks, std::abs(x[i] - double(i) / n), std::abs(x[i] - double(i + 1) / n)});
    CHECK(ks <= 1.95 / std::sqrt(double(n)));
  }

  // responses follow the logistic link: frequency of y = 1 near x = 0 vs x = 1/2
  double hi = 0, hi_n = 0, lo = 0, lo_n = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.source(i, 0), y = s.source.responses()[i];
    if (x < 0.05 || x > 0.95) hi += y, ++hi_n;
    if (std::abs(x - 0.5) < 0.05) lo += y, ++lo_n;
  }
  CHECK(hi / hi_n > 0.75);
  CHECK(lo / lo_n < 0.25);
}

TEST_CASE("fresh target samples") {
  const SyntheticScenario sc{2000, 0.4, 5};
  const auto [x, t] = synthetic_target_sample(sc, 500, 77);
  CHECK(x.rows() == 500);
  for (std::size_t i = 0; i < 500; ++i) CHECK(t[i] == synthetic_truth(x(i, 0)));
  const auto again = synthetic_target_sample(sc, 500, 77);
  CHECK(again.first.covariates() == x.covariates());
}

TEST_CASE("rejection split") {
  const auto data = Dataset::from_rows({{0.0, 5.0}, {0.5, 1.0}, {10.0, 2.0}, {0.2, 0.0}},
                                       std::vector<double>{0, 1, 0, 1});
  const auto s = rejection_split(data, {3.0, 0}, 4);
  CHECK(s.id_rows.size() + s.ood_rows.size() == 4);
  CHECK(std::find(s.id_rows.begin(), s.id_rows.end(), 0u) != s.id_rows.end());   // the minimum
  CHECK(std::find(s.ood_rows.begin(), s.ood_rows.end(), 2u) != s.ood_rows.end());  // 100 / 3 > 1
  CHECK(s.id.rows() == s.id_rows.size());
  CHECK(s.id.has_responses());

  const auto none = rejection_split(data, {1e9, 0}, 4);
  CHECK(none.ood_rows.empty());

  // pivot on the second column: row 3 holds the minimum there
  const auto other = rejection_split(data, {3.0, 1}, 4);
  CHECK(std::find(other.id_rows.begin(), other.id_rows.end(), 3u) != other.id_rows.end());
  CHECK(std::find(other.ood_rows.begin(), other.ood_rows.end(), 0u) != other.ood_rows.end());

  CHECK_THROWS_AS(rejection_split(data, {0.0, 0}, 1), DomainError);
  CHECK_THROWS_AS(rejection_split(data, {3.0, 2}, 1), InputError);
}

TEST_CASE("rejection probabilities follow the squared distance") {
  const std::size_t n = 40000;
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> unif(0.0, 3.0);
  std::vector<std::vector<double>> rows(n);
  for (auto& r : rows) r = {unif(gen)};
  rows[0] = {0.0};
  const auto data = Dataset::from_rows(rows);
  const auto s = rejection_split(data, {3.0, 0}, 8);
  const int bins = 6;
  std::vector<double> hits(bins), count(bins), center(bins);
  for (int b = 0; b < bins; ++b) center[b] = (b + 0.5) * 0.25;
  for (std::size_t i = 0; i < n; ++i) {
    const int b = static_cast<int>(data(i, 0) / 0.25);
    if (b < bins) ++count[b];
  }
  for (std::size_t i : s.ood_rows) {
    const int b = static_cast<int>(data(i, 0) / 0.25);
    if (b < bins) ++hits[b];
  }
  for (int b = 0; b < bins; ++b) {
    // mean of x^2/3 over the bin [a, a + 0.25]
    const double a = b * 0.25, e = a + 0.25;
    const double p = (e * e * e - a * a * a) / (3.0 * 0.25) / 3.0;
    const double se = std::sqrt(p * (1 - p) / count[b]);
    CHECK(std::abs(hits[b] / count[b] - p) <= 4 * se + 1e-12);
  }
}

TEST_CASE("excess risk") {
  const std::vector<double> s{2.0}, zero{0.0};
  // log(1 + e^2) - log 2 - 1
  CHECK(excess_risk(s, zero, Family::Logistic) ==
        doctest::Approx(0.433780830483027187).epsilon(1e-14));
  CHECK(excess_risk(std::vector<double>{1.0}, zero, Family::Poisson) ==
        doctest::Approx(0.718281828459045235).epsilon(1e-14));
  CHECK(excess_risk(std::vector<double>{1.0, 3.0}, std::vector<double>{0.0, 1.0},
                    Family::Gaussian) == doctest::Approx(1.25));
  CHECK(excess_risk(s, s, Family::Logistic) == 0.0);
  CHECK_THROWS_AS(excess_risk(s, std::vector<double>{}, Family::Logistic), InputError);
}

TEST_CASE("effective sample size") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> xs(30), xt(20);
  for (double& v : xs) v = unif(gen);
  for (double& v : xt) v = unif(gen) + 2.0;
  const auto src = Dataset::column(xs), tgt = Dataset::column(xt);

  // scalar linear kernel: theta = mean(x0^2) / (sum x^2 + c)
  double ss = 0, st = 0;
  for (double v : xs) ss += v * v;
  for (double v : xt) st += v * v;
  for (double c : {0.5, 1.0, 4.0}) {
    const double expect = std::min(30.0, (ss + c) / (st / 20.0));
    CHECK(effective_sample_size(src, tgt, Kernel::linear(), c) ==
          doctest::Approx(expect).epsilon(1e-8));
  }

  // scaling the target by 2 divides the uncapped value by 4
  std::vector<double> xt2(xt);
  for (double& v : xt2) v *= 2.0;
  const double base = effective_sample_size(src, tgt, Kernel::linear(), 1.0);
  CHECK(effective_sample_size(src, Dataset::column(xt2), Kernel::linear(), 1.0) ==
        doctest::Approx(base / 4.0).epsilon(1e-8));

  // no shift: capped at n
  for (Kernel k : {Kernel::linear(), Kernel::affine(), Kernel::polynomial(2)})
    CHECK(effective_sample_size(src, src, k, 1.0) == doctest::Approx(30.0));

  // Sobolev features vanish at 0, so a source at 0 carries no information
  const auto null_src = Dataset::column(std::vector<double>(10, 0.0));
  const auto one = Dataset::column(std::vector<double>{1.0});
  CHECK(effective_sample_size(null_src, one, Kernel::sobolev1(), 3.0) ==
        doctest::Approx(3.0).epsilon(1e-10));
  CHECK(effective_sample_size(null_src, one, Kernel::sobolev1(), 30.0) == doctest::Approx(10.0));

  // never above n
  for (int t = 0; t < 10; ++t) {
    std::vector<double> a(15), b(12);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (double& v : a) v = u01(gen);
    for (double& v : b) v = u01(gen);
    const double ne = effective_sample_size(Dataset::column(a), Dataset::column(b),
                                            Kernel::sobolev1(), 1.0);
    CHECK(ne > 0.0);
    CHECK(ne <= 15.0);
  }
  CHECK_THROWS_AS(effective_sample_size(src, tgt, Kernel::linear(), 0.0), DomainError);
}

TEST_CASE("log-log slope") {
  std::vector<std::pair<double, double>> pts;
  for (double n : {1000.0, 2000.0, 4000.0, 8000.0}) pts.push_back({n, 3.0 * std::pow(n, -0.5)});
  const auto fit = loglog_slope_fit(pts);
  CHECK(fit.alpha == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));

  const std::vector<std::pair<double, double>> two{{10.0, 1.0}, {100.0, 0.1}};
  CHECK(loglog_slope_fit(two).alpha == doctest::Approx(1.0));
  CHECK_THROWS_AS(loglog_slope_fit(std::vector<std::pair<double, double>>{{10.0, 1.0}}),
                  InputError);
  CHECK_THROWS_AS(loglog_slope_fit(std::vector<std::pair<double, double>>{{10.0, 1.0}, {10.0, 2.0}}),
                  DomainError);
}

TEST_CASE("cluster bootstrap") {
  const std::vector<TrialGroup> flat{{100.0, {0.2, 0.2, 0.2}}, {400.0, {0.1, 0.1}}};
  CHECK(cluster_bootstrap_se(flat, 200, 1) == 0.0);

  std::mt19937_64 gen(9);
  std::lognormal_distribution<double> noise(0.0, 0.3);
  std::vector<TrialGroup> groups;
  for (double n : {1000.0, 2000.0, 4000.0, 8000.0}) {
    TrialGroup g{n, {}};
    for (int t = 0; t < 30; ++t) g.risks.push_back(std::pow(n, -0.5) * noise(gen));
    groups.push_back(g);
  }
  const double a = cluster_bootstrap_se(groups, 500, 4);
  CHECK(a > 0.0);
  CHECK(cluster_bootstrap_se(groups, 500, 4) == a);

  const double s1 = cluster_bootstrap_se(groups, 10000, 11);
  const double s2 = cluster_bootstrap_se(groups, 10000, 12);
  CHECK(std::abs(s1 - s2) <= 0.05 * s1);
  CHECK_THROWS_AS(cluster_bootstrap_se(groups, 0, 1), InputError);
}

TEST_CASE("synthetic trial") {
  const auto r = run_synthetic_trial({400, 0.4, 3});
  for (double v : {r.pseudo, r.oracle, r.naive}) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  const auto again = run_synthetic_trial({400, 0.4, 3});
  CHECK(again.pseudo == r.pseudo);
  CHECK(again.chosen_lambda == r.chosen_lambda);
}
