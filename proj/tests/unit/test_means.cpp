#include <cmath>
#include <vector>

#include <doctest.h>

#include "../support/generators.hpp"
#include "stochcone/error.hpp"
#include "stochcone/means.hpp"
#include "stochcone/transport.hpp"

using namespace stochcone;

namespace {

PosDefMatrix sc(double c) { return PosDefMatrix::scalar(2, c); }

double dist(const PosDefMatrix& a, const PosDefMatrix& b) { return thompson_distance(a, b); }

std::vector<PosDefMatrix> random_tuple(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<PosDefMatrix> as;
  for (std::size_t j = 0; j < n; ++j) as.push_back(random_posdef(d, rng));
  return as;
}

}  // namespace

TEST_CASE("arithmetic and harmonic means") {
  const std::vector<PosDefMatrix> two = {sc(1), sc(3)};
  CHECK(arith_mean(two) == sc(2));
  CHECK(dist(harm_mean(two), sc(1.5)) < 1e-14);
  const std::vector<PosDefMatrix> one = {PosDefMatrix::diagonal({2.0, 5.0})};
  CHECK(arith_mean(one) == one[0]);
  CHECK(dist(harm_mean(one), one[0]) < 1e-14);
  CHECK_THROWS_AS(arith_mean(std::vector<PosDefMatrix>{}), InputError);
  CHECK_THROWS_AS(harm_mean(std::vector<PosDefMatrix>{}), InputError);
  CHECK_THROWS_AS(arith_mean(std::vector<PosDefMatrix>{sc(1), PosDefMatrix::identity(3)}), DimensionError);

  const std::vector<PosDefMatrix> diag = {PosDefMatrix::diagonal({1.0, 2.0}), PosDefMatrix::diagonal({3.0, 6.0})};
  CHECK(arith_mean(diag) == PosDefMatrix::diagonal({2.0, 4.0}));

  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto as = random_tuple(2 + rng.index(3), 2 + rng.index(2), rng);
    CHECK(loewner_leq(harm_mean(as), arith_mean(as)));
  }
}

TEST_CASE("weighted geometric mean") {
  CHECK(dist(geo_t(sc(1), sc(4), 0.5), sc(2)) < 1e-14);
  const PosDefMatrix a = PosDefMatrix::diagonal({1.0, 3.0});
  CHECK(dist(geo_t(a, a, 0.3), a) < 1e-14);
  CHECK_THROWS_AS(geo_t(a, a, 1.5), DomainError);
  CHECK_THROWS_AS(geo_t(a, a, -0.1), DomainError);

  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + rng.index(2);
    const PosDefMatrix x = random_posdef(d, rng), y = random_posdef(d, rng);
    const double t = rng.uniform();
    CHECK(geo_t(x, y, 0.0) == x);
    CHECK(geo_t(x, y, 1.0) == y);
    CHECK((geo_t(x, y, t).sym() - geo_t(y, x, 1 - t).sym()).frobenius_norm() <= 1e-9);
  }
}

TEST_CASE("karcher mean") {
  const std::vector<PosDefMatrix> one = {PosDefMatrix::diagonal({2.0, 5.0})};
  CHECK(dist(karcher_mean(one).mean, one[0]) < 1e-12);

  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 2 + rng.index(2);
    const std::size_t n = 2 + rng.index(4);
    const auto as = random_tuple(n, d, rng);
    const KarcherResult r = karcher_mean(as);
    CHECK(r.residual <= 1e-10 * static_cast<double>(n));
    CHECK(std::abs(karcher_residual(r.mean, as) - r.residual) <= 1e-12);

    const std::vector<PosDefMatrix> pair = {as[0], as[1]};
    const PosDefMatrix g = karcher_mean(pair).mean;
    CHECK((g.sym() - geo_t(as[0], as[1], 0.5).sym()).frobenius_norm() <= 1e-8);

    // Commuting family: exp of the mean of logs.
    std::vector<PosDefMatrix> diag;
    std::vector<double> logsum(d, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> e(d);
      for (auto& v : e) v = std::exp(rng.uniform(-2.0, 2.0));
      for (std::size_t k = 0; k < d; ++k) logsum[k] += std::log(e[k]);
      diag.push_back(PosDefMatrix::diagonal(e));
    }
    std::vector<double> expect(d);
    for (std::size_t k = 0; k < d; ++k) expect[k] = std::exp(logsum[k] / static_cast<double>(n));
    CHECK((karcher_mean(diag).mean.sym() - SymMatrix::diagonal(expect)).frobenius_norm() <= 1e-8);
  }

  MeanConfig tiny;
  tiny.max_iter = 1;
  tiny.karcher_tol = 1e-300;
  const auto as = random_tuple(3, 3, rng);
  try {
    (void)karcher_mean(as, tiny);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_residual() > 0.0);
  }

  MeanConfig bad;
  bad.karcher_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("karcher barycenter of a weighted measure") {
  const FinMeasure mu = FinMeasure::from_atoms({{sc(1), 0.25}, {sc(16), 0.75}});
  const KarcherResult r = karcher_barycenter(mu);
  // exp(0.25 log 1 + 0.75 log 16) = 8.
  CHECK(dist(r.mean, sc(8)) < 1e-10);
  CHECK(r.residual <= 1e-10);
}

TEST_CASE("power means") {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + rng.index(2);
    const auto as = random_tuple(2 + rng.index(3), d, rng);
    const std::vector<PosDefMatrix> single = {as[0]};
    CHECK(dist(power_mean(single, 0.3), as[0]) < 1e-12);
    CHECK(power_mean(as, 1.0) == arith_mean(as));
    CHECK(dist(power_mean(as, -1.0), harm_mean(as)) <= 1e-10);
    PosDefMatrix prev = power_mean(as, -1.0);
    for (double t : {-0.5, -0.1, 0.1, 0.5, 1.0}) {
      const PosDefMatrix cur = power_mean(as, t);
      CHECK(loewner_leq(prev, cur));
      prev = cur;
    }
    // Fixed-point equation at t = 1/2.
    const PosDefMatrix p = power_mean(as, 0.5);
    std::vector<PosDefMatrix> terms;
    for (const auto& a : as) terms.push_back(geo_t(p, a, 0.5));
    CHECK(dist(arith_mean(terms), p) <= 1e-9);
  }
  CHECK_THROWS_AS(power_mean(std::vector<PosDefMatrix>{sc(1)}, 0.0), DomainError);
  CHECK_THROWS_AS(power_mean(std::vector<PosDefMatrix>{sc(1)}, 1.5), DomainError);
}

TEST_CASE("power means approach the karcher mean") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto as = random_tuple(2 + rng.index(2), 2 + rng.index(2), rng);
    const PosDefMatrix k = karcher_mean(as).mean;
    std::vector<double> ds;
    for (double t : {0.5, 0.25, 0.1, 0.05, 0.01}) ds.push_back(dist(power_mean(as, t), k));
    for (std::size_t i = 1; i < ds.size(); ++i) CHECK(ds[i] <= ds[i - 1] + 1e-12);
    // First-order rate: d(0.01) / d(0.05) close to 1/5.
    CHECK(ds[4] / ds[3] == doctest::Approx(0.2).epsilon(0.25));
  }

  // Commuting family against the scalar formula ((1/n) sum a^t)^(1/t).
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng.index(3);
    std::vector<PosDefMatrix> as;
    std::vector<std::vector<double>> e(n, std::vector<double>(2));
    for (auto& v : e) {
      for (auto& x : v) x = std::exp(rng.uniform(-1.5, 1.5));
      as.push_back(PosDefMatrix::diagonal(v));
    }
    for (double t : {0.5, 0.01, -0.3}) {
      std::vector<double> expect(2, 0.0);
      for (std::size_t k = 0; k < 2; ++k) {
        for (const auto& v : e) expect[k] += std::pow(v[k], t) / static_cast<double>(n);
        expect[k] = std::pow(expect[k], 1.0 / t);
      }
      CHECK(dist(power_mean(as, t), PosDefMatrix::diagonal(expect)) <= 1e-8);
    }
  }
}

TEST_CASE("means of measures: worked example") {
  const PosDefMatrix x = PosDefMatrix::diagonal({1.0, 4.0});
  const std::vector<PosDefMatrix> as = {sc(1), PosDefMatrix::diagonal({9.0, 1.0}), sc(4)};
  const std::vector<FinMeasure> mus = {dirac(x), FinMeasure::uniform(as)};

  const LiftedMean g = measure_mean(MeanKind::geometric(), mus);
  CHECK(g.exact());
  REQUIRE(g.measure.size() == 3);
  for (const auto& a : as) {
    const auto k = g.measure.find(geo_t(x, a, 0.5));
    REQUIRE(k < g.measure.size());
    CHECK(g.measure[k].weight == doctest::Approx(1.0 / 3));
  }

  const LiftedMean ar = measure_mean(MeanKind::arithmetic(), mus);
  REQUIRE(ar.measure.size() == 3);
  for (const auto& a : as) {
    const auto k = ar.measure.find(PosDefMatrix((x.sym() + a.sym()) * 0.5));
    REQUIRE(k < ar.measure.size());
    CHECK(ar.measure[k].weight == doctest::Approx(1.0 / 3));
  }
}

TEST_CASE("means of measures: duality, caps and sampling") {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + rng.index(2);
    std::vector<FinMeasure> mus, inv;
    for (std::size_t j = 0, n = 2 + rng.index(2); j < n; ++j) {
      mus.push_back(random_measure(d, 1 + rng.index(3), rng));
      inv.push_back(invert(mus.back()));
    }
    const FinMeasure h = measure_mean(MeanKind::harmonic(), mus).measure;
    const FinMeasure a = invert(measure_mean(MeanKind::arithmetic(), inv).measure);
    CHECK(approx_equal(h, a, 1e-9, 1e-9));
  }

  std::vector<FinMeasure> big(3, random_measure(2, 20, rng));
  MeanConfig cfg;
  cfg.product_cap = 1000;
  CHECK_THROWS_AS(measure_mean(MeanKind::arithmetic(), big, cfg), CapacityError);
  cfg.mc_samples = 500;
  cfg.seed = 4;
  const LiftedMean s1 = measure_mean(MeanKind::arithmetic(), big, cfg);
  const LiftedMean s2 = measure_mean(MeanKind::arithmetic(), big, cfg);
  CHECK_FALSE(s1.exact());
  CHECK(s1.mc_samples == 500);
  CHECK(s1.measure.total_mass() == doctest::Approx(1.0));
  CHECK(approx_equal(s1.measure, s2.measure, 0.0, 0.0));

  // Sampled lift approaches the exact lift as the sample count grows.
  const std::vector<FinMeasure> small = {random_measure(2, 3, rng), random_measure(2, 3, rng)};
  const FinMeasure exact = measure_mean(MeanKind::geometric(), small).measure;
  MeanConfig mc;
  mc.product_cap = 1;
  mc.seed = 8;
  mc.mc_samples = 100;
  const double w_small = wasserstein(measure_mean(MeanKind::geometric(), small, mc).measure, exact, 1).distance;
  mc.mc_samples = 20000;
  const double w_large = wasserstein(measure_mean(MeanKind::geometric(), small, mc).measure, exact, 1).distance;
  CHECK(w_large < w_small);
  CHECK(w_large < 0.05);
}

TEST_CASE("contraction of the geometric mean") {
  Rng rng(66);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + rng.index(2);
    const std::size_t n = 2 + rng.index(2);
    const auto as = random_tuple(n, d, rng);
    const auto bs = random_tuple(n, d, rng);
    const double lhs = dist(karcher_mean(as).mean, karcher_mean(bs).mean);
    CHECK(lhs <= product_metric_distance(as, bs, ProductMetric::kMean) + 1e-8);
    CHECK(dist(arith_mean(as), arith_mean(bs)) <= product_metric_distance(as, bs, ProductMetric::kMax) + 1e-10);
    CHECK(dist(harm_mean(as), harm_mean(bs)) <= product_metric_distance(as, bs, ProductMetric::kMax) + 1e-10);

    // Monotone in each argument.
    auto up = as;
    up[0] = translate(up[0], random_psd(d, rng, 1, 0.5));
    CHECK(loewner_leq(karcher_mean(as).mean, karcher_mean(up).mean, OrderTolerance(1e-8)));
    CHECK(loewner_leq(harm_mean(as), harm_mean(up)));
    CHECK(loewner_leq(power_mean(as, 0.5), power_mean(up, 0.5), OrderTolerance(1e-8)));
  }
}

TEST_CASE("AGH inequalities for measures") {
  const std::vector<FinMeasure> diracs = {dirac(PosDefMatrix::diagonal({1.0, 2.0})), dirac(sc(3))};
  const AghReport r0 = agh_check(diracs);
  CHECK(r0.holds());
  CHECK(r0.harmonic.size() == 1);

  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<FinMeasure> mus = {random_measure(2, 2, rng), random_measure(2, 2, rng)};
    const AghReport r = agh_check(mus);
    CHECK(r.holds());
    CHECK(r.harmonic_le_geometric.coupling() != nullptr);
    CHECK(r.geometric_le_arithmetic.coupling() != nullptr);
  }
}

TEST_CASE("mean kinds") {
  CHECK(MeanKind::geometric().name() == "karcher");
  CHECK(MeanKind::arithmetic().name() == "arith");
  CHECK(MeanKind::harmonic().name() == "harm");
  CHECK(MeanKind::power(0.5).name().rfind("power:", 0) == 0);
}
