#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stochcone/cone.hpp"
#include "stochcone/measure.hpp"
#include "stochcone/order.hpp"

namespace stochcone {

struct MeanConfig {
  double karcher_tol = 1e-10;
  std::size_t max_iter = 200;
  double step_shrink = 0.5;
  double power_t = 0.5;
  std::size_t product_cap = kDefaultProductCap;
  /// Sample count for the Monte Carlo lift; 0 disables it.
  std::size_t mc_samples = 0;
  std::uint64_t seed = 0;

  /// Throws InputError on an invalid combination.
  void validate() const;
};

PosDefMatrix arith_mean(std::span<const PosDefMatrix> as);
PosDefMatrix harm_mean(std::span<const PosDefMatrix> as);

/// a #_t b = a^{1/2} (a^{-1/2} b a^{-1/2})^t a^{1/2}, t in [0, 1].
PosDefMatrix geo_t(const PosDefMatrix& a, const PosDefMatrix& b, double t);

struct KarcherResult {
  PosDefMatrix mean;
  /// |sum_j w_j log(X^{-1/2} A_j X^{-1/2})|_F at the returned X.
  double residual;
  std::size_t iterations;
};

/// Karcher mean of A_1..A_n: the solution of sum_j log(X^{-1/2} A_j X^{-1/2}) = 0.
///
/// Damped fixed point X <- X^{1/2} exp((s/n) sum_j log(X^{-1/2} A_j X^{-1/2})) X^{1/2},
/// started at the arithmetic mean with s = 1. A step whose residual does
/// not improve is rejected and s is multiplied by step_shrink. Stops when
/// the residual is at most karcher_tol * n; throws ConvergenceError (carrying
/// the last residual) after max_iter steps.
KarcherResult karcher_mean(std::span<const PosDefMatrix> as, const MeanConfig& cfg = {});

/// Weighted version (Karcher barycenter of a finitely supported measure).
/// Weights are normalized; the residual uses the normalized weights and the
/// stopping threshold is karcher_tol.
KarcherResult karcher_barycenter(const FinMeasure& mu, const MeanConfig& cfg = {});

/// Residual evaluated from scratch, independent of the iteration.
double karcher_residual(const PosDefMatrix& x, std::span<const PosDefMatrix> as,
                        std::span<const double> weights = {});

/// Power mean P_t for t in [-1, 1] \ {0}.
///
/// For t > 0 iterates X <- (1/n) sum_j X #_t A_j from the arithmetic mean
/// until d_T(X_{k+1}, X_k) <= karcher_tol. The map contracts with factor
/// about (1 - t), so the cap is max_iter * ceil(1/t) iterations.
/// For t < 0, P_t(A) = [P_{-t}(A^{-1})]^{-1}. P_1 and P_{-1} are the
/// arithmetic and harmonic means exactly.
PosDefMatrix power_mean(std::span<const PosDefMatrix> as, double t, const MeanConfig& cfg = {});

struct MeanKind {
  enum class Kind { kGeometric, kArithmetic, kHarmonic, kPower };
  Kind kind;
  double t = 0.0;  // only read for kPower

  static MeanKind geometric() { return {Kind::kGeometric}; }
  static MeanKind arithmetic() { return {Kind::kArithmetic}; }
  static MeanKind harmonic() { return {Kind::kHarmonic}; }
  static MeanKind power(double t) { return {Kind::kPower, t}; }
  std::string name() const;
};

/// The n-variable matrix mean selected by kind.
PosDefMatrix tuple_mean(MeanKind kind, std::span<const PosDefMatrix> as, const MeanConfig& cfg = {});

struct LiftedMean {
  FinMeasure measure;
  /// Number of Monte Carlo tuples used; 0 for the exact push-forward.
  std::size_t mc_samples = 0;

  bool exact() const { return mc_samples == 0; }
};

/// Push-forward of mu_1 x ... x mu_n through the tuple mean. Exact when the
/// product has at most product_cap tuples; otherwise the empirical measure
/// of mc_samples seeded tuple draws, or CapacityError if mc_samples is 0.
LiftedMean measure_mean(MeanKind kind, std::span<const FinMeasure> mus, const MeanConfig& cfg = {});

struct AghReport {
  FinMeasure harmonic;
  FinMeasure geometric;
  FinMeasure arithmetic;
  DominanceVerdict harmonic_le_geometric;
  DominanceVerdict geometric_le_arithmetic;

  bool holds() const { return harmonic_le_geometric.holds && geometric_le_arithmetic.holds; }
};

inline constexpr double kMeanDominanceTol = 1e-8;

/// Exact-mode H, Lambda and A of the measures and the two dominance
/// verdicts H <= Lambda and Lambda <= A, decided by coupling at mass and
/// order tolerance `tol`.
AghReport agh_check(std::span<const FinMeasure> mus, const MeanConfig& cfg = {},
                    double tol = kMeanDominanceTol);

}  // namespace stochcone
