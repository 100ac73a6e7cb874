#pragma once

#include <cstdint>
#include <vector>

#include "fogdrip/lattice.hpp"

namespace fogdrip {

/// Chemical potentials of the particle layer and the quantities derived from them.
/// Vapour sites are occupied with probability pv, solid sites with ps > pv.
struct PhaseParams {
  double a = 0, b = 0, c = 0, d = 0;
  double f = 0;
  double pv = 0, ps = 0;

  /// Primary parameterisation. Throws ConfigError unless 0 < pv < ps < 1.
  static PhaseParams from_probabilities(double pv, double ps, double f = 0.0);
  /// Throws ConfigError when exp(-a) + exp(-b) and exp(-c) + exp(-d) differ by
  /// more than 1e-12 relative, or when the implied ps does not exceed pv.
  static PhaseParams from_potentials(double a, double b, double c, double d);

  double psv() const noexcept { return ps - pv; }
  double Ds() const noexcept { return ps * (1 - ps); }
  double Dv() const noexcept { return pv * (1 - pv); }
  double D() const noexcept { return Ds() + Dv(); }
  double rho0() const noexcept { return 0.5 * (ps + pv); }
  double a0(int R) const noexcept { return 2.0 * rho0() * R * R; }
};

/// log k! for k = 0..n, built once and shared by repeated binomial evaluations.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::int64_t n);
  std::int64_t size() const noexcept { return static_cast<std::int64_t>(lf_.size()) - 1; }
  double operator()(std::int64_t k) const { return lf_[static_cast<std::size_t>(k)]; }
  double log_choose(std::int64_t n, std::int64_t k) const { return lf_[n] - lf_[k] - lf_[n - k]; }

 private:
  std::vector<double> lf_;
};

/// log P(X + Y = target) for X ~ Bin(nS, ps), Y ~ Bin(nV, pv), independent.
/// Returns -infinity for targets outside [0, nS + nV]. The table must cover nS + nV.
double binomial_convolution_log_pmf(const LogFactorialTable& lf, std::int64_t nS, double ps,
                                    std::int64_t nV, double pv, std::int64_t target);

/// Sizes of the solid and vapour regions below and above an interface of volume alpha.
struct RegionSizes {
  std::int64_t solid = 0;
  std::int64_t vapour = 0;
};
RegionSizes region_sizes(std::int64_t alpha, const LatticeGeometry& geometry);

/// Exact log P(Sigma = target | alpha(Gamma) = alpha).
double sigma_exact(std::int64_t alpha, const LatticeGeometry& geometry, const PhaseParams& params,
                   std::int64_t target);

/// Whole law of Sigma given alpha, truncated where the summands fall below
/// 1e-15 of their peak. log_p[i] is the log-probability of first + i.
struct SigmaLaw {
  std::int64_t alpha = 0;
  std::int64_t first = 0;
  std::vector<double> log_p;

  double total_mass() const;
  double mean() const;
  double variance() const;
};
SigmaLaw sigma_exact_law(std::int64_t alpha, const LatticeGeometry& geometry,
                         const PhaseParams& params);

/// Gaussian local-limit surrogate
///   -1/2 log(pi D |B|) - (alpha psv - delta N^2)^2 / (D |B|),  |B| = 2 R^2 N^3.
double sigma_llt(std::int64_t alpha, const LatticeGeometry& geometry, const PhaseParams& params,
                 double delta);

/// Particle-number target a0 N^3 + delta N^2 rounded to an integer.
struct CanonicalTarget {
  std::int64_t sigma = 0;
  double delta_requested = 0;
  double delta_effective = 0;  ///< (sigma - a0 N^3) / N^2 after rounding
};
CanonicalTarget canonical_target(const LatticeGeometry& geometry, const PhaseParams& params,
                                 double delta);

enum class WeightMethod { kAuto, kExact, kLLT };

/// alpha -> log Q_delta(alpha) = log P(Sigma = target | alpha) on [alpha_min, alpha_max].
struct LogWeightTable {
  std::int64_t alpha_min = 0;
  std::vector<double> log_q;
  WeightMethod method = WeightMethod::kExact;  ///< the method actually used
  CanonicalTarget target;

  std::int64_t alpha_max() const noexcept {
    return alpha_min + static_cast<std::int64_t>(log_q.size()) - 1;
  }
  bool covers(std::int64_t a) const noexcept { return a >= alpha_min && a <= alpha_max(); }
  double operator()(std::int64_t a) const { return log_q[static_cast<std::size_t>(a - alpha_min)]; }
  std::int64_t argmax() const;
};

/// Boxes up to this many sites use the exact convolution under kAuto.
inline constexpr std::int64_t kExactSigmaSiteLimit = 1'000'000;

LogWeightTable canonical_log_weight_table(const LatticeGeometry& geometry,
                                          const PhaseParams& params, double delta,
                                          std::int64_t alpha_min, std::int64_t alpha_max,
                                          WeightMethod method = WeightMethod::kAuto);

}  // namespace fogdrip
