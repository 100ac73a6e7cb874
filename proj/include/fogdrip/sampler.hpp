#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "fogdrip/contours.hpp"
#include "fogdrip/lattice.hpp"
#include "fogdrip/particles.hpp"

namespace fogdrip {

/// Interface weight exp(-beta * perimeter_sum) alone.
struct GrandEnsemble {};

/// Interface weight times Q_delta(alpha), the probability of the pinned particle
/// number given the interface volume. Moves off the table are rejected.
struct CanonicalEnsemble {
  LogWeightTable table;
};

/// Interface weight restricted to lo <= alpha <= hi.
struct PinnedEnsemble {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

using Ensemble = std::variant<GrandEnsemble, CanonicalEnsemble, PinnedEnsemble>;

/// A Markov chain's position plus the bookkeeping that moves update incrementally.
struct ChainState {
  HeightField field;
  std::int64_t energy = 0;
  std::int64_t alpha = 0;
  std::mt19937_64 rng;
  std::int64_t sweeps = 0;

  ChainState(HeightField f, std::uint64_t seed);

  /// Throws ConsistencyError if energy or alpha disagree with a full recount.
  void check_consistency() const;
};

/// Single-site +/-1 Metropolis kernel for a fixed beta and ensemble.
class MetropolisSampler {
 public:
  MetropolisSampler(double beta, Ensemble ensemble);

  double beta() const noexcept { return beta_; }
  const Ensemble& ensemble() const noexcept { return ensemble_; }

  /// Probability of accepting h(site) += dh from the given field (0 for moves
  /// that leave the height range or the ensemble's support).
  double acceptance(const HeightField& field, std::int64_t alpha, Site site, int dh) const;

  /// One proposal: uniform interior site, dh = +1 or -1 with equal odds.
  bool step(ChainState& state) const;
  /// interior_sites() proposals; returns the number accepted.
  std::int64_t sweep(ChainState& state) const;

 private:
  template <class Factor>
  std::int64_t run_steps(ChainState& state, std::int64_t steps, const Factor& factor) const;

  double beta_;
  Ensemble ensemble_;
  std::array<double, 9> boltzmann_{};  // min(1, exp(-beta dE)) for dE = -4..4
  // Canonical factors Q(alpha + 1)/Q(alpha) and Q(alpha - 1)/Q(alpha), indexed like the table.
  std::vector<double> ratio_up_, ratio_down_;
};

/// Integrated autocorrelation time tau = 1/2 + sum_t rho(t), with Sokal's
/// automatic window (smallest W with W >= c * tau(W)). Returns 0.5 for a
/// constant series.
double integrated_autocorrelation_time(std::span<const double> series, double c = 6.0);

struct SeriesPoint {
  std::int64_t sweep = 0;
  std::int64_t energy = 0;
  std::int64_t alpha = 0;
};

struct ChainConfig {
  LatticeGeometry geometry;
  double beta = 1.0;
  Ensemble ensemble = GrandEnsemble{};
  std::int64_t sweeps = 0;
  std::int64_t burnin = -1;       ///< negative: 10% of sweeps
  std::int64_t thinning = 0;      ///< snapshot period in sweeps; 0 disables snapshots
  std::int64_t checkpoint_every = 1000;
  std::uint64_t seed = 1;
  bool record_series = true;
  std::optional<HeightField> initial;  ///< flat field when absent
};

struct ChainResult {
  std::vector<SeriesPoint> series;  ///< sweep 0 (initial state) onwards
  std::vector<std::pair<std::int64_t, HeightField>> snapshots;
  std::int64_t burnin = 0;
  std::int64_t proposed = 0;
  std::int64_t accepted = 0;
  double mean_alpha = 0;       ///< after burn-in
  double mean_energy = 0;      ///< after burn-in
  double iat_alpha = 0.5;      ///< in sweeps, after burn-in
  HeightField final_field;
};

/// Called after every sweep, the initial state counting as sweep 0.
using SweepObserver = std::function<void(const ChainState&)>;

/// Runs the chain deterministically from config.seed.
ChainResult run_chain(const ChainConfig& config, const SweepObserver& observer = {});

/// Contour size classes relative to the thresholds eps^-1 log N and eps N.
struct ContourClasses {
  double epsilon = 1.0;
  double small_threshold = 0;  ///< |gamma| <= this is small
  double large_threshold = 0;  ///< |gamma| >= this (and not small) is large
  std::vector<std::size_t> small, intermediate, large;  ///< indices into the family
};
ContourClasses classify_contours(const ContourFamily& family, const LatticeGeometry& geometry,
                                 double epsilon = 1.0);

}  // namespace fogdrip
