#pragma once

#include <cstdint>
#include <vector>

#include "fogdrip/lattice.hpp"

namespace fogdrip {

struct WangLandauConfig {
  LatticeGeometry geometry;
  double beta = 1.0;
  std::int64_t b_min = 0;
  std::int64_t b_max = 0;
  int windows = 1;              ///< overlapping alpha windows, run one after the other
  std::int64_t overlap = -1;    ///< bins shared by neighbouring windows; negative: a quarter
  double flatness = 0.8;        ///< min(H) >= flatness * mean(H) ends a stage
  double log_f_initial = 1.0;
  double log_f_final = 1e-8;
  std::int64_t check_every = 10;  ///< sweeps between flatness checks
  std::int64_t max_sweeps_per_window = 10'000'000;
  std::uint64_t seed = 1;
};

struct WangLandauStage {
  int window = 0;
  double log_f = 0;
  std::int64_t sweeps = 0;  ///< sweeps spent in this stage
};

/// Estimate of log Pr(alpha = b) up to a constant, normalised so that the bin
/// closest to b = 0 holds 0.
struct DensityOfStates {
  std::int64_t b_min = 0;
  std::vector<double> log_g;
  std::vector<WangLandauStage> stages;
  bool converged = true;      ///< false when some window ran out of sweeps
  double final_log_f = 0;     ///< largest modification factor left at the end
  std::int64_t total_sweeps = 0;

  std::int64_t b_max() const noexcept {
    return b_min + static_cast<std::int64_t>(log_g.size()) - 1;
  }
  double operator()(std::int64_t b) const { return log_g[static_cast<std::size_t>(b - b_min)]; }
};

/// Flat-histogram random walk in alpha with the Boltzmann weight kept, so the
/// estimate converges to the alpha marginal of the grand-canonical measure.
DensityOfStates wang_landau_alpha(const WangLandauConfig& config);

/// A field with alpha = b: centred blocks of +1 (or -1) columns, one level per
/// filled interior. Throws DomainError if |b| exceeds hmax * L^2.
HeightField seed_droplet(const LatticeGeometry& geometry, std::int64_t b);

}  // namespace fogdrip
