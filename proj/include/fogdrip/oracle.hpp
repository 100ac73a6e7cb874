#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fogdrip/lattice.hpp"
#include "fogdrip/sampler.hpp"

namespace fogdrip {

/// Every height field of a tiny box, in odometer order: interior site k (row
/// major) is digit k of the code in base 2*hmax+1, site 0 least significant,
/// with height = digit - hmax.
class EnumeratedEnsemble {
 public:
  /// Refuses (BudgetExceeded) when (2 hmax + 1)^(L^2) exceeds the budget.
  explicit EnumeratedEnsemble(const LatticeGeometry& geometry, std::int64_t budget = 100'000'000);

  const LatticeGeometry& geometry() const noexcept { return geometry_; }
  std::int64_t count() const noexcept { return static_cast<std::int64_t>(energy_.size()); }
  int energy(std::int64_t code) const { return energy_[static_cast<std::size_t>(code)]; }
  int alpha(std::int64_t code) const { return alpha_[static_cast<std::size_t>(code)]; }

  HeightField field(std::int64_t code) const;
  std::int64_t code_of(const HeightField& field) const;

  /// log sum over fields of exp(-beta * energy).
  double log_partition(double beta) const;

 private:
  LatticeGeometry geometry_;
  std::vector<std::int16_t> energy_;
  std::vector<std::int16_t> alpha_;
};

/// Number of fields an enumeration of this geometry would visit (saturates at INT64_MAX).
std::int64_t enumeration_size(const LatticeGeometry& geometry);

/// Exact probability of every field under the ensemble. Canonical ensembles
/// must carry a table built from the exact particle-number law.
std::vector<double> exact_law(const EnumeratedEnsemble& ens, double beta, const Ensemble& ensemble);

/// Pr(alpha = b) for every b carrying mass, from a per-field law.
std::map<std::int64_t, double> alpha_marginal(const EnumeratedEnsemble& ens,
                                              const std::vector<double>& law);

/// Canonical ensemble with the exact weight table over the full reachable alpha range.
CanonicalEnsemble exact_canonical_ensemble(const LatticeGeometry& geometry,
                                           const PhaseParams& params, double delta);

}  // namespace fogdrip
