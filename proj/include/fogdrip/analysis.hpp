#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fogdrip/contours.hpp"
#include "fogdrip/particles.hpp"
#include "fogdrip/sampler.hpp"
#include "fogdrip/tension.hpp"
#include "fogdrip/wulff.hpp"

namespace fogdrip {

enum class Verdict { kFlat, kOneMonolayer, kTwoMonolayers, kOther };
const char* to_string(Verdict v);

struct ContourStats {
  Sign sign = Sign::kPlus;
  int length = 0;
  std::int64_t area = 0;  ///< alpha of the contour: its interior area
  int level = 0;
};

/// Optional check of alpha(gamma0) > slack * (2 delta / (3 psv)) N^2.
struct VolumeBoundCheck {
  double delta = 0;
  PhaseParams params;
  double slack = 1.0;
};

struct MonolayerReport {
  std::string sample_id;
  double epsilon = 1;
  double small_threshold = 0;
  double large_threshold = 0;
  std::size_t total = 0;
  std::size_t small = 0;
  std::size_t intermediate = 0;
  std::size_t large = 0;
  std::optional<ContourStats> gamma0;  ///< largest-area large contour
  std::optional<ContourStats> gamma1;  ///< next large contour nested inside gamma0
  int nesting_depth = 0;               ///< longest chain of nested large contours
  std::map<int, std::int64_t> height_histogram;
  Verdict verdict = Verdict::kFlat;
  std::optional<bool> volume_bound;    ///< set when a VolumeBoundCheck was given and gamma0 exists
};

MonolayerReport monolayer_census(const HeightField& field, double epsilon = 1.0,
                                 const std::optional<VolumeBoundCheck>& bound = std::nullopt,
                                 std::string sample_id = {});

/// Contour corners in lattice units.
Polygon contour_polygon(const OrientedContour& contour);

/// Symmetric Hausdorff distance between two closed polygonal curves. Each
/// boundary is sampled at the given spacing and measured exactly against the
/// other's segments.
double hausdorff_distance(const Polygon& a, const Polygon& b, double spacing = 0.25);

struct ShapeFit {
  Polygon target;          ///< translated to the optimum
  Vec2 translation;        ///< applied to the target
  double distance = 0;     ///< Hausdorff distance at the optimum
  double normalized = 0;   ///< distance / b^{1/3}
};

/// Minimises the Hausdorff distance over translations of the target: centroid
/// alignment, a lattice-resolution grid search, then pattern refinement.
ShapeFit hausdorff_fit(const Polygon& contour, const Polygon& target, double b);

/// sqrt(b) W centred at the origin.
Polygon scaled_wulff(const WulffShape& shape, double b);

struct SweepConfig {
  LatticeGeometry geometry;
  double beta = 2.0;
  PhaseParams params = PhaseParams::from_probabilities(0.2, 0.8);
  TensionModel tension = TensionModel::kIsotropic;
  double tension_beta = 2.0;
  int tension_path_length = 64;
  std::vector<double> deltas;
  int replicates = 8;
  std::int64_t sweeps = 10000;
  std::int64_t burnin = -1;
  std::int64_t thinning = 0;      ///< 0: census of the final state only
  double epsilon = 1.0;
  double bound_slack = 1.0;
  WeightMethod weights = WeightMethod::kAuto;
  std::uint64_t seed = 1;
  std::int64_t budget_sweeps = 0;  ///< cap on total sweeps; 0 means unlimited
};

struct SweepRow {
  double delta = 0;
  std::size_t samples = 0;
  double flat = 0, one = 0, two = 0, other = 0;  ///< verdict fractions
  double mean_gamma0_area = 0;                   ///< over samples with a gamma0
  double bound_fraction = 0;                     ///< among one-monolayer samples
  double predicted_b = 0;                        ///< rho* N^2 from the variational problem
  int predicted_k = 0;
  double mean_alpha = 0;
  double mean_iat = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<MonolayerReport> samples;  ///< ordered by delta, then replicate, then snapshot
  bool partial = false;                  ///< the sweep budget stopped the run early
};

/// Canonical chains over a delta grid; deterministic for a given seed
/// whatever the thread count.
SweepReport sweep_experiment(const SweepConfig& config);

/// Seed of replicate r at grid point i.
std::uint64_t derived_seed(std::uint64_t seed, std::size_t grid_index, std::size_t replicate);

}  // namespace fogdrip
