#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fogdrip {

enum class TensionModel { kLatticeL1, kIsotropic, kNumericPath, kCustom };

std::string to_string(TensionModel m);
/// Accepts "lattice-L1", "isotropic", "numeric-path"; throws ConfigError otherwise.
TensionModel parse_tension_model(const std::string& name);

/// Directed-path estimate of the surface tension for the normal n = (nx, ny).
struct TauEstimate {
  double tau = 0;
  int a = 0;  ///< path extent along the dominant axis
  int c = 0;  ///< transverse displacement, 0 <= c <= a
  bool near_diagonal = false;  ///< c > 0.8 a: outside the comfortable range of directed paths
};

/// -(1/L) log of the sum over directed paths from the origin to (a, c), where
/// a = floor(L max|n_i|) and c = floor(L min|n_i|). A path crosses a unit
/// columns and makes a + 1 vertical runs v_0..v_a summing to c, with weight
/// exp(-beta (a + sum |v_i|)).
TauEstimate tau_estimate(double beta, double nx, double ny, int L);

/// Partition sums for all transverse displacements at once: entry c holds
/// log Z(a, c) for 0 <= c <= c_max.
std::vector<double> directed_path_log_sums(double beta, int a, int c_max);

/// A direction-dependent surface tension tau(n) >= 0 on unit normals.
class SurfaceTension {
 public:
  static SurfaceTension lattice_l1(double beta);
  static SurfaceTension isotropic(double beta);
  /// Tabulates the directed-path estimate for every reachable endpoint.
  static SurfaceTension numeric_path(double beta, int path_length = 64);
  static SurfaceTension custom(std::function<double(double, double)> tau, double beta = 1.0);
  static SurfaceTension make(TensionModel model, double beta, int path_length = 64);

  TensionModel model() const noexcept { return model_; }
  double beta() const noexcept { return beta_; }
  int path_length() const noexcept { return path_length_; }

  /// tau for the unit normal (nx, ny); the input is normalised first.
  double operator()(double nx, double ny) const;
  double at_angle(double theta) const;
  /// True when the numeric estimator is used close to the diagonal.
  bool near_diagonal(double nx, double ny) const;

  /// The same tension multiplied by k > 0.
  SurfaceTension scaled(double k) const;

 private:
  struct PathTable;

  TensionModel model_ = TensionModel::kIsotropic;
  double beta_ = 1.0;
  double factor_ = 1.0;
  int path_length_ = 0;
  std::function<double(double, double)> custom_;
  std::shared_ptr<const PathTable> table_;
};

}  // namespace fogdrip
