#pragma once

#include <vector>

#include "fogdrip/particles.hpp"
#include "fogdrip/wulff.hpp"

namespace fogdrip {

/// Inputs of the variational problem: particle law, droplet geometry and the
/// box scale R (the box has side R in units of N).
struct PhaseModel {
  PhaseParams params;
  WulffShape shape;
  double R = 1;
};

inline constexpr double kLambdaC = 2.0 / 3.0;
/// 1/2 (3/2)^{3/2}: the kappa at which phi has two global minimisers.
double kappa_c();

/// (delta - psv rho)^2 / (2 D R^2) + R w_rst(rho / R^2) for rho in [0, 2R^2).
double free_energy(const PhaseModel& m, double rho, double delta);

/// phi_kappa(lambda) = kappa (1 - lambda)^2 + sqrt(lambda).
double phi(double kappa, double lambda);
/// The small-rho reduction: F(lambda delta / psv) = w1 sqrt(delta / psv) phi_kappa(lambda).
double kappa_of(const PhaseModel& m, double delta);
/// Global minimisers of phi_kappa on [0, 1]. Above kappa_c this is the largest
/// root of 4 kappa sqrt(lambda) (1 - lambda) = 1.
std::vector<double> phi_minimizers(double kappa);

/// Closed form (3/2) (D^2 w1^2 / psv)^{1/3} R^{4/3}.
double delta1_analytic(const PhaseModel& m);
/// Smallest R for which the critical droplet of area (2/3) delta1 / psv fits
/// inside the box as a scaled Wulff shape.
double fitting_required_R(const PhaseParams& params, const WulffShape& shape);

struct FreeEnergyMinimum {
  double rho = 0;                ///< global minimiser (smallest one on ties)
  double value = 0;
  std::vector<double> minimizers;  ///< all global minimisers within the tie tolerance
  int multiplicity() const noexcept { return static_cast<int>(minimizers.size()); }
};

struct MinimizerOptions {
  int grid = 10000;
  double tie_tolerance = 1e-9;
};

/// Local minima of F(., delta) on a grid, refined by golden section inside
/// each regime cell of the restricted problem.
FreeEnergyMinimum minimize_free_energy(const PhaseModel& m, double delta, const MinimizerOptions& options = {});
/// Every refined local minimum (rho, F), sorted by rho.
std::vector<std::pair<double, double>> free_energy_local_minima(const PhaseModel& m, double delta,
                                                                const MinimizerOptions& options = {});

/// Loop radii in units of N for the minimiser at rho (NaN where absent).
struct RadiiRow {
  double delta = 0;
  double rho_star = 0;
  int k = 0;             ///< number of monolayers
  double r1 = 0;         ///< half-width of a free Wulff droplet
  double r1_tilde = 0;   ///< corner radius of the first-layer plaquette
  double r2 = 0;         ///< radius of the second layer
  double f_min = 0;
  int multiplicity = 1;
};

RadiiRow radii_at(const PhaseModel& m, double delta, const MinimizerOptions& options = {});

struct CriticalOptions {
  bool enforce_fitting = true;
  double relative_tolerance = 1e-12;
  int table_points = 200;
  MinimizerOptions minimizer;
};

struct CriticalValues {
  double delta1_analytic = 0;
  double delta1 = 0;       ///< numeric: first delta with a positive global minimiser
  double delta15 = 0;      ///< the one-layer minimiser reaches S1 R^2
  double delta2 = 0;       ///< the minimiser jumps across R^2
  double delta25 = 0;      ///< the two-layer minimiser reaches 2 S1 R^2
  double rho_minus = 0;    ///< minimiser just below delta2
  double rho_plus = 0;     ///< minimiser just above delta2
  double rho_at_delta1 = 0;  ///< positive minimiser at delta1
  int multiplicity_delta1 = 0;
  int multiplicity_delta2 = 0;
  double r_cr = 0;         ///< half-width of the critical droplet, units of N
  double required_R = 0;
  bool fits = true;
  bool delta15_at_delta1 = false;  ///< the critical droplet is already a plaquette
  bool delta25_at_delta2 = false;  ///< the jump at delta2 lands on two plaquettes
  std::vector<RadiiRow> table;
};

/// Throws FittingConditionError when enforce_fitting is set and R is too small.
CriticalValues critical_values(const PhaseModel& m, const CriticalOptions& options = {});

/// Log-scale envelopes of P(Sigma = a0 + delta N^2 | A_b) P(A_b) in the three
/// volume regimes, with the unknown multiplicative constants set to 1.
struct CaseBounds {
  int regime = 1;  ///< 1: b <= N^{1+eta}; 2: up to c9 N^2; 3: beyond
  double lower = 0;  ///< NaN in regime 2, which only has an upper bound
  double upper = 0;
};

struct EnvelopeOptions {
  double eta = 0.25;
  double c8 = 1.0;
  double c9 = 0.05;
};

CaseBounds case_bounds(const PhaseModel& m, int N, double b, double delta, const EnvelopeOptions& options = {});

struct EnvelopeReport {
  double delta = 0;
  int dominant = 1;      ///< 1 or 3
  double rho_star = 0;
  double typical_b = 0;  ///< rho_star N^2 (0 in the flat regime)
  double case1_upper = 0;
  double case1_lower = 0;
  double case2_upper = 0;  ///< best over regime 2
  double case3_upper = 0;  ///< best over regime 3
  double case3_lower = 0;
};

EnvelopeReport case_envelope(const PhaseModel& m, int N, double delta, const EnvelopeOptions& options = {});

}  // namespace fogdrip
