#include "fogdrip/tension.hpp"

#include <algorithm>
#include <cmath>

#include "fogdrip/errors.hpp"

namespace fogdrip {

std::string to_string(TensionModel m) {
  switch (m) {
    case TensionModel::kLatticeL1: return "lattice-L1";
    case TensionModel::kIsotropic: return "isotropic";
    case TensionModel::kNumericPath: return "numeric-path";
    case TensionModel::kCustom: return "custom";
  }
  return "unknown";
}

TensionModel parse_tension_model(const std::string& name) {
  if (name == "lattice-L1" || name == "lattice-l1") return TensionModel::kLatticeL1;
  if (name == "isotropic") return TensionModel::kIsotropic;
  if (name == "numeric-path") return TensionModel::kNumericPath;
  throw ConfigError("unknown tension model '" + name + "'");
}

std::vector<double> directed_path_log_sums(double beta, int a, int c_max) {
  if (a < 0 || c_max < 0) throw DomainError("path extents must be non-negative");
  const double q = std::exp(-beta);
  const int margin = a + 16;
  const int lo = -margin, hi = c_max + margin;
  const std::size_t H = static_cast<std::size_t>(hi - lo + 1);
  std::vector<double> f(H, 0.0), fwd(H), bwd(H);
  f[static_cast<std::size_t>(-lo)] = 1.0;
  double log_scale = 0;
  // a + 1 vertical runs, each a convolution with q^|v|, done by one forward
  // and one backward geometric recursion.
  for (int run = 0; run <= a; ++run) {
    fwd[0] = f[0];
    for (std::size_t y = 1; y < H; ++y) fwd[y] = f[y] + q * fwd[y - 1];
    bwd[H - 1] = f[H - 1];
    for (std::size_t y = H - 1; y-- > 0;) bwd[y] = f[y] + q * bwd[y + 1];
    double mx = 0;
    for (std::size_t y = 0; y < H; ++y) {
      f[y] = fwd[y] + bwd[y] - f[y];
      mx = std::max(mx, f[y]);
    }
    for (double& v : f) v /= mx;
    log_scale += std::log(mx);
  }
  std::vector<double> out(static_cast<std::size_t>(c_max) + 1);
  for (int c = 0; c <= c_max; ++c)
    out[c] = std::log(f[static_cast<std::size_t>(c - lo)]) + log_scale - beta * a;
  return out;
}

namespace {

struct Endpoint {
  int a, c;
};

Endpoint endpoint(double nx, double ny, int L) {
  const double mx = std::max(std::abs(nx), std::abs(ny));
  const double mn = std::min(std::abs(nx), std::abs(ny));
  return {static_cast<int>(std::floor(L * mx + 1e-12)), static_cast<int>(std::floor(L * mn + 1e-12))};
}

}  // namespace

TauEstimate tau_estimate(double beta, double nx, double ny, int L) {
  if (L < 1) throw DomainError("path length must be positive");
  const double norm = std::hypot(nx, ny);
  if (!(norm > 0)) throw DomainError("direction must be non-zero");
  const Endpoint e = endpoint(nx / norm, ny / norm, L);
  const auto sums = directed_path_log_sums(beta, e.a, e.c);
  TauEstimate out;
  out.a = e.a;
  out.c = e.c;
  out.tau = -sums[e.c] / L;
  out.near_diagonal = e.c > 0.8 * e.a;
  return out;
}

struct SurfaceTension::PathTable {
  int a_min = 0;
  std::vector<std::vector<double>> log_z;  // [a - a_min][c]
};

SurfaceTension SurfaceTension::lattice_l1(double beta) {
  SurfaceTension t;
  t.model_ = TensionModel::kLatticeL1;
  t.beta_ = beta;
  return t;
}

SurfaceTension SurfaceTension::isotropic(double beta) {
  SurfaceTension t;
  t.model_ = TensionModel::kIsotropic;
  t.beta_ = beta;
  return t;
}

SurfaceTension SurfaceTension::numeric_path(double beta, int path_length) {
  if (path_length < 8) throw ConfigError("numeric-path tension needs a path length of at least 8");
  SurfaceTension t;
  t.model_ = TensionModel::kNumericPath;
  t.beta_ = beta;
  t.path_length_ = path_length;
  auto table = std::make_shared<PathTable>();
  // max|n_i| >= 1/sqrt(2), so only the upper range of a is reachable.
  table->a_min = std::max(0, static_cast<int>(std::floor(path_length / std::sqrt(2.0))) - 1);
  for (int a = table->a_min; a <= path_length; ++a)
    table->log_z.push_back(directed_path_log_sums(beta, a, a));
  t.table_ = std::move(table);
  return t;
}

SurfaceTension SurfaceTension::custom(std::function<double(double, double)> tau, double beta) {
  SurfaceTension t;
  t.model_ = TensionModel::kCustom;
  t.beta_ = beta;
  t.custom_ = std::move(tau);
  return t;
}

SurfaceTension SurfaceTension::make(TensionModel model, double beta, int path_length) {
  switch (model) {
    case TensionModel::kLatticeL1: return lattice_l1(beta);
    case TensionModel::kIsotropic: return isotropic(beta);
    case TensionModel::kNumericPath: return numeric_path(beta, path_length);
    case TensionModel::kCustom: break;
  }
  throw ConfigError("custom tensions need an evaluator");
}

double SurfaceTension::operator()(double nx, double ny) const {
  const double norm = std::hypot(nx, ny);
  if (!(norm > 0)) throw DomainError("direction must be non-zero");
  nx /= norm;
  ny /= norm;
  double v = 0;
  switch (model_) {
    case TensionModel::kLatticeL1: v = beta_ * (std::abs(nx) + std::abs(ny)); break;
    case TensionModel::kIsotropic: v = beta_; break;
    case TensionModel::kCustom: v = custom_(nx, ny); break;
    case TensionModel::kNumericPath: {
      const Endpoint e = endpoint(nx, ny, path_length_);
      v = -table_->log_z[static_cast<std::size_t>(e.a - table_->a_min)][e.c] / path_length_;
      break;
    }
  }
  return factor_ * v;
}

double SurfaceTension::at_angle(double theta) const {
  return (*this)(std::cos(theta), std::sin(theta));
}

bool SurfaceTension::near_diagonal(double nx, double ny) const {
  if (model_ != TensionModel::kNumericPath) return false;
  const double norm = std::hypot(nx, ny);
  const Endpoint e = endpoint(nx / norm, ny / norm, path_length_);
  return e.c > 0.8 * e.a;
}

SurfaceTension SurfaceTension::scaled(double k) const {
  if (!(k > 0)) throw DomainError("scale factor must be positive");
  SurfaceTension t = *this;
  t.factor_ *= k;
  return t;
}

}  // namespace fogdrip
