#include "fogdrip/sampler.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "fogdrip/errors.hpp"

namespace fogdrip {

namespace {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ChainState::ChainState(HeightField f, std::uint64_t seed)
    : field(std::move(f)), energy(perimeter_sum(field)), alpha(fogdrip::alpha(field)), rng(seed) {}

void ChainState::check_consistency() const {
  const std::int64_t e = perimeter_sum(field);
  const std::int64_t a = fogdrip::alpha(field);
  if (e != energy || a != alpha) {
    std::ostringstream os;
    os << "chain bookkeeping drifted at sweep " << sweeps << ": energy " << energy << " vs "
       << e << ", alpha " << alpha << " vs " << a;
    throw ConsistencyError(os.str());
  }
}

MetropolisSampler::MetropolisSampler(double beta, Ensemble ensemble)
    : beta_(beta), ensemble_(std::move(ensemble)) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be finite and >= 0");
  for (int de = -4; de <= 4; ++de) boltzmann_[de + 4] = std::exp(-beta * de);
  if (const auto* c = std::get_if<CanonicalEnsemble>(&ensemble_)) {
    const auto& q = c->table.log_q;
    const std::size_t n = q.size();
    ratio_up_.assign(n, 0.0);
    ratio_down_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 < n && std::isfinite(q[i + 1])) ratio_up_[i] = std::exp(q[i + 1] - q[i]);
      if (i > 0 && std::isfinite(q[i - 1])) ratio_down_[i] = std::exp(q[i - 1] - q[i]);
    }
  }
  if (const auto* p = std::get_if<PinnedEnsemble>(&ensemble_); p && p->hi < p->lo)
    throw ConfigError("pinned window is empty");
}

template <class Factor>
std::int64_t MetropolisSampler::run_steps(ChainState& state, std::int64_t steps,
                                          const Factor& factor) const {
  HeightField& f = state.field;
  const int L = f.geometry().interior_side();
  const int hmax = f.geometry().hmax;
  const std::size_t st = f.stride();
  const auto n = static_cast<unsigned __int128>(f.geometry().interior_sites());
  std::int64_t accepted = 0;
  for (std::int64_t i = 0; i < steps; ++i) {
    const std::uint64_t r = state.rng();
    const int dh = (r & 1) ? 1 : -1;
    const auto k = static_cast<int>(((r >> 1) * n) >> 63);
    const std::size_t idx = static_cast<std::size_t>(1 + k / L) * st + 1 + k % L;
    const int h = f.raw(idx);
    const int hn = h + dh;
    if (hn > hmax || hn < -hmax) continue;
    const int a = f.raw(idx - 1), b = f.raw(idx + 1), c = f.raw(idx - st), d = f.raw(idx + st);
    const int de = std::abs(hn - a) - std::abs(h - a) + std::abs(hn - b) - std::abs(h - b) +
                   std::abs(hn - c) - std::abs(h - c) + std::abs(hn - d) - std::abs(h - d);
    const double ratio = boltzmann_[de + 4] * factor(state.alpha, dh);
    if (ratio >= 1.0 || uniform01(state.rng) < ratio) {
      f.add_raw(idx, dh);
      state.energy += de;
      state.alpha += dh;
      ++accepted;
    }
  }
  return accepted;
}

namespace {

// Acceptance factors beyond the Boltzmann weight.
struct GrandFactor {
  double operator()(std::int64_t, int) const { return 1.0; }
};
struct PinnedFactor {
  std::int64_t lo, hi;
  double operator()(std::int64_t a, int dh) const {
    const std::int64_t n = a + dh;
    return (n >= lo && n <= hi) ? 1.0 : 0.0;
  }
};
struct CanonicalFactor {
  std::int64_t amin;
  const std::vector<double>* up;
  const std::vector<double>* down;
  double operator()(std::int64_t a, int dh) const {
    const std::int64_t i = a - amin;
    if (i < 0 || i >= static_cast<std::int64_t>(up->size())) return 0.0;
    return dh > 0 ? (*up)[i] : (*down)[i];
  }
};

}  // namespace

double MetropolisSampler::acceptance(const HeightField& field, std::int64_t alpha, Site site,
                                     int dh) const {
  const MoveDelta m = propose_delta(field, site, dh);
  if (!m.valid) return 0.0;
  const double boltz = boltzmann_[m.energy + 4];
  const double w = std::visit(
      Overloaded{[&](const GrandEnsemble&) { return GrandFactor{}(alpha, dh); },
                 [&](const PinnedEnsemble& p) { return PinnedFactor{p.lo, p.hi}(alpha, dh); },
                 [&](const CanonicalEnsemble& c) {
                   return CanonicalFactor{c.table.alpha_min, &ratio_up_, &ratio_down_}(alpha, dh);
                 }},
      ensemble_);
  return std::min(1.0, boltz * w);
}

std::int64_t MetropolisSampler::sweep(ChainState& state) const {
  const std::int64_t steps = state.field.geometry().interior_sites();
  return std::visit(
      Overloaded{[&](const GrandEnsemble&) { return run_steps(state, steps, GrandFactor{}); },
                 [&](const PinnedEnsemble& p) {
                   return run_steps(state, steps, PinnedFactor{p.lo, p.hi});
                 },
                 [&](const CanonicalEnsemble& c) {
                   return run_steps(state, steps,
                                    CanonicalFactor{c.table.alpha_min, &ratio_up_, &ratio_down_});
                 }},
      ensemble_);
}

bool MetropolisSampler::step(ChainState& state) const {
  return std::visit(
             Overloaded{[&](const GrandEnsemble&) { return run_steps(state, 1, GrandFactor{}); },
                        [&](const PinnedEnsemble& p) {
                          return run_steps(state, 1, PinnedFactor{p.lo, p.hi});
                        },
                        [&](const CanonicalEnsemble& c) {
                          return run_steps(
                              state, 1, CanonicalFactor{c.table.alpha_min, &ratio_up_, &ratio_down_});
                        }},
             ensemble_) == 1;
}

double integrated_autocorrelation_time(std::span<const double> series, double c) {
  const std::size_t n = series.size();
  if (n < 2) return 0.5;
  double mean = 0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  // Autocovariance through a zero-padded FFT.
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  std::vector<std::complex<double>> x(m, 0.0), spec;
  for (std::size_t i = 0; i < n; ++i) x[i] = series[i] - mean;
  Eigen::FFT<double> fft;
  fft.fwd(spec, x);
  for (auto& z : spec) z = std::norm(z);
  fft.inv(x, spec);
  const double c0 = x[0].real();
  if (!(c0 > 1e-300 * static_cast<double>(n))) return 0.5;

  double tau = 0.5;
  for (std::size_t w = 1; w < n; ++w) {
    tau += x[w].real() / c0;
    if (static_cast<double>(w) >= c * tau) return tau;
  }
  return tau;
}

ChainResult run_chain(const ChainConfig& config, const SweepObserver& observer) {
  if (config.sweeps < 0) throw ConfigError("sweeps must be non-negative");
  if (config.checkpoint_every <= 0) throw ConfigError("checkpoint period must be positive");
  HeightField init = config.initial ? *config.initial : HeightField(config.geometry);
  if (!(init.geometry() == config.geometry))
    throw ConfigError("initial field does not match the configured geometry");

  ChainState state(std::move(init), config.seed);
  const MetropolisSampler sampler(config.beta, config.ensemble);
  if (const auto* p = std::get_if<PinnedEnsemble>(&config.ensemble);
      p && (state.alpha < p->lo || state.alpha > p->hi))
    throw ConfigError("initial alpha lies outside the pinned window");
  if (const auto* c = std::get_if<CanonicalEnsemble>(&config.ensemble);
      c && (!c->table.covers(state.alpha) || !std::isfinite(c->table(state.alpha))))
    throw ConfigError("initial alpha lies outside the canonical weight table");

  ChainResult out;
  out.burnin = config.burnin < 0 ? config.sweeps / 10 : std::min(config.burnin, config.sweeps);
  std::vector<double> alphas;
  double sum_e = 0;

  auto record = [&](std::int64_t s) {
    if (config.record_series) out.series.push_back({s, state.energy, state.alpha});
    if (config.thinning > 0 && s >= out.burnin && s % config.thinning == 0)
      out.snapshots.emplace_back(s, state.field);
    if (s >= out.burnin) {
      alphas.push_back(static_cast<double>(state.alpha));
      sum_e += static_cast<double>(state.energy);
    }
    if (observer) observer(state);
  };

  record(0);
  const std::int64_t per_sweep = config.geometry.interior_sites();
  for (std::int64_t s = 1; s <= config.sweeps; ++s) {
    out.accepted += sampler.sweep(state);
    out.proposed += per_sweep;
    state.sweeps = s;
    if (s % config.checkpoint_every == 0) state.check_consistency();
    record(s);
  }
  state.check_consistency();

  double sum_a = 0;
  for (double a : alphas) sum_a += a;
  out.mean_alpha = sum_a / static_cast<double>(alphas.size());
  out.mean_energy = sum_e / static_cast<double>(alphas.size());
  out.iat_alpha = integrated_autocorrelation_time(alphas);
  out.final_field = std::move(state.field);
  return out;
}

ContourClasses classify_contours(const ContourFamily& family, const LatticeGeometry& geometry,
                                 double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  ContourClasses out;
  out.epsilon = epsilon;
  out.small_threshold = std::log(static_cast<double>(geometry.N)) / epsilon;
  out.large_threshold = epsilon * geometry.N;
  for (std::size_t i = 0; i < family.contours.size(); ++i) {
    const double len = family.contours[i].length();
    if (len <= out.small_threshold) out.small.push_back(i);
    else if (len >= out.large_threshold) out.large.push_back(i);
    else out.intermediate.push_back(i);
  }
  return out;
}

}  // namespace fogdrip
