#include "fogdrip/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fogdrip/errors.hpp"
#include "fogdrip/parallel.hpp"

namespace fogdrip {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

std::int64_t enumeration_size(const LatticeGeometry& geometry) {
  const std::int64_t base = 2 * geometry.hmax + 1;
  std::int64_t n = 1;
  for (std::int64_t k = 0; k < geometry.interior_sites(); ++k) {
    if (n > std::numeric_limits<std::int64_t>::max() / base)
      return std::numeric_limits<std::int64_t>::max();
    n *= base;
  }
  return n;
}

EnumeratedEnsemble::EnumeratedEnsemble(const LatticeGeometry& geometry, std::int64_t budget)
    : geometry_(geometry) {
  const std::int64_t total = enumeration_size(geometry);
  if (total > budget) {
    std::ostringstream os;
    os << "enumeration of " << geometry.interior_side() << "x" << geometry.interior_side()
       << " interior with hmax " << geometry.hmax << " needs ";
    if (total == std::numeric_limits<std::int64_t>::max()) os << "more than 9.2e18";
    else os << total;
    os << " states, budget is " << budget;
    throw BudgetExceeded(os.str());
  }
  energy_.resize(static_cast<std::size_t>(total));
  alpha_.resize(static_cast<std::size_t>(total));

  const int base = 2 * geometry.hmax + 1;
  const int sites = static_cast<int>(geometry.interior_sites());
  const std::int64_t block = total / base;  // codes sharing the leading digit

  parallel_for(static_cast<std::size_t>(base), [&](std::size_t lead) {
    const std::int64_t first = static_cast<std::int64_t>(lead) * block;
    HeightField f = field(first);
    std::int64_t e = perimeter_sum(f);
    std::int64_t a = fogdrip::alpha(f);
    std::vector<std::size_t> idx(sites);
    for (int k = 0; k < sites; ++k) {
      const Site s = f.interior_site(k);
      idx[k] = f.index(s.x, s.y);
    }
    const std::size_t st = f.stride();
    auto change = [&](int k, int hn) {
      const std::size_t i = idx[k];
      const int h = f.raw(i);
      for (std::size_t nb : {i - 1, i + 1, i - st, i + st})
        e += std::abs(hn - f.raw(nb)) - std::abs(h - f.raw(nb));
      a += hn - h;
      f.add_raw(i, hn - h);
    };
    for (std::int64_t code = first; code < first + block; ++code) {
      energy_[code] = static_cast<std::int16_t>(e);
      alpha_[code] = static_cast<std::int16_t>(a);
      // odometer increment, least significant site first
      for (int k = 0; k < sites; ++k) {
        const int h = f.raw(idx[k]);
        if (h < geometry.hmax) {
          change(k, h + 1);
          break;
        }
        change(k, -geometry.hmax);
      }
    }
  });
}

HeightField EnumeratedEnsemble::field(std::int64_t code) const {
  HeightField f(geometry_);
  const int base = 2 * geometry_.hmax + 1;
  for (std::int64_t k = 0; k < geometry_.interior_sites(); ++k) {
    f.set(f.interior_site(k), static_cast<int>(code % base) - geometry_.hmax);
    code /= base;
  }
  return f;
}

std::int64_t EnumeratedEnsemble::code_of(const HeightField& field) const {
  const int base = 2 * geometry_.hmax + 1;
  std::int64_t code = 0;
  for (std::int64_t k = geometry_.interior_sites() - 1; k >= 0; --k)
    code = code * base + field.at(field.interior_site(k)) + geometry_.hmax;
  return code;
}

double EnumeratedEnsemble::log_partition(double beta) const {
  std::map<int, std::int64_t> hist;
  for (auto e : energy_) ++hist[e];
  std::vector<double> terms;
  for (auto [e, n] : hist) terms.push_back(-beta * e + std::log(static_cast<double>(n)));
  return log_sum_exp(terms);
}

std::vector<double> exact_law(const EnumeratedEnsemble& ens, double beta, const Ensemble& ensemble) {
  const std::int64_t n = ens.count();
  std::vector<double> logw(static_cast<std::size_t>(n));
  if (const auto* c = std::get_if<CanonicalEnsemble>(&ensemble);
      c && c->table.method != WeightMethod::kExact)
    throw ConfigError("the oracle needs an exact particle-number weight table");
  for (std::int64_t code = 0; code < n; ++code) {
    const int a = ens.alpha(code);
    double extra = 0;
    if (const auto* p = std::get_if<PinnedEnsemble>(&ensemble)) {
      extra = (a >= p->lo && a <= p->hi) ? 0.0 : kNegInf;
    } else if (const auto* c = std::get_if<CanonicalEnsemble>(&ensemble)) {
      extra = c->table.covers(a) ? c->table(a) : kNegInf;
    }
    logw[code] = -beta * ens.energy(code) + extra;
  }
  const double lz = log_sum_exp(logw);
  if (!std::isfinite(lz)) throw DomainError("the ensemble assigns no mass to any field");
  for (double& v : logw) v = std::exp(v - lz);
  return logw;
}

std::map<std::int64_t, double> alpha_marginal(const EnumeratedEnsemble& ens,
                                              const std::vector<double>& law) {
  std::map<std::int64_t, double> out;
  for (std::int64_t code = 0; code < ens.count(); ++code)
    if (law[code] > 0) out[ens.alpha(code)] += law[code];
  return out;
}

CanonicalEnsemble exact_canonical_ensemble(const LatticeGeometry& geometry,
                                           const PhaseParams& params, double delta) {
  const std::int64_t reach = geometry.interior_sites() * geometry.hmax;
  return CanonicalEnsemble{
      canonical_log_weight_table(geometry, params, delta, -reach, reach, WeightMethod::kExact)};
}

}  // namespace fogdrip
