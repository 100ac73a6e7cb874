#include "fogdrip/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "fogdrip/analysis.hpp"
#include "fogdrip/config.hpp"
#include "fogdrip/errors.hpp"
#include "fogdrip/oracle.hpp"
#include "fogdrip/parallel.hpp"
#include "fogdrip/phase_diagram.hpp"
#include "fogdrip/wang_landau.hpp"

#ifndef FOGDRIP_VERSION
#define FOGDRIP_VERSION "dev"
#endif
#ifndef FOGDRIP_GOLDEN_DIR
#define FOGDRIP_GOLDEN_DIR "tests/golden"
#endif

namespace fogdrip {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Finite doubles as numbers, the rest as null.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// A run directory with a manifest that is rewritten whenever the status changes.
class RunDirectory {
 public:
  RunDirectory(fs::path root, std::string command, const RunConfig& config, std::vector<std::string> args)
      : root_(std::move(root)), command_(std::move(command)), config_(config), args_(std::move(args)) {
    fs::create_directories(root_);
    std::ofstream ini(root_ / "config.ini");
    write_config(config_, ini);
    if (!ini) throw ConfigError("cannot write into run directory '" + root_.string() + "'");
    outputs_.push_back("config.ini");
    write_manifest("running");
  }

  fs::path file(const std::string& name) {
    outputs_.push_back(name);
    const fs::path p = root_ / name;
    fs::create_directories(p.parent_path());
    return p;
  }

  void finish(const std::string& status, const json& extra = json::object()) {
    extra_ = extra;
    write_manifest(status);
  }

 private:
  void write_manifest(const std::string& status) {
    json cfg = json::object();
    for (const auto& k : config_keys()) cfg[k.section][k.key] = k.get(config_);
    json m = {{"tool", "fogdrip"},
              {"version", FOGDRIP_VERSION},
              {"compiler", __VERSION__},
              {"command", command_},
              {"arguments", args_},
              {"seed", config_.seed},
              {"config", cfg},
              {"status", status},
              {"outputs", outputs_}};
    if (!extra_.empty()) m["details"] = extra_;
    std::ofstream out(root_ / "manifest.json");
    out << m.dump(2) << '\n';
  }

  fs::path root_;
  std::string command_;
  RunConfig config_;
  std::vector<std::string> args_;
  std::vector<std::string> outputs_;
  json extra_ = json::object();
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  return out;
}

PhaseParams params_of(const RunConfig& c) { return PhaseParams::from_probabilities(c.pv, c.ps, c.f); }

WeightMethod weights_of(const RunConfig& c) {
  if (c.weights == "exact") return WeightMethod::kExact;
  if (c.weights == "llt") return WeightMethod::kLLT;
  return WeightMethod::kAuto;
}

WulffShape shape_of(const RunConfig& c) {
  WulffOptions o;
  o.directions = c.directions;
  return wulff_construct(
      SurfaceTension::make(parse_tension_model(c.tension), c.effective_tension_beta(), c.path_length), o);
}

json census_json(const MonolayerReport& r) {
  auto stats = [](const std::optional<ContourStats>& s) -> json {
    if (!s) return nullptr;
    return {{"sign", s->sign == Sign::kPlus ? "+" : "-"}, {"length", s->length}, {"area", s->area},
            {"level", s->level}};
  };
  json hist = json::object();
  for (const auto& [h, n] : r.height_histogram) hist[std::to_string(h)] = n;
  json j = {{"sampleId", r.sample_id},
            {"epsilon", r.epsilon},
            {"smallThreshold", r.small_threshold},
            {"largeThreshold", r.large_threshold},
            {"total", r.total},
            {"small", r.small},
            {"intermediate", r.intermediate},
            {"large", r.large},
            {"gamma0", stats(r.gamma0)},
            {"gamma1", stats(r.gamma1)},
            {"nestingDepth", r.nesting_depth},
            {"heightHistogram", hist},
            {"verdict", to_string(r.verdict)}};
  j["volumeBound"] = r.volume_bound ? json(*r.volume_bound) : json(nullptr);
  return j;
}

json contours_json(const ContourFamily& family) {
  json list = json::array();
  for (const auto& c : family.contours) {
    json verts = json::array();
    for (const auto& v : c.vertices()) verts.push_back({v.x2, v.y2});
    list.push_back({{"sign", c.sign() == Sign::kPlus ? "+" : "-"}, {"level", c.level()}, {"vertices", verts}});
  }
  return list;
}

// ---------------------------------------------------------------------------

int run_simulate(const RunConfig& c, RunDirectory& dir, std::ostream& out) {
  const LatticeGeometry g = LatticeGeometry::make(c.N, c.R, c.hmax);
  const PhaseParams params = params_of(c);
  ChainConfig cc;
  cc.geometry = g;
  cc.beta = c.beta;
  cc.sweeps = c.sweeps;
  cc.burnin = c.burnin;
  cc.thinning = c.thinning;
  cc.seed = c.seed;
  json details = json::object();
  if (c.ensemble == "canonical") {
    const std::int64_t reach = g.interior_sites() * g.hmax;
    const LogWeightTable table = canonical_log_weight_table(g, params, c.delta, -reach, reach, weights_of(c));
    details["sigma"] = table.target.sigma;
    details["deltaEffective"] = table.target.delta_effective;
    details["weights"] = table.method == WeightMethod::kExact ? "exact" : "llt";
    cc.ensemble = CanonicalEnsemble{table};
  } else if (c.ensemble == "pinned") {
    cc.ensemble = PinnedEnsemble{c.pin_lo, c.pin_hi};
    const std::int64_t start = std::clamp<std::int64_t>(0, c.pin_lo, c.pin_hi);
    if (start != 0) cc.initial = seed_droplet(g, start);
  }

  const ChainResult res = run_chain(cc);
  {
    auto s = open_out(dir.file("series.csv"));
    s << "sweep,energy,alpha\n";
    for (const auto& p : res.series) s << p.sweep << ',' << p.energy << ',' << p.alpha << '\n';
  }
  for (const auto& [sweep, field] : res.snapshots) {
    auto s = open_out(dir.file("snapshots/snapshot_" + std::to_string(sweep) + ".csv"));
    write_snapshot_csv(field, s);
  }
  {
    auto s = open_out(dir.file("final.csv"));
    write_snapshot_csv(res.final_field, s);
  }
  open_out(dir.file("contours.json")) << contours_json(extract_contours(res.final_field)).dump(1) << '\n';
  std::optional<VolumeBoundCheck> bound;
  if (c.ensemble == "canonical") bound = VolumeBoundCheck{details["deltaEffective"].get<double>(), params, 1.0};
  const MonolayerReport census = monolayer_census(res.final_field, c.epsilon, bound, "final");

  details["burnin"] = res.burnin;
  details["proposed"] = res.proposed;
  details["accepted"] = res.accepted;
  details["meanAlpha"] = jnum(res.mean_alpha);
  details["meanEnergy"] = jnum(res.mean_energy);
  details["iatAlpha"] = jnum(res.iat_alpha);
  details["census"] = census_json(census);

  bool converged = true;
  if (c.wang_landau) {
    WangLandauConfig wl;
    wl.geometry = g;
    wl.beta = c.beta;
    wl.b_min = c.b_min;
    wl.b_max = c.b_max;
    if (wl.b_min == 0 && wl.b_max == 0) {
      wl.b_max = g.interior_sites();
      wl.b_min = -wl.b_max;
    }
    wl.windows = c.windows;
    wl.log_f_final = c.log_f_final;
    wl.max_sweeps_per_window = c.max_sweeps_per_window;
    wl.seed = c.seed;
    const DensityOfStates dos = wang_landau_alpha(wl);
    auto s = open_out(dir.file("dos.csv"));
    s << "b,logG\n";
    for (std::int64_t b = dos.b_min; b <= dos.b_max(); ++b) s << b << ',' << num(dos(b)) << '\n';
    converged = dos.converged;
    details["wangLandau"] = {{"converged", dos.converged},
                             {"finalLogF", dos.final_log_f},
                             {"totalSweeps", dos.total_sweeps},
                             {"stages", dos.stages.size()}};
  }
  open_out(dir.file("summary.json")) << details.dump(2) << '\n';
  out << details.dump(2) << '\n';
  dir.finish(converged ? "complete" : "partial", details);
  return converged ? kExitOk : kExitIncomplete;
}

json critical_json(const CriticalValues& v) {
  return {{"delta1Analytic", jnum(v.delta1_analytic)},
          {"delta1", jnum(v.delta1)},
          {"delta15", jnum(v.delta15)},
          {"delta2", jnum(v.delta2)},
          {"delta25", jnum(v.delta25)},
          {"rhoMinus", jnum(v.rho_minus)},
          {"rhoPlus", jnum(v.rho_plus)},
          {"rhoAtDelta1", jnum(v.rho_at_delta1)},
          {"multiplicityDelta1", v.multiplicity_delta1},
          {"multiplicityDelta2", v.multiplicity_delta2},
          {"rCr", jnum(v.r_cr)},
          {"requiredR", jnum(v.required_R)},
          {"fits", v.fits},
          {"delta15AtDelta1", v.delta15_at_delta1},
          {"delta25AtDelta2", v.delta25_at_delta2}};
}

int run_phase_diagram(const RunConfig& c, RunDirectory& dir, std::ostream& out) {
  const PhaseModel model{params_of(c), shape_of(c), static_cast<double>(c.R)};
  CriticalOptions opts;
  opts.enforce_fitting = !c.allow_unfit;
  opts.table_points = c.points;
  const CriticalValues v = critical_values(model, opts);
  {
    auto s = open_out(dir.file("phase_diagram.csv"));
    s << "delta,rhoStar,k,r1,r1tilde,r2,Fmin,multiplicity\n";
    for (const auto& r : v.table)
      s << num(r.delta) << ',' << num(r.rho_star) << ',' << r.k << ',' << num(r.r1) << ',' << num(r.r1_tilde)
        << ',' << num(r.r2) << ',' << num(r.f_min) << ',' << r.multiplicity << '\n';
  }
  json j = critical_json(v);
  j["R"] = c.R;
  j["S1"] = model.shape.s1;
  j["costUnit"] = model.shape.cost_unit;
  open_out(dir.file("critical_values.json")) << j.dump(2) << '\n';
  out << j.dump(2) << '\n';
  dir.finish("complete");
  return kExitOk;
}

int run_wulff(const RunConfig& c, RunDirectory& dir, std::ostream& out) {
  const WulffShape shape = shape_of(c);
  json poly = json::array();
  for (const auto& p : shape.polygon) poly.push_back({p.x, p.y});
  json summary = {{"tension", c.tension},
                  {"beta", c.effective_tension_beta()},
                  {"costUnit", shape.cost_unit},
                  {"S1", shape.s1},
                  {"width", shape.width},
                  {"height", shape.height},
                  {"boundingSide", shape.bounding_side},
                  {"directions", shape.directions},
                  {"refined", shape.refined}};
  json full = summary;
  full["polygon"] = poly;
  open_out(dir.file("wulff.json")) << full.dump(2) << '\n';
  {
    auto s = open_out(dir.file("restricted.csv"));
    s << "S,wrst,k,regime,r\n";
    const auto steps = static_cast<long>(std::ceil(2.0 / c.s_step));
    for (long i = 0; i < steps; ++i) {
      const double S = static_cast<double>(i) * c.s_step;
      if (S >= 2) break;
      const RestrictedSolution r = restricted_wulff(shape, S);
      s << num(S) << ',' << num(r.value) << ',' << r.k << ',' << to_string(r.regime) << ',' << num(r.r) << '\n';
    }
  }
  out << summary.dump(2) << '\n';
  dir.finish(shape.refined ? "complete" : "partial", summary);
  return shape.refined ? kExitOk : kExitIncomplete;
}

std::string default_golden(const RunConfig& c) {
  return std::string(FOGDRIP_GOLDEN_DIR) + "/oracle_L" + std::to_string(c.L) + "_h" + std::to_string(c.hmax) +
         "_b" + num(c.beta) + ".json";
}

int run_oracle_check(const RunConfig& c, RunDirectory& dir, std::ostream& out) {
  const std::string path = c.golden.empty() ? default_golden(c) : c.golden;
  std::ifstream in(path);
  if (!in) throw ConfigError("no reference file '" + path + "' (generate it with tools/golden_oracle.py)");
  json golden;
  try {
    golden = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("reference file '" + path + "': " + e.what());
  }
  if (golden.at("L").get<int>() != c.L || golden.at("hmax").get<int>() != c.hmax ||
      golden.at("beta").get<double>() != c.beta)
    throw ConfigError("reference file '" + path + "' was made for other L, hmax or beta");

  const LatticeGeometry g = LatticeGeometry::from_interior(c.L, c.hmax);
  const EnumeratedEnsemble ens(g);
  const std::int64_t flat = ens.code_of(HeightField(g));
  json checks = json::array();
  bool all = true;
  auto check = [&](const std::string& name, double expected, double actual, double tol) {
    const double err = std::abs(expected - actual);
    const bool ok = err <= tol * std::max(1.0, std::abs(expected));
    all = all && ok;
    checks.push_back({{"name", name}, {"expected", expected}, {"actual", actual}, {"ok", ok}});
  };
  auto marginals = [&](const std::string& prefix, const json& ref, const std::map<std::int64_t, double>& got) {
    for (const auto& [b, p] : ref.items()) {
      const auto it = got.find(std::stoll(b));
      check(prefix + "[" + b + "]", p.get<double>(), it == got.end() ? 0.0 : it->second, 1e-9);
    }
    if (got.size() != ref.size()) {
      all = false;
      checks.push_back({{"name", prefix + " support"}, {"expected", ref.size()}, {"actual", got.size()}, {"ok", false}});
    }
  };

  const double tol = 1e-10;
  check("count", golden.at("count").get<double>(), static_cast<double>(ens.count()), 0.0);
  check("log_partition", golden.at("log_partition").get<double>(), ens.log_partition(c.beta), tol);
  const auto grand = exact_law(ens, c.beta, GrandEnsemble{});
  check("flat_probability", golden.at("flat_probability").get<double>(), grand[static_cast<std::size_t>(flat)], tol);
  marginals("alpha_marginal", golden.at("alpha_marginal"), alpha_marginal(ens, grand));

  const json& can = golden.at("canonical");
  const PhaseParams params = PhaseParams::from_probabilities(can.at("pv").get<double>(), can.at("ps").get<double>());
  const CanonicalEnsemble ce = exact_canonical_ensemble(g, params, can.at("delta").get<double>());
  check("canonical.sigma", can.at("sigma").get<double>(), static_cast<double>(ce.table.target.sigma), 0.0);
  const auto law = exact_law(ens, c.beta, ce);
  check("canonical.flat_probability", can.at("flat_probability").get<double>(), law[static_cast<std::size_t>(flat)],
        tol);
  marginals("canonical.alpha_marginal", can.at("alpha_marginal"), alpha_marginal(ens, law));

  json report = {{"golden", path}, {"pass", all}, {"checks", checks}};
  open_out(dir.file("oracle_check.json")) << report.dump(2) << '\n';
  out << "oracle-check " << (all ? "PASS" : "FAIL") << ": " << checks.size() << " comparisons against " << path
      << '\n';
  dir.finish(all ? "complete" : "failed", {{"pass", all}});
  return all ? kExitOk : kExitFailure;
}

int run_sweep(const RunConfig& c, RunDirectory& dir, std::ostream& out) {
  SweepConfig s;
  s.geometry = LatticeGeometry::make(c.N, c.R, c.hmax);
  s.beta = c.beta;
  s.params = params_of(c);
  s.tension = parse_tension_model(c.tension);
  s.tension_beta = c.effective_tension_beta();
  s.tension_path_length = c.path_length;
  s.deltas = c.deltas;
  s.replicates = c.replicates;
  s.sweeps = c.sweeps;
  s.burnin = c.burnin;
  s.thinning = c.thinning;
  s.epsilon = c.epsilon;
  s.bound_slack = c.bound_slack;
  s.weights = weights_of(c);
  s.seed = c.seed;
  s.budget_sweeps = c.budget_sweeps;
  const SweepReport rep = sweep_experiment(s);

  auto predicted = [](int k) { return k == 0 ? "flat" : k == 1 ? "one-monolayer" : "two-monolayer"; };
  {
    auto f = open_out(dir.file("sweep.csv"));
    f << "delta,samples,flat,one,two,other,meanGamma0Area,boundFraction,predictedB,predictedK,predictedVerdict,"
         "meanAlpha,meanIat\n";
    for (const auto& r : rep.rows)
      f << num(r.delta) << ',' << r.samples << ',' << num(r.flat) << ',' << num(r.one) << ',' << num(r.two) << ','
        << num(r.other) << ',' << num(r.mean_gamma0_area) << ',' << num(r.bound_fraction) << ','
        << num(r.predicted_b) << ',' << r.predicted_k << ',' << predicted(r.predicted_k) << ','
        << num(r.mean_alpha) << ',' << num(r.mean_iat) << '\n';
  }
  {
    auto f = open_out(dir.file("samples.csv"));
    f << "sample,verdict,total,small,intermediate,large,gamma0Sign,gamma0Length,gamma0Area,nestingDepth,"
         "volumeBound\n";
    for (const auto& m : rep.samples) {
      f << m.sample_id << ',' << to_string(m.verdict) << ',' << m.total << ',' << m.small << ',' << m.intermediate
        << ',' << m.large << ',';
      if (m.gamma0)
        f << (m.gamma0->sign == Sign::kPlus ? "+" : "-") << ',' << m.gamma0->length << ',' << m.gamma0->area;
      else
        f << ",,";
      f << ',' << m.nesting_depth << ',' << (m.volume_bound ? (*m.volume_bound ? "true" : "false") : "") << '\n';
    }
  }
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"delta", r.delta},
                    {"samples", r.samples},
                    {"flat", r.flat},
                    {"one", r.one},
                    {"two", r.two},
                    {"other", r.other},
                    {"meanGamma0Area", r.mean_gamma0_area},
                    {"boundFraction", r.bound_fraction},
                    {"predictedB", jnum(r.predicted_b)},
                    {"predictedVerdict", predicted(r.predicted_k)}});
  const double N = c.N;
  json summary = {{"partial", rep.partial},
                  {"epsilon", c.epsilon},
                  {"smallThreshold", std::log(N) / c.epsilon},
                  {"largeThreshold", c.epsilon * N},
                  {"boundSlack", c.bound_slack},
                  {"rows", rows}};
  open_out(dir.file("summary.json")) << summary.dump(2) << '\n';
  out << summary.dump(2) << '\n';
  dir.finish(rep.partial ? "partial" : "complete", {{"partial", rep.partial}});
  return rep.partial ? kExitIncomplete : kExitOk;
}

struct Subcommand {
  std::string name;
  std::string help;
  std::vector<std::string> flags;
  int (*run)(const RunConfig&, RunDirectory&, std::ostream&);
};

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> list = {
      {"simulate", "run one Metropolis chain (optionally with a Wang-Landau density estimate)",
       {"N", "R", "hmax", "beta", "pv", "ps", "f", "delta", "sweeps", "burnin", "thinning", "seed", "epsilon",
        "weights", "ensemble", "lo", "hi", "wang-landau", "b-min", "b-max", "windows", "log-f-final",
        "max-window-sweeps"},
       run_simulate},
      {"phase-diagram", "solve the variational problem and locate the critical supersaturations",
       {"R", "beta", "pv", "ps", "f", "tension", "tension-beta", "directions", "path-length", "allow-unfit", "points"},
       run_phase_diagram},
      {"wulff", "build the Wulff shape and tabulate the restricted problem",
       {"beta", "tension", "tension-beta", "directions", "path-length", "s-step"},
       run_wulff},
      {"oracle-check", "compare exhaustive enumeration with a reference file",
       {"L", "hmax", "beta", "golden"},
       run_oracle_check},
      {"sweep", "canonical chains over a supersaturation grid with a monolayer census",
       {"N", "R", "hmax", "beta", "pv", "ps", "f", "sweeps", "burnin", "thinning", "seed", "replicates", "epsilon",
        "weights", "tension", "tension-beta", "path-length", "deltas", "budget-sweeps", "bound-slack"},
       run_sweep},
  };
  return list;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fogdrip: interface droplets in a supersaturated lattice gas", "fogdrip"};
  app.set_version_flag("--version", FOGDRIP_VERSION);

  struct Bound {
    const Subcommand* sub;
    CLI::App* app;
    std::string config_path;
    std::string out_dir;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<Bound> bound(subcommands().size());
  for (std::size_t i = 0; i < subcommands().size(); ++i) {
    const Subcommand& s = subcommands()[i];
    Bound& b = bound[i];
    b.sub = &s;
    b.app = app.add_subcommand(s.name, s.help);
    b.app->add_option("--config", b.config_path, "INI file; flags override its values");
    b.app->add_option("--out", b.out_dir, "run directory (default: run-" + s.name + ")");
    for (const std::string& flag : s.flags) {
      const ConfigKey& key = config_key_by_flag(flag);
      const std::string help = key.help + " [" + key.section + "] " + key.key;
      if (flag == "allow-unfit" || flag == "wang-landau") {
        b.options[flag] = b.app->add_flag("--" + flag, help);
      } else {
        b.values[flag];
        b.options[flag] = b.app->add_option("--" + flag, b.values[flag], help);
      }
    }
  }
  app.require_subcommand(1, 1);

  if (argc <= 1) {
    err << app.help() << '\n';
    return kExitConfig;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (Bound& b : bound) {
    if (!b.app->parsed()) continue;
    try {
      RunConfig cfg = b.config_path.empty() ? RunConfig{} : read_config(b.config_path);
      for (const auto& [flag, opt] : b.options) {
        if (opt->count() == 0) continue;
        const ConfigKey& key = config_key_by_flag(flag);
        key.set(cfg, b.values.count(flag) ? b.values[flag] : std::string("true"));
      }
      validate(cfg);
      std::vector<std::string> args(argv + 1, argv + argc);
      RunDirectory dir(b.out_dir.empty() ? fs::path("run-" + b.sub->name) : fs::path(b.out_dir), b.sub->name, cfg,
                       args);
      try {
        return b.sub->run(cfg, dir, out);
      } catch (...) {
        dir.finish("failed");
        throw;
      }
    } catch (const FittingConditionError& e) {
      err << "error: " << e.what() << " (pass --allow-unfit to solve anyway)\n";
      return kExitConfig;
    } catch (const ConfigError& e) {
      err << "configuration error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const DomainError& e) {
      err << "configuration error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const BudgetExceeded& e) {
      err << "budget exceeded: " << e.what() << '\n';
      return kExitIncomplete;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitFailure;
    }
  }
  return kExitConfig;
}

}  // namespace fogdrip
