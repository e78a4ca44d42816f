#include "corot/driver.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "corot/errors.hpp"
#include "corot/io.hpp"
#include "corot/nullgeom.hpp"
#include "corot/residuals.hpp"
#include "corot/vfm.hpp"

namespace corot {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct RunMetrics {
  double E0 = 0.0;
  double drift = 0.0;               // max_t |E(t)-E0| / max(E0, eps)
  double metric_residual = 0.0;     // max over stored slices and r
  double momentum_residual = 0.0;   // max over interior stored times
  bool supnorm_ok = true;
  double supnorm_margin = 0.0;      // min over slices of rhs - lhs
};

RunMetrics collect_metrics(const RunResult& rr, const TargetManifold& target) {
  RunMetrics m;
  const History& h = rr.history;
  m.E0 = rr.E0;
  m.supnorm_margin = 1e300;
  for (int i = 0; i < h.size(); ++i) {
    const Slice& s = h.slice(i);
    const auto led = energy(s, compute_densities(s, target));
    m.drift = std::max(m.drift, std::abs(led.E_total - rr.E0) / std::max(rr.E0, 1e-300));
    const auto res = metric_identity_residual(s, led);
    for (double x : res) m.metric_residual = std::max(m.metric_residual, std::abs(x));
    const auto chain = supnorm_chain(s, target);
    m.supnorm_ok = m.supnorm_ok && chain.holds();
    m.supnorm_margin = std::min(m.supnorm_margin, chain.rhs - chain.lhs_max);
  }
  if (h.size() > 2) {
    const int mid = h.size() / 2;
    for (double x : momentum_constraint_residual(h, mid))
      m.momentum_residual = std::max(m.momentum_residual, std::abs(x));
  }
  if (m.E0 == 0.0) m.drift = 0.0;
  return m;
}

json config_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.entries()) j[k] = v;
  return j;
}

void write_ledger_csv(const fs::path& path, const RunResult& rr,
                      const TargetManifold& target) {
  std::ostringstream out;
  out << "t,E_total,drift_rel,max_abs_v,min_w,supnorm_lhs,supnorm_rhs\n";
  const History& h = rr.history;
  for (int i = 0; i < h.size(); ++i) {
    const Slice& s = h.slice(i);
    const auto led = energy(s, compute_densities(s, target));
    double maxv = 0.0, maxg = 0.0;
    for (size_t j = 0; j < s.v.size(); ++j) {
      maxv = std::max(maxv, std::abs(s.v[j]));
      maxg = std::max(maxg, s.gamma[j]);
    }
    const auto chain = supnorm_chain(s, target);
    out << format_g15(s.t) << ',' << format_g15(led.E_total) << ','
        << format_g15(rr.E0 > 0 ? std::abs(led.E_total - rr.E0) / rr.E0 : 0.0) << ','
        << format_g15(maxv) << ',' << format_g15(std::exp(-maxg)) << ','
        << format_g15(chain.lhs_max) << ',' << format_g15(chain.rhs) << '\n';
  }
  write_atomic(path, out.str());
}

TargetManifold target_from_manifest(const json& man) {
  const auto& cfg = man.at("config");
  std::vector<double> coeffs;
  if (cfg.contains("target.coeffs")) {
    std::istringstream in(cfg.at("target.coeffs").get<std::string>());
    std::string item;
    while (std::getline(in, item, ',')) coeffs.push_back(std::stod(item));
  }
  return make_target(cfg.at("target.name").get<std::string>(), coeffs);
}

}  // namespace

int cmd_evolve(const RunConfig& cfg) {
  const EvolutionConfig ec = cfg.evolution();
  const InitialDataSpec spec = cfg.initial_data();
  const fs::path out_dir = cfg.output_dir();

  RunResult rr = run(ec, spec);
  fs::create_directories(out_dir);
  write_history(out_dir / "slices", rr.history);
  write_ledger_csv(out_dir / "ledger.csv", rr, ec.target);

  const RunMetrics m = collect_metrics(rr, ec.target);
  json man;
  man["run_id"] = cfg.run_id();
  man["config"] = config_json(cfg);
  man["status"] = to_string(rr.status.verdict);
  man["t_stop"] = rr.status.t_stop;
  man["steps"] = rr.steps;
  man["dt"] = rr.dt;
  man["stored_slices"] = rr.history.size();
  man["E0"] = m.E0;
  man["energy_drift_rel"] = m.drift;
  man["max_metric_identity_residual"] = m.metric_residual;
  man["momentum_residual_max"] = m.momentum_residual;
  man["supnorm_chain_ok"] = m.supnorm_ok;
  man["supnorm_chain_margin"] = m.supnorm_margin;
  man["max_abs_v"] = rr.status.max_abs_v;
  man["min_w"] = rr.status.min_w;
  write_atomic(out_dir / "manifest.json", man.dump(2) + "\n");

  std::cout << "run " << cfg.run_id() << ": status=" << to_string(rr.status.verdict)
            << " E0=" << m.E0 << " drift=" << m.drift
            << " slices=" << rr.history.size() << " -> " << out_dir.string() << "\n";
  return rr.status.verdict == BlowupStatus::Verdict::DeficitExceeded ? 3 : 0;
}

int cmd_diagnose(const std::string& run_dir, const std::vector<std::string>& multipliers,
                 double apex_time, double lambda) {
  const fs::path dir = run_dir;
  std::ifstream man_in(dir / "manifest.json");
  if (!man_in) throw ConfigError("no manifest.json under " + run_dir + " (unknown run id)");
  json man = json::parse(man_in);
  const TargetManifold target = target_from_manifest(man);

  const History h = read_history(dir / "slices");
  const ConeRegion cone = cone_trace(h, apex_time, lambda);
  const NullFrame frame = integrate_frame(h, apex_time, target);

  // flat table of cone quantities for plotting
  {
    std::ostringstream out;
    out << "t,r_cone,EO,EO_ext,flux_X1_adj,kinetic_integral\n";
    int prev = -1;
    for (int ti = 0; ti < h.size(); ++ti) {
      if (h.t(ti) < cone.t_min() - 1e-12 || h.t(ti) > cone.t_apex + 1e-12) continue;
      const double rc = cone.r_at(h.t(ti));
      if (rc <= 2.0 * h.grid().dr) continue;
      const double EO = cone_energy(h, cone, ti, target);
      const double ext = exterior_energy(h, cone, ti, target, &frame);
      const double kin = kinetic_cone_integral(h, cone, ti, target);
      double fl = 0.0;
      if (prev >= 0) fl = flux(h, cone, Multiplier::X1(), prev, ti, target);
      out << format_g15(h.t(ti)) << ',' << format_g15(rc) << ',' << format_g15(EO)
          << ',' << format_g15(ext) << ',' << format_g15(fl) << ','
          << format_g15(kin) << '\n';
      prev = ti;
    }
    write_atomic(dir / "cone_table.csv", out.str());
  }

  // per-multiplier Stokes records over adjacent stored pairs
  {
    std::ostringstream out;
    const std::string run_id = man.at("run_id").get<std::string>();
    for (const auto& name : multipliers) {
      const Multiplier X = Multiplier::by_name(name);
      int prev = -1;
      for (int ti = 0; ti < h.size(); ++ti) {
        if (h.t(ti) < cone.t_min() - 1e-12 || h.t(ti) > cone.t_apex + 1e-12) continue;
        if (cone.r_at(h.t(ti)) <= 2.0 * h.grid().dr) continue;
        if (prev >= 0) {
          const FluxReport fr = stokes_residual(h, cone, X, prev, ti, target);
          json rec;
          rec["run_id"] = run_id;
          rec["multiplier"] = name;
          rec["tau"] = h.t(prev);
          rec["s"] = h.t(ti);
          rec["bulk"] = fr.bulk;
          rec["slice_lo"] = fr.slice_lo;
          rec["slice_hi"] = fr.slice_hi;
          rec["flux"] = fr.flux;
          rec["residual"] = fr.residual;
          out << rec.dump() << '\n';
        }
        prev = ti;
      }
    }
    write_atomic(dir / "stokes.jsonl", out.str());
  }

  // AB state samples along characteristics
  {
    const ABState ab = ab_diagnostics(h, cone, frame, target);
    std::ostringstream out;
    out << "kind,line,t,r,xi,eta,A2,B2,Ahat,Bhat,L,L0,Skl,Skn,Hhat\n";
    auto dump_lines = [&](const char* kind, const std::vector<std::vector<ABSample>>& ls) {
      for (size_t li = 0; li < ls.size(); ++li)
        for (const auto& s : ls[li])
          out << kind << ',' << li << ',' << format_g15(s.t) << ',' << format_g15(s.r)
              << ',' << format_g15(s.xi) << ',' << format_g15(s.eta) << ','
              << format_g15(s.A2) << ',' << format_g15(s.B2) << ','
              << format_g15(s.Ahat) << ',' << format_g15(s.Bhat) << ','
              << format_g15(s.L) << ',' << format_g15(s.L0) << ','
              << format_g15(s.Skl) << ',' << format_g15(s.Skn) << ','
              << format_g15(s.Hhat) << '\n';
    };
    dump_lines("outgoing", ab.outgoing);
    dump_lines("ingoing", ab.ingoing);
    write_atomic(dir / "abstate.csv", out.str());

    const Comparability comp = comparability(frame, h);
    double comm_max = 0.0;
    for (int ti = 1; ti + 1 < h.size(); ti += std::max(1, h.size() / 8))
      for (int ri = 1; ri + 1 < h.grid().n_points; ri += std::max(1, h.grid().n_points / 8))
        if (frame.is_covered(ti, ri)) {
          const auto c = commutator_residual(frame, h, ti, ri);
          comm_max = std::max({comm_max, std::abs(c[0]), std::abs(c[1])});
        }

    json fb;
    fb["F_bound_gap"] = frame.F_bound_gap;
    fb["G_bound_gap"] = frame.G_bound_gap;
    fb["z_quarter_form_gap"] = frame.z_quarter_form_gap;
    fb["comparability"] = {comp.c1, comp.c2, comp.c3, comp.c4};
    fb["commutator_max"] = comm_max;
    fb["path_independence_gap"] = path_independence_residual(frame, h);
    fb["L0sq_constant"] = ab.L0sq_constant;
    fb["dxi_constant"] = ab.dxi_constant;
    fb["deta_constant"] = ab.deta_constant;
    write_atomic(dir / "frame_bounds.json", fb.dump(2) + "\n");
  }

  // gnuplot stub for offline inspection
  write_atomic(dir / "plots.gp",
               "set datafile separator ','\n"
               "set key autotitle columnhead\n"
               "plot 'cone_table.csv' using 1:3 with lines title 'E^O(t)', \\\n"
               "     'cone_table.csv' using 1:4 with lines title 'E_ext(t)'\n");

  std::cout << "diagnostics written under " << dir.string() << "\n";
  return 0;
}

int cmd_convergence(const RunConfig& cfg, int levels) {
  if (levels < 3) throw ConfigError("convergence needs at least 3 levels");
  const int n0 = cfg.get_int_or("grid.n", 257);

  struct LevelResult {
    int n;
    double dr, drift, momentum, divx1;
  };

  auto run_level = [&](int n) {
    RunConfig c = cfg;
    c.apply_override("grid.n=" + std::to_string(n));
    const EvolutionConfig ec = c.evolution();
    const InitialDataSpec spec = c.initial_data();
    const RunResult rr = run(ec, spec);
    LevelResult lr{n, ec.grid.dr, 0.0, 0.0, 0.0};
    const RunMetrics m = collect_metrics(rr, ec.target);
    lr.drift = m.drift;
    lr.momentum = m.momentum_residual;
    if (rr.history.size() > 2) {
      const int mid = rr.history.size() / 2;
      for (double x : divergence_fd(rr.history, mid, Multiplier::X1(), ec.target))
        lr.divx1 = std::max(lr.divx1, std::abs(x));
    }
    return lr;
  };

  std::vector<std::future<LevelResult>> futs;
  for (int l = 0; l < levels; ++l)
    futs.push_back(std::async(std::launch::async, run_level, n0 << l));
  std::vector<LevelResult> res;
  for (auto& f : futs) res.push_back(f.get());

  auto order_fit = [](const std::vector<LevelResult>& rs, auto pick) {
    // least squares slope of log(err) against log(dr)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& r : rs) {
      const double e = pick(r);
      if (e <= 0.0) return std::nan("");
      const double x = std::log(r.dr), y = std::log(e);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  };

  const double o_drift = order_fit(res, [](const LevelResult& r) { return r.drift; });
  const double o_mom = order_fit(res, [](const LevelResult& r) { return r.momentum; });
  const double o_div = order_fit(res, [](const LevelResult& r) { return r.divx1; });

  std::ostringstream out;
  out << "n,dr,energy_drift,momentum_residual,divergence_X1\n";
  for (const auto& r : res)
    out << r.n << ',' << format_g15(r.dr) << ',' << format_g15(r.drift) << ','
        << format_g15(r.momentum) << ',' << format_g15(r.divx1) << '\n';
  out << "# observed orders: drift="
      << (std::isnan(o_drift) ? "n/a" : format_g15(o_drift))
      << " momentum=" << (std::isnan(o_mom) ? "n/a" : format_g15(o_mom))
      << " divergence_X1=" << (std::isnan(o_div) ? "n/a" : format_g15(o_div)) << '\n';

  const fs::path out_dir = cfg.output_dir();
  fs::create_directories(out_dir);
  write_atomic(out_dir / "convergence.csv", out.str());
  std::cout << out.str();
  return 0;
}

int cmd_bisect(const RunConfig& cfg, double A_low, double A_high, double tol) {
  const EvolutionConfig ec = cfg.evolution();
  InitialDataSpec spec = cfg.initial_data();
  try {
    const BisectionResult br = bisect_critical_amplitude(spec, ec, A_low, A_high, tol);
    json rep;
    rep["A_low"] = br.A_low;
    rep["A_high"] = br.A_high;
    rep["width"] = br.A_high - br.A_low;
    json probes = json::array();
    for (const auto& p : br.probes)
      probes.push_back({{"amplitude", p.amplitude},
                        {"verdict", to_string(p.verdict)},
                        {"max_abs_v", p.max_abs_v}});
    rep["probes"] = probes;
    const fs::path out_dir = cfg.output_dir();
    fs::create_directories(out_dir);
    write_atomic(out_dir / "bisect.json", rep.dump(2) + "\n");
    std::cout << "critical amplitude bracket: [" << br.A_low << ", " << br.A_high
              << "] after " << br.probes.size() << " probes\n";
    return 0;
  } catch (const BracketInvalid& e) {
    std::cerr << "bracket invalid: low verdict=" << e.low_verdict
              << ", high verdict=" << e.high_verdict << "\n";
    return 2;
  }
}

int cmd_check_target(const std::string& name, const std::vector<double>& coeffs,
                     double u_max, int n_samples) {
  const TargetManifold t = make_target(name, coeffs);
  for (const TargetCondition id :
       {TargetCondition::GeodesicConvexity, TargetCondition::Grillakis,
        TargetCondition::SphereAtInfinity}) {
    const ConditionReport rep = check_condition(t, id, u_max, n_samples);
    std::cout << t.name << ' ' << to_string(id) << ": " << to_string(rep.verdict);
    if (rep.verdict == ConditionVerdict::Violated)
      std::cout << " (witness u=" << rep.witness_u << ", value=" << rep.witness_value << ")";
    if (rep.heuristic && rep.verdict == ConditionVerdict::Satisfied)
      std::cout << " (heuristic)";
    std::cout << "\n";
  }
  return 0;
}

}  // namespace corot
