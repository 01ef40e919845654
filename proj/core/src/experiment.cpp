#include "kpplab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "kpplab/solver.hpp"
#include "kpplab/theory.hpp"
#include "nlohmann/json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace kpplab {

std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string default_output_root() {
  const char* env = std::getenv("KPPLAB_OUTPUT_ROOT");
  return env && *env ? env : "kpplab-out";
}

namespace {

void write_trajectories_csv(const std::string& path, const RunRecord& rec) {
  std::ofstream out(path);
  out << "t,lambda,x_min,x_max,empty\n";
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    for (const auto& traj : rec.trajectories) {
      const LevelSample& s = traj.samples[k];
      out << format_num(s.t) << ',' << format_num(traj.lambda) << ','
          << format_num(s.x_min) << ',' << format_num(s.x_max) << ','
          << (s.empty ? 1 : 0) << '\n';
    }
  }
}

void write_flatness_csv(const std::string& path,
                        const std::vector<FlatnessRecord>& series) {
  std::ofstream out(path);
  out << "t,sup_ux,sup_v,m_plus,m_minus\n";
  for (const auto& r : series)
    out << format_num(r.t) << ',' << format_num(r.sup_ux) << ',' << format_num(r.sup_v)
        << ',' << format_num(r.m_plus) << ',' << format_num(r.m_minus) << '\n';
}

json check_to_json(const CheckResult& c) {
  return json{{"check", c.check},
              {"params", c.params},
              {"entry_time", c.entry_time},
              {"worst_margin", c.worst_margin},
              {"pass", c.pass}};
}

void evaluate_checks(const ExperimentConfig& cfg, const InitialProfile& p,
                     const Nonlinearity& nl, const RunRecord& rec,
                     ExperimentResult& res) {
  for (double eps : cfg.band_eps) {
    for (const auto& traj : rec.trajectories) {
      const PersistenceReport rep =
          band_membership(traj, p, nl, eps, traj.lambda, traj.lambda);
      CheckResult c;
      c.check = "band_membership";
      c.params = "lambda=" + format_num(traj.lambda) + " eps=" + format_num(eps);
      c.entry_time = rep.entry_time;
      c.worst_margin = rep.worst_margin;
      c.pass = rep.pass;
      res.checks.push_back(c);
    }
  }

  if (cfg.refined.size() == 4) {
    for (const auto& traj : rec.trajectories) {
      const RefinedBandReport rep = refined_band(traj, p, nl, cfg.refined[0],
                                                 cfg.refined[1], cfg.refined[2],
                                                 cfg.refined[3]);
      CheckResult c;
      c.check = "refined_band";
      c.params = "lambda=" + format_num(traj.lambda) + " r_min=" +
                 format_num(rep.r_min) + " r_max=" + format_num(rep.r_max);
      c.entry_time = cfg.refined[2];
      c.worst_margin =
          std::max({cfg.refined[0] - rep.r_min, rep.r_max - cfg.refined[1], 0.0});
      c.pass = rep.pass;
      res.checks.push_back(c);
    }
  }

  if (cfg.sandwich_eps > 0.0) {
    const ComparisonBound sup =
        derive_comparison_params(p, nl, cfg.sandwich_eps, ComparisonKind::super);
    const ComparisonBound sub =
        derive_comparison_params(p, nl, cfg.sandwich_eps, ComparisonKind::sub);
    const SandwichReport rep = sandwich_report(rec, p, sup, sub, cfg.sandwich_tol);
    CheckResult c;
    c.check = "sandwich";
    c.params = "eps=" + format_num(cfg.sandwich_eps) + " xi1=" + format_num(sup.xi1) +
               " xi2=" + format_num(sub.xi2) + " B=" + format_num(sub.B);
    c.worst_margin = std::max(rep.worst_upper, rep.worst_lower);
    c.pass = rep.pass;
    res.checks.push_back(c);
  }

  if (cfg.flatness && !rec.snapshots.empty()) {
    const auto series = flatness_series(rec);
    bool mono = true;
    double worst = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i) {
      const double up = series[i].m_plus - series[i - 1].m_plus;
      const double dn = series[i - 1].m_minus - series[i].m_minus;
      worst = std::max({worst, up, dn});
      if (up > 1e-6 || dn > 1e-6) mono = false;
    }
    CheckResult c;
    c.check = "flatness_monotone";
    c.params = "slack=1e-06";
    c.worst_margin = worst;
    c.pass = mono;
    res.checks.push_back(c);

    // Decay of sup|u_x/u| between the half-time and final observations.
    const FlatnessRecord& last = series.back();
    const FlatnessRecord* half = &series.front();
    for (const auto& r : series)
      if (r.t <= 0.5 * last.t) half = &r;
    CheckResult d;
    d.check = "flatness_decay";
    d.params = "t_half=" + format_num(half->t) + " sup_v_half=" +
               format_num(half->sup_v) + " sup_v_end=" + format_num(last.sup_v);
    d.worst_margin = half->sup_v > 0.0 ? last.sup_v / half->sup_v : 0.0;
    d.pass = last.sup_v < half->sup_v;
    res.checks.push_back(d);
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  ExperimentResult res;
  res.name = cfg.name;
  res.dir = out_dir;
  const auto t0 = std::chrono::steady_clock::now();

  json manifest;
  manifest["name"] = cfg.name;
  manifest["version"] = kVersion;
  manifest["config"] = cfg.canonical_text;

  RunRecord rec;
  try {
    fs::create_directories(out_dir);
    const InitialProfile p = cfg.make_profile();
    const Nonlinearity nl = cfg.make_nonlinearity();
    const Grid g = cfg.make_grid();

    RunOptions opts;
    opts.levels = cfg.levels;
    opts.record_snapshots = cfg.snapshots;
    opts.allow_expansion = cfg.expansion;
    rec = run(p, nl, cfg.solver, g, cfg.t_end, opts);

    write_trajectories_csv(out_dir + "/trajectories.csv", rec);
    if (cfg.flatness && !rec.snapshots.empty())
      write_flatness_csv(out_dir + "/flatness.csv", flatness_series(rec));

    if (!rec.completed) throw std::runtime_error(rec.error);
    res.ok = true;

    evaluate_checks(cfg, p, nl, rec, res);

    json jfits = json::array();
    for (const auto& fr : cfg.fits) {
      for (const auto& traj : rec.trajectories) {
        json jf{{"lambda", traj.lambda},
                {"law", to_string(fr.law)},
                {"t_a", fr.t_a},
                {"t_b", fr.t_b}};
        try {
          const GrowthFit fit = fit_growth_law(traj, fr.law, fr.t_a, fr.t_b);
          jf["slope"] = fit.slope;
          jf["intercept"] = fit.intercept;
          jf["r2"] = fit.r2;
          jf["n"] = fit.n;
          res.fits.push_back({traj.lambda, fit});
        } catch (const std::exception& e) {
          jf["error"] = e.what();
        }
        jfits.push_back(jf);
      }
    }
    std::ofstream(out_dir + "/fits.json") << jfits.dump(2) << "\n";

    json jchecks = json::array();
    for (const auto& c : res.checks) jchecks.push_back(check_to_json(c));
    std::ofstream(out_dir + "/checks.json") << jchecks.dump(2) << "\n";
  } catch (const std::exception& e) {
    res.ok = false;
    res.error = e.what();
    manifest["error"] = res.error;
  }

  res.checks_pass = res.ok;
  for (const auto& c : res.checks) res.checks_pass = res.checks_pass && c.pass;

  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["wall_time_s"] = res.wall_time_s;
  manifest["completed"] = res.ok;
  manifest["checks_pass"] = res.checks_pass;
  manifest["stats"] = {{"steps", rec.stats.steps},
                       {"rejected", rec.stats.rejected},
                       {"dt_last", rec.stats.dt_last},
                       {"expansions", rec.expansions.size()}};
  manifest["invariants"] = {{"worst_range_low", rec.invariants.worst_range_low},
                            {"worst_range_high", rec.invariants.worst_range_high},
                            {"worst_monotone", rec.invariants.worst_monotone}};
  try {
    std::ofstream(out_dir + "/manifest.json") << manifest.dump(2) << "\n";
  } catch (...) {
  }
  return res;
}

SweepResult sweep(const std::vector<ExperimentConfig>& cfgs, const std::string& out_root,
                  int workers) {
  if (cfgs.empty()) throw std::invalid_argument("sweep needs at least one experiment");
  fs::create_directories(out_root);
  SweepResult sr;
  sr.results.resize(cfgs.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfgs.size()) return;
      try {
        sr.results[i] = run_experiment(cfgs[i], out_root + "/" + cfgs[i].name);
      } catch (const std::exception& e) {
        sr.results[i].name = cfgs[i].name;
        sr.results[i].ok = false;
        sr.results[i].error = e.what();
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(workers, cfgs.size()));
  std::vector<std::thread> pool;
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  sr.summary_path = out_root + "/summary.csv";
  std::ofstream out(sr.summary_path);
  out << "name,ok,checks_pass,checks_passed,checks_total,fit_law,fit_lambda,"
         "fit_slope,fit_intercept,fit_r2,error\n";
  sr.all_ok = true;
  sr.all_checks_pass = true;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const ExperimentResult& r = sr.results[i];
    sr.all_ok = sr.all_ok && r.ok;
    sr.all_checks_pass = sr.all_checks_pass && r.checks_pass;
    std::size_t passed = 0;
    for (const auto& c : r.checks) passed += c.pass ? 1 : 0;
    out << r.name << ',' << (r.ok ? 1 : 0) << ',' << (r.checks_pass ? 1 : 0) << ','
        << passed << ',' << r.checks.size() << ',';
    if (!r.fits.empty()) {
      const FitResult& f = r.fits.front();
      out << to_string(f.fit.law) << ',' << format_num(f.lambda) << ','
          << format_num(f.fit.slope) << ',' << format_num(f.fit.intercept) << ','
          << format_num(f.fit.r2) << ',';
    } else {
      out << ",,,,,";
    }
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n') c = ';';
    out << err << '\n';
  }
  return sr;
}

}  // namespace kpplab
