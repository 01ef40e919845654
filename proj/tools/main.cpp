#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kpplab/experiment.hpp"
#include "kpplab/fronts.hpp"
#include "kpplab/theory.hpp"

using namespace kpplab;

namespace {

// Exit codes shared by all subcommands: 0 checks pass, 2 check failures,
// 1 runtime error.
constexpr int kPass = 0;
constexpr int kCheckFail = 2;
constexpr int kError = 1;

LevelSetTrajectory read_trajectory(const std::string& dir, double lambda) {
  std::ifstream in(dir + "/trajectories.csv");
  if (!in) throw std::runtime_error("cannot open " + dir + "/trajectories.csv");
  LevelSetTrajectory traj;
  traj.lambda = lambda;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string f[5];
    for (int i = 0; i < 5; ++i) std::getline(row, f[i], ',');
    if (std::abs(std::stod(f[1]) - lambda) > 1e-12) continue;
    Crossing c;
    c.empty = f[4] != "0";
    if (!c.empty) {
      c.x_min = std::stod(f[2]);
      c.x_max = std::stod(f[3]);
    }
    traj.append(std::stod(f[0]), c);
  }
  if (traj.samples.empty())
    throw std::runtime_error("no samples for lambda=" + std::to_string(lambda));
  return traj;
}

int cmd_run(const std::string& config_path, std::string out_dir) {
  const ExperimentConfig cfg = ExperimentConfig::load(config_path);
  if (out_dir.empty()) out_dir = default_output_root() + "/" + cfg.name;
  const ExperimentResult res = run_experiment(cfg, out_dir);
  if (!res.ok) {
    std::cerr << "run failed: " << res.error << "\n";
    return kError;
  }
  std::size_t passed = 0;
  for (const auto& c : res.checks) passed += c.pass ? 1 : 0;
  std::cout << res.name << ": artifacts in " << res.dir << ", checks " << passed << "/"
            << res.checks.size() << " passed\n";
  return res.checks_pass ? kPass : kCheckFail;
}

int cmd_sweep(const std::vector<std::string>& config_paths, std::string out_root,
              int workers) {
  std::vector<ExperimentConfig> cfgs;
  for (const auto& path : config_paths) cfgs.push_back(ExperimentConfig::load(path));
  if (out_root.empty()) out_root = default_output_root();
  const SweepResult sr = sweep(cfgs, out_root, workers);
  std::cout << "summary: " << sr.summary_path << "\n";
  for (const auto& r : sr.results)
    std::cout << "  " << r.name << ": " << (r.ok ? "ok" : "failed")
              << (r.ok && !r.checks_pass ? " (checks failed)" : "") << "\n";
  if (!sr.all_ok) return kError;
  return sr.all_checks_pass ? kPass : kCheckFail;
}

int cmd_front(double c, double r, double h, const std::string& out_path) {
  const Nonlinearity nl = Nonlinearity::logistic(r);
  std::cout << "minimal speed c* = " << format_num(minimal_speed(nl)) << "\n";
  const FrontProfile fp = solve_front(nl, c, h);
  std::cout << "speed c = " << format_num(c) << "\n"
            << "profile residual = " << format_num(fp.max_residual) << "\n"
            << "tail rate (measured) = " << format_num(fp.tail_rate) << "\n"
            << "tail rate (predicted) = " << format_num(decay_rate(nl, c)) << "\n";
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (out_path != "-") {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot write " + out_path);
    out = &file;
  }
  *out << "z,phi,phi_z\n";
  for (std::size_t i = 0; i < fp.z.size(); ++i)
    *out << format_num(fp.z[i]) << ',' << format_num(fp.phi[i]) << ','
         << format_num(fp.phi_z[i]) << "\n";
  if (out == &file) std::cout << "profile written to " << out_path << "\n";
  return kPass;
}

int cmd_fit(const std::string& dir, const std::string& law_name, double lambda,
            double t_a, double t_b) {
  const LevelSetTrajectory traj = read_trajectory(dir, lambda);
  const GrowthFit fit = fit_growth_law(traj, growth_law_from_string(law_name), t_a, t_b);
  std::cout << "law = " << to_string(fit.law) << "\nlambda = " << format_num(lambda)
            << "\nslope = " << format_num(fit.slope)
            << "\nintercept = " << format_num(fit.intercept)
            << "\nr2 = " << format_num(fit.r2) << "\nn = " << fit.n << "\n";
  return kPass;
}

int cmd_check_kpp(double r, int samples) {
  const Nonlinearity nl = Nonlinearity::logistic(r);
  const EnvelopeReport rep = nl.verify_envelopes(samples);
  for (const auto& m : rep.margins)
    std::cout << m.name << ": worst margin " << format_num(m.worst_margin) << " at s="
              << format_num(m.worst_s) << " -> " << (m.pass ? "pass" : "FAIL") << "\n";
  return rep.pass ? kPass : kCheckFail;
}

int cmd_report(const std::vector<std::string>& dirs, const std::string& out_path) {
  const int missing = write_report(dirs, out_path);
  std::cout << "report written to " << out_path;
  if (missing > 0) std::cout << " (" << missing << " section(s) missing artifacts)";
  std::cout << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher-KPP front acceleration laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
  run_cmd->add_option("-c,--config", config_path, "config file")->required();
  run_cmd->add_option("-o,--out", out_dir, "output directory");

  std::vector<std::string> config_paths;
  std::string out_root;
  int workers = 4;
  auto* sweep_cmd = app.add_subcommand("sweep", "run several experiments in parallel");
  sweep_cmd->add_option("-c,--config", config_paths, "config files")->required();
  sweep_cmd->add_option("-o,--out", out_root, "output root");
  sweep_cmd->add_option("-w,--workers", workers, "worker count");

  double speed = 2.5, rate = 1.0, step = 1e-3;
  std::string front_out = "front.csv";
  auto* front_cmd = app.add_subcommand("front", "solve a traveling front profile");
  front_cmd->add_option("--speed", speed, "front speed c");
  front_cmd->add_option("--r", rate, "logistic rate");
  front_cmd->add_option("--step", step, "integration step");
  front_cmd->add_option("-o,--out", front_out, "profile CSV path ('-' for stdout)");

  std::string fit_dir, fit_law = "linear";
  double fit_lambda = 0.5, fit_ta = 0.0, fit_tb = 1e300;
  auto* fit_cmd = app.add_subcommand("fit", "fit a growth law to a stored trajectory");
  fit_cmd->add_option("-d,--dir", fit_dir, "run directory")->required();
  fit_cmd->add_option("--law", fit_law, "growth law");
  fit_cmd->add_option("--level", fit_lambda, "level value");
  fit_cmd->add_option("--t-a", fit_ta, "window start");
  fit_cmd->add_option("--t-b", fit_tb, "window end");

  double kpp_r = 1.0;
  int kpp_samples = 400;
  auto* kpp_cmd = app.add_subcommand("check-kpp", "verify nonlinearity envelopes");
  kpp_cmd->add_option("--r", kpp_r, "logistic rate");
  kpp_cmd->add_option("--samples", kpp_samples, "sample count");

  std::vector<std::string> report_dirs;
  std::string report_out = "report.md";
  auto* report_cmd = app.add_subcommand("report", "summarize run directories");
  report_cmd->add_option("dirs", report_dirs, "run directories");
  report_cmd->add_option("-o,--out", report_out, "report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, out_dir);
    if (sweep_cmd->parsed()) return cmd_sweep(config_paths, out_root, workers);
    if (front_cmd->parsed()) return cmd_front(speed, rate, step, front_out);
    if (fit_cmd->parsed()) return cmd_fit(fit_dir, fit_law, fit_lambda, fit_ta, fit_tb);
    if (kpp_cmd->parsed()) return cmd_check_kpp(kpp_r, kpp_samples);
    if (report_cmd->parsed()) return cmd_report(report_dirs, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
