#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kpplab/experiment.hpp"
#include "nlohmann/json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace kpplab {

namespace {

struct Prediction {
  bool known = false;
  double value = 0.0;
  std::string meaning;
};

// Predicted slope in the fit's transformed coordinates for each tail family.
Prediction predicted_slope(const ConfigStore& cfg, const std::string& law) {
  Prediction pr;
  const std::string family = cfg.get_string("profile.family", "");
  const double r = cfg.get_double("nonlinearity.r", 1.0);
  const double alpha = cfg.get_double("profile.alpha", 0.0);
  const double beta = cfg.get_double("profile.beta", 0.0);
  if (law == "linear" && family == "exponential" && alpha > 0.0) {
    const double astar = std::sqrt(r);
    pr.known = true;
    pr.value = alpha < astar ? alpha + r / alpha : 2.0 * astar;
    pr.meaning = "front speed";
  } else if (law == "exponential" && family == "algebraic" && alpha > 0.0) {
    pr.known = true;
    pr.value = r / alpha;
    pr.meaning = "exponential growth rate of positions";
  } else if (law == "t_log_t" && family == "tlnt" && alpha > 0.0) {
    pr.known = true;
    pr.value = r / alpha;
    pr.meaning = "t ln t coefficient";
  } else if (law == "power" && family == "stretched_exp" && alpha > 0.0) {
    pr.known = true;
    pr.value = 1.0 / alpha;  // positions ~ (r/beta)^{1/alpha} t^{1/alpha}
    pr.meaning = "power-law exponent";
    (void)beta;
  } else if (law == "power" && family == "target_curve") {
    const std::string curve = cfg.get_string("profile.curve", "");
    if (curve == "quadratic") {
      pr.known = true;
      pr.value = 2.0;
      pr.meaning = "power-law exponent";
    }
  } else if (law == "double_exponential" && family == "log_power" && alpha > 0.0) {
    pr.known = true;
    pr.value = r / alpha;
    pr.meaning = "ln ln x growth rate";
  }
  return pr;
}

void write_plot_csv(const std::string& dir) {
  std::ifstream in(dir + "/trajectories.csv");
  if (!in) return;
  std::ofstream out(dir + "/plot.csv");
  out << "t,lambda,x,ln_x,lnln_x\n";
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string t, lam, xmin, xmax, empty;
    std::getline(row, t, ',');
    std::getline(row, lam, ',');
    std::getline(row, xmin, ',');
    std::getline(row, xmax, ',');
    std::getline(row, empty, ',');
    if (empty != "0") continue;
    const double x = std::stod(xmin);
    out << t << ',' << lam << ',' << format_num(x) << ',';
    if (x > 0.0) out << format_num(std::log(x));
    out << ',';
    if (x > 1.0) out << format_num(std::log(std::log(x)));
    out << '\n';
  }
}

}  // namespace

int write_report(const std::vector<std::string>& run_dirs, const std::string& out_path) {
  std::ofstream out(out_path);
  out << "# Level-set growth report\n\n";
  if (run_dirs.empty()) {
    out << "Warning: no run directories given; nothing to report.\n";
    return 0;
  }
  int missing = 0;
  for (const std::string& dir : run_dirs) {
    out << "## " << fs::path(dir).filename().string() << "\n\n";
    std::ifstream mf(dir + "/manifest.json");
    if (!mf) {
      out << "Missing manifest.json; section skipped.\n\n";
      ++missing;
      continue;
    }
    json manifest = json::parse(mf, nullptr, false);
    if (manifest.is_discarded()) {
      out << "Unreadable manifest.json; section skipped.\n\n";
      ++missing;
      continue;
    }
    const ConfigStore cfg =
        ConfigStore::parse(manifest.value("config", std::string{}));
    out << "- family: " << cfg.get_string("profile.family", "?") << "\n";
    out << "- completed: " << (manifest.value("completed", false) ? "yes" : "no")
        << ", checks pass: " << (manifest.value("checks_pass", false) ? "yes" : "no")
        << "\n";

    std::ifstream ff(dir + "/fits.json");
    json fits = ff ? json::parse(ff, nullptr, false) : json::array();
    if (fits.is_discarded() || !fits.is_array()) fits = json::array();
    if (!fits.empty()) {
      out << "\n| law | lambda | measured slope | predicted | rel. error | r2 |\n";
      out << "|---|---|---|---|---|---|\n";
      for (const auto& f : fits) {
        const std::string law = f.value("law", std::string{"?"});
        out << "| " << law << " | " << format_num(f.value("lambda", 0.0)) << " | ";
        if (f.contains("slope")) {
          const double slope = f["slope"].get<double>();
          out << format_num(slope) << " | ";
          const Prediction pr = predicted_slope(cfg, law);
          if (pr.known)
            out << format_num(pr.value) << " | "
                << format_num(std::abs(slope - pr.value) / std::abs(pr.value)) << " | ";
          else
            out << "- | - | ";
          out << format_num(f.value("r2", 0.0));
        } else {
          out << "fit failed: " << f.value("error", std::string{"?"}) << " | - | - | -";
        }
        out << " |\n";
      }
    }

    std::ifstream cf(dir + "/checks.json");
    json checks = cf ? json::parse(cf, nullptr, false) : json::array();
    if (!checks.is_discarded() && checks.is_array() && !checks.empty()) {
      out << "\n| check | params | entry time | worst margin | pass |\n";
      out << "|---|---|---|---|---|\n";
      for (const auto& c : checks)
        out << "| " << c.value("check", std::string{"?"}) << " | "
            << c.value("params", std::string{}) << " | "
            << format_num(c.value("entry_time", -1.0)) << " | "
            << format_num(c.value("worst_margin", 0.0)) << " | "
            << (c.value("pass", false) ? "yes" : "no") << " |\n";
    }
    out << "\n";
    write_plot_csv(dir);
  }
  return missing;
}

}  // namespace kpplab
