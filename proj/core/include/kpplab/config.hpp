#pragma once

#include <map>
#include <string>
#include <vector>

#include "kpplab/grid.hpp"
#include "kpplab/levelsets.hpp"
#include "kpplab/nonlinearity.hpp"
#include "kpplab/profile.hpp"
#include "kpplab/solver.hpp"

namespace kpplab {

inline constexpr const char* kVersion = "0.1.0";

/// Sectioned key=value text (# comments, blank lines ignored). Keys are
/// addressed as "section.key". Serialization is canonical: sections and keys
/// in sorted order, so two equal stores print byte-identically.
class ConfigStore {
 public:
  static ConfigStore parse(const std::string& text);
  static ConfigStore load(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;  // whitespace/comma split

  void set(const std::string& key, const std::string& value);

  std::string canonical() const;

 private:
  std::map<std::string, std::string> kv_;
};

struct FitRequest {
  GrowthLaw law = GrowthLaw::linear;
  double t_a = 0.0;
  double t_b = 0.0;
};

/// One experiment: profile + nonlinearity + grid + solver settings + the
/// theory checks to evaluate on the run record.
struct ExperimentConfig {
  std::string name = "run";

  TailSpec tail;
  double plateau = 0.9;
  double x_blend = 0.0;  // <= 0: derived from the tail
  double blend_width = 2.0;

  double logistic_r = 1.0;

  // grid: "uniform", "log_stretched", or "composite"
  std::string grid_kind = "composite";
  double x_left = 0.0;
  double x_right = 0.0;
  int n_intervals = 0;     // uniform / log_stretched
  double stretch = 0.0;    // log_stretched
  double dxi = 0.04;       // composite
  double sigma = 1.0;      // composite
  double anchor = 0.0;     // composite (<=0: x_blend + 10)

  SolverConfig solver;
  double t_end = 1.0;
  std::vector<double> levels{0.5};
  bool snapshots = true;
  bool expansion = true;

  std::vector<double> band_eps;      // band_membership per lambda per eps
  std::vector<double> refined;       // r_lo r_hi t_a t_b
  double sandwich_eps = 0.0;         // > 0 enables the sandwich check
  double sandwich_tol = 1e-3;
  bool flatness = false;
  std::vector<FitRequest> fits;

  std::string canonical_text;  // echo of the source config

  static ExperimentConfig from_store(const ConfigStore& s);
  static ExperimentConfig load(const std::string& path);
  void validate() const;

  InitialProfile make_profile() const;
  Nonlinearity make_nonlinearity() const;
  Grid make_grid() const;
};

}  // namespace kpplab
