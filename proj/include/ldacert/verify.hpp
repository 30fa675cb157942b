#pragma once

#include <string>
#include <vector>

#include "ldacert/field.hpp"

namespace ldacert {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ToleranceEntry {
  std::string name;
  double value;
  std::string meaning;
};

// Single source of truth for verification tolerances.
const std::vector<ToleranceEntry>& tolerance_table();
double tolerance(const std::string& name);

const std::vector<std::string>& suite_names();
// "kinetic", "tiling", "coulomb", "lemmas" or "all"
std::vector<CheckResult> run_suite(const std::string& suite);
std::string format_check(const CheckResult& c);

// Ten densities spanning the analytic families, used for the sandwich checks.
std::vector<Density> density_corpus();

struct SandwichViolations {
  int energy = 0;    // E_lower > min E_upper
  int kinetic = 0;   // a kinetic lower bound above min t_upper
  int t_band = 0;    // t_band_estimate misses the kinetic band
  int checked = 0;
};
SandwichViolations sandwich_check(const FunctionalSet& F, double q = 1.0);

}  // namespace ldacert
