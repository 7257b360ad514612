#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "affinehit/mc/oracle.hpp"

namespace affinehit::verify {

/// One comparison. Deterministic checks pass when |got - expected| <= tolerance.
/// Statistical checks carry a z score and are judged by the suite gate.
struct Check {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  double expected = 0.0;
  double got = 0.0;
  double tolerance = 0.0;
  double std_error = NAN;
  double z = NAN;
  bool passed = false;

  bool statistical() const { return !std::isnan(z); }
};

struct Report {
  std::string name;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  double seconds = 0.0;
  bool passed = false;
};

enum class Suite { Identities, Symmetry, Scaling, Special, Mc };

Suite parse_suite(const std::string& s);
std::string suite_name(Suite s);

struct Options {
  mc::McConfig mc;
  /// Where criterion 8 writes its CSV files; empty selects a temporary directory.
  std::filesystem::path figures_dir;
};

Report run_suite(Suite s, const Options& opt = {});

/// Acceptance criteria 1 to 9.
Report run_criterion(int id, const Options& opt = {});
std::string criterion_title(int id);

/// Statistical gate: |z| < 3 for at least 95% of the z-scored checks, |z| < 4
/// for all of them, and every non-statistical check passed.
bool mc_gate(const std::vector<Check>& checks);

/// Crossing-correction bias study on P(RBM from 0 stays below 1 up to 1) at a
/// fixed step of 1e-3: corrected against naive grid detection.
struct BiasStudy {
  double exact = 0.0;
  mc::McEstimate corrected;
  mc::McEstimate naive;
  double improvement = 0.0;  ///< |naive - exact| / |corrected - exact|
};
BiasStudy crossing_bias_study(const mc::McConfig& cfg);

}  // namespace affinehit::verify
