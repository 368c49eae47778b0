#ifndef BLCERT_SCENARIO_HPP
#define BLCERT_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "blcert/bounds.hpp"
#include "blcert/entropy.hpp"
#include "blcert/problems.hpp"

namespace blcert {

struct KernelConfig {
  std::string type;
  ParamMap params;
  std::string file;  // for type = csv
};

/// One certification scenario: problem (+ optional comparison problem
/// and convolution kernels), grid, horizon, measurement ball, and the
/// tolerance profile of the pass rule
///   measured <= envelope (1 + rel_slack) + abs_factor h (1 + TV(u0)).
struct ScenarioConfig {
  std::string name = "scenario";

  std::string problem_id = "burgers";
  ParamMap problem_params;
  std::optional<std::string> comparison_id;
  ParamMap comparison_params;

  std::string datum_type = "zero";
  ParamMap datum_params;

  std::optional<KernelConfig> kernel;
  std::optional<KernelConfig> kernel_tilde;

  int dimension = 1;
  Eigen::ArrayXd lo, hi;
  std::vector<Index> cells;
  Boundary boundary = Boundary::Periodic;

  double T = 1.0;
  double cfl = 0.45;
  int snapshots = 11;

  Eigen::VectorXd ball_x0;
  double ball_R = std::numeric_limits<double>::infinity();

  double rel_slack = 0.05;
  double abs_factor = 10.0;
  double ratio_tol = 0.6;  // Picard iterate decay
  double picard_tol = -1.0;

  int audit_nt = 17;
  int audit_nx = 129;
  int audit_nu = 9;
  std::optional<std::pair<double, double>> state_interval;

  bool entropy = false;
  int entropy_k_count = 9;
};

/// Parses the key/value scenario format ([section] headers, # comments).
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& name);

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst_measured = 0.0;
  double worst_bound = 0.0;
  std::string detail;
};

struct CertificationReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  std::vector<EnvelopeSeries> series;
  std::map<std::string, double> constants;
  EntropyReport entropy;
  std::vector<std::vector<double>> picard_distances;

  bool all_passed() const;
};

/// Solve, measure, bound, certify. When out_dir is nonempty, writes the
/// series CSVs, a text report, and summary.json there.
CertificationReport run_scenario(const ScenarioConfig& config,
                                 const std::string& out_dir = "");

struct RefinementRow {
  int level = 0;
  double h = 0.0;
  Index cells = 0;
  double measured_T = 0.0;   // primary check functional at T
  double envelope_T = 0.0;
  double margin = 0.0;       // slacked bound minus measured
  double entropy_max = 0.0;
  double self_distance = 0.0;  // L1 against the previous level at T
  double observed_order = 0.0;
  int picard_iterates = 0;
};

/// Re-runs the scenario halving h per level (>= 3 levels) and tabulates
/// functionals, margins, residuals, and self-convergence orders.
std::vector<RefinementRow> refinement_study(const ScenarioConfig& config,
                                            int levels,
                                            const std::string& out_dir = "");

/// Restriction of a fine GridFn to a coarser nested grid by averaging
/// the 2^dim children of each coarse cell.
GridFn restrict_to_coarse(const UniformGrid& coarse, const GridFn& fine);

}  // namespace blcert

#endif
