#include <CLI11.hpp>

#include <iostream>

#include "blcert/constants.hpp"
#include "blcert/errors.hpp"
#include "blcert/io.hpp"
#include "blcert/scenario.hpp"

namespace {

int cmd_constants(int dim) {
  using namespace blcert;
  std::cout << "dimension " << dim << "\n";
  std::cout << "  W_N        = " << fmt(wallis(dim)) << "\n";
  std::cout << "  omega_N    = " << fmt(ball_volume(dim)) << "\n";
  std::cout << "  N W_N      = " << fmt(dim * wallis(dim)) << "\n";
  const MollifierConstants mc = mollifier_constants(dim, plateau_mollifier());
  std::cout << "  C_1        = " << fmt(mc.c1) << "\n";
  std::cout << "  M_1        = " << fmt(mc.m1) << "\n";
  std::cout << "  M_1 / C_1  = " << fmt(mc.m1 / mc.c1) << "\n";
  return 0;
}

int cmd_identities(int dim, double lambda) {
  using namespace blcert;
  const MollifierIdentityReport rep =
      mollifier_identities(dim, plateau_mollifier(), lambda);
  std::cout << "dimension " << dim << ", lambda " << fmt(lambda) << "\n";
  std::cout << "  unit mass residual        = " << fmt(rep.unit_mass) << "\n";
  std::cout << "  moment ratio residual     = " << fmt(rep.moment_ratio)
            << "\n";
  std::cout << "  gradient moment residual  = " << fmt(rep.gradient_moment)
            << "\n";
  std::cout << "  radial gradient residual  = " << fmt(rep.radial_gradient)
            << "\n";
  std::cout << "  second moment residual    = " << fmt(rep.second_moment)
            << "\n";
  const bool ok = rep.max() < 1e-6;
  std::cout << (ok ? "OK" : "RESIDUALS TOO LARGE") << "\n";
  return ok ? 0 : 1;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  using namespace blcert;
  const ScenarioConfig config = load_scenario(config_path);
  const CertificationReport rep = run_scenario(config, out_dir);
  for (const CheckResult& r : rep.checks) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << rep.scenario << "/"
              << r.name << "  measured " << fmt(r.worst_measured)
              << "  bound " << fmt(r.worst_bound) << "\n";
  }
  std::cout << (rep.all_passed() ? "ALL CHECKS PASSED" : "CHECKS FAILED")
            << "\n";
  return rep.all_passed() ? 0 : 1;
}

int cmd_refine(const std::string& config_path, int levels,
               const std::string& out_dir) {
  using namespace blcert;
  const ScenarioConfig config = load_scenario(config_path);
  const std::vector<RefinementRow> rows =
      refinement_study(config, levels, out_dir);
  std::cout << "level  cells        h   measured   envelope     margin"
               "  entropy_max  order\n";
  bool margins_ok = true;
  for (const RefinementRow& r : rows) {
    std::printf("%5d %6td %8.2e %10.4e %10.4e %10.4e %12.4e %6.2f\n", r.level,
                r.cells, r.h, r.measured_T, r.envelope_T, r.margin,
                r.entropy_max, r.observed_order);
    margins_ok = margins_ok && r.margin >= 0.0;
  }
  std::cout << (margins_ok ? "ALL LEVELS WITHIN ENVELOPE"
                           : "ENVELOPE EXCEEDED")
            << "\n";
  return margins_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Balance-law solver with certified total-variation and stability "
      "envelopes"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "results";
  int dim = 1, levels = 3;
  double lambda = 1.0;

  CLI::App* run = app.add_subcommand("run", "run one scenario and certify");
  run->add_option("config", config_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory");

  CLI::App* refine =
      app.add_subcommand("refine", "grid-refinement study of a scenario");
  refine->add_option("config", config_path, "scenario file")->required();
  refine->add_option("--levels", levels, "refinement levels (>= 3)");
  refine->add_option("--out", out_dir, "output directory");

  CLI::App* constants =
      app.add_subcommand("constants", "dimensional constants");
  constants->add_option("--dim", dim, "space dimension")->required();

  CLI::App* identities =
      app.add_subcommand("identities", "mollifier identity residuals");
  identities->add_option("--dim", dim, "space dimension")->required();
  identities->add_option("--lambda", lambda, "mollifier scale");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (refine->parsed()) return cmd_refine(config_path, levels, out_dir);
    if (constants->parsed()) return cmd_constants(dim);
    if (identities->parsed()) return cmd_identities(dim, lambda);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
