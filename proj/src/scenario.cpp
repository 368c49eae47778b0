#include "blcert/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blcert/errors.hpp"
#include "blcert/io.hpp"

namespace blcert {

namespace {

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

SectionMap parse_sections(const std::string& text) {
  SectionMap sections;
  std::string current;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("scenario: expected key = value, got '" + line + "'");
    }
    sections[current][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return sections;
}

double to_double(const std::string& s, const std::string& where) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("scenario: bad number '" + s + "' for " + where);
  }
}

std::vector<double> to_vector(const std::string& s, const std::string& where) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(trim(item), where));
  return out;
}

struct Section {
  const std::map<std::string, std::string>* kv = nullptr;

  bool has(const std::string& key) const {
    return kv && kv->count(key) > 0;
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? kv->at(key) : fallback;
  }
  double num(const std::string& key, double fallback) const {
    return has(key) ? to_double(kv->at(key), key) : fallback;
  }
  std::vector<double> vec(const std::string& key) const {
    return has(key) ? to_vector(kv->at(key), key) : std::vector<double>{};
  }
  ParamMap params(std::initializer_list<std::string> skip = {}) const {
    ParamMap out;
    if (!kv) return out;
    for (const auto& [k, v] : *kv) {
      if (std::find(skip.begin(), skip.end(), k) != skip.end()) continue;
      out[k] = to_double(v, k);
    }
    return out;
  }
};

Section section(const SectionMap& m, const std::string& name) {
  const auto it = m.find(name);
  return Section{it == m.end() ? nullptr : &it->second};
}

Eigen::ArrayXd to_axes(std::vector<double> v, int dim, const char* what) {
  if (v.size() == 1) v.assign(dim, v[0]);
  if (static_cast<int>(v.size()) != dim) {
    throw ConfigError(std::string("scenario: ") + what +
                      " must have 1 or `dimension` entries");
  }
  return Eigen::Map<Eigen::ArrayXd>(v.data(), dim);
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text,
                              const std::string& name) {
  const SectionMap m = parse_sections(text);
  ScenarioConfig c;
  c.name = section(m, "").str("name", name);

  const Section prob = section(m, "problem");
  if (!prob.kv) throw ConfigError("scenario: missing [problem]");
  c.problem_id = prob.str("id", "");
  if (c.problem_id.empty()) throw ConfigError("scenario: [problem] needs id");
  c.problem_params = prob.params({"id"});

  if (const Section cmp = section(m, "comparison"); cmp.kv) {
    c.comparison_id = cmp.str("id", "");
    if (c.comparison_id->empty()) {
      throw ConfigError("scenario: [comparison] needs id");
    }
    c.comparison_params = cmp.params({"id"});
  }

  const Section datum = section(m, "datum");
  c.datum_type = datum.str("type", "zero");
  c.datum_params = datum.params({"type"});

  for (const char* kname : {"kernel", "kernel_tilde"}) {
    if (const Section k = section(m, kname); k.kv) {
      KernelConfig kc;
      kc.type = k.str("type", "gaussian");
      kc.file = k.str("file", "");
      kc.params = k.params({"type", "file"});
      (std::string(kname) == "kernel" ? c.kernel : c.kernel_tilde) = kc;
    }
  }

  const Section grid = section(m, "grid");
  if (!grid.kv) throw ConfigError("scenario: missing [grid]");
  c.dimension = static_cast<int>(grid.num("dimension", 1));
  c.lo = to_axes(grid.vec("lo"), c.dimension, "grid.lo");
  c.hi = to_axes(grid.vec("hi"), c.dimension, "grid.hi");
  const Eigen::ArrayXd cells =
      to_axes(grid.vec("cells"), c.dimension, "grid.cells");
  c.cells.clear();
  for (int d = 0; d < c.dimension; ++d) {
    c.cells.push_back(static_cast<Index>(cells[d]));
  }
  const std::string b = grid.str("boundary", "periodic");
  if (b == "periodic") {
    c.boundary = Boundary::Periodic;
  } else if (b == "padded") {
    c.boundary = Boundary::Padded;
  } else {
    throw ConfigError("scenario: boundary must be periodic or padded");
  }

  const Section run = section(m, "run");
  if (!run.kv) throw ConfigError("scenario: missing [run]");
  c.T = run.num("T", 1.0);
  c.cfl = run.num("cfl", 0.45);
  c.snapshots = static_cast<int>(run.num("snapshots", 11));
  if (c.snapshots < 2) throw ConfigError("scenario: snapshots >= 2");

  const Section ball = section(m, "ball");
  c.ball_R = ball.num("R", std::numeric_limits<double>::infinity());
  std::vector<double> x0 = ball.vec("x0");
  if (x0.empty()) x0.assign(c.dimension, 0.0);
  if (x0.size() == 1) x0.assign(c.dimension, x0[0]);
  c.ball_x0 = Eigen::Map<Eigen::VectorXd>(x0.data(), c.dimension);

  const Section tol = section(m, "tolerance");
  c.rel_slack = tol.num("rel_slack", 0.05);
  c.abs_factor = tol.num("abs_factor", 10.0);
  c.ratio_tol = tol.num("ratio_tol", 0.6);
  c.picard_tol = tol.num("picard_tol", -1.0);

  const Section audit = section(m, "audit");
  c.audit_nt = static_cast<int>(audit.num("nt", 17));
  c.audit_nx = static_cast<int>(audit.num("nx", 129));
  c.audit_nu = static_cast<int>(audit.num("nu", 9));
  if (audit.has("u_min") || audit.has("u_max")) {
    c.state_interval = {audit.num("u_min", -1.0), audit.num("u_max", 1.0)};
  }

  const Section checks = section(m, "checks");
  c.entropy = checks.num("entropy", 0.0) != 0.0;
  c.entropy_k_count = static_cast<int>(checks.num("entropy_k", 9));
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), std::filesystem::path(path).stem());
}

bool CertificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

GridFn restrict_to_coarse(const UniformGrid& coarse, const GridFn& fine) {
  const UniformGrid& fg = fine.grid();
  if (coarse.dim() != fg.dim()) {
    throw GridMismatch("restrict_to_coarse: dimensions differ");
  }
  for (int d = 0; d < coarse.dim(); ++d) {
    if (fg.cells()[d] != 2 * coarse.cells()[d]) {
      throw GridMismatch("restrict_to_coarse: grids are not nested 2:1");
    }
  }
  GridFn out(coarse, 0.0);
  const double scale = 1.0 / (1 << coarse.dim());
  for (Index i = 0; i < fg.size(); ++i) {
    Index ci = 0;
    for (int d = 0; d < fg.dim(); ++d) {
      ci += (fg.coord(i, d) / 2) * coarse.stride(d);
    }
    out[ci] += scale * fine[i];
  }
  if (coarse.boundary() == Boundary::Padded) {
    Eigen::ArrayXd lo(coarse.dim()), hi(coarse.dim());
    for (int d = 0; d < coarse.dim(); ++d) {
      lo[d] = fine.pad_lo(d);
      hi[d] = fine.pad_hi(d);
    }
    out.set_pads(lo, hi);
  }
  return out;
}

namespace {

struct ScenarioRun {
  ProblemSpec spec;
  UniformGrid grid;
  GridFn u0;
  HypothesisReport audit;
  std::vector<double> snapshot_times;
  Trajectory traj;
  std::optional<PicardStats> picard;
  double tv0 = 0.0;
  double kappa0_value = 0.0;
  double kernel_mass = 0.0;
  SampledCurve g_curve;
  std::optional<KernelSpec> kernel;
};

double slacked(double envelope, const ScenarioConfig& c, double h, double tv0) {
  return envelope * (1.0 + c.rel_slack) + c.abs_factor * h * (1.0 + tv0);
}

UniformGrid build_grid(const ScenarioConfig& c) {
  return uniform_box(c.lo, c.hi, c.cells, c.boundary);
}

ScenarioRun prepare_and_solve(const ScenarioConfig& c) {
  ScenarioRun run;
  run.grid = build_grid(c);
  run.spec = make_problem(c.problem_id, c.problem_params, c.datum_type,
                          c.datum_params, c.dimension);
  run.u0 = initial_state(run.spec, run.grid);

  SamplingBox box = c.state_interval
                        ? box_for_grid(run.grid, c.T, c.state_interval->first,
                                       c.state_interval->second)
                        : default_state_box(run.spec, run.grid, c.T);
  box.nt = c.audit_nt;
  box.nx = c.audit_nx;
  box.nu = c.audit_nu;
  run.audit = audit_hypotheses(run.spec, box);
  run.kappa0_value =
      kappa0(c.dimension, run.audit.sup_grad_du_f, run.audit.sup_du_F);
  run.tv0 = total_variation(run.u0);

  for (int i = 0; i < c.snapshots; ++i) {
    run.snapshot_times.push_back(c.T * static_cast<double>(i) /
                                 (c.snapshots - 1));
  }

  if (c.kernel) {
    run.kernel = make_kernel(c.kernel->type, c.kernel->params, c.dimension,
                             c.kernel->file);
    PicardOptions opt;
    opt.cfl = c.cfl;
    opt.tol = c.picard_tol;
    opt.snapshot_times = run.snapshot_times;
    opt.max_dt = c.T / std::max(10, c.snapshots - 1);
    opt.sup_du_f = run.audit.sup_du_f;
    opt.sup_du_F = run.audit.sup_du_F;
    opt.sup_grad_du_f = run.audit.sup_grad_du_f;
    PicardStats stats;
    run.traj = picard_solve(run.spec, *run.kernel, run.grid, c.T, opt, &stats);
    run.picard = stats;
    run.kernel_mass = stats.kernel_mass;
  } else {
    SolveOptions opt;
    opt.cfl = c.cfl;
    opt.snapshot_times = run.snapshot_times;
    opt.max_dt = c.T / std::max(10, c.snapshots - 1);
    opt.sup_du_f = run.audit.sup_du_f;
    opt.sup_du_F = run.audit.sup_du_F;
    run.traj = solve(run.spec, run.grid, c.T, opt);
  }

  const auto g = grad_true_source_integrand(run.spec, box);
  run.g_curve.times.resize(c.snapshots);
  run.g_curve.values.resize(c.snapshots);
  for (int i = 0; i < c.snapshots; ++i) {
    run.g_curve.times[i] = run.snapshot_times[i];
    run.g_curve.values[i] = g(run.snapshot_times[i]);
  }
  return run;
}

EnvelopeSeries tv_series(const ScenarioConfig& c, const ScenarioRun& run) {
  EnvelopeSeries s;
  s.label = run.kernel ? "radiating_tv" : "tv";
  s.branch = run.kernel ? "radiating" : "generic";
  for (double t : run.snapshot_times) {
    const GridFn& u = run.traj.states[run.traj.index_of(t)];
    s.times.push_back(t);
    s.measured.push_back(total_variation(u));
    const double env =
        run.kernel
            ? radiating_tv_envelope(c.dimension, run.tv0, run.kappa0_value,
                                    run.kernel_mass, run.g_curve, t)
            : tv_envelope(c.dimension, run.tv0, run.kappa0_value, run.g_curve,
                          t);
    s.envelope.push_back(env);
  }
  s.constants_used = {{"kappa0", run.kappa0_value},
                      {"NWN", c.dimension * wallis(c.dimension)},
                      {"tv0", run.tv0},
                      {"k", run.kernel_mass}};
  return s;
}

CheckResult series_check(const std::string& name, const EnvelopeSeries& s,
                         const ScenarioConfig& c, double h, double tv0) {
  CheckResult r;
  r.name = name;
  r.passed = true;
  double worst_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double bound = slacked(s.envelope[i], c, h, tv0);
    if (s.measured[i] > bound) r.passed = false;
    if (bound - s.measured[i] < worst_gap) {
      worst_gap = bound - s.measured[i];
      r.worst_measured = s.measured[i];
      r.worst_bound = bound;
    }
  }
  std::ostringstream detail;
  detail << "min margin " << fmt(worst_gap);
  r.detail = detail.str();
  return r;
}

void write_report(const ScenarioConfig& c, const CertificationReport& rep,
                  const Trajectory& traj, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (const EnvelopeSeries& s : rep.series) {
    write_series_csv(out_dir + "/" + s.label + ".csv", s);
  }
  if (!rep.entropy.rows.empty()) {
    write_entropy_csv(out_dir + "/entropy.csv", rep.entropy);
  }
  write_gridfn_csv(out_dir + "/final_state.csv", traj.back());
  write_trajectory_csv(out_dir + "/trajectory.csv", traj);

  std::ofstream txt(out_dir + "/report.txt");
  txt << "scenario " << c.name << "\n";
  for (const auto& [k, v] : rep.constants) {
    txt << "  " << k << " = " << fmt(v) << "\n";
  }
  for (const CheckResult& r : rep.checks) {
    txt << (r.passed ? "PASS " : "FAIL ") << r.name << "  measured "
        << fmt(r.worst_measured) << "  bound " << fmt(r.worst_bound) << "  ("
        << r.detail << ")\n";
  }
  txt << (rep.all_passed() ? "ALL CHECKS PASSED\n" : "CHECKS FAILED\n");

  nlohmann::json j;
  j["scenario"] = c.name;
  j["passed"] = rep.all_passed();
  j["constants"] = rep.constants;
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& r : rep.checks) {
    j["checks"].push_back({{"name", r.name},
                           {"passed", r.passed},
                           {"worst_measured", r.worst_measured},
                           {"worst_bound", r.worst_bound},
                           {"detail", r.detail}});
  }
  std::ofstream(out_dir + "/summary.json") << j.dump(2) << "\n";
}

}  // namespace

CertificationReport run_scenario(const ScenarioConfig& c,
                                 const std::string& out_dir) {
  CertificationReport rep;
  rep.scenario = c.name;

  ScenarioRun run = prepare_and_solve(c);
  const double h = run.grid.cell_size().maxCoeff();
  const double nwn = c.dimension * wallis(c.dimension);

  rep.constants = {{"kappa0", run.kappa0_value},
                   {"NWN", nwn},
                   {"sup_du_f", run.audit.sup_du_f},
                   {"sup_grad_du_f", run.audit.sup_grad_du_f},
                   {"sup_du_F", run.audit.sup_du_F},
                   {"tv0", run.tv0},
                   {"h", h}};

  // Total-variation envelope (radiating variant when a kernel drives
  // the source).
  EnvelopeSeries tvs = tv_series(c, run);
  rep.checks.push_back(series_check(tvs.label + "_envelope", tvs, c, h,
                                    run.tv0));
  rep.series.push_back(tvs);

  // Flow/source stability against the comparison problem.
  if (c.comparison_id) {
    ProblemSpec spec_b = make_problem(*c.comparison_id, c.comparison_params,
                                      c.datum_type, c.datum_params,
                                      c.dimension);
    const HypothesisReport audit_b = audit_hypotheses(spec_b, run.audit.box);
    const DifferenceAudit diff = difference_spec(
        run.spec, spec_b, run.audit.box, c.ball_x0, c.ball_R,
        audit_b.sup_du_f);
    const double kap =
        kappa(c.dimension, run.audit.sup_grad_du_f, run.audit.sup_du_F,
              diff.sup_du_FG);
    const double M = audit_b.sup_du_f;

    SolveOptions opt;
    opt.cfl = c.cfl;
    opt.snapshot_times = run.snapshot_times;
    opt.max_dt = c.T / std::max(10, c.snapshots - 1);
    opt.sup_du_f = audit_b.sup_du_f;
    opt.sup_du_F = audit_b.sup_du_F;
    const Trajectory traj_b = solve(spec_b, run.grid, c.T, opt);
    const GridFn v0 = initial_state(spec_b, run.grid);

    EnvelopeSeries s;
    s.label = "stability";
    s.branch = std::abs(kap - run.kappa0_value) <
                       1e-10 * std::max({kap, run.kappa0_value, 1.0})
                   ? "kappa_equal"
                   : "generic";
    for (double t : run.snapshot_times) {
      const GridFn& u = run.traj.states[run.traj.index_of(t)];
      const GridFn& v = traj_b.states[traj_b.index_of(t)];
      s.times.push_back(t);
      s.measured.push_back(l1_distance_ball(u, v, c.ball_x0, c.ball_R));
      StabilityInputs in;
      in.l1_0 = l1_distance_ball(run.u0, v0, c.ball_x0,
                                 std::isinf(c.ball_R) ? c.ball_R
                                                      : c.ball_R + M * t);
      in.tv0 = run.tv0;
      in.kappa0 = run.kappa0_value;
      in.kappa = kap;
      in.M = M;
      in.sup_du_fg = diff.sup_du_fg;
      SampledCurve cone;
      cone.times = run.g_curve.times;
      cone.values.resize(cone.times.size());
      for (int i = 0; i < cone.times.size(); ++i) {
        cone.values[i] = cone.times[i] <= t + 1e-14
                             ? diff.cone_integrand(cone.times[i], t)
                             : 0.0;
      }
      s.envelope.push_back(
          stability_envelope(c.dimension, in, run.g_curve, cone, t));
    }
    s.constants_used = {{"kappa0", run.kappa0_value},
                        {"kappa", kap},
                        {"M", M},
                        {"sup_du_fg", diff.sup_du_fg},
                        {"sup_du_FG", diff.sup_du_FG},
                        {"NWN", nwn}};
    rep.constants["kappa"] = kap;
    rep.constants["M"] = M;
    rep.constants["sup_du_fg"] = diff.sup_du_fg;
    rep.checks.push_back(series_check("stability_envelope", s, c, h, run.tv0));
    rep.series.push_back(s);
  }

  if (run.kernel) {
    rep.constants["k"] = run.kernel_mass;
    rep.constants["kappa"] =
        kappa(c.dimension, run.audit.sup_grad_du_f, run.audit.sup_du_F, 0.0);

    // Iterate contraction observed by the fixed-point solver.
    CheckResult contraction;
    contraction.name = "picard_contraction";
    contraction.passed = true;
    contraction.worst_bound = c.ratio_tol;
    for (const auto& d : run.picard->iterate_distances) {
      rep.picard_distances.push_back(d);
    }
    contraction.worst_measured = run.picard->max_ratio;
    contraction.passed = run.picard->max_ratio <= c.ratio_tol;
    contraction.detail =
        "slabs " + std::to_string(run.picard->slabs) + ", horizon " +
        fmt(run.picard->slab_horizon);
    rep.checks.push_back(contraction);

    // L1 growth bound, applicable when 0 solves the source-free problem.
    const ScalarFn ts = true_source(run.spec);
    double zero_residual = 0.0;
    for (Index i = 0; i < run.grid.size(); i += std::max<Index>(1, run.grid.size() / 64)) {
      for (double t : {0.0, 0.5 * c.T, c.T}) {
        zero_residual = std::max(
            zero_residual, std::abs(ts(t, run.grid.center(i), 0.0)));
      }
    }
    if (zero_residual < 1e-10) {
      EnvelopeSeries s;
      s.label = "radiating_l1";
      s.branch = "zero_compatible";
      const double l1_0 = l1_norm(run.u0);
      for (double t : run.snapshot_times) {
        const GridFn& u = run.traj.states[run.traj.index_of(t)];
        s.times.push_back(t);
        s.measured.push_back(l1_norm(u));
        s.envelope.push_back(radiating_l1_bound(l1_0, rep.constants["kappa"],
                                                run.kernel_mass, t));
      }
      s.constants_used = {{"kappa", rep.constants["kappa"]},
                          {"k", run.kernel_mass}};
      rep.checks.push_back(series_check("radiating_l1", s, c, h, run.tv0));
      rep.series.push_back(s);
    }

    // Stability in the kernel.
    if (c.kernel_tilde) {
      const KernelSpec kt =
          make_kernel(c.kernel_tilde->type, c.kernel_tilde->params,
                      c.dimension, c.kernel_tilde->file);
      PicardOptions opt;
      opt.cfl = c.cfl;
      opt.tol = c.picard_tol;
      opt.snapshot_times = run.snapshot_times;
      opt.max_dt = c.T / std::max(10, c.snapshots - 1);
      opt.sup_du_f = run.audit.sup_du_f;
      opt.sup_du_F = run.audit.sup_du_F;
      opt.sup_grad_du_f = run.audit.sup_grad_du_f;
      const Trajectory traj_t =
          picard_solve(run.spec, kt, run.grid, c.T, opt, nullptr);
      const double k_tilde =
          ConvolutionPlan(kt, run.grid).discrete_mass(0.0);
      const double dK = kernel_l1_distance(*run.kernel, kt, run.grid,
                                           {0.0, 0.5 * c.T, c.T});
      EnvelopeSeries s;
      s.label = "kernel_stability";
      s.branch = std::abs(run.kernel_mass - k_tilde) <
                         1e-10 * std::max({run.kernel_mass, k_tilde, 1.0})
                     ? "kappa_equal"
                     : "generic";
      const double l1_0 = l1_norm(run.u0);
      for (double t : run.snapshot_times) {
        const GridFn& u = run.traj.states[run.traj.index_of(t)];
        const GridFn& ut = traj_t.states[traj_t.index_of(t)];
        s.times.push_back(t);
        s.measured.push_back(l1_distance(u, ut));
        s.envelope.push_back(kernel_stability_bound(l1_0, run.kernel_mass,
                                                    k_tilde, dK, t));
      }
      s.constants_used = {{"k", run.kernel_mass},
                          {"k_tilde", k_tilde},
                          {"dK", dK}};
      rep.constants["k_tilde"] = k_tilde;
      rep.constants["dK"] = dK;
      rep.checks.push_back(series_check("kernel_stability", s, c, h, run.tv0));
      rep.series.push_back(s);
    }
  }

  // Discrete entropy certification on a per-step rerun.
  if (c.entropy) {
    Trajectory all;
    if (run.kernel) {
      PicardOptions opt;
      opt.cfl = c.cfl;
      opt.tol = c.picard_tol;
      opt.record_all_steps = true;
      opt.max_dt = c.T / std::max(10, c.snapshots - 1);
      opt.sup_du_f = run.audit.sup_du_f;
      opt.sup_du_F = run.audit.sup_du_F;
      opt.sup_grad_du_f = run.audit.sup_grad_du_f;
      all = picard_solve(run.spec, *run.kernel, run.grid, c.T, opt);
    } else {
      SolveOptions opt;
      opt.cfl = c.cfl;
      opt.record_all_steps = true;
      opt.max_dt = c.T / std::max(10, c.snapshots - 1);
      opt.sup_du_f = run.audit.sup_du_f;
      opt.sup_du_F = run.audit.sup_du_F;
      all = solve(run.spec, run.grid, c.T, opt);
    }
    const std::vector<double> ks = kruzkov_levels(all, c.entropy_k_count);
    rep.entropy = entropy_residual(all, run.spec, ks,
                                   run.kernel ? &*run.kernel : nullptr);
    CheckResult r;
    r.name = "entropy_residual";
    r.worst_measured = rep.entropy.max_positive;
    r.worst_bound = 1e-8;
    r.passed = rep.entropy.max_positive <= r.worst_bound;
    r.detail = std::to_string(ks.size()) + " levels";
    rep.checks.push_back(r);
  }

  if (!out_dir.empty()) write_report(c, rep, run.traj, out_dir);
  return rep;
}

std::vector<RefinementRow> refinement_study(const ScenarioConfig& config,
                                            int levels,
                                            const std::string& out_dir) {
  if (levels < 3) throw ConfigError("refinement_study: levels >= 3");
  std::vector<RefinementRow> rows;
  GridFn prev_final;
  bool have_prev = false;
  double prev_distance = 0.0;

  for (int level = 0; level < levels; ++level) {
    ScenarioConfig c = config;
    for (Index& n : c.cells) n <<= level;
    const CertificationReport rep = run_scenario(c, "");

    RefinementRow row;
    row.level = level;
    row.cells = c.cells[0];
    row.h = (c.hi[0] - c.lo[0]) / static_cast<double>(c.cells[0]);
    // The stability series drives comparison scenarios; the TV envelope
    // otherwise.
    const auto main_it =
        std::find_if(rep.series.begin(), rep.series.end(),
                     [](const EnvelopeSeries& s) {
                       return s.label == "stability";
                     });
    const EnvelopeSeries& main =
        main_it != rep.series.end() ? *main_it : rep.series[0];
    row.measured_T = main.measured.back();
    row.envelope_T = main.envelope.back();
    row.margin = slacked(main.envelope.back(), c, row.h,
                         rep.constants.at("tv0")) -
                 main.measured.back();
    row.entropy_max = rep.entropy.max_positive;
    if (!rep.picard_distances.empty()) {
      for (const auto& d : rep.picard_distances) {
        row.picard_iterates += static_cast<int>(d.size());
      }
    }

    // Self-convergence against the previous level at T.
    ScenarioRun run = prepare_and_solve(c);
    const GridFn& final_state = run.traj.back();
    if (have_prev) {
      const GridFn restricted = restrict_to_coarse(prev_final.grid(),
                                                   final_state);
      row.self_distance = l1_distance(restricted, prev_final);
      if (prev_distance > 0.0 && row.self_distance > 0.0) {
        row.observed_order = std::log2(prev_distance / row.self_distance);
      }
      prev_distance = row.self_distance;
    }
    prev_final = final_state;
    have_prev = true;
    rows.push_back(row);
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/refinement.csv");
    out << "level,cells,h,measured_T,envelope_T,margin,entropy_max,"
           "self_distance,observed_order,picard_iterates\n";
    for (const RefinementRow& r : rows) {
      out << r.level << ',' << r.cells << ',' << fmt(r.h) << ','
          << fmt(r.measured_T) << ',' << fmt(r.envelope_T) << ','
          << fmt(r.margin) << ',' << fmt(r.entropy_max) << ','
          << fmt(r.self_distance) << ',' << fmt(r.observed_order) << ','
          << r.picard_iterates << '\n';
    }
  }
  return rows;
}

}  // namespace blcert
