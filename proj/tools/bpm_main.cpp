// bpm — boundary-condition certification and root finding for nonlinear
// systems, with a Poincare-map periodic-orbit pipeline.
//
// Exit codes: 0 certified / solved, 1 refuted / not converged,
// 2 inconclusive, 3 precondition violation, 4 problem-file error,
// 5 usage or internal error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bpm/certify.hpp"
#include "bpm/errors.hpp"
#include "bpm/ode.hpp"
#include "bpm/problem.hpp"
#include "bpm/report.hpp"
#include "bpm/solve.hpp"

namespace {

using namespace bpm;

struct CommonOpts {
  std::string file;
  std::string report_path;
};

vec parse_vec_arg(const std::string& text) {
  vec out;
  std::string piece;
  std::stringstream ss(text);
  while (std::getline(ss, piece, ',')) out.push_back(std::stod(piece));
  return out;
}

void emit(JsonValue& report, const CommonOpts& opts,
          std::chrono::steady_clock::time_point started) {
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                started)
          .count();
  report.set("timing_ms", JsonValue::real(ms));
  const std::string text = report.dump();
  std::cout << text;
  if (!opts.report_path.empty()) {
    std::ofstream out(opts.report_path, std::ios::binary);
    out << text;
    if (!out)
      throw std::runtime_error("cannot write report to '" + opts.report_path +
                               "'");
  }
}

int verdict_exit_code(const Certificate& cert) {
  switch (cert.verdict) {
    case Verdict::Certified: return 0;
    case Verdict::Refuted: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 5;
}

struct CertifyOpts {
  CommonOpts common;
  std::string condition;
  std::string mode = "sampled";
  int grid = 16;
  double lipschitz = -1.0;
  int max_depth = 14;
  long cell_budget = 200000;
  std::string anchor;
  std::string pairing = "plus";
  int refinement = 8;
  int t_grid = 64;
};

const Domain& require_domain(const ProblemFile& p) {
  if (!p.domain)
    throw precondition_error("this condition needs a [domain] section");
  return *p.domain;
}

RigorMode make_rigor(const CertifyOpts& o) {
  if (o.mode == "sampled") return RigorMode::sampled(o.grid);
  if (o.mode == "lipschitz") {
    if (o.lipschitz < 0.0)
      throw precondition_error(
          "--mode lipschitz requires --lipschitz <constant>");
    return RigorMode::lipschitz_mode(o.lipschitz, o.max_depth, o.cell_budget);
  }
  throw precondition_error("unknown mode '" + o.mode + "'");
}

int run_certify(const CertifyOpts& o) {
  const auto started = std::chrono::steady_clock::now();
  const ProblemFile problem = load_problem(o.common.file);
  JsonValue report = report_skeleton(problem, "certify");
  report.set("condition", JsonValue::str(o.condition));

  Certificate cert;
  if (o.condition == "bolzano") {
    const auto* box = std::get_if<BoxDomain>(&require_domain(problem));
    if (!box || box->dim() != 1)
      throw precondition_error("bolzano needs a 1-d box domain");
    cert = check_bolzano(problem.map, box->lo[0], box->hi[0]);
  } else if (o.condition == "miranda") {
    const auto* box = std::get_if<BoxDomain>(&require_domain(problem));
    if (!box) throw precondition_error("miranda needs a box domain");
    cert = check_miranda(problem.solve_map(), *box, make_rigor(o));
  } else if (o.condition == "pairing" || o.condition == "ray") {
    const Domain dom = problem.effective_domain();
    const vec z =
        o.anchor.empty() ? domain_center(dom) : parse_vec_arg(o.anchor);
    if (o.condition == "pairing") {
      PairingKind kind = o.pairing == "plus"    ? PairingKind::Plus
                         : o.pairing == "minus" ? PairingKind::Minus
                         : o.pairing == "ray"   ? PairingKind::Ray
                                                : throw precondition_error(
                                                      "unknown pairing kind");
      cert = check_pairing_sign(problem.solve_map(), dom, z, problem.space,
                                kind, make_rigor(o));
    } else {
      cert = check_ray_condition(problem.solve_map(), dom, z, make_rigor(o));
    }
  } else if (o.condition == "normal-cone") {
    const auto* box = std::get_if<BoxDomain>(&require_domain(problem));
    if (!box) throw precondition_error("normal-cone needs a box domain");
    cert = check_normal_cone(problem.solve_map(), *box, make_rigor(o));
  } else if (o.condition == "growth") {
    if (!problem.linear || !problem.growth)
      throw precondition_error(
          "growth certification needs [linear] and [growth] sections");
    cert = check_linear_growth(*problem.linear, problem.map, problem.space,
                               problem.growth->alpha, problem.growth->beta,
                               o.refinement);
  } else if (o.condition == "hilbert-cube") {
    const auto* cube = std::get_if<HilbertCubeDomain>(&require_domain(problem));
    if (!cube)
      throw precondition_error("hilbert-cube needs a hilbert-cube domain");
    cert = check_hilbert_cube(problem.map, cube->truncation, make_rigor(o));
  } else if (o.condition == "ode-inward") {
    if (!problem.ode)
      throw precondition_error("ode-inward needs an [ode] section");
    cert = check_ode_inward(problem.map, problem.ode->T, problem.ode->R,
                            problem.space, o.t_grid, o.grid);
  } else {
    throw precondition_error("unknown condition '" + o.condition + "'");
  }

  JsonValue certs = JsonValue::array();
  certs.push(certificate_json(cert));
  report.set("certificates", std::move(certs));
  emit(report, o.common, started);
  return verdict_exit_code(cert);
}

struct SolveOpts {
  CommonOpts common;
  std::string method;
  double tol = 1e-10;
  std::string x0;
  std::string anchor;
  int resolution = 61;
};

int run_solve(const SolveOpts& o) {
  const auto started = std::chrono::steady_clock::now();
  const ProblemFile problem = load_problem(o.common.file);
  if (problem.map.time_dependent())
    throw precondition_error(
        "the map depends on t; use `bpm periodic` for ODE problems");
  JsonValue report = report_skeleton(problem, "solve");
  report.set("method", JsonValue::str(o.method));

  const Domain dom = problem.effective_domain();
  JsonValue roots = JsonValue::array();
  int exit_code = 0;

  if (o.method == "bisect") {
    const auto* box = std::get_if<BoxDomain>(&dom);
    if (!box || box->dim() != 1)
      throw precondition_error("bisect needs a 1-d box domain");
    RootResult r = bisect(problem.map, box->lo[0], box->hi[0], o.tol);
    exit_code = r.converged ? 0 : 1;
    roots.push(root_json(r));
  } else if (o.method == "homotopy") {
    const MapSpec f = problem.solve_map();
    const vec z =
        o.anchor.empty() ? domain_center(dom) : parse_vec_arg(o.anchor);
    RootResult r = proof_homotopy(f, dom, problem.space, z, {}, 0.1 * o.tol);
    RootResult polished =
        newton_project(f, dom, problem.space, r.x, o.tol, 100);
    polished.iterations += r.iterations;
    polished.stages = std::move(r.stages);
    polished.method = "homotopy";
    exit_code = polished.converged ? 0 : 1;
    roots.push(root_json(polished));
  } else if (o.method == "newton") {
    const MapSpec f = problem.solve_map();
    const vec x0 =
        o.x0.empty() ? domain_center(dom) : parse_vec_arg(o.x0);
    RootResult r = newton_project(f, dom, problem.space, x0, o.tol, 200);
    exit_code = r.converged ? 0 : 1;
    roots.push(root_json(r));
  } else if (o.method == "oracle") {
    OraclePoint pt = grid_oracle(problem.solve_map(), dom, o.resolution);
    roots.push(oracle_json(pt));
    exit_code = 0;
  } else {
    throw precondition_error("unknown method '" + o.method + "'");
  }

  report.set("roots", std::move(roots));
  emit(report, o.common, started);
  return exit_code;
}

struct PeriodicOpts {
  CommonOpts common;
  double tol = 1e-8;
  bool force = false;
  std::string trajectory;
  int grid = 16;
  int t_grid = 64;
  int samples = 8;
};

int run_periodic(const PeriodicOpts& o) {
  const auto started = std::chrono::steady_clock::now();
  const ProblemFile problem = load_problem(o.common.file);
  if (!problem.ode)
    throw precondition_error("periodic needs an [ode] section");
  JsonValue report = report_skeleton(problem, "periodic");

  OdeProblem p{problem.map, problem.ode->T, problem.ode->R,
               problem.ode->lipschitz, problem.space};

  JsonValue certs = JsonValue::array();
  Certificate inward = check_ode_inward(p.field, p.T, p.R, p.space, o.t_grid,
                                        o.grid);
  certs.push(certificate_json(inward));
  if (inward.verdict == Verdict::Refuted && !o.force) {
    report.set("certificates", std::move(certs));
    emit(report, o.common, started);
    return 1;
  }

  const int steps = gronwall_budget(p, std::min(1e-10, 0.01 * o.tol));
  Certificate invariance = check_invariance(p, o.samples, steps);
  certs.push(certificate_json(invariance));
  report.set("certificates", std::move(certs));

  PeriodicResult pr = find_periodic(p, o.tol);

  std::string traj_path = o.trajectory;
  if (traj_path.empty()) {
    std::string stem = o.common.file;
    const auto slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    const auto dot = stem.find_last_of('.');
    if (dot != std::string::npos) stem = stem.substr(0, dot);
    traj_path = stem + ".traj.txt";
  }
  {
    std::ofstream out(traj_path, std::ios::binary);
    out << trajectory_text(integrate(p, pr.a, pr.steps));
  }

  report.set("periodic", periodic_json(pr, traj_path));
  emit(report, o.common, started);
  return pr.converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boundary existence certificates and root finding"};
  app.require_subcommand(1);

  CertifyOpts copts;
  CLI::App* certify = app.add_subcommand("certify", "check a boundary condition");
  certify->add_option("file", copts.common.file, "problem file")->required();
  certify->add_option("--condition", copts.condition,
                      "bolzano|miranda|pairing|ray|normal-cone|growth|"
                      "hilbert-cube|ode-inward")
      ->required();
  certify->add_option("--mode", copts.mode, "sampled|lipschitz");
  certify->add_option("--grid", copts.grid, "sampling density per free axis");
  certify->add_option("--lipschitz", copts.lipschitz,
                      "lipschitz constant for rigorous margins");
  certify->add_option("--depth", copts.max_depth, "max refinement depth");
  certify->add_option("--budget", copts.cell_budget, "cell budget");
  certify->add_option("--anchor", copts.anchor,
                      "interior anchor z (comma-separated)");
  certify->add_option("--pairing", copts.pairing, "plus|minus|ray");
  certify->add_option("--refinement", copts.refinement,
                      "gain accuracy exponent (10^-k)");
  certify->add_option("--t-grid", copts.t_grid, "time samples (ode-inward)");
  certify->add_option("--report", copts.common.report_path, "write report JSON");

  SolveOpts sopts;
  CLI::App* solve = app.add_subcommand("solve", "locate a certified zero");
  solve->add_option("file", sopts.common.file, "problem file")->required();
  solve->add_option("--method", sopts.method, "bisect|homotopy|newton|oracle")
      ->required();
  solve->add_option("--tol", sopts.tol, "residual tolerance");
  solve->add_option("--x0", sopts.x0, "newton start (comma-separated)");
  solve->add_option("--anchor", sopts.anchor, "homotopy anchor z");
  solve->add_option("--resolution", sopts.resolution, "oracle lattice size");
  solve->add_option("--report", sopts.common.report_path, "write report JSON");

  PeriodicOpts popts;
  CLI::App* periodic =
      app.add_subcommand("periodic", "find a periodic solution of x' = f(t,x)");
  periodic->add_option("file", popts.common.file, "problem file")->required();
  periodic->add_option("--tol", popts.tol, "displacement tolerance");
  periodic->add_flag("--force", popts.force,
                     "solve even if the inward check is refuted");
  periodic->add_option("--trajectory", popts.trajectory,
                       "trajectory output path");
  periodic->add_option("--grid", popts.grid, "sphere sampling density");
  periodic->add_option("--t-grid", popts.t_grid, "time samples");
  periodic->add_option("--samples", popts.samples, "invariance trajectories");
  periodic->add_option("--report", popts.common.report_path,
                       "write report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 5;
  }

  try {
    if (certify->parsed()) return run_certify(copts);
    if (solve->parsed()) return run_solve(sopts);
    if (periodic->parsed()) return run_periodic(popts);
    return 5;
  } catch (const parse_error& e) {
    std::cerr << "problem error: " << e.what() << "\n";
    return 4;
  } catch (const dimension_error& e) {
    std::cerr << "problem error: " << e.what() << "\n";
    return 4;
  } catch (const precondition_error& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
}
