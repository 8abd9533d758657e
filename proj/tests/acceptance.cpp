// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Library checks run in-process; end-to-end checks shell
// out to the CLI binary.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bpm/certify.hpp"
#include "bpm/ode.hpp"
#include "bpm/problem.hpp"
#include "bpm/report.hpp"
#include "bpm/solve.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace bpm;

namespace {

const std::string kExe = BPM_CLI_EXE;
const std::string kProblems = BPM_PROBLEM_DIR;

int g_failures = 0;

void outcome(int idx, const std::string& name, bool ok,
             const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << idx << ". " << name;
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << "\n";
  if (!ok) ++g_failures;
}

struct CliRun {
  int exit_code;
  std::string output;
};

CliRun cli(const std::string& args, const std::string& tag) {
  const std::string path = "acc_" + tag + ".out";
  const int status =
      std::system((kExe + " " + args + " > " + path + " 2> acc_err.txt").c_str());
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

std::string prob(const std::string& name) { return kProblems + "/" + name; }

std::string strip_timing(const std::string& text) {
  std::stringstream in(text), out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("\"timing_ms\"") == std::string::npos) out << line << '\n';
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) { return format_double(v); }

MapSpec neg_identity(int n) {
  std::vector<std::string> comps;
  for (int i = 1; i <= n; ++i) comps.push_back("-x" + std::to_string(i));
  return MapSpec::from_expressions(comps, n);
}

// --- criteria -------------------------------------------------------------

void criterion_1_system_s() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  CliRun grow = cli("certify " + prob("system_s.prob") + " --condition growth",
                    "c1_grow");
  double ell = 0, radius = 0;
  if (grow.exit_code != 0) {
    ok = false;
    detail = "certify exit " + std::to_string(grow.exit_code);
  } else {
    auto j = nlohmann::json::parse(grow.output);
    ell = j["certificates"][0]["data"]["ell"].get<double>();
    radius = j["certificates"][0]["data"]["R"].get<double>();
    if (std::abs(ell - 5.0) > 1e-6) ok = false;
    if (std::abs(radius - 3.0 / (ell - 4.0)) > 1e-12) ok = false;
  }

  CliRun solve = cli("solve " + prob("system_s.prob") +
                         " --method homotopy --tol 1e-9",
                     "c1_solve");
  vec root;
  double residual = 1.0;
  if (solve.exit_code != 0) {
    ok = false;
    detail += " solve exit " + std::to_string(solve.exit_code);
  } else {
    auto j = nlohmann::json::parse(solve.output);
    for (const auto& c : j["roots"][0]["x"]) root.push_back(c.get<double>());
    residual = j["roots"][0]["residual"].get<double>();
  }

  const ProblemFile problem = load_problem(prob("system_s.prob"));
  const MapSpec target = problem.solve_map();
  double recomputed = 1.0, agreement = 1.0;
  bool inside = false;
  if (root.size() == 2) {
    recomputed = norm_inf(target.eval(root));
    inside = domain_contains(*problem.domain, root, 1e-12);
    const OraclePoint oracle = grid_oracle(target, *problem.domain, 61);
    agreement = norm_inf(sub(oracle.x, root));
  } else {
    ok = false;
  }
  if (recomputed > 1e-9 || residual > 1e-9) ok = false;
  if (!inside) ok = false;
  if (agreement > 0.1 + 1e-9) ok = false;  // one 61-point lattice cell

  const double elapsed = seconds_since(t0);
  if (elapsed > 5.0) ok = false;
  outcome(1, "flagship nonlinear system end-to-end", ok,
          "ell=" + fmt(ell) + " R=" + fmt(radius) + " residual=" +
              fmt(recomputed) + " oracle-gap=" + fmt(agreement) + " t=" +
              fmt(elapsed) + "s");
}

void criterion_2_minimum_gain() {
  bool ok = true;
  std::string detail;

  mat l(2, 2);
  l(0, 0) = -2;
  l(0, 1) = 7;
  l(1, 0) = 7;
  l(1, 1) = -2;
  const double ell = minimum_gain(l, Space{2, Norm::Linf, 2.0}, 8);
  if (std::abs(ell - 5.0) > 1e-6) ok = false;
  detail = "ell(linf)=" + fmt(ell);

  for (Norm n : {Norm::L1, Norm::L2, Norm::Lp, Norm::Linf}) {
    const double one = minimum_gain(mat::identity(3), Space{3, n, 3.0}, 10);
    if (std::abs(one - 1.0) > 1e-12) {
      ok = false;
      detail += " identity-failed";
    }
  }

  std::mt19937 rng(20260401);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    mat a(3, 3);
    for (double& v : a.a) v = u(rng);
    const double got = minimum_gain(a, Space{3, Norm::L2, 2.0}, 8);
    const double want = oracles::smallest_singular_value(a);
    worst = std::max(worst, std::abs(got - want));
  }
  if (worst > 1e-9) ok = false;
  outcome(2, "minimum gain of the linear part", ok,
          detail + " max-oracle-gap=" + fmt(worst));
}

void criterion_3_bolzano_bisect() {
  MapSpec f = MapSpec::from_expressions({"x1^3 - 2"}, 1);
  const Certificate cert = check_bolzano(f, 0.0, 2.0);
  const RootResult r = bisect(f, 0.0, 2.0, 1e-12);
  const double err = std::abs(r.x[0] - std::cbrt(2.0));
  const bool ok = cert.verdict == Verdict::Certified && r.iterations == 41 &&
                  err <= 1e-12;
  outcome(3, "sign-change certificate and bisection", ok,
          "iterations=" + std::to_string(r.iterations) + " err=" + fmt(err));
}

void criterion_4_miranda_suite() {
  bool ok = true;
  std::string detail;
  const double radius = 1.75;
  for (int n = 1; n <= 4 && ok; ++n) {
    const BoxDomain box{vec(n, -radius), vec(n, radius)};
    const MapSpec f = neg_identity(n);
    for (RigorMode rigor : {RigorMode::sampled(n <= 2 ? 16 : 4),
                            RigorMode::lipschitz_mode(1.0)}) {
      const Certificate c = check_miranda(f, box, rigor);
      if (c.verdict != Verdict::Certified) ok = false;
      for (const FaceMargin& fm : c.margins)
        if (std::abs(fm.margin - radius) > 1e-12) ok = false;
    }
  }
  if (!ok) detail = "-x margins drifted";

  MapSpec perturbed = MapSpec::from_expressions(
      {"-x1 + 0.1*sin(x2)", "-x2 + 0.1*sin(x1)"}, 2);
  const BoxDomain unit{{-1, -1}, {1, 1}};
  const Certificate lips =
      check_miranda(perturbed, unit, RigorMode::lipschitz_mode(1.1));
  const double dense = oracles::dense_face_margin(perturbed, unit, +1, 500);
  if (lips.verdict != Verdict::Certified || dense < 0.9) ok = false;

  MapSpec swap = MapSpec::from_expressions({"x2", "x1"}, 2);
  const Certificate refuted = check_miranda(swap, unit, RigorMode::sampled(9));
  if (refuted.verdict != Verdict::Refuted || !refuted.witness) ok = false;

  outcome(4, "face-sign certification suite", ok,
          detail + "dense-margin=" + fmt(dense));
}

void criterion_5_pairing_axioms() {
  bool ok = true;
  long checked = 0;
  oracles::VecGen gen(909090);
  std::mt19937 lambda_rng(31);
  std::uniform_real_distribution<double> lambda_dist(-3.0, 3.0);

  for (int dim = 1; dim <= 6 && ok; ++dim) {
    const Space spaces[] = {Space{dim, Norm::L1, 2.0}, Space{dim, Norm::L2, 2.0},
                            Space{dim, Norm::Lp, 3.0},
                            Space{dim, Norm::Linf, 2.0}};
    for (const Space& s : spaces) {
      for (int rep = 0; rep < 1000 && ok; ++rep) {
        const vec x = gen.nonzero(dim);
        const vec y = gen.nonzero(dim);
        const double nx2 = norm(s, x) * norm(s, x);
        const double lambda = lambda_dist(lambda_rng);
        for (PairingKind k :
             {PairingKind::Plus, PairingKind::Minus, PairingKind::Ray}) {
          const double self = pair(s, k, x, x);
          if (!(self > 0.0)) ok = false;  // (C1)
          if (k != PairingKind::Ray &&
              std::abs(self - nx2) > 1e-12 * (1.0 + nx2))
            ok = false;
          const double lhs = pair(s, k, scale(lambda, x), x);
          if (std::abs(lhs - lambda * self) >
              1e-12 * (1.0 + std::abs(lambda * self)))
            ok = false;  // (C2)
        }
        const double plus = pair(s, PairingKind::Plus, x, y);
        const double minus = pair(s, PairingKind::Minus, x, y);
        if (minus > plus + 1e-12 * (1.0 + std::abs(plus))) ok = false;
        const vec j = duality_select(s, y);
        const double ny = norm(s, y);
        if (std::abs(dot(y, j) - ny * ny) > 1e-10 * (1.0 + ny * ny)) ok = false;
        if (std::abs(dual_norm(s, j) - ny) > 1e-10 * (1.0 + ny)) ok = false;
        ++checked;
      }
    }
  }
  outcome(5, "pairing axioms and duality identities", ok,
          std::to_string(checked) + " cases");
}

void criterion_6_residual_law() {
  struct Item {
    MapSpec f;
    Domain domain;
    Space space;
    vec z;
    double diameter;
  };
  const Space l2_2{2, Norm::L2, 2.0};
  const Space linf2{2, Norm::Linf, 2.0};
  const Space l2_1{1, Norm::L2, 2.0};
  const ProblemFile sys = load_problem(prob("system_s.prob"));

  std::vector<Item> corpus;
  corpus.push_back({MapSpec::from_expressions({"x1", "x2"}, 2),
                    Domain{BallDomain{{0, 0}, 1.0, l2_2}}, l2_2, {0, 0}, 2.0});
  corpus.push_back({MapSpec::from_expressions({"x1 - 0.3", "x2 + 0.2"}, 2),
                    Domain{BoxDomain{{-1, -1}, {1, 1}}}, linf2, {0, 0}, 2.0});
  corpus.push_back({MapSpec::from_expressions({"x1 - 0.3"}, 1),
                    Domain{BoxDomain{{0.0}, {1.0}}}, l2_1, {0.5}, 1.0});
  corpus.push_back({sys.solve_map(), *sys.domain, sys.space, {0, 0}, 6.0});

  bool ok = true;
  int stages_checked = 0;
  const double inner_tol = 1e-12;
  for (const Item& item : corpus) {
    const RootResult r =
        proof_homotopy(item.f, item.domain, item.space, item.z, {}, inner_tol);
    if (!r.converged) ok = false;
    for (const HomotopyStage& s : r.stages) {
      if (!s.inner_converged) continue;
      ++stages_checked;
      if (s.residual > item.diameter / s.n + 10.0 * inner_tol) ok = false;
    }
  }
  outcome(6, "homotopy residual law |f(x_n)| <= diam/n + 10 tol", ok,
          std::to_string(stages_checked) + " converged stages");
}

void criterion_7_periodic() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  const Space l2_1{1, Norm::L2, 2.0};
  const Space l2_2{2, Norm::L2, 2.0};
  const double two_pi = 2.0 * M_PI;

  OdeProblem decay{MapSpec::from_expressions({"-x1 + cos(t)"}, 1), two_pi, 2.0,
                   1.0, l2_1};
  const Certificate inward =
      check_ode_inward(decay.field, decay.T, decay.R, decay.space, 64, 8);
  if (inward.verdict != Verdict::Certified ||
      inward.worst_margin() < 2.0 - 1e-6)
    ok = false;
  detail = "inward-margin=" + fmt(inward.worst_margin());

  const PeriodicResult r1 = find_periodic(decay, 1e-8);
  if (!r1.converged || std::abs(r1.a[0] - 0.5) > 1e-6) ok = false;
  detail += " a=" + fmt(r1.a.empty() ? 0.0 : r1.a[0]);

  OdeProblem decay2{
      MapSpec::from_expressions({"-x1 + sin(t)", "-x2 + cos(t)"}, 2), two_pi,
      2.0, 1.0, l2_2};
  const PeriodicResult r2 = find_periodic(decay2, 1e-8);
  if (!r2.converged || std::abs(r2.a[0] + 0.5) > 1e-6 ||
      std::abs(r2.a[1] - 0.5) > 1e-6)
    ok = false;

  // Gronwall and displacement continuity on randomized pairs.
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double grow = std::exp(decay2.lipschitz * decay2.T);
  const int steps = 600;
  for (int rep = 0; rep < 100 && ok; ++rep) {
    vec a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const double gap = norm(l2_2, sub(a, b));
    if (gap < 1e-9) continue;
    const vec xa = integrate_endpoint(decay2, a, steps);
    const vec xb = integrate_endpoint(decay2, b, steps);
    if (norm(l2_2, sub(xa, xb)) > grow * gap * (1.0 + 1e-3)) ok = false;
    const vec fa = sub(xa, a), fb = sub(xb, b);
    if (norm(l2_2, sub(fa, fb)) > (1.0 + grow) * gap * (1.0 + 1e-3)) ok = false;
  }

  const double elapsed = seconds_since(t0);
  if (elapsed > 10.0) ok = false;
  outcome(7, "periodic orbit pipeline", ok,
          detail + " a2=(" + fmt(r2.a.empty() ? 0.0 : r2.a[0]) + "," +
              fmt(r2.a.size() < 2 ? 0.0 : r2.a[1]) + ") t=" + fmt(elapsed) +
              "s");
}

void criterion_8_rk4_order() {
  const Space l2_1{1, Norm::L2, 2.0};
  OdeProblem p{MapSpec::from_expressions({"x1"}, 1), 1.0, 10.0, 1.0, l2_1};
  std::vector<double> errors;
  for (int steps : {16, 32, 64, 128})
    errors.push_back(
        std::abs(integrate_endpoint(p, {1.0}, steps)[0] - std::exp(1.0)));
  bool ok = true;
  std::string ratios;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    ratios += (i ? "," : "") + fmt(ratio);
    if (ratio < 16.0 * 0.8 || ratio > 16.0 * 1.2) ok = false;
  }
  outcome(8, "rk4 error ratio under step halving", ok, "ratios=" + ratios);
}

void criterion_9_hilbert() {
  bool ok = true;
  std::string detail;
  for (int trunc : {5, 20, 50}) {
    const MapSpec f = neg_identity(trunc);
    const Certificate c =
        check_hilbert_cube(f, trunc, RigorMode::sampled(8));
    if (c.verdict != Verdict::Certified) ok = false;

    const Space l2{trunc, Norm::L2, 2.0};
    const Domain cube = HilbertCubeDomain{trunc};
    const RootResult r =
        proof_homotopy(f, cube, l2, vec(trunc, 0.0), {}, 1e-12);
    if (norm2(r.x) > 1e-9) ok = false;
    if (trunc == 50) detail = "N=50 |x*|_2=" + fmt(norm2(r.x));
  }

  // Metric projection agrees with the coordinatewise three-case clamp
  // exactly.
  std::mt19937 rng(4242);
  const HilbertCubeDomain cube{6};
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 1000 && ok; ++rep) {
    vec x(6);
    for (double& v : x) v = u(rng);
    const vec p = project(cube, x);
    for (int k = 0; k < 6; ++k) {
      const double bound = 1.0 / (k + 1);
      const double want =
          std::abs(x[k]) < bound ? x[k] : (x[k] >= bound ? bound : -bound);
      if (p[k] != want) ok = false;
    }
  }
  outcome(9, "hilbert-cube truncations and projection", ok, detail);
}

void criterion_10_fixed_points() {
  const BoxDomain unit{{0, 0}, {1, 1}};
  bool ok = true;
  std::string detail;

  MapSpec constant = MapSpec::from_expressions({"0.3", "0.7"}, 2);
  MapSpec affine = MapSpec::from_expressions({"x1/2 + 0.25", "x2/2 + 0.25"}, 2);
  MapSpec trig = MapSpec::from_expressions({"cos(x2)^2", "sin(x1)^2"}, 2);

  int idx = 0;
  for (const MapSpec* f : {&constant, &affine, &trig}) {
    const RootResult r = fixed_point_via_zero(*f, unit, 1.5, 1e-10);
    const double defect = norm2(sub(r.x, f->eval(r.x)));
    if (!r.converged || defect > 1e-10) ok = false;
    if (idx == 2) detail = "trig-defect=" + fmt(defect);
    ++idx;
  }

  const RootResult affine_root = fixed_point_via_zero(affine, unit, 1.5, 1e-10);
  auto picard = oracles::picard_fixed_point(affine, {0.9, 0.1});
  if (!picard || norm_inf(sub(affine_root.x, *picard)) > 1e-8) ok = false;

  outcome(10, "fixed points through the zero construction", ok, detail);
}

void criterion_11_determinism() {
  const std::string cmds[] = {
      "certify " + prob("system_s.prob") + " --condition growth",
      "solve " + prob("system_s.prob") + " --method homotopy --tol 1e-9",
      "solve " + prob("neg_identity.prob") + " --method oracle",
      "certify " + prob("neg_identity.prob") + " --condition miranda",
      "periodic " + prob("forced_decay.prob"),
  };
  bool ok = true;
  int tag = 0;
  for (const std::string& cmd : cmds) {
    const CliRun a = cli(cmd, "det_a" + std::to_string(tag));
    const CliRun b = cli(cmd, "det_b" + std::to_string(tag));
    ++tag;
    if (a.exit_code != b.exit_code) ok = false;
    if (strip_timing(a.output) != strip_timing(b.output)) ok = false;
  }
  outcome(11, "byte-identical reports across repeated runs", ok,
          std::to_string(tag) + " commands");
}

}  // namespace

int main() {
  criterion_1_system_s();
  criterion_2_minimum_gain();
  criterion_3_bolzano_bisect();
  criterion_4_miranda_suite();
  criterion_5_pairing_axioms();
  criterion_6_residual_law();
  criterion_7_periodic();
  criterion_8_rk4_order();
  criterion_9_hilbert();
  criterion_10_fixed_points();
  criterion_11_determinism();

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
