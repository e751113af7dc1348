// peer: verify triplets, build meshes, solve the benchmark problems and run
// convergence studies.
//
// Exit codes: 0 success, 1 verification failed, 2 solver failure, 3 usage.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "peer/builtin.hpp"
#include "peer/coeff_io.hpp"
#include "peer/report.hpp"
#include "peer/study.hpp"

namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kSolverFailed = 2, kUsage = 3;

struct Options {
  std::string triplet = "AP4o33vg";
  std::string problem = "tracking";
  std::string grid = "uniform";
  double sigma = 1.0;
  double eta = 0.3;
  double h0 = -1.0;  // default 0.16 / N_first
  int r = 0;         // default: 4 for AP4o43vs, 3 otherwise
  std::vector<int> Ns = {40, 80, 160, 320};
  int component = 1;
  double tol = 1e-12;
  bool absolute_tol = false;
  std::string out;
  std::string dump;
  bool json = false;
  bool exact_mesh = false;
  int sweeps = -1;
  peer::ProblemParams params;
};

peer::PeerTriplet load_triplet(const std::string& name_or_path) {
  for (auto n : peer::kBuiltinNames)
    if (n == name_or_path) return peer::load_builtin(n);
  if (std::filesystem::exists(name_or_path)) return peer::load_coefficient_file(name_or_path);
  return peer::load_builtin(name_or_path);  // throws UnknownTriplet
}

peer::GridSpec grid_spec(const Options& o, const peer::PeerTriplet& t) {
  peer::GridSpec g;
  g.family = peer::parse_grid_family(o.grid);
  g.sigma = o.sigma;
  g.eta = o.eta;
  g.h0 = o.h0 > 0.0 ? o.h0 : 0.16 / o.Ns.front();
  g.r = o.r > 0 ? o.r : (t.orders.r1 >= 4 ? 4 : 3);
  if (o.exact_mesh) g.equi = peer::exact_equidistribution();
  if (o.sweeps >= 0) g.equi.smoothing_sweeps = o.sweeps;
  return g;
}

peer::NewtonConfig newton_config(const Options& o) {
  peer::NewtonConfig c;
  c.tolerance = o.tol;
  c.relative = !o.absolute_tol;
  return c;
}

/// Writes to --out when given, stdout otherwise.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw peer::UsageError("cannot write " + o.out);
  f << text;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_verify(const Options& o) {
  const auto t = load_triplet(o.triplet);
  const auto rep = peer::verify_triplet(t);
  emit(o, o.json ? peer::render_json(rep) + "\n" : peer::render_table(rep));
  return rep.passed() ? kOk : kVerifyFailed;
}

int cmd_mesh(const Options& o) {
  const auto t = load_triplet(o.triplet);
  const auto gs = grid_spec(o, t);
  std::string text = "n,t_n,h_n,sigma_n\n";
  std::string stats;
  for (int N : o.Ns) {
    const auto g = peer::build_grid(gs, N, o.problem, o.params, static_cast<double>(o.Ns.front()) / N);
    if (o.Ns.size() == 1) {
      for (int n = 0; n < g.steps(); ++n)
        text += std::to_string(n) + "," + fmt17(g.t[n]) + "," + fmt17(g.h[n]) + "," + fmt17(g.sigma[n]) + "\n";
      text += std::to_string(g.steps()) + "," + fmt17(g.final_time()) + ",,\n";
    }
    const auto s = peer::mesh_statistics(g);
    char buf[200];
    std::snprintf(buf, sizeof buf, "N=%d T=%.17g sigma_min=%.6f sigma_max=%.6f eta_max=%.4f\n", N, g.final_time(),
                  s.sigma_min, s.sigma_max, s.eta_max);
    stats += buf;
  }
  if (o.Ns.size() == 1) {
    emit(o, text);
    std::cerr << stats;
  } else {
    emit(o, stats);
  }
  return kOk;
}

int cmd_solve(const Options& o) {
  const auto t = load_triplet(o.triplet);
  const auto prob = peer::make_problem(o.problem, o.params);
  const int N = o.Ns.front();
  const auto g = peer::build_grid(grid_spec(o, t), N, o.problem, o.params);
  const auto sol = peer::newton_solve(t, g, prob, newton_config(o));

  std::ostringstream os;
  os.precision(17);
  os << "triplet " << t.name << "\nproblem " << prob.name << "\nsteps " << g.steps() << "\nT " << g.final_time()
     << "\nyT";
  for (Eigen::Index k = 0; k < sol.yT.size(); ++k) os << ' ' << sol.yT(k);
  os << "\npT";
  for (Eigen::Index k = 0; k < sol.pT.size(); ++k) os << ' ' << sol.pT(k);
  os << "\nresidual " << sol.residual_norm << "\niterations " << sol.iterations << "\n";
  if (prob.exact) {
    for (int c = 0; c < prob.m; ++c) {
      const auto [ey, ep] = peer::solution_errors(sol, prob, g, c);
      os << "error component " << c + 1 << " state " << ey << " adjoint " << ep << "\n";
    }
  }
  emit(o, os.str());

  if (!o.dump.empty()) {
    std::ofstream f(o.dump);
    if (!f) throw peer::UsageError("cannot write " + o.dump);
    f << "n,i,t_ni";
    for (int k = 1; k <= prob.m; ++k) f << ",Y" << k;
    for (int k = 1; k <= prob.m; ++k) f << ",P" << k;
    f << "\n";
    for (int n = 0; n < g.steps(); ++n)
      for (int i = 0; i < t.s; ++i) {
        f << n << ',' << i + 1 << ',' << fmt17(g.stage_time(n, t.c(i)));
        for (int k = 0; k < prob.m; ++k) f << ',' << fmt17(sol.Y[n](i, k));
        for (int k = 0; k < prob.m; ++k) f << ',' << fmt17(sol.P[n](i, k));
        f << "\n";
      }
  }
  return kOk;
}

int cmd_converge(const Options& o) {
  peer::StudySpec spec;
  spec.triplet = load_triplet(o.triplet);
  spec.problem = o.problem;
  spec.params = o.params;
  spec.grid = grid_spec(o, spec.triplet);
  spec.component = o.component - 1;
  spec.Ns = o.Ns;
  spec.newton = newton_config(o);
  emit(o, peer::convergence_csv(peer::run_convergence_study(spec)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peer triplets for optimal control: verification, meshes, solves, convergence studies"};
  app.require_subcommand(1);
  Options o;

  auto add_problem = [&](CLI::App* c) {
    c->add_option("--problem", o.problem, "tracking or catenary")->capture_default_str();
    c->add_option("--lambda", o.params.lambda, "tracking: decay rate")->capture_default_str();
    c->add_option("--alpha", o.params.alpha, "tracking: control weight")->capture_default_str();
    c->add_option("--a1", o.params.a1, "catenary: a1")->capture_default_str();
    c->add_option("--a2", o.params.a2, "catenary: a2")->capture_default_str();
  };
  auto add_grid = [&](CLI::App* c) {
    c->add_option("--grid", o.grid, "uniform, alternating, smooth or equi")->capture_default_str();
    c->add_option("--sigma", o.sigma, "alternating: stepsize ratio")->capture_default_str();
    c->add_option("--eta", o.eta, "smooth: sigma_n = 1 + eta h_n")->capture_default_str();
    c->add_option("--h0", o.h0, "smooth: first step for the first N (default 0.16/N)");
    c->add_option("--r", o.r, "equi: density order 3 or 4 (default from the triplet)");
    c->add_option("--N", o.Ns, "number of steps, comma separated")->delimiter(',');
    c->add_flag("--exact-mesh", o.exact_mesh, "equi: Gauss-Legendre densities, no smoothing");
    c->add_option("--sweeps", o.sweeps, "equi: density smoothing passes");
  };
  auto add_solver = [&](CLI::App* c) {
    c->add_option("--tol", o.tol, "Newton tolerance on the residual inf-norm")->capture_default_str();
    c->add_flag("--absolute-tol", o.absolute_tol, "do not scale the tolerance by max(1, |z|)");
  };

  auto* verify = app.add_subcommand("verify", "check the structural properties of a triplet");
  verify->add_option("triplet,--triplet", o.triplet, "built-in name or coefficient file");
  verify->add_flag("--json", o.json, "JSON report");
  verify->add_option("--out", o.out, "output file");

  auto* mesh = app.add_subcommand("mesh", "print a grid as CSV (one N) or its statistics (several N)");
  mesh->add_option("--triplet", o.triplet, "selects the default density order");
  add_problem(mesh);
  add_grid(mesh);
  mesh->add_option("--out", o.out, "output file");

  auto* solve = app.add_subcommand("solve", "solve one problem on one grid");
  solve->add_option("--triplet", o.triplet, "built-in name or coefficient file")->capture_default_str();
  add_problem(solve);
  add_grid(solve);
  add_solver(solve);
  solve->add_option("--out", o.out, "output file");
  solve->add_option("--dump", o.dump, "write all stage values as CSV");

  auto* converge = app.add_subcommand("converge", "convergence study over a list of N");
  converge->add_option("--triplet", o.triplet, "built-in name or coefficient file")->capture_default_str();
  add_problem(converge);
  add_grid(converge);
  add_solver(converge);
  converge->add_option("--component", o.component, "1-based component of y and p")->capture_default_str();
  converge->add_option("--out", o.out, "CSV output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (o.Ns.empty()) {
    std::cerr << "error: --N needs at least one value\n";
    return kUsage;
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*mesh) return cmd_mesh(o);
    if (*solve) return cmd_solve(o);
    return cmd_converge(o);
  } catch (const peer::ConvergenceFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailed;
  } catch (const peer::SingularMatrix& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailed;
  } catch (const peer::DegenerateControl& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailed;
  } catch (const peer::StudyFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailed;
  } catch (const peer::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
