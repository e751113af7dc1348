#pragma once

// Convergence studies: one solve per N on a grid family, max-norm errors of
// one component and the observed orders between consecutive N.

#include <cstdio>
#include <future>
#include <string>
#include <vector>

#include "peer/kkt.hpp"

namespace peer {

struct ProblemParams {
  double lambda = -50.0;
  double alpha = 1.0;
  double a1 = 10.0;
  double a2 = -10.0;
};

inline ControlProblem make_problem(const std::string& name, const ProblemParams& p = {}) {
  if (name == "tracking") return problem_tracking(p.lambda, p.alpha);
  if (name == "catenary") return problem_catenary(p.a1, p.a2);
  throw UsageError("unknown problem '" + name + "' (expected tracking or catenary)");
}

enum class GridFamily { Uniform, Alternating, Smooth, Equidistributed };

inline GridFamily parse_grid_family(const std::string& s) {
  if (s == "uniform") return GridFamily::Uniform;
  if (s == "alternating") return GridFamily::Alternating;
  if (s == "smooth") return GridFamily::Smooth;
  if (s == "equi") return GridFamily::Equidistributed;
  throw UsageError("unknown grid family '" + s + "' (expected uniform, alternating, smooth or equi)");
}

inline const char* to_string(GridFamily g) {
  switch (g) {
    case GridFamily::Uniform: return "uniform";
    case GridFamily::Alternating: return "alternating";
    case GridFamily::Smooth: return "smooth";
    case GridFamily::Equidistributed: return "equi";
  }
  return "?";
}

/// Grid family and its parameters. N always counts integration steps; for
/// the smooth family h0 belongs to the first N of a study and is scaled by
/// N_first / N for the others.
struct GridSpec {
  GridFamily family = GridFamily::Uniform;
  double sigma = 1.0;
  double eta = 0.3;
  double h0 = 0.004;
  int r = 3;
  EquidistributionConfig equi;

  std::string param_string() const {
    char buf[96];
    switch (family) {
      case GridFamily::Uniform: return "";
      case GridFamily::Alternating: std::snprintf(buf, sizeof buf, "sigma=%.17g", sigma); return buf;
      case GridFamily::Smooth: std::snprintf(buf, sizeof buf, "eta=%.17g;h0=%.17g", eta, h0); return buf;
      case GridFamily::Equidistributed: std::snprintf(buf, sizeof buf, "r=%d", r); return buf;
    }
    return "";
  }
};

inline DensityFamily density_family_for(const std::string& problem) {
  if (problem == "tracking") return DensityFamily::TrackingQuad;
  if (problem == "catenary") return DensityFamily::Catenary;
  throw UsageError("no mesh density for problem '" + problem + "'");
}

/// Grid with N steps for the named problem.
inline StageGrid build_grid(const GridSpec& gs, int N, const std::string& problem, const ProblemParams& pp,
                            double h0_scale = 1.0) {
  const double T = make_problem(problem, pp).T;
  switch (gs.family) {
    case GridFamily::Uniform: return uniform(N - 1, T);
    case GridFamily::Alternating: return alternating(N, gs.sigma, T);
    case GridFamily::Smooth: return smooth(gs.h0 * h0_scale, gs.eta, N);
    case GridFamily::Equidistributed: {
      DensityParams dp;
      dp.lambda = pp.lambda;
      dp.a1 = pp.a1;
      dp.a2 = pp.a2;
      return equidistribute(density(density_family_for(problem), gs.r, dp), N - 1, T, gs.equi);
    }
  }
  throw UsageError("unknown grid family");
}

struct StudySpec {
  PeerTriplet triplet;
  std::string problem = "tracking";
  ProblemParams params;
  GridSpec grid;
  int component = 0;  // 0-based
  std::vector<int> Ns;
  NewtonConfig newton;
  bool parallel = true;
};

struct ConvergenceRecord {
  std::string triplet, problem, grid, param;
  std::vector<int> Ns;
  std::vector<double> err_state, err_adjoint;
  std::vector<double> order_state, order_adjoint;  // one shorter than Ns
};

inline ConvergenceRecord run_convergence_study(const StudySpec& spec) {
  if (spec.Ns.empty()) throw UsageError("convergence study needs at least one N");
  for (std::size_t i = 1; i < spec.Ns.size(); ++i)
    if (spec.Ns[i] <= spec.Ns[i - 1]) throw UsageError("N values must be strictly increasing");
  const ControlProblem prob = make_problem(spec.problem, spec.params);
  if (spec.component < 0 || spec.component >= prob.m) throw UsageError("component index out of range");

  auto run = [&](int N) {
    try {
      const StageGrid g = build_grid(spec.grid, N, spec.problem, spec.params,
                                     static_cast<double>(spec.Ns.front()) / N);
      const KKTSolution sol = newton_solve(spec.triplet, g, prob, spec.newton);
      return solution_errors(sol, prob, g, spec.component);
    } catch (const Error& e) {
      throw StudyFailure(N, e.what());
    }
  };
  std::vector<std::pair<double, double>> errs(spec.Ns.size());
  if (spec.parallel) {
    std::vector<std::future<std::pair<double, double>>> jobs;
    for (int N : spec.Ns) jobs.push_back(std::async(std::launch::async, run, N));
    for (std::size_t i = 0; i < jobs.size(); ++i) errs[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < spec.Ns.size(); ++i) errs[i] = run(spec.Ns[i]);
  }

  ConvergenceRecord rec{spec.triplet.name, spec.problem, to_string(spec.grid.family), spec.grid.param_string(),
                        spec.Ns, {}, {}, {}, {}};
  std::vector<std::pair<int, double>> ys, ps;
  for (std::size_t i = 0; i < errs.size(); ++i) {
    rec.err_state.push_back(errs[i].first);
    rec.err_adjoint.push_back(errs[i].second);
    ys.emplace_back(spec.Ns[i], errs[i].first);
    ps.emplace_back(spec.Ns[i], errs[i].second);
  }
  if (ys.size() > 1) {
    rec.order_state = observed_orders(ys);
    rec.order_adjoint = observed_orders(ps);
  }
  return rec;
}

inline constexpr const char* kConvergenceCsvHeader =
    "triplet,problem,grid,param,N,err_state,err_adjoint,order_state,order_adjoint";

/// CSV with 17 significant digits; the order columns of the first row stay
/// empty.
inline std::string convergence_csv(const ConvergenceRecord& rec) {
  std::string out = std::string(kConvergenceCsvHeader) + "\n";
  char buf[512];
  for (std::size_t i = 0; i < rec.Ns.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%s,%d,%.17g,%.17g,", rec.triplet.c_str(), rec.problem.c_str(),
                  rec.grid.c_str(), rec.param.c_str(), rec.Ns[i], rec.err_state[i], rec.err_adjoint[i]);
    out += buf;
    if (i > 0) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", rec.order_state[i - 1], rec.order_adjoint[i - 1]);
      out += buf;
    } else {
      out += ",";
    }
    out += "\n";
  }
  return out;
}

}  // namespace peer
