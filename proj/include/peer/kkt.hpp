#pragma once

// Coupled forward/adjoint Peer scheme on a grid, solved by damped Newton with
// a block tridiagonal direct solver. Unknowns are ordered per step as
// z_n = (Y_n, P_n), each stage-major: Y_n[i*m + k] is component k of stage i.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "peer/grid.hpp"
#include "peer/problems.hpp"
#include "peer/triplet.hpp"

namespace peer {

/// Block tridiagonal matrix; lower[0] and upper[last] are unused.
struct BlockTridiagonal {
  std::vector<Mat> lower, diag, upper;

  int blocks() const noexcept { return static_cast<int>(diag.size()); }

  Mat to_dense() const {
    Eigen::Index n = 0;
    for (const auto& d : diag) n += d.rows();
    Mat out = Mat::Zero(n, n);
    Eigen::Index off = 0, prev = 0;
    for (int k = 0; k < blocks(); ++k) {
      const Eigen::Index b = diag[k].rows();
      out.block(off, off, b, b) = diag[k];
      if (k > 0) {
        out.block(off, prev, b, diag[k - 1].rows()) = lower[k];
        out.block(prev, off, diag[k - 1].rows(), b) = upper[k - 1];
      }
      prev = off;
      off += b;
    }
    return out;
  }
};

/// Block Thomas algorithm with partially pivoted LU of each reduced
/// diagonal block.
inline std::vector<Vec> solve_block_tridiagonal(const BlockTridiagonal& m, std::vector<Vec> rhs) {
  const int nb = m.blocks();
  if (static_cast<int>(rhs.size()) != nb) throw DomainError("right-hand side has the wrong number of blocks");
  std::vector<Eigen::PartialPivLU<Mat>> lu(static_cast<std::size_t>(nb));
  std::vector<Mat> x(static_cast<std::size_t>(nb));  // D'_k^{-1} U_k
  for (int k = 0; k < nb; ++k) {
    Mat d = m.diag[k];
    if (k > 0) {
      d -= m.lower[k] * x[k - 1];
      rhs[k] -= m.lower[k] * rhs[k - 1];
    }
    lu[k].compute(d);
    const Mat& f = lu[k].matrixLU();
    const double scale = std::max(d.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      if (!(std::abs(f(i, i)) > 1e-14 * scale)) throw SingularMatrix("singular block pivot", k);
    rhs[k] = lu[k].solve(rhs[k]);
    if (k + 1 < nb) x[k] = lu[k].solve(m.upper[k]);
  }
  for (int k = nb - 2; k >= 0; --k) rhs[k] -= x[k] * rhs[k + 1];
  return rhs;
}

/// Per-step coefficient matrices of the triplet on a given grid.
struct StepCoefficients {
  std::vector<Mat> A, B, K;  // B[0] unused
};

inline StepCoefficients step_coefficients(const PeerTriplet& t, const StageGrid& grid) {
  const int ns = grid.steps();
  if (ns < 2) throw DomainError("the coupled scheme needs at least two steps");
  StepCoefficients c;
  c.A.resize(static_cast<std::size_t>(ns));
  c.B.resize(static_cast<std::size_t>(ns));
  c.K.resize(static_cast<std::size_t>(ns));
  for (int n = 0; n < ns; ++n) {
    const bool first = n == 0, last = n == ns - 1;
    c.A[n] = first ? t.A0 : last ? t.AN : t.A;
    c.K[n] = first ? t.K0 : last ? t.KN : t.K;
    if (!first) c.B[n] = b_matrix(t, grid.sigma[static_cast<std::size_t>(n)]);
  }
  return c;
}

/// Stacked unknowns and views of single stages.
class KKTLayout {
 public:
  KKTLayout(int steps, int s, int m) : steps_(steps), s_(s), m_(m) {}
  int steps() const noexcept { return steps_; }
  int block() const noexcept { return 2 * s_ * m_; }
  int half() const noexcept { return s_ * m_; }
  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(steps_) * block(); }
  Eigen::Index y(int n) const noexcept { return static_cast<Eigen::Index>(n) * block(); }
  Eigen::Index p(int n) const noexcept { return y(n) + half(); }

 private:
  int steps_, s_, m_;
};

namespace detail {

/// (M kron I_m) x for a stage-major vector x.
inline Vec kron_apply(const Mat& mtx, const Vec& x, int m) {
  const Eigen::Index s = mtx.rows();
  Eigen::Map<const Mat> xs(x.data(), m, mtx.cols());  // column i = stage i
  Mat out = xs * mtx.transpose();
  return Eigen::Map<const Vec>(out.data(), s * m);
}

inline Mat kron_identity(const Mat& mtx, int m) {
  Mat out = Mat::Zero(mtx.rows() * m, mtx.cols() * m);
  for (Eigen::Index i = 0; i < mtx.rows(); ++i)
    for (Eigen::Index j = 0; j < mtx.cols(); ++j)
      if (mtx(i, j) != 0.0) out.block(i * m, j * m, m, m).diagonal().setConstant(mtx(i, j));
  return out;
}

struct KKTContext {
  const PeerTriplet& t;
  const StageGrid& grid;
  const ControlProblem& prob;
  StepCoefficients coef;
  KKTLayout layout;
  Vec a, w;

  KKTContext(const PeerTriplet& t_, const StageGrid& g_, const ControlProblem& p_)
      : t(t_), grid(g_), prob(p_), coef(step_coefficients(t_, g_)), layout(g_.steps(), t_.s, p_.m), a(t_.a()),
        w(t_.w()) {}

  void check(const Vec& z) const {
    if (z.size() != layout.size())
      throw DomainError("unknown vector has length " + std::to_string(z.size()) + ", expected " +
                        std::to_string(layout.size()));
  }
  double h(int n) const { return grid.h[static_cast<std::size_t>(n)]; }
  double stage_time(int n, int i) const { return grid.stage_time(n, t.c(i)); }
};

}  // namespace detail

/// Residual of the coupled scheme: per step the forward rows followed by the
/// adjoint rows.
inline Vec assemble_residual(const PeerTriplet& t, const StageGrid& grid, const ControlProblem& prob, const Vec& z) {
  const detail::KKTContext ctx(t, grid, prob);
  ctx.check(z);
  const auto& L = ctx.layout;
  const int s = t.s, m = prob.m, hs = L.half(), N = L.steps() - 1;
  Vec r(L.size());
  for (int n = 0; n <= N; ++n) {
    const Vec Y = z.segment(L.y(n), hs), P = z.segment(L.p(n), hs);
    const Mat& A = ctx.coef.A[n];
    const Mat& K = ctx.coef.K[n];
    const Vec Q = detail::kron_apply(K.transpose(), P, m);
    Vec G(hs), Phi(hs);
    for (int i = 0; i < s; ++i) {
      const double ti = ctx.stage_time(n, i);
      G.segment(i * m, m) = prob.g(ti, Y.segment(i * m, m), P.segment(i * m, m));
      Phi.segment(i * m, m) = prob.phi(ti, Y.segment(i * m, m), Q.segment(i * m, m));
    }
    Vec fwd = detail::kron_apply(A, Y, m) - ctx.h(n) * detail::kron_apply(K, G, m);
    if (n == 0) {
      for (int i = 0; i < s; ++i) fwd.segment(i * m, m) -= ctx.a(i) * prob.y0;
    } else {
      fwd -= detail::kron_apply(ctx.coef.B[n], z.segment(L.y(n - 1), hs), m);
    }
    Vec adj = detail::kron_apply(A.transpose(), P, m) + ctx.h(n) * Phi;
    if (n < N) {
      adj -= detail::kron_apply(ctx.coef.B[n + 1].transpose(), z.segment(L.p(n + 1), hs), m);
    } else {
      Vec yT = Vec::Zero(m);
      for (int i = 0; i < s; ++i) yT += ctx.w(i) * Y.segment(i * m, m);
      const Vec gc = prob.grad_C(yT);
      for (int i = 0; i < s; ++i) adj.segment(i * m, m) -= ctx.w(i) * gc;
    }
    r.segment(L.y(n), hs) = fwd;
    r.segment(L.p(n), hs) = adj;
  }
  return r;
}

/// Analytic Jacobian in block tridiagonal form.
inline BlockTridiagonal assemble_jacobian(const PeerTriplet& t, const StageGrid& grid, const ControlProblem& prob,
                                          const Vec& z) {
  if (!prob.has_jacobians()) throw UsageError("problem '" + prob.name + "' has no analytic Jacobians");
  const detail::KKTContext ctx(t, grid, prob);
  ctx.check(z);
  const auto& L = ctx.layout;
  const int s = t.s, m = prob.m, hs = L.half(), N = L.steps() - 1;
  BlockTridiagonal J;
  J.lower.assign(static_cast<std::size_t>(N + 1), Mat());
  J.diag.assign(static_cast<std::size_t>(N + 1), Mat());
  J.upper.assign(static_cast<std::size_t>(N + 1), Mat());
  for (int n = 0; n <= N; ++n) {
    const Vec Y = z.segment(L.y(n), hs), P = z.segment(L.p(n), hs);
    const Mat& A = ctx.coef.A[n];
    const Mat& K = ctx.coef.K[n];
    const Vec Q = detail::kron_apply(K.transpose(), P, m);
    Mat gy = Mat::Zero(hs, hs), gp = Mat::Zero(hs, hs), fy = Mat::Zero(hs, hs), fq = Mat::Zero(hs, hs);
    for (int i = 0; i < s; ++i) {
      const double ti = ctx.stage_time(n, i);
      const Vec yi = Y.segment(i * m, m), pi = P.segment(i * m, m), qi = Q.segment(i * m, m);
      gy.block(i * m, i * m, m, m) = prob.g_y(ti, yi, pi);
      gp.block(i * m, i * m, m, m) = prob.g_p(ti, yi, pi);
      fy.block(i * m, i * m, m, m) = prob.phi_y(ti, yi, qi);
      fq.block(i * m, i * m, m, m) = prob.phi_q(ti, yi, qi);
    }
    const Mat Km = detail::kron_identity(K, m);
    const double h = ctx.h(n);
    Mat d(2 * hs, 2 * hs);
    d.topLeftCorner(hs, hs) = detail::kron_identity(A, m) - h * Km * gy;
    d.topRightCorner(hs, hs) = -h * Km * gp;
    d.bottomLeftCorner(hs, hs) = h * fy;
    d.bottomRightCorner(hs, hs) = detail::kron_identity(A.transpose(), m) + h * fq * Km.transpose();
    if (n == N) {
      const Mat ww = ctx.w * ctx.w.transpose();
      for (int i = 0; i < s; ++i)
        for (int k = 0; k < s; ++k) d.block(hs + i * m, k * m, m, m) -= ww(i, k) * prob.hess_C;
    }
    J.diag[n] = std::move(d);
    if (n > 0) {
      Mat l = Mat::Zero(2 * hs, 2 * hs);
      l.topLeftCorner(hs, hs) = -detail::kron_identity(ctx.coef.B[n], m);
      J.lower[n] = std::move(l);
    }
    if (n < N) {
      Mat u = Mat::Zero(2 * hs, 2 * hs);
      u.bottomRightCorner(hs, hs) = -detail::kron_identity(ctx.coef.B[n + 1].transpose(), m);
      J.upper[n] = std::move(u);
    }
  }
  return J;
}

/// Finite-difference Jacobian with step sqrt(eps)(1 + |z_i|), restricted to
/// the tridiagonal block pattern.
inline BlockTridiagonal finite_difference_jacobian(const PeerTriplet& t, const StageGrid& grid,
                                                   const ControlProblem& prob, const Vec& z) {
  const KKTLayout L(grid.steps(), t.s, prob.m);
  if (z.size() != L.size()) throw DomainError("unknown vector has the wrong length");
  const int nb = L.steps(), b = L.block();
  BlockTridiagonal J;
  J.lower.assign(static_cast<std::size_t>(nb), Mat::Zero(b, b));
  J.diag.assign(static_cast<std::size_t>(nb), Mat::Zero(b, b));
  J.upper.assign(static_cast<std::size_t>(nb), Mat::Zero(b, b));
  const Vec r0 = assemble_residual(t, grid, prob, z);
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Vec zp = z;
  for (int k = 0; k < nb; ++k) {
    for (int j = 0; j < b; ++j) {
      const Eigen::Index col = L.y(k) + j;
      const double dz = root_eps * (1.0 + std::abs(z(col)));
      zp(col) = z(col) + dz;
      const Vec dr = (assemble_residual(t, grid, prob, zp) - r0) / dz;
      zp(col) = z(col);
      J.diag[k].col(j) = dr.segment(L.y(k), b);
      if (k > 0) J.upper[k - 1].col(j) = dr.segment(L.y(k - 1), b);
      if (k + 1 < nb) J.lower[k + 1].col(j) = dr.segment(L.y(k + 1), b);
    }
  }
  return J;
}

enum class JacobianMode { Analytic, FiniteDifference };

struct NewtonConfig {
  double tolerance = 1e-12;
  int max_iterations = 50;
  int max_halvings = 20;  // Armijo backtracking on the residual inf-norm
  JacobianMode jacobian = JacobianMode::Analytic;
  /// Residuals are measured relative to max(1, |z|_inf), so that problems
  /// with large state values reach the same relative accuracy.
  bool relative = true;
};

struct KKTSolution {
  std::vector<Mat> Y, P;  // per step: s x m, row i = stage i
  Vec c;                  // stage nodes, for the abscissae t_n + h_n c_i
  Vec yT, pT;
  double residual_norm = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
};

inline Vec initial_guess(const PeerTriplet& t, const StageGrid& grid, const ControlProblem& prob) {
  const KKTLayout L(grid.steps(), t.s, prob.m);
  const Vec pc = prob.grad_C(prob.y0);
  Vec z(L.size());
  for (int n = 0; n < L.steps(); ++n)
    for (int i = 0; i < t.s; ++i) {
      z.segment(L.y(n) + i * prob.m, prob.m) = prob.y0;
      z.segment(L.p(n) + i * prob.m, prob.m) = pc;
    }
  return z;
}

inline KKTSolution unpack_solution(const PeerTriplet& t, const StageGrid& grid, const ControlProblem& prob,
                                   const Vec& z) {
  const KKTLayout L(grid.steps(), t.s, prob.m);
  if (z.size() != L.size()) throw DomainError("unknown vector has the wrong length");
  KKTSolution sol;
  for (int n = 0; n < L.steps(); ++n) {
    sol.Y.push_back(Eigen::Map<const Mat>(z.data() + L.y(n), prob.m, t.s).transpose());
    sol.P.push_back(Eigen::Map<const Mat>(z.data() + L.p(n), prob.m, t.s).transpose());
  }
  sol.c = t.c;
  sol.yT = sol.Y.back().transpose() * t.w();
  sol.pT = prob.grad_C(sol.yT);
  return sol;
}

inline Vec pack_solution(const KKTSolution& sol) {
  if (sol.Y.empty()) return Vec();
  const Eigen::Index s = sol.Y[0].rows(), m = sol.Y[0].cols();
  Vec z(static_cast<Eigen::Index>(sol.Y.size()) * 2 * s * m);
  for (std::size_t n = 0; n < sol.Y.size(); ++n) {
    const Mat yt = sol.Y[n].transpose(), pt = sol.P[n].transpose();
    const Eigen::Index off = static_cast<Eigen::Index>(n) * 2 * s * m;
    z.segment(off, s * m) = Eigen::Map<const Vec>(yt.data(), s * m);
    z.segment(off + s * m, s * m) = Eigen::Map<const Vec>(pt.data(), s * m);
  }
  return z;
}

/// Exact stage values as a stacked vector.
inline Vec exact_unknowns(const PeerTriplet& t, const StageGrid& grid, const ControlProblem& prob) {
  if (!prob.exact) throw UsageError("problem '" + prob.name + "' has no exact solution");
  const KKTLayout L(grid.steps(), t.s, prob.m);
  Vec z(L.size());
  for (int n = 0; n < L.steps(); ++n)
    for (int i = 0; i < t.s; ++i) {
      const double ti = grid.stage_time(n, t.c(i));
      z.segment(L.y(n) + i * prob.m, prob.m) = prob.exact->y(ti);
      z.segment(L.p(n) + i * prob.m, prob.m) = prob.exact->p(ti);
    }
  return z;
}

inline std::vector<Vec> split_blocks(const Vec& v, int block) {
  std::vector<Vec> out;
  for (Eigen::Index off = 0; off < v.size(); off += block) out.push_back(v.segment(off, block));
  return out;
}

inline KKTSolution newton_solve(const PeerTriplet& t, const StageGrid& grid, const ControlProblem& prob,
                                const NewtonConfig& cfg = {}) {
  if (!(cfg.tolerance > 0.0)) throw DomainError("Newton tolerance must be positive");
  if (cfg.max_iterations < 1) throw DomainError("Newton needs max_iterations >= 1");
  const KKTLayout L(grid.steps(), t.s, prob.m);
  Vec z = initial_guess(t, grid, prob);
  auto scale = [&](const Vec& x) { return cfg.relative ? std::max(1.0, x.cwiseAbs().maxCoeff()) : 1.0; };
  Vec r = assemble_residual(t, grid, prob, z);
  double rn = r.cwiseAbs().maxCoeff();
  std::vector<double> history{rn};
  int it = 0;
  while (rn > cfg.tolerance * scale(z)) {
    if (it == cfg.max_iterations) throw ConvergenceFailure("Newton iteration did not converge", rn);
    ++it;
    const BlockTridiagonal J = cfg.jacobian == JacobianMode::Analytic ? assemble_jacobian(t, grid, prob, z)
                                                                      : finite_difference_jacobian(t, grid, prob, z);
    const auto parts = solve_block_tridiagonal(J, split_blocks(-r, L.block()));
    Vec dz(L.size());
    for (int k = 0; k < L.steps(); ++k) dz.segment(L.y(k), L.block()) = parts[k];

    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= cfg.max_halvings; ++halving, step *= 0.5) {
      const Vec trial = z + step * dz;
      Vec rt;
      try {
        rt = assemble_residual(t, grid, prob, trial);
      } catch (const DegenerateControl&) {
        continue;
      }
      const double tn = rt.cwiseAbs().maxCoeff();
      if (std::isfinite(tn) && tn <= (1.0 - 1e-4 * step) * rn) {
        z = trial;
        r = std::move(rt);
        rn = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No decrease left: accept a full step only if it is already at roundoff level.
      if (dz.cwiseAbs().maxCoeff() <= cfg.tolerance * scale(z)) break;
      throw ConvergenceFailure("Newton line search failed", rn);
    }
    history.push_back(rn);
  }
  KKTSolution sol = unpack_solution(t, grid, prob, z);
  sol.residual_norm = rn;
  sol.iterations = it;
  sol.residual_history = std::move(history);
  return sol;
}

/// Max over all steps and stages of |Y_c - y_c*| and |P_c - p_c*| for the
/// 0-based component c.
inline std::pair<double, double> solution_errors(const KKTSolution& sol, const ControlProblem& prob,
                                                 const StageGrid& grid, int component) {
  if (!prob.exact) throw UsageError("problem '" + prob.name + "' has no exact solution");
  if (component < 0 || component >= prob.m) throw DomainError("component index out of range");
  if (static_cast<int>(sol.Y.size()) != grid.steps()) throw DomainError("solution and grid differ in step count");
  double ey = 0.0, ep = 0.0;
  for (int n = 0; n < grid.steps(); ++n)
    for (Eigen::Index i = 0; i < sol.c.size(); ++i) {
      const double ti = grid.stage_time(n, sol.c(i));
      ey = std::max(ey, std::abs(sol.Y[n](i, component) - prob.exact->y(ti)(component)));
      ep = std::max(ep, std::abs(sol.P[n](i, component) - prob.exact->p(ti)(component)));
    }
  return {ey, ep};
}

/// Slopes log(e_i / e_{i+1}) / log(N_{i+1} / N_i) of consecutive records.
inline std::vector<double> observed_orders(const std::vector<std::pair<int, double>>& records) {
  std::vector<double> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!(records[i].second > 0.0)) throw DomainError("observed orders need positive errors");
    if (i == 0) continue;
    const auto [n0, e0] = records[i - 1];
    const auto [n1, e1] = records[i];
    if (n1 == n0) throw DomainError("observed orders need distinct N");
    out.push_back(std::log(e0 / e1) / std::log(static_cast<double>(n1) / n0));
  }
  return out;
}

}  // namespace peer
