#pragma once

// Structural checks of a Peer triplet: order conditions, local error vectors,
// super-convergence identities, error constants, spectra, weighted
// zero-stability norms, block diagonalization, LP scalings and A(alpha) scans.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "peer/triplet.hpp"

namespace peer {

enum class Step { Start, Standard, End };
enum class Direction { Forward, Adjoint, OneLeg, Extrapolation };

inline const char* to_string(Step s) {
  switch (s) {
    case Step::Start: return "start";
    case Step::Standard: return "standard";
    case Step::End: return "end";
  }
  return "?";
}

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::Forward: return "forward";
    case Direction::Adjoint: return "adjoint";
    case Direction::OneLeg: return "one_leg";
    case Direction::Extrapolation: return "extrapolation";
  }
  return "?";
}

/// Max-abs residual of the order condition selected by (step, direction).
/// For Direction::OneLeg the order argument is q_b; sigma is ignored by the
/// sigma-free identities.
inline double order_residual(const PeerTriplet& t, Step step, Direction dir, int order, double sigma) {
  const int s = t.s;
  if (order < 1 || order > s) throw UsageError("order must lie in [1, s]");
  require_positive_sigma(sigma);
  const Vec one = Vec::Ones(s);
  const Mat v = vandermonde(t.c, order);
  const Mat e = shift_matrix(order);

  switch (dir) {
    case Direction::Forward: {
      if (step == Step::Start) {
        Mat ae1 = Mat::Zero(s, order);
        ae1.col(0) = t.a();
        return max_abs(t.A0 * v - ae1 - t.K0 * v * e);
      }
      const Mat& an = step == Step::End ? t.AN : t.A;
      const Mat& kn = step == Step::End ? t.KN : t.K;
      const Mat rhs = b_matrix(t, sigma) * v * inverse(pascal(order)) * inverse(step_scaling(sigma, order));
      return max_abs(an * v - rhs - kn * v * e);
    }
    case Direction::Adjoint: {
      const Mat standard = v.transpose() * t.A + e.transpose() * v.transpose() * t.K;
      if (step == Step::Standard) {
        const Mat rhs = pascal(order).transpose() * step_scaling(sigma, order) * v.transpose() * b_matrix(t, sigma);
        return max_abs(standard - rhs);
      }
      if (step == Step::Start)
        return max_abs(v.transpose() * t.A0 + e.transpose() * v.transpose() * t.K0 - standard);
      return max_abs(t.AN.transpose() * v + t.KN.transpose() * v * e - t.w() * Vec::Ones(order).transpose());
    }
    case Direction::OneLeg: {
      if (step == Step::Standard && !t.K.isDiagonal(0.0))
        throw UsageError("one-leg condition applies to boundary steps or diagonal K");
      const Mat& kn = step == Step::Start ? t.K0 : (step == Step::End ? t.KN : t.K);
      const Vec cq = powers(t.c, order - 1);
      const Mat lhs = cq.transpose() * kn;
      const Mat rhs = one.transpose() * kn * cq.asDiagonal();
      return max_abs(lhs - rhs);
    }
    case Direction::Extrapolation: {
      if (step != Step::End) throw UsageError("extrapolation condition belongs to the end step");
      return max_abs(t.w().transpose() * v - Vec::Ones(order).transpose());
    }
  }
  throw UsageError("invalid order-condition selection");
}

struct LocalErrorVectors {
  int k = 0;
  Vec beta;      // forward
  Vec beta_dag;  // adjoint
};

inline LocalErrorVectors local_error_vectors(const PeerTriplet& t, int k, double sigma) {
  if (k < 1 || k > t.s) throw UsageError("order index must lie in [1, s]");
  require_positive_sigma(sigma);
  const Mat b = b_matrix(t, sigma);
  const Vec one = Vec::Ones(t.s);
  const Vec ck = powers(t.c, k);
  const Vec ck1 = powers(t.c, k - 1);
  const Vec cm1 = powers(t.c - one, k);
  const Vec cp = powers(one + sigma * t.c, k);
  const double kf = factorial(k);

  LocalErrorVectors out;
  out.k = k;
  out.beta = solve(t.A, t.A * ck - std::pow(sigma, -k) * b * cm1 - k * t.K * ck1, "A") / kf;
  out.beta_dag =
      solve(t.A.transpose(), t.A.transpose() * ck - b.transpose() * cp + k * t.K.transpose() * ck1, "A^T") / kf;
  return out;
}

struct SuperconvergenceValues {
  double forward = 0.0;               // r! 1^T A beta_r(sigma)
  double adjoint = 0.0;               // q! 1^T A^T beta_q^dag(sigma)
  std::optional<double> order_s;      // s! 1^T A beta_s(sigma), when a^_1s = 1 and k^_s = 1/s
};

/// True when the prerequisites of the order-s identity hold: first row of A^
/// equal to ones and 1^T K c^{s-1} = 1/s.
inline bool order_s_identity_applies(const PeerTriplet& t, double tol = 1e-8) {
  const double khat_s = (Vec::Ones(t.s).transpose() * t.K * powers(t.c, t.s - 1))(0);
  return std::abs(t.bhat.a14 - 1.0) < tol && std::abs(khat_s - 1.0 / t.s) < tol;
}

inline SuperconvergenceValues superconvergence_values(const PeerTriplet& t, double sigma) {
  const Vec one = Vec::Ones(t.s);
  SuperconvergenceValues v;
  const auto r = local_error_vectors(t, t.orders.r, sigma);
  const auto q = local_error_vectors(t, t.orders.q, sigma);
  v.forward = factorial(t.orders.r) * one.dot(t.A * r.beta);
  v.adjoint = factorial(t.orders.q) * one.dot(t.A.transpose() * q.beta_dag);
  if (order_s_identity_applies(t)) {
    const auto s = local_error_vectors(t, t.s, sigma);
    v.order_s = factorial(t.s) * one.dot(t.A * s.beta);
  }
  return v;
}

/// Closed-form values of the two super-convergence expressions,
/// (a^_1s - 1)(1 - sigma^-r) and a^_s1 (1 - sigma^q).
inline std::pair<double, double> superconvergence_closed_form(const PeerTriplet& t, double sigma) {
  return {(t.bhat.a14 - 1.0) * (1.0 - std::pow(sigma, -t.orders.r)),
          t.bhat.a41 * (1.0 - std::pow(sigma, t.orders.q))};
}

struct ErrorConstants {
  double forward = 0.0;        // err_{r1}
  double adjoint = 0.0;        // err_q^dag
  double forward_start = 0.0;  // err_{r1,0}
  double adjoint_end = 0.0;    // err_{q,N}^dag
  double adjoint_start = 0.0;  // err_{q,0}^dag
  double forward_end = 0.0;    // err_{r1,N}
};

inline ErrorConstants error_constants(const PeerTriplet& t) {
  const int r = t.orders.r1;
  const int q = t.orders.q;
  const Vec one = Vec::Ones(t.s);
  const Mat b1 = b_matrix(t, 1.0);
  const Vec cr = powers(t.c, r), cr1 = powers(t.c, r - 1), cmr = powers(t.c - one, r);
  const Vec cq = powers(t.c, q), cq1 = powers(t.c, q - 1), cpq = powers(one + t.c, q);
  const double rf = factorial(r), qf = factorial(q);

  auto fwd = [&](const Mat& an, const Mat& kn) {
    return (cr - solve(an, b1 * cmr + r * kn * cr1, "A_n")).lpNorm<Eigen::Infinity>() / rf;
  };
  auto adj = [&](const Mat& an, const Mat& kn) {
    return (cq - solve(an.transpose(), b1.transpose() * cpq - q * kn.transpose() * cq1, "A_n^T"))
               .lpNorm<Eigen::Infinity>() /
           qf;
  };

  ErrorConstants e;
  e.forward = fwd(t.A, t.K);
  e.adjoint = adj(t.A, t.K);
  e.forward_start = (cr - r * solve(t.A0, t.K0 * cr1, "A_0")).lpNorm<Eigen::Infinity>() / rf;
  e.adjoint_end =
      (cq + solve(t.AN.transpose(), q * t.KN.transpose() * cq1 - t.w(), "A_N^T")).lpNorm<Eigen::Infinity>() / qf;
  e.adjoint_start = adj(t.A0, t.K0);
  e.forward_end = fwd(t.AN, t.KN);
  return e;
}

/// min Re lambda(K_n^{-1} A_n).
inline double mu_min(const PeerTriplet& t, Step step) {
  const Mat& an = step == Step::Start ? t.A0 : (step == Step::End ? t.AN : t.A);
  const Mat& kn = step == Step::Start ? t.K0 : (step == Step::End ? t.KN : t.K);
  const auto ev = eigenvalues_by_modulus(solve(kn, an, "K_n"));
  double mu = std::numeric_limits<double>::infinity();
  for (const auto& l : ev) mu = std::min(mu, l.real());
  return mu;
}

/// Second largest eigenvalue modulus of A^{-1} B(1); the dominant one must be 1.
inline double lambda2(const PeerTriplet& t) {
  const auto ev = eigenvalues_by_modulus(stability_matrices(t, 1.0).forward);
  if (std::abs(std::abs(ev[0]) - 1.0) > 1e-10)
    throw ValidationError("dominant eigenvalue of A^{-1}B(1) has modulus " + std::to_string(std::abs(ev[0])));
  return std::abs(ev[1]);
}

struct ZeroStabilityNorms {
  double forward = 0.0;  // ||W^{-1} A^{-1}B(sigma) W||_inf
  double adjoint = 0.0;  // ||(W^dag)^{-1} A^{-T}B(sigma)^T W^dag||_1
};

inline ZeroStabilityNorms zero_stability_norms(const PeerTriplet& t, double sigma) {
  const auto sm = stability_matrices(t, sigma);
  const Mat wd = t.Wdag();
  return {norm_inf(solve(t.W, sm.forward * t.W, "W")), norm_one(solve(wd, sm.adjoint * wd, "W^dag"))};
}

/// Largest contiguous sigma interval around 1, on a grid of spacing `step`,
/// on which both weighted norms stay <= 1 + tol. Scans stop at [lo_limit, hi_limit].
inline SigmaInterval certified_interval(const PeerTriplet& t, double step = 1e-3, double tol = 1e-9,
                                        double lo_limit = 0.05, double hi_limit = 4.0) {
  auto ok = [&](double sg) {
    const auto n = zero_stability_norms(t, sg);
    return n.forward <= 1.0 + tol && n.adjoint <= 1.0 + tol;
  };
  SigmaInterval iv{1.0, 1.0};
  for (int k = 1;; ++k) {
    const double sg = 1.0 + k * step;
    if (sg > hi_limit || !ok(sg)) break;
    iv.hi = sg;
  }
  for (int k = 1;; ++k) {
    const double sg = 1.0 - k * step;
    if (sg < lo_limit || !ok(sg)) break;
    iv.lo = sg;
  }
  return iv;
}

struct BlockDiagonalization {
  Mat b_lu;                      // L_A^{-1} B^(sigma) U_A^{-1}
  Mat southeast;                 // (s-1) x (s-1) block
  double structure_residual = 0; // max deviation of first row/column from e_1
};

inline BlockDiagonalization block_diagonalize(const PeerTriplet& t, double sigma) {
  const auto lu = lu_no_pivot(hat(t, t.A));
  const Mat bh = b_hat(t, sigma);
  const Eigen::Index s = t.s;
  BlockDiagonalization out;
  const Mat tmp = lu.lower.triangularView<Eigen::UnitLower>().solve(bh);
  out.b_lu = lu.upper.transpose().triangularView<Eigen::Lower>().solve(tmp.transpose()).transpose();
  Vec e1 = Vec::Zero(s);
  e1(0) = 1.0;
  out.structure_residual = std::max((out.b_lu.row(0).transpose() - e1).cwiseAbs().maxCoeff(),
                                    (out.b_lu.col(0) - e1).cwiseAbs().maxCoeff());
  out.southeast = out.b_lu.bottomRightCorner(s - 1, s - 1);
  return out;
}

/// Quasi-optimal diagonal scaling: minimize 1^T w subject to w >= 1 and
/// (gamma I - |M|) w >= 0 for every sample M. Solved by enumerating the
/// vertices of the feasible polyhedron, which is exact for the small
/// dimensions involved.
inline Vec scaling_weights(const std::vector<Mat>& samples, double gamma) {
  if (samples.empty()) throw UsageError("scaling LP needs at least one sample matrix");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  const Eigen::Index n = samples.front().rows();
  for (const auto& m : samples)
    if (m.rows() != n || m.cols() != n) throw UsageError("sample matrices must be square of equal size");

  // Constraints G w >= h: first the bounds w >= 1, then gamma w_i - sum_j |m_ij| w_j >= 0.
  const Eigen::Index rows = n + n * static_cast<Eigen::Index>(samples.size());
  Mat g = Mat::Zero(rows, n);
  Vec h = Vec::Zero(rows);
  g.topRows(n) = Mat::Identity(n, n);
  h.head(n).setOnes();
  for (std::size_t k = 0; k < samples.size(); ++k)
    g.middleRows(n + static_cast<Eigen::Index>(k) * n, n) = gamma * Mat::Identity(n, n) - samples[k].cwiseAbs();

  const double feas_tol = 1e-12;
  std::optional<Vec> best;
  double best_obj = std::numeric_limits<double>::infinity();
  double least_violation = std::numeric_limits<double>::infinity();
  int worst_constraint = 0;

  std::vector<int> idx(static_cast<std::size_t>(n));
  auto visit = [&](auto&& self, int start, int depth) -> void {
    if (depth == n) {
      Mat sub(n, n);
      Vec rhs(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        sub.row(i) = g.row(idx[static_cast<std::size_t>(i)]);
        rhs(i) = h(idx[static_cast<std::size_t>(i)]);
      }
      Eigen::FullPivLU<Mat> lu(sub);
      if (!lu.isInvertible()) return;
      const Vec x = lu.solve(rhs);
      const Vec slack = g * x - h;
      Eigen::Index arg = 0;
      const double viol = -slack.minCoeff(&arg);
      const double scale = 1.0 + x.cwiseAbs().maxCoeff();
      if (viol <= feas_tol * scale) {
        const double obj = x.sum();
        if (obj < best_obj) {
          best_obj = obj;
          best = x;
        }
      } else if (viol < least_violation) {
        least_violation = viol;
        worst_constraint = static_cast<int>(arg);
      }
      return;
    }
    for (int i = start; i < rows; ++i) {
      idx[static_cast<std::size_t>(depth)] = i;
      self(self, i + 1, depth + 1);
    }
  };
  visit(visit, 0, 0);
  if (!best) throw Infeasible("scaling LP has no feasible point", worst_constraint);
  return *best;
}

/// Spectral radius of (A - zK)^{-1} B(1); +inf when A - zK is singular.
inline double amplification_radius(const PeerTriplet& t, const Mat& b1, std::complex<double> z) {
  const Eigen::MatrixXcd m = t.A.cast<std::complex<double>>() - z * t.K.cast<std::complex<double>>();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  return spectral_radius(lu.solve(b1.cast<std::complex<double>>()));
}

inline std::vector<double> logspace(double lo_exp, double hi_exp, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / (n - 1));
  return out;
}

inline std::vector<double> default_scan_radii() { return logspace(-3.0, 6.0, 200); }

/// Sampled A(alpha) certificate: spectral radius <= 1 + 1e-9 on both rays
/// arg z = pi +- alpha and on the negative real axis, at the given radii.
inline bool stability_angle_scan(const PeerTriplet& t, double alpha_deg, const std::vector<double>& radii) {
  if (!(alpha_deg > 0.0 && alpha_deg <= 90.0)) throw DomainError("alpha must lie in (0, 90] degrees");
  const Mat b1 = b_matrix(t, 1.0);
  const double a = alpha_deg * std::numbers::pi / 180.0;
  const std::complex<double> up = std::polar(1.0, std::numbers::pi - a);
  const std::complex<double> down = std::polar(1.0, std::numbers::pi + a);
  for (double rho : radii) {
    for (auto dir : {up, down, std::complex<double>(-1.0, 0.0)})
      if (!(amplification_radius(t, b1, rho * dir) <= 1.0 + 1e-9)) return false;
  }
  return true;
}

/// Largest angle (degrees, bisection to `tol`) passing the sampled scan.
inline double max_stable_angle(const PeerTriplet& t, const std::vector<double>& radii, double tol = 1e-3) {
  if (stability_angle_scan(t, 90.0, radii)) return 90.0;
  double lo = 0.0, hi = 90.0;
  if (!stability_angle_scan(t, tol, radii)) return 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (stability_angle_scan(t, std::max(mid, tol), radii) ? lo : hi) = mid;
  }
  return lo;
}

struct QuadratureReport {
  int max_moment = 0;         // moments k = 0..max_moment checked
  double moment_residual = 0; // max_k |sum kappa_l c_l^k - 1/(k+1)|
  Vec weights;                // 1^T K
  Vec weights_start;          // 1^T K_0
  Vec weights_end;            // 1^T K_N
  bool standard_positive = false;
  bool start_positive = false;
  bool end_positive = false;
  bool k_mixed_signs = false; // K has entries of both signs
};

inline QuadratureReport quadrature_check(const PeerTriplet& t) {
  QuadratureReport q;
  q.max_moment = t.orders.q + t.orders.r - 3;
  const Vec kd = t.K.diagonal();
  for (int k = 0; k <= q.max_moment; ++k)
    q.moment_residual = std::max(q.moment_residual, std::abs(kd.dot(powers(t.c, k)) - 1.0 / (k + 1)));
  const Vec one = Vec::Ones(t.s);
  q.weights = t.K.transpose() * one;
  q.weights_start = t.K0.transpose() * one;
  q.weights_end = t.KN.transpose() * one;
  q.standard_positive = q.weights.minCoeff() > 0.0;
  q.start_positive = q.weights_start.minCoeff() > 0.0;
  q.end_positive = q.weights_end.minCoeff() > 0.0;
  q.k_mixed_signs = kd.minCoeff() < 0.0 && kd.maxCoeff() > 0.0;
  return q;
}

}  // namespace peer
