#pragma once

// Reduced optimal control problems y' = g(t, y, p), p' = phi(t, y, q) with
// the control already eliminated, plus the two boundary-layer benchmarks.

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "peer/structural.hpp"

namespace peer {

struct ExactSolution {
  std::function<Vec(double)> y, p;
  std::function<Vec(double)> dy, dp;
};

/// g takes the unweighted multiplier P_ni, phi the weighted one (K^T P)_i.
struct ControlProblem {
  using Rhs = std::function<Vec(double, const Vec&, const Vec&)>;
  using Jac = std::function<Mat(double, const Vec&, const Vec&)>;

  std::string name;
  int m = 0;
  double T = 1.0;
  Vec y0;
  Rhs g, phi;
  Jac g_y, g_p, phi_y, phi_q;  // all four or none
  std::function<Vec(const Vec&)> grad_C;
  Mat hess_C;  // constant, objective of degree <= 2
  std::optional<ExactSolution> exact;

  bool has_jacobians() const { return g_y && g_p && phi_y && phi_q; }
};

namespace detail {

inline double checked_p3(double p3) {
  if (!(std::abs(p3) >= 1e-8)) throw DegenerateControl("control elimination divides by p3 = " + std::to_string(p3));
  return p3;
}

inline Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

inline Vec e3() { return vec3(0.0, 0.0, 1.0); }

}  // namespace detail

/// Tracking problem with boundary layer exp(lambda t) on [0, 0.5]; the
/// control is u = u_d - lambda p1 / (alpha p3).
inline ControlProblem problem_tracking(double lambda = -50.0, double alpha = 1.0) {
  if (!(alpha > 0.0)) throw DomainError("tracking problem needs alpha > 0");
  using detail::vec3;
  ControlProblem pr;
  pr.name = "tracking";
  pr.m = 3;
  pr.T = 0.5;
  pr.y0 = vec3(2.0, 1.0, 0.0);
  const double la = lambda / alpha;
  auto yd = [=](double t) { return std::exp(lambda * t) + 1.0 / (1.0 - t); };

  pr.g = [=](double t, const Vec& y, const Vec& p) {
    const double v = la * p(0) / detail::checked_p3(p(2));
    const double d = y(0) - y(1), e = y(0) - yd(t);
    return vec3(d * d + lambda * (std::exp(lambda * t) - v), lambda * y(1), 0.5 * e * e + 0.5 * alpha * v * v);
  };
  pr.g_y = [=](double t, const Vec& y, const Vec&) {
    const double d = y(0) - y(1);
    Mat j = Mat::Zero(3, 3);
    j(0, 0) = 2.0 * d;
    j(0, 1) = -2.0 * d;
    j(1, 1) = lambda;
    j(2, 0) = y(0) - yd(t);
    return j;
  };
  pr.g_p = [=](double, const Vec&, const Vec& p) {
    const double p3 = detail::checked_p3(p(2));
    const double v = la * p(0) / p3;
    const double dv1 = la / p3, dv3 = -v / p3;
    Mat j = Mat::Zero(3, 3);
    j(0, 0) = -lambda * dv1;
    j(0, 2) = -lambda * dv3;
    j(2, 0) = alpha * v * dv1;
    j(2, 2) = alpha * v * dv3;
    return j;
  };
  pr.phi = [=](double t, const Vec& y, const Vec& q) {
    const double d = y(0) - y(1);
    return vec3(-2.0 * d * q(0) - (y(0) - yd(t)) * q(2), 2.0 * d * q(0) - lambda * q(1), 0.0);
  };
  pr.phi_y = [=](double, const Vec&, const Vec& q) {
    Mat j = Mat::Zero(3, 3);
    j(0, 0) = -2.0 * q(0) - q(2);
    j(0, 1) = 2.0 * q(0);
    j(1, 0) = 2.0 * q(0);
    j(1, 1) = -2.0 * q(0);
    return j;
  };
  pr.phi_q = [=](double t, const Vec& y, const Vec&) {
    const double d = y(0) - y(1);
    Mat j = Mat::Zero(3, 3);
    j(0, 0) = -2.0 * d;
    j(0, 2) = -(y(0) - yd(t));
    j(1, 0) = 2.0 * d;
    j(1, 1) = -lambda;
    return j;
  };
  pr.grad_C = [](const Vec&) { return detail::e3(); };
  pr.hess_C = Mat::Zero(3, 3);

  ExactSolution ex;
  ex.y = [=](double t) { return vec3(yd(t), std::exp(lambda * t), 0.0); };
  ex.dy = [=](double t) {
    const double e = lambda * std::exp(lambda * t);
    return vec3(e + 1.0 / ((1.0 - t) * (1.0 - t)), e, 0.0);
  };
  ex.p = [](double) { return detail::e3(); };
  ex.dp = [](double) { return Vec::Zero(3).eval(); };
  pr.exact = ex;
  return pr;
}

/// Catenary tracking problem on [0, 2] with layers at both ends; the control
/// is u = u_d - p2 / p3.
inline ControlProblem problem_catenary(double a1 = 10.0, double a2 = -10.0) {
  if (a1 == 0.0 || !std::isfinite(a1)) throw DomainError("catenary problem needs a1 != 0");
  using detail::vec3;
  ControlProblem pr;
  pr.name = "catenary";
  pr.m = 3;
  pr.T = 2.0;
  pr.y0 = vec3(std::cosh(a2) / a1, std::sinh(a2), 0.0);
  auto yd = [=](double t) { return std::cosh(a1 * t + a2) / a1; };
  auto ud = [=](double t) { return 0.5 * a1 * std::cosh(a1 * t + a2); };

  pr.g = [=](double t, const Vec& y, const Vec& p) {
    const double v = p(1) / detail::checked_p3(p(2));
    const double e = y(0) - yd(t);
    return vec3(y(1), 0.5 * a1 * std::sqrt(1.0 + y(1) * y(1)) + ud(t) - v, 0.5 * e * e + 0.5 * v * v);
  };
  pr.g_y = [=](double t, const Vec& y, const Vec&) {
    Mat j = Mat::Zero(3, 3);
    j(0, 1) = 1.0;
    j(1, 1) = 0.5 * a1 * y(1) / std::sqrt(1.0 + y(1) * y(1));
    j(2, 0) = y(0) - yd(t);
    return j;
  };
  pr.g_p = [=](double, const Vec&, const Vec& p) {
    const double p3 = detail::checked_p3(p(2));
    const double v = p(1) / p3;
    Mat j = Mat::Zero(3, 3);
    j(1, 1) = -1.0 / p3;
    j(1, 2) = v / p3;
    j(2, 1) = v / p3;
    j(2, 2) = -v * v / p3;
    return j;
  };
  pr.phi = [=](double t, const Vec& y, const Vec& q) {
    const double s = 0.5 * a1 * y(1) / std::sqrt(1.0 + y(1) * y(1));
    return vec3(-(y(0) - yd(t)) * q(2), -q(0) - s * q(1), 0.0);
  };
  pr.phi_y = [=](double, const Vec& y, const Vec& q) {
    Mat j = Mat::Zero(3, 3);
    j(0, 0) = -q(2);
    j(1, 1) = -0.5 * a1 * q(1) * std::pow(1.0 + y(1) * y(1), -1.5);
    return j;
  };
  pr.phi_q = [=](double t, const Vec& y, const Vec&) {
    Mat j = Mat::Zero(3, 3);
    j(0, 2) = -(y(0) - yd(t));
    j(1, 0) = -1.0;
    j(1, 1) = -0.5 * a1 * y(1) / std::sqrt(1.0 + y(1) * y(1));
    return j;
  };
  pr.grad_C = [](const Vec&) { return detail::e3(); };
  pr.hess_C = Mat::Zero(3, 3);

  ExactSolution ex;
  ex.y = [=](double t) { return vec3(yd(t), std::sinh(a1 * t + a2), 0.0); };
  ex.dy = [=](double t) { return vec3(std::sinh(a1 * t + a2), a1 * std::cosh(a1 * t + a2), 0.0); };
  ex.p = [](double) { return detail::e3(); };
  ex.dp = [](double) { return Vec::Zero(3).eval(); };
  pr.exact = ex;
  return pr;
}

/// g = 0, phi = 0, C(y) = c^T y: the KKT system is linear with constant
/// coefficients.
inline ControlProblem problem_zero_dynamics(const Vec& y0, const Vec& c, double T = 1.0) {
  if (y0.size() != c.size() || y0.size() == 0) throw DomainError("y0 and c must have the same nonzero length");
  ControlProblem pr;
  pr.name = "zero";
  pr.m = static_cast<int>(y0.size());
  pr.T = T;
  pr.y0 = y0;
  const int m = pr.m;
  pr.g = [m](double, const Vec&, const Vec&) { return Vec::Zero(m).eval(); };
  pr.phi = pr.g;
  pr.g_y = [m](double, const Vec&, const Vec&) { return Mat::Zero(m, m).eval(); };
  pr.g_p = pr.g_y;
  pr.phi_y = pr.g_y;
  pr.phi_q = pr.g_y;
  pr.grad_C = [c](const Vec&) { return c; };
  pr.hess_C = Mat::Zero(m, m);
  ExactSolution ex;
  ex.y = [y0](double) { return y0; };
  ex.p = [c](double) { return c; };
  ex.dy = [m](double) { return Vec::Zero(m).eval(); };
  ex.dp = ex.dy;
  pr.exact = ex;
  return pr;
}

}  // namespace peer
