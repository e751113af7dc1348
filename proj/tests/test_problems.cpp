#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "peer/problems.hpp"

namespace {

using peer::ControlProblem;
using peer::Mat;
using peer::Vec;

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

/// Central differences of f with respect to the argument selected by `which`
/// (0 for y, 1 for the multiplier). The step keeps roundoff below truncation
/// for the cosh-sized catenary states.
Mat central_difference(const ControlProblem::Rhs& f, double t, const Vec& y, const Vec& p, int which) {
  Mat j(y.size(), y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    Vec yp = y, ym = y, pp = p, pm = p;
    const double h = 1e-4 * (1.0 + std::abs(which == 0 ? y(k) : p(k)));
    (which == 0 ? yp : pp)(k) += h;
    (which == 0 ? ym : pm)(k) -= h;
    j.col(k) = (f(t, yp, pp) - f(t, ym, pm)) / (2.0 * h);
  }
  return j;
}

void check_jacobians(const ControlProblem& pr, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> tu(0.0, pr.T), pert(-0.1, 0.1);
  for (int k = 0; k < 20; ++k) {
    const double t = tu(rng);
    Vec y = pr.exact->y(t), p = pr.exact->p(t);
    for (int i = 0; i < 3; ++i) {
      y(i) += pert(rng) * (1.0 + std::abs(y(i)));
      p(i) += pert(rng);
    }
    const struct {
      const ControlProblem::Rhs& f;
      const ControlProblem::Jac& j;
      int which;
      const char* name;
    } cases[] = {{pr.g, pr.g_y, 0, "g_y"}, {pr.g, pr.g_p, 1, "g_p"}, {pr.phi, pr.phi_y, 0, "phi_y"}, {pr.phi, pr.phi_q, 1, "phi_q"}};
    for (const auto& c : cases) {
      const Mat fd = central_difference(c.f, t, y, p, c.which);
      const Mat an = c.j(t, y, p);
      const double scale = std::max(1.0, an.cwiseAbs().maxCoeff());
      EXPECT_LT((fd - an).cwiseAbs().maxCoeff() / scale, 1e-6) << pr.name << " " << c.name << " t=" << t;
    }
  }
}

void check_exact_derivatives(const ControlProblem& pr) {
  for (int k = 0; k < 50; ++k) {
    const double t = pr.T * k / 49.0;
    const Vec y = pr.exact->y(t), p = pr.exact->p(t);
    const Vec dy = pr.exact->dy(t);
    const Vec g = pr.g(t, y, p);
    EXPECT_LT((g - dy).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, dy.cwiseAbs().maxCoeff())) << pr.name << " t=" << t;
    EXPECT_LT(pr.phi(t, y, p).cwiseAbs().maxCoeff(), 1e-9) << pr.name << " t=" << t;
    EXPECT_LT(pr.exact->dp(t).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Tracking, ForwardRhsAtStart) {
  const auto pr = peer::problem_tracking(-50.0, 1.0);
  EXPECT_EQ(pr.m, 3);
  EXPECT_EQ(pr.T, 0.5);
  EXPECT_EQ(pr.y0, v3(2, 1, 0));
  const Vec g = pr.g(0.0, pr.y0, v3(0, 0, 1));
  EXPECT_NEAR(g(0), -49.0, 1e-13);
  EXPECT_NEAR(g(0), pr.exact->dy(0.0)(0), 1e-13);
}

TEST(Tracking, ExactAdjointIsConstant) {
  const auto pr = peer::problem_tracking();
  for (double t : {0.0, 0.1, 0.37, 0.5}) {
    EXPECT_EQ(pr.exact->p(t), v3(0, 0, 1));
    EXPECT_EQ(pr.exact->y(t)(2), 0.0);
    EXPECT_LT(pr.phi(t, pr.exact->y(t), pr.exact->p(t)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Tracking, JacobiansMatchFiniteDifferences) { check_jacobians(peer::problem_tracking(), 11); }

TEST(Tracking, ExactSolutionSatisfiesOde) { check_exact_derivatives(peer::problem_tracking()); }

TEST(Tracking, OtherParameters) {
  const auto pr = peer::problem_tracking(-10.0, 2.0);
  check_jacobians(pr, 12);
  check_exact_derivatives(pr);
}

TEST(Tracking, ZeroAlphaRejected) {
  EXPECT_THROW(peer::problem_tracking(-50.0, 0.0), peer::DomainError);
  EXPECT_THROW(peer::problem_tracking(-50.0, -1.0), peer::DomainError);
}

TEST(Catenary, InitialState) {
  const auto pr = peer::problem_catenary(10.0, -10.0);
  EXPECT_EQ(pr.T, 2.0);
  EXPECT_NEAR(pr.y0(0), std::cosh(-10.0) / 10.0, 1e-12);
  EXPECT_NEAR(pr.y0(0), 1101.32, 0.01);
  EXPECT_NEAR(pr.y0(1), std::sinh(-10.0), 1e-9);
  EXPECT_EQ(pr.y0(2), 0.0);
}

TEST(Catenary, ExactPairResiduals) {
  const auto pr = peer::problem_catenary();
  for (double t : {0.0, 0.5, 1.0, 1.7}) {
    const Vec y = pr.exact->y(t), p = pr.exact->p(t);
    EXPECT_EQ(pr.phi(t, y, p)(0), 0.0);
    const double expect = 10.0 * std::cosh(10.0 * t - 10.0);
    EXPECT_NEAR(pr.g(t, y, p)(1), expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(Catenary, JacobiansMatchFiniteDifferences) { check_jacobians(peer::problem_catenary(), 21); }

TEST(Catenary, ExactSolutionSatisfiesOde) { check_exact_derivatives(peer::problem_catenary()); }

TEST(Catenary, ZeroA1Rejected) { EXPECT_THROW(peer::problem_catenary(0.0, 1.0), peer::DomainError); }

TEST(Problems, HessianSymmetric) {
  for (const auto& pr : {peer::problem_tracking(), peer::problem_catenary()}) {
    EXPECT_EQ(pr.hess_C, pr.hess_C.transpose());
    EXPECT_TRUE(pr.has_jacobians());
  }
}

TEST(Problems, DegenerateMultiplierGuarded) {
  const auto tr = peer::problem_tracking();
  EXPECT_THROW(tr.g(0.1, tr.y0, v3(0, 0, 1e-9)), peer::DegenerateControl);
  EXPECT_THROW(tr.g_p(0.1, tr.y0, v3(0, 0, 0)), peer::DegenerateControl);
  const auto ca = peer::problem_catenary();
  EXPECT_THROW(ca.g(0.1, ca.y0, v3(0, 0, -1e-10)), peer::DegenerateControl);
  EXPECT_NO_THROW(ca.g(0.1, ca.y0, v3(0, 0, 1e-7)));
}

TEST(ZeroDynamics, Definition) {
  const auto pr = peer::problem_zero_dynamics(v3(1, 2, 3), v3(0.5, 0, -1));
  EXPECT_EQ(pr.g(0.3, pr.y0, pr.y0), Vec::Zero(3));
  EXPECT_EQ(pr.grad_C(pr.y0), v3(0.5, 0, -1));
  EXPECT_THROW(peer::problem_zero_dynamics(v3(1, 2, 3), Vec::Zero(2)), peer::DomainError);
}

}  // namespace
