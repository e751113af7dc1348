#pragma once

// Small dense building blocks shared by the coefficient and verification code:
// Vandermonde, Pascal and shift matrices, stepsize scaling, and a few
// factorization helpers for the tiny (s <= ~6) matrices a Peer method needs.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "peer/error.hpp"

namespace peer {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

/// Componentwise power c^k of a node vector.
inline Vec powers(const Vec& c, int k) {
  Vec out(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) out(i) = std::pow(c(i), k);
  return out;
}

/// V_q = (1, c, ..., c^{q-1}), an s x q matrix.
inline Mat vandermonde(const Vec& c, int q) {
  Mat v(c.size(), q);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j < q; ++j) {
      v(i, j) = p;
      p *= c(i);
    }
  }
  return v;
}

/// Upper triangular Pascal matrix with entries binom(j-1, i-1).
inline Mat pascal(int q) {
  Mat p = Mat::Zero(q, q);
  for (int j = 0; j < q; ++j) {
    p(0, j) = 1.0;
    for (int i = 1; i <= j; ++i) p(i, j) = p(i - 1, j - 1) + (i <= j - 1 ? p(i, j - 1) : 0.0);
  }
  return p;
}

/// Nilpotent shift with entries i * delta_{i+1,j} (1-based), so V_q * shift
/// differentiates the monomial columns.
inline Mat shift_matrix(int q) {
  Mat e = Mat::Zero(q, q);
  for (int i = 0; i + 1 < q; ++i) e(i, i + 1) = static_cast<double>(i + 1);
  return e;
}

/// S(sigma, r) = diag(sigma^{i-1}).
inline Mat step_scaling(double sigma, int r) {
  Mat s = Mat::Zero(r, r);
  double p = 1.0;
  for (int i = 0; i < r; ++i) {
    s(i, i) = p;
    p *= sigma;
  }
  return s;
}

inline Mat flip_permutation(int s) {
  Mat p = Mat::Zero(s, s);
  for (int i = 0; i < s; ++i) p(i, s - 1 - i) = 1.0;
  return p;
}

/// Max-abs entry, the residual measure used by all matrix identities.
inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Solve M X = R with partial pivoting; throws on an exactly or numerically
/// singular M.
inline Mat solve(const Mat& m, const Mat& rhs, const char* what = "matrix") {
  Eigen::FullPivLU<Mat> check(m);
  if (!check.isInvertible()) throw SingularMatrix(std::string(what) + " is singular", static_cast<int>(check.rank()));
  return m.partialPivLu().solve(rhs);
}

inline Mat inverse(const Mat& m, const char* what = "matrix") {
  return solve(m, Mat::Identity(m.rows(), m.cols()), what);
}

struct LuFactors {
  Mat lower;  // unit lower triangular
  Mat upper;
};

/// Doolittle LU without pivoting; the zero-based pivot index is reported on
/// breakdown.
inline LuFactors lu_no_pivot(const Mat& m, double pivot_tol = 1e-14) {
  const Eigen::Index n = m.rows();
  LuFactors f{Mat::Identity(n, n), m};
  const double scale = std::max(1.0, max_abs(m));
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(f.upper(k, k)) <= pivot_tol * scale)
      throw SingularMatrix("LU without pivoting broke down", static_cast<int>(k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double l = f.upper(i, k) / f.upper(k, k);
      f.lower(i, k) = l;
      f.upper.row(i) -= l * f.upper.row(k);
      f.upper(i, k) = 0.0;
    }
  }
  return f;
}

/// Eigenvalues sorted by modulus, largest first.
inline std::vector<std::complex<double>> eigenvalues_by_modulus(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                       es.eigenvalues().data() + es.eigenvalues().size());
  std::stable_sort(ev.begin(), ev.end(),
                   [](auto a, auto b) { return std::abs(a) > std::abs(b); });
  return ev;
}

inline double spectral_radius(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double norm_inf(const Mat& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }
inline double norm_one(const Mat& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace peer
