#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "peer/structural.hpp"

namespace peer {

/// Polynomial in sigma and 1/sigma, stored as exponent -> coefficient.
class Laurent {
 public:
  Laurent() = default;
  Laurent(std::initializer_list<std::pair<const int, double>> terms) : terms_(terms) {}
  explicit Laurent(std::map<int, double> terms) : terms_(std::move(terms)) {}

  double operator()(double sigma) const {
    double v = 0.0;
    for (const auto& [e, coef] : terms_) v += coef * std::pow(sigma, e);
    return v;
  }

  const std::map<int, double>& terms() const noexcept { return terms_; }
  bool operator==(const Laurent&) const = default;

 private:
  std::map<int, double> terms_;
};

/// Sparse data of the transformed matrix B^(sigma) = V^T B(sigma) V for s = 4:
/// first row (1, 1, 1, a14), first column (1, 0, 0, a41), Laurent entries in
/// the last row and column, zeros elsewhere.
struct BHatData {
  double a14 = 1.0;
  double a41 = 0.0;
  Laurent b24, b34, b42, b43, b44;

  bool operator==(const BHatData&) const = default;
};

struct Orders {
  int r = 3;    // sigma-uniform forward order
  int q = 3;    // sigma-uniform adjoint order
  int r1 = 3;   // forward order at sigma = 1
  int qb = 0;   // one-leg order of the boundary steps, 0 when K_0, K_N are diagonal

  bool operator==(const Orders&) const = default;
};

struct SigmaInterval {
  double lo = 1.0;
  double hi = 1.0;
  bool operator==(const SigmaInterval&) const = default;
};

/// Full coefficient set of start, standard and end method.
struct PeerTriplet {
  std::string name;
  int s = 4;
  Vec c;
  Mat A0, K0;
  Mat A, K;
  Mat AN, KN;
  BHatData bhat;
  Mat W;
  Orders orders;
  SigmaInterval sigma_interval;
  /// Reference A(alpha) angle in degrees (informational).
  double alpha_deg = 0.0;

  Vec a() const { return A0 * Vec::Ones(s); }
  Vec w() const { return AN.transpose() * Vec::Ones(s); }
  /// W^dagger = (A W)^{-T}.
  Mat Wdag() const { return inverse(A * W, "A*W").transpose(); }

  bool operator==(const PeerTriplet& o) const {
    auto same = [](const Mat& x, const Mat& y) {
      return x.rows() == y.rows() && x.cols() == y.cols() && (x.size() == 0 || x == y);
    };
    return name == o.name && s == o.s && c.size() == o.c.size() && (c.size() == 0 || c == o.c) &&
           same(A0, o.A0) && same(K0, o.K0) && same(A, o.A) && same(K, o.K) && same(AN, o.AN) &&
           same(KN, o.KN) && bhat == o.bhat && same(W, o.W) && orders == o.orders &&
           sigma_interval == o.sigma_interval;
  }
};

inline void require_positive_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("stepsize ratio must be positive, got " + std::to_string(sigma));
}

/// B^(sigma), the Vandermonde-congruent form of B(sigma).
inline Mat b_hat(const PeerTriplet& t, double sigma) {
  require_positive_sigma(sigma);
  if (t.s != 4) throw UsageError("sparse B^ representation is defined for s = 4 only");
  Mat b = Mat::Zero(4, 4);
  b.row(0) << 1.0, 1.0, 1.0, t.bhat.a14;
  b(3, 0) = t.bhat.a41;
  b(1, 3) = t.bhat.b24(sigma);
  b(2, 3) = t.bhat.b34(sigma);
  b(3, 1) = t.bhat.b42(sigma);
  b(3, 2) = t.bhat.b43(sigma);
  b(3, 3) = t.bhat.b44(sigma);
  return b;
}

inline void require_distinct_nodes(const Vec& c) {
  for (Eigen::Index i = 0; i < c.size(); ++i)
    for (Eigen::Index j = i + 1; j < c.size(); ++j)
      if (c(i) == c(j)) throw SingularMatrix("Vandermonde matrix singular: repeated node", static_cast<int>(j));
}

/// B(sigma) = V^{-T} B^(sigma) V^{-1}, the inverse of the congruence
/// B^ = V^T B V, solved by partial-pivoting LU on every call.
inline Mat b_matrix(const PeerTriplet& t, double sigma) {
  require_distinct_nodes(t.c);
  const Mat v = vandermonde(t.c, t.s);
  const Mat left = solve(v.transpose(), b_hat(t, sigma), "Vandermonde matrix");
  return solve(v.transpose(), left.transpose(), "Vandermonde matrix").transpose();
}

struct StabilityMatrices {
  Mat forward;          // A^{-1} B(sigma)
  Mat adjoint;          // A^{-T} B(sigma)^T
};

inline StabilityMatrices stability_matrices(const PeerTriplet& t, double sigma) {
  const Mat b = b_matrix(t, sigma);
  return {solve(t.A, b, "A"), solve(t.A.transpose(), b.transpose(), "A^T")};
}

/// Transformed matrices A^ = V^T A V etc., used by the structure checks.
inline Mat hat(const PeerTriplet& t, const Mat& m) {
  const Mat v = vandermonde(t.c, t.s);
  return v.transpose() * m * v;
}

}  // namespace peer
