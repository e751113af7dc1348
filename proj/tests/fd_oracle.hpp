#pragma once

// Central-difference oracles for Jacobians. Steps are chosen so that roundoff
// stays below the O(h^2) truncation even for unknowns of size 1e5.

#include <cmath>

#include "peer/kkt.hpp"

namespace oracle {

/// Dense central-difference Jacobian of the KKT residual, column step
/// 1e-4 (1 + |z_k|).
inline peer::Mat kkt_jacobian(const peer::PeerTriplet& t, const peer::StageGrid& g, const peer::ControlProblem& pr,
                              const peer::Vec& z) {
  peer::Mat j(z.size(), z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    peer::Vec zp = z, zm = z;
    const double h = 1e-4 * (1.0 + std::abs(z(k)));
    zp(k) += h;
    zm(k) -= h;
    j.col(k) = (peer::assemble_residual(t, g, pr, zp) - peer::assemble_residual(t, g, pr, zm)) / (2.0 * h);
  }
  return j;
}

/// Central difference of the KKT residual along `dir` (scaled to unit
/// inf-norm inside) compared with J dir, relative to |J dir|.
inline double directional_mismatch(const peer::PeerTriplet& t, const peer::StageGrid& g, const peer::ControlProblem& pr,
                                   const peer::Vec& z, const peer::Mat& jac, const peer::Vec& dir) {
  const peer::Vec d = dir / dir.cwiseAbs().maxCoeff();
  const double h = 1e-3;
  const peer::Vec fd = (peer::assemble_residual(t, g, pr, z + h * d) - peer::assemble_residual(t, g, pr, z - h * d)) / (2.0 * h);
  const peer::Vec jd = jac * d;
  return (fd - jd).cwiseAbs().maxCoeff() / jd.cwiseAbs().maxCoeff();
}

}  // namespace oracle
