#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "mesh_tables.hpp"
#include "peer/grid.hpp"
#include "quadrature_oracle.hpp"

namespace {

double total(const peer::StageGrid& g) { return std::accumulate(g.h.begin(), g.h.end(), 0.0); }

void expect_consistent(const peer::StageGrid& g) {
  ASSERT_EQ(g.t.size(), g.h.size() + 1);
  EXPECT_EQ(g.t.front(), 0.0);
  for (int n = 0; n < g.steps(); ++n) {
    EXPECT_GT(g.h[n], 0.0);
    if (n > 0) {
      EXPECT_NEAR(g.sigma[n], g.h[n] / g.h[n - 1], 1e-13 * g.sigma[n]);
    }
  }
  EXPECT_NEAR(total(g), g.final_time(), 1e-12);
}

TEST(Uniform, StepsizeAndRatios) {
  const auto g = peer::uniform(39, 0.5);
  expect_consistent(g);
  EXPECT_EQ(g.steps(), 40);
  for (int n = 0; n < g.steps(); ++n) {
    EXPECT_DOUBLE_EQ(g.h[n], 0.0125);
    EXPECT_EQ(g.sigma[n], 1.0);
  }
  // Summation roundoff of 320 equal steps: N eps T.
  EXPECT_NEAR(total(peer::uniform(319, 2.0)), 2.0, 320 * std::numeric_limits<double>::epsilon() * 2.0);
  EXPECT_THROW(peer::uniform(1, 1.0), peer::DomainError);
  EXPECT_THROW(peer::uniform(10, 0.0), peer::DomainError);
}

TEST(Alternating, SumsToFinalTime) {
  const auto g = peer::alternating(40, 1.3, 0.5);
  expect_consistent(g);
  EXPECT_NEAR(total(g), 0.5, 1e-13);
  EXPECT_NEAR(g.h[0], 2.0 * 0.5 / 40 / 2.3, 1e-16);
}

TEST(Alternating, RatioSequence) {
  const auto g = peer::alternating(40, 1.5, 0.5);
  for (int n = 1; n < g.steps(); ++n) EXPECT_NEAR(g.sigma[n], n % 2 == 1 ? 1.5 : 1.0 / 1.5, 1e-14);
}

TEST(Alternating, SigmaOneIsUniform) {
  const auto a = peer::alternating(40, 1.0, 0.5);
  const auto u = peer::uniform(39, 0.5);
  ASSERT_EQ(a.steps(), u.steps());
  for (int n = 0; n < a.steps(); ++n) {
    EXPECT_DOUBLE_EQ(a.h[n], u.h[n]);
    EXPECT_NEAR(a.t[n], u.t[n], 1e-15);
  }
}

TEST(Alternating, InvalidArguments) {
  EXPECT_THROW(peer::alternating(41, 1.3, 0.5), peer::DomainError);
  EXPECT_THROW(peer::alternating(40, 0.0, 0.5), peer::DomainError);
}

TEST(Smooth, RatiosFollowRecursion) {
  const auto g = peer::smooth(0.002, 0.3, 80);
  expect_consistent(g);
  for (int n = 1; n < g.steps(); ++n) {
    EXPECT_LT(std::abs(g.sigma[n] - 1.0 - 0.3 * g.h[n]), 1e-14);
    EXPECT_GE(g.sigma[n], 1.0);
    EXPECT_LE(g.sigma[n], 1.0 + 0.3 * g.max_step() + 1e-15);
  }
}

TEST(Smooth, ClosedFormFinalTime) {
  // h_n = h0 / (1 - n eta h0) solves the recursion.
  for (double eta : {0.3, 3.0}) {
    const double h0 = 0.004;
    const auto g = peer::smooth(h0, eta, 40);
    double T = 0.0;
    for (int n = 0; n < 40; ++n) {
      const double hn = h0 / (1.0 - n * eta * h0);
      EXPECT_NEAR(g.h[n], hn, 1e-15);
      T += hn;
    }
    EXPECT_NEAR(g.final_time(), T, 1e-14);
  }
  EXPECT_NEAR(peer::smooth(0.004, 0.3, 40).final_time(), 0.1639, 1e-4);
  EXPECT_NEAR(peer::smooth(0.004, 3.0, 40).final_time(), 0.216, 1e-3);
}

TEST(Smooth, ReachesStatedFinalTime) { EXPECT_NEAR(peer::smooth(0.004, 0.3, 40).final_time(), 0.22, 0.01); }

TEST(Smooth, ZeroEtaIsUniform) {
  const auto g = peer::smooth(0.01, 0.0, 20);
  for (int n = 0; n < g.steps(); ++n) EXPECT_EQ(g.h[n], 0.01);
}

TEST(Smooth, BreakdownReportsIndex) {
  try {
    peer::smooth(0.1, 5.0, 10);
    FAIL() << "expected DomainError";
  } catch (const peer::DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos) << e.what();
  }
}

TEST(Density, TrackingAtZero) {
  const auto psi = peer::density(peer::DensityFamily::TrackingQuad, 3);
  const double l3 = -125000.0;
  EXPECT_NEAR(psi(0.0), std::pow(std::pow(l3 + 6.0, 2) + l3 * l3, 1.0 / 6.0), 1e-12);
}

TEST(Density, CatenaryLayerCentre) {
  const auto psi = peer::density(peer::DensityFamily::Catenary, 4);
  EXPECT_NEAR(psi(1.0), std::pow(std::pow(1e3 * std::cosh(0.0), 2) + 1e4 * std::sinh(0.0), 1.0 / 8.0), 1e-12);
  EXPECT_THROW(peer::density(peer::DensityFamily::Catenary, 5), peer::DomainError);
}

TEST(Equidistribute, ConstantDensityGivesUniformGrid) {
  peer::DensityFunction one{[](double) { return 2.0; }, 3};
  const auto g = peer::equidistribute(one, 19, 1.0);
  for (int n = 0; n < g.steps(); ++n) EXPECT_NEAR(g.h[n], 0.05, 1e-10);
}

TEST(Equidistribute, ExactModeBalancesIntegrals) {
  for (const auto& ref : tables::mesh_references()) {
    const auto psi = peer::density(ref.family, ref.r);
    for (int intervals : {40, 160}) {
      const auto g = peer::equidistribute(psi, intervals - 1, ref.T, peer::exact_equidistribution());
      expect_consistent(g);
      double prev = oracle::integrate(psi.psi, g.t[0], g.t[1]);
      double worst = 0.0;
      for (int n = 1; n < g.steps(); ++n) {
        const double cur = oracle::integrate(psi.psi, g.t[n], g.t[n + 1]);
        worst = std::max(worst, std::abs(cur - prev) / (0.5 * (cur + prev)));
        prev = cur;
      }
      EXPECT_LE(worst, 0.02) << "r=" << ref.r << " T=" << ref.T << " intervals=" << intervals;
    }
  }
}

TEST(Equidistribute, TrackingFirstMeshStatistics) {
  const auto g = peer::equidistribute(peer::density(peer::DensityFamily::TrackingQuad, 3), 39, 0.5);
  const auto s = peer::mesh_statistics(g);
  EXPECT_NEAR(s.sigma_max, 1.31, 0.02);
  EXPECT_NEAR(s.sigma_min, 0.93, 0.02);
}

TEST(Equidistribute, CatenaryFirstMeshStatistics) {
  const auto g = peer::equidistribute(peer::density(peer::DensityFamily::Catenary, 4), 39, 2.0);
  const auto s = peer::mesh_statistics(g);
  EXPECT_NEAR(s.sigma_max, 1.24, 0.02);
  EXPECT_NEAR(s.sigma_min, 0.81, 0.02);
}

TEST(Equidistribute, InvalidArguments) {
  const auto psi = peer::density(peer::DensityFamily::TrackingQuad, 3);
  EXPECT_THROW(peer::equidistribute(psi, 0, 0.5), peer::DomainError);
  peer::EquidistributionConfig cfg;
  cfg.max_iterations = 1;
  EXPECT_THROW(peer::equidistribute(psi, 39, 0.5, cfg), peer::ConvergenceFailure);
  peer::DensityFunction bad{[](double) { return -1.0; }, 3};
  EXPECT_THROW(peer::equidistribute(bad, 9, 1.0), peer::DomainError);
}

TEST(MeshStatistics, EtaOfSmoothGrid) {
  const auto g = peer::smooth(0.004, 0.3, 40);
  EXPECT_NEAR(peer::mesh_statistics(g).eta_max, 0.3, 1e-10);
}

}  // namespace
