#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coefficient_tables.hpp"
#include "peer/builtin.hpp"
#include "peer/coeff_io.hpp"

namespace {

using peer::Mat;
using peer::Vec;

class TripletData : public ::testing::TestWithParam<const char*> {
 protected:
  peer::PeerTriplet t = peer::load_builtin(GetParam());
};

INSTANTIATE_TEST_SUITE_P(Builtin, TripletData, ::testing::Values("AP4o33vg", "AP4o33vs", "AP4o43vs", "AP4o33va"));

TEST(Structural, PascalFirstRowIsOnes) {
  for (int k = 1; k <= 5; ++k) {
    const Mat p = peer::pascal(k);
    EXPECT_EQ(p.row(0), Vec::Ones(k).transpose());
    EXPECT_EQ(p(k - 1, k - 1), 1.0);
  }
  const Mat p4 = peer::pascal(4);
  EXPECT_EQ(p4(1, 3), 3.0);
  EXPECT_EQ(p4(2, 3), 3.0);
  EXPECT_EQ(p4(3, 0), 0.0);
}

TEST(Structural, PascalIsExponentialOfShift) {
  const Mat e = peer::shift_matrix(4);
  Mat exp = Mat::Identity(4, 4), term = Mat::Identity(4, 4);
  for (int k = 1; k < 4; ++k) {
    term = term * e / k;
    exp += term;
  }
  EXPECT_LT(peer::max_abs(exp - peer::pascal(4)), 1e-15);
}

TEST(Structural, ScalingAtOneIsIdentity) { EXPECT_EQ(peer::step_scaling(1.0, 4), Mat::Identity(4, 4)); }

TEST(Builtin, Ap4o33vgHasPulcherrimaWeights) {
  const auto t = peer::load_builtin("AP4o33vg");
  Vec k(4);
  k << 1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8;
  EXPECT_EQ(t.K, Mat(k.asDiagonal()));
}

TEST(Builtin, Ap4o43vsAlgebraicNodes) {
  const auto t = peer::load_builtin("AP4o43vs");
  const double r29 = std::sqrt(29.0);
  EXPECT_NEAR(t.c(0), (7.0 - r29) / 20.0, 1e-15);
  EXPECT_EQ(t.c(1), 0.5);
  EXPECT_NEAR(t.c(2), (3.0 + r29) / 10.0, 1e-15);
  EXPECT_EQ(t.c(3), 1.0);
  EXPECT_NEAR(t.c(0), 0.0807, 5e-5);
  EXPECT_NEAR(t.c(2), 0.8385, 5e-5);
}

TEST(Builtin, UnknownNameThrows) {
  EXPECT_THROW(peer::load_builtin("AP9o99"), peer::UnknownTriplet);
  try {
    peer::load_builtin("AP9o99");
  } catch (const peer::UnknownTriplet& e) {
    EXPECT_EQ(e.name(), "AP9o99");
  }
}

TEST_P(TripletData, MatchesReferenceTables) {
  tables::Checker chk(1e-15);
  chk.triplet(t);
  EXPECT_GT(chk.count(), 80);
  for (const auto& m : chk.mismatches())
    ADD_FAILURE() << m.where << ": expected " << m.expected << ", stored " << m.actual;
}

TEST(BHat, Ap4o33vgLastRowAtOne) {
  const auto t = peer::load_builtin("AP4o33vg");
  const Mat b = peer::b_hat(t, 1.0);
  EXPECT_EQ(b(3, 0), 0.0);
  EXPECT_NEAR(b(3, 1), 1.0 / 36, 1e-16);
  EXPECT_NEAR(b(3, 2), 1.0 / 18, 1e-16);
  EXPECT_NEAR(b(3, 3), 13.0 / 1340 + 1.0 / 20, 1e-16);
}

TEST(BHat, Ap4o33vgEntry24AtTwo) {
  const auto t = peer::load_builtin("AP4o33vg");
  EXPECT_NEAR(peer::b_hat(t, 2.0)(1, 3), 1.0 / 72, 1e-17);
}

TEST_P(TripletData, BHatSparsityPattern) {
  for (double sg : {0.5, 1.0, 1.7}) {
    const Mat b = peer::b_hat(t, sg);
    EXPECT_EQ(b(0, 0), 1.0);
    EXPECT_EQ(b(1, 0), 0.0);
    EXPECT_EQ(b(2, 0), 0.0);
    EXPECT_EQ(b(1, 1), 0.0);
    EXPECT_EQ(b(1, 2), 0.0);
    EXPECT_EQ(b(2, 1), 0.0);
    EXPECT_EQ(b(2, 2), 0.0);
  }
}

TEST_P(TripletData, NonPositiveSigmaThrows) {
  EXPECT_THROW(peer::b_hat(t, 0.0), peer::DomainError);
  EXPECT_THROW(peer::b_hat(t, -1.0), peer::DomainError);
  EXPECT_THROW(peer::b_matrix(t, 0.0), peer::DomainError);
}

TEST(BMatrix, RepeatedNodesThrow) {
  auto t = peer::load_builtin("AP4o33vg");
  t.c(1) = t.c(0);
  EXPECT_THROW(peer::b_matrix(t, 1.0), peer::SingularMatrix);
}

TEST_P(TripletData, Preconsistency) {
  const Vec one = Vec::Ones(t.s);
  for (double sg : {0.5, 0.6, 0.8, 1.0, 1.3, 1.75, 1.8}) {
    const Mat b = peer::b_matrix(t, sg);
    EXPECT_LT((t.A * one - b * one).cwiseAbs().maxCoeff(), 1e-11) << "sigma " << sg;
    EXPECT_LT((one.transpose() * t.A - one.transpose() * b).cwiseAbs().maxCoeff(), 1e-11) << "sigma " << sg;
  }
}

TEST(BMatrix, Ap4o33vgFlipSymmetry) {
  const auto t = peer::load_builtin("AP4o33vg");
  const Mat p = peer::flip_permutation(4);
  const Mat b = peer::b_matrix(t, 1.0);
  EXPECT_LT(peer::max_abs(p * b * p - b.transpose()), 1e-12);
  EXPECT_LT(peer::max_abs(p * t.A * p - t.A.transpose()), 1e-15);
}

TEST_P(TripletData, CongruenceOfB) {
  const Mat v = peer::vandermonde(t.c, 3);
  Mat e11 = Mat::Zero(3, 3);
  e11(0, 0) = 1.0;
  for (double sg : {0.5, 0.8, 1.0, 1.3, 1.8}) {
    const Mat q = v.transpose() * peer::b_matrix(t, sg) * v * peer::inverse(peer::pascal(3));
    EXPECT_LT(peer::max_abs(q - e11), 1e-10) << "sigma " << sg;
  }
}

TEST_P(TripletData, CongruenceOfAIsHilbertLike) {
  const Mat v = peer::vandermonde(t.c, 3);
  Mat h(3, 3);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) h(i - 1, j - 1) = i + j == 2 ? 1.0 : double(j - 1) / (i + j - 2);
  EXPECT_LT(peer::max_abs(v.transpose() * t.A * v - h), 1e-10);
}

TEST(Structure, LastStageIsRungeKutta) {
  for (const char* name : {"AP4o33vg", "AP4o33vs", "AP4o43vs"}) {
    const auto t = peer::load_builtin(name);
    Vec es = Vec::Zero(4);
    es(3) = 1.0;
    EXPECT_LT((t.A.transpose() * Vec::Ones(4) - es).cwiseAbs().maxCoeff(), 1e-12) << name;
    EXPECT_EQ(t.c(3), 1.0) << name;
    for (double sg : {0.7, 1.0, 1.5}) {
      const Mat bbar = peer::stability_matrices(t, sg).forward;
      EXPECT_LT((bbar.row(3) - es.transpose()).cwiseAbs().maxCoeff(), 1e-12) << name << " sigma " << sg;
    }
  }
  const auto vg = peer::load_builtin("AP4o33vg");
  Vec e1 = Vec::Zero(4);
  e1(0) = 1.0;
  EXPECT_LT((vg.A * Vec::Ones(4) - e1).cwiseAbs().maxCoeff(), 1e-15);
}

TEST_P(TripletData, StabilityMatrixKeepsOnes) {
  for (double sg : {0.6, 1.0, 1.4}) {
    const auto sm = peer::stability_matrices(t, sg);
    EXPECT_LT((sm.forward * Vec::Ones(t.s) - Vec::Ones(t.s)).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT(peer::max_abs(sm.adjoint - peer::solve(t.A.transpose(), peer::b_matrix(t, sg).transpose())), 1e-14);
  }
}

TEST_P(TripletData, ExportImportRoundTrip) {
  const auto back = peer::import_coefficients(peer::export_coefficients(t));
  EXPECT_TRUE(back == t);
  EXPECT_EQ(back.bhat.b44.terms(), t.bhat.b44.terms());
}

TEST(CoefficientFile, MissingBhatIsParseError) {
  auto j = nlohmann::json::parse(peer::export_coefficients(peer::load_builtin("AP4o33vg")));
  j.erase("bhat");
  try {
    peer::import_coefficients(j.dump());
    FAIL() << "expected ParseError";
  } catch (const peer::ParseError& e) {
    EXPECT_EQ(e.field(), "bhat");
  }
}

TEST(CoefficientFile, NonSquareAIsValidationError) {
  auto j = nlohmann::json::parse(peer::export_coefficients(peer::load_builtin("AP4o33vg")));
  j["A"].erase(j["A"].size() - 1);
  EXPECT_THROW(peer::import_coefficients(j.dump()), peer::ValidationError);
}

TEST(CoefficientFile, RationalTextAccepted) {
  auto j = nlohmann::json::parse(peer::export_coefficients(peer::load_builtin("AP4o33vg")));
  j["c"][1] = "1/3";
  const auto t = peer::import_coefficients(j.dump());
  EXPECT_EQ(t.c(1), 1.0 / 3.0);
}

TEST(CoefficientFile, MalformedNumberNamesField) {
  auto j = nlohmann::json::parse(peer::export_coefficients(peer::load_builtin("AP4o33vg")));
  j["c"][1] = "one third";
  try {
    peer::import_coefficients(j.dump());
    FAIL() << "expected ParseError";
  } catch (const peer::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("c"), std::string::npos);
  }
}

TEST(CoefficientFile, NotJsonIsParseError) { EXPECT_THROW(peer::import_coefficients("{ name: "), peer::ParseError); }

}  // namespace
