#include "relcrypt/error.hpp"
#include "relcrypt/qsmall.hpp"

#include <gtest/gtest.h>

using namespace relcrypt;
using namespace relcrypt::q;

namespace {

constexpr double kTol = 1e-9;

double trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b);
  return es.eigenvalues().cwiseAbs().sum() / 2;
}

}  // namespace

TEST(Density, RejectsInvalidMatrices) {
  Matrix m = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{m}, PreconditionError);  // trace 2
  Matrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix{neg}, PreconditionError);
  Matrix nh(2, 2);
  nh << 0.5, 0.3, 0.1, 0.5;
  EXPECT_THROW(DensityMatrix{nh}, PreconditionError);
  EXPECT_THROW(DensityMatrix::maximally_mixed(kMaxDim * kMaxDim + 1), PreconditionError);
}

TEST(Density, RandomStatesAreValid) {
  for (int d = 1; d <= 4; ++d)
    for (std::uint64_t s = 0; s < 10; ++s) {
      DensityMatrix r = random_state(d, s);
      EXPECT_NEAR(r.matrix().trace().real(), 1, kTol);
    }
  EXPECT_TRUE(random_state(3, 5).matrix().isApprox(random_state(3, 5).matrix()));
}

TEST(Tensor, PartialTraceUndoesTensor) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    DensityMatrix a = random_state(2, s), b = random_state(3, s + 100);
    DensityMatrix ab = tensor(a, b);
    EXPECT_EQ(ab.dim(), 6);
    EXPECT_LT(trace_distance(partial_trace(ab, 2, 3, 1).matrix(), a.matrix()), kTol);
    EXPECT_LT(trace_distance(partial_trace(ab, 2, 3, 0).matrix(), b.matrix()), kTol);
  }
}

TEST(Tensor, MaximallyEntangledHasMixedMarginals) {
  for (int d = 2; d <= 4; ++d) {
    DensityMatrix phi = DensityMatrix::maximally_entangled(d);
    EXPECT_LT(trace_distance(partial_trace(phi, d, d, 0).matrix(), DensityMatrix::maximally_mixed(d).matrix()),
              kTol);
  }
}

TEST(Channels, KrausCompletenessIsChecked) {
  Matrix half = Matrix::Identity(2, 2) * 0.5;
  EXPECT_THROW(QuantumChannel(2, 2, {half}), PreconditionError);
}

TEST(Channels, ReplacementAndDepolarizingOutputs) {
  DensityMatrix tau = random_state(3, 7);
  DensityMatrix in = random_state(3, 8);
  EXPECT_LT(trace_distance(replacement_channel(tau).apply(in).matrix(), tau.matrix()), kTol);
  EXPECT_LT(trace_distance(depolarizing_channel(3).apply(in).matrix(), DensityMatrix::maximally_mixed(3).matrix()),
            kTol);
  EXPECT_LT(trace_distance(identity_channel(3).apply(in).matrix(), in.matrix()), kTol);
}

TEST(Choi, IdentityGivesTheEntangledState) {
  for (int d = 2; d <= 4; ++d)
    EXPECT_LT(trace_distance(choi_state(identity_channel(d)), DensityMatrix::maximally_entangled(d).matrix()), kTol);
}

TEST(Epr, IdentityPassesReplacementGivesOneOverDSquared) {
  for (int d = 2; d <= 4; ++d) {
    EXPECT_NEAR(epr_test_success(identity_channel(d)), 1, kTol);
    EXPECT_NEAR(epr_test_success(depolarizing_channel(d)), 1.0 / (d * d), kTol);
    for (std::uint64_t s = 0; s < 10; ++s)
      EXPECT_NEAR(epr_test_success(replacement_channel(random_state(d, s))), 1.0 / (d * d), kTol);
  }
}

TEST(Epr, LinearInTheChannel) {
  for (double w : {0.0, 0.3, 0.5, 0.9}) {
    QuantumChannel m = mixture({w, 1 - w}, {identity_channel(2), replacement_channel(random_state(2, 3))});
    EXPECT_NEAR(epr_test_success(m), w + (1 - w) / 4, kTol);
    Matrix choi = w * choi_state(identity_channel(2)) + (1 - w) * choi_state(replacement_channel(random_state(2, 3)));
    EXPECT_LT(trace_distance(choi_state(m), choi), kTol);
  }
}

TEST(Epr, DistinguisherAdvantageThreeQuarters) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    EprDistinguisherResult r = epr_distinguisher(2, random_state(2, s));
    EXPECT_NEAR(r.accept_identity, 1, kTol);
    EXPECT_NEAR(r.accept_replace, 0.25, kTol);
    EXPECT_NEAR(r.advantage, 0.75, kTol);
    EXPECT_NEAR(r.uniform_success, 0.875, kTol);
  }
  EXPECT_NEAR(epr_distinguisher(3, random_state(3, 1)).advantage, 1 - 1.0 / 9, kTol);
}

TEST(Epr, DimensionMismatchIsRejected) {
  EXPECT_THROW(epr_distinguisher(2, random_state(3, 1)), PreconditionError);
}
