#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sparsebound/bounds.hpp"
#include "sparsebound/error.hpp"

using namespace sparsebound;

namespace {

MomentProfile uniform_profile(std::size_t m, std::size_t n, double v) {
  return MomentProfile::from_variances(DenseMatrix::filled(m, n, v));
}

DenseMatrix random_variances(std::mt19937_64& gen, std::size_t m, std::size_t n) {
  std::uniform_real_distribution<double> dist(0.01, 5.0);
  std::vector<double> v(m * n);
  for (double& x : v) x = dist(gen);
  return DenseMatrix(m, n, std::move(v));
}

// Minimax over w = (t, 1 − t) by ternary search on the convex objective.
double two_column_optimum(const DenseMatrix& v) {
  auto f = [&](double t) {
    double best = 0.0;
    for (std::size_t j = 0; j < v.rows(); ++j) best = std::max(best, v(j, 0) / t + v(j, 1) / (1 - t));
    return best;
  };
  double lo = 1e-9;
  double hi = 1 - 1e-9;
  for (int i = 0; i < 300; ++i) {
    const double a = lo + (hi - lo) / 3;
    const double b = hi - (hi - lo) / 3;
    if (f(a) < f(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return f((lo + hi) / 2);
}

}  // namespace

TEST(Inf1Bound, Examples) {
  EXPECT_EQ(inf1_bound(uniform_profile(3, 3, 0.0)).value, 0.0);
  EXPECT_DOUBLE_EQ(inf1_bound(uniform_profile(4, 4, 1.0)).value, 32.0);

  const auto mp = moments(sparsebound::bind(UniformBernoulli{0.5}, DenseMatrix::filled(16, 4, 1.0)));
  const auto r = inf1_bound(mp);
  EXPECT_DOUBLE_EQ(r.terms.at("col_term"), 16.0);
  EXPECT_DOUBLE_EQ(r.terms.at("row_term"), 32.0);
  EXPECT_DOUBLE_EQ(r.value, 96.0);
  EXPECT_EQ(r.constant_mode, ConstantMode::Explicit);
}

TEST(Inf2Bound, UniformWeightsClosedForm) {
  const std::size_t m = 5;
  const std::size_t n = 3;
  const double v = 2.0;
  const auto r = inf2_bound(uniform_profile(m, n, v), DiagWeights::uniform(n));
  EXPECT_NEAR(r.value, 2 * std::sqrt(m * n * v) + 2 * std::sqrt(double(m)) * n * std::sqrt(v), 1e-12);
  EXPECT_EQ(inf2_bound(uniform_profile(m, n, 0.0)).value, 0.0);
}

TEST(Inf2Bound, SingleRowUsesTheKktValue) {
  const auto mp = MomentProfile::from_variances(DenseMatrix::from_rows({{1, 4, 9}}));
  const auto r = inf2_bound(mp);
  EXPECT_NEAR(r.terms.at("weighted_2inf_term"), 6.0, 1e-5);
  ASSERT_EQ(r.weights.size(), 3u);
  EXPECT_NEAR(r.weights[0], 1.0 / 6, 1e-4);
  EXPECT_NEAR(r.weights[2], 3.0 / 6, 1e-4);
}

TEST(Inf2Bound, OptimisedNeverWorseThanUniform) {
  std::mt19937_64 gen(6);
  for (int i = 0; i < 20; ++i) {
    const auto mp = MomentProfile::from_variances(random_variances(gen, 1 + i % 5, 2 + i % 4));
    EXPECT_LE(inf2_bound(mp).value, inf2_bound(mp, DiagWeights::uniform(mp.cols())).value * (1 + 1e-12));
  }
}

TEST(BoundReport, ValueMatchesBreakdownAndModes) {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 10; ++i) {
    const auto v = random_variances(gen, 3, 4);
    std::vector<double> f(v.entries().begin(), v.entries().end());
    for (double& x : f) x = 3 * x * x;
    const MomentProfile mp(v, DenseMatrix(3, 4, f), 4.0);
    for (const auto& r : {inf1_bound(mp), inf2_bound(mp), spectral_bound(mp)}) {
      EXPECT_NEAR(r.value, r.recomputed_value(), 1e-12 * r.value);
      EXPECT_EQ(r.constant_mode == ConstantMode::ModuloC, r.norm.tag() == NormTag::Spectral);
    }
  }
}

TEST(DiagWeights, Validation) {
  EXPECT_THROW(DiagWeights({0.5, 0.6}), ParameterOutOfRange);
  EXPECT_THROW(DiagWeights({1.0, 0.0}), ParameterOutOfRange);
  EXPECT_NO_THROW(DiagWeights({0.25, 0.75}));
  const auto d = DiagWeights({0.25, 0.75}).d();
  EXPECT_DOUBLE_EQ(d[0], 0.5);
}

TEST(OptimizeDiag, SingleRowClosedForm) {
  const auto opt = optimize_diag(DenseMatrix::from_rows({{1, 4, 9}}));
  EXPECT_TRUE(opt.certified);
  EXPECT_LE(opt.objective, 36.0 * (1 + 1e-6));
  EXPECT_GE(opt.objective, 36.0 * (1 - 1e-12));
  EXPECT_NEAR(opt.weights.w()[0], 1.0 / 6, 1e-4);
  EXPECT_NEAR(opt.weights.w()[1], 2.0 / 6, 1e-4);
}

TEST(OptimizeDiag, UniformTableAndDuplicateRows) {
  const auto opt = optimize_diag(DenseMatrix::filled(4, 5, 2.0));
  EXPECT_NEAR(opt.objective, 25 * 2.0, 1e-9);
  for (double w : opt.weights.w()) EXPECT_NEAR(w, 0.2, 1e-9);

  const auto one = optimize_diag(DenseMatrix::from_rows({{1, 2, 3, 4}}));
  const auto two = optimize_diag(DenseMatrix::from_rows({{1, 2, 3, 4}, {1, 2, 3, 4}}));
  EXPECT_NEAR(one.objective, two.objective, 1e-6 * one.objective);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(one.weights.w()[k], two.weights.w()[k], 1e-4);
}

TEST(OptimizeDiag, MatchesIndependentTwoColumnSearch) {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 40; ++i) {
    const auto v = random_variances(gen, 1 + i % 6, 2);
    const auto opt = optimize_diag(v);
    const double ref = two_column_optimum(v);
    EXPECT_TRUE(opt.certified);
    EXPECT_LE(opt.objective, ref * (1 + 1e-6));
    EXPECT_GE(opt.objective, ref * (1 - 1e-9));
    EXPECT_LE(opt.lower_bound, ref * (1 + 1e-9));
  }
}

TEST(OptimizeDiag, CertifiedAndNoWorseThanUniform) {
  std::mt19937_64 gen(32);
  for (int i = 0; i < 30; ++i) {
    const auto v = random_variances(gen, 2 + i % 7, 2 + i % 9);
    const auto opt = optimize_diag(v);
    EXPECT_TRUE(opt.certified);
    EXPECT_LE(opt.objective, (1 + 1e-6) * opt.lower_bound);
    EXPECT_LE(opt.objective, diag_objective(v, DiagWeights::uniform(v.cols())));
    EXPECT_NEAR(opt.objective, diag_objective(v, opt.weights), 1e-12 * opt.objective);
  }
}

TEST(OptimizeDiag, ScaleLaw) {
  std::mt19937_64 gen(33);
  const auto v = random_variances(gen, 4, 5);
  const double c = 7.5;
  const auto base = optimize_diag(v);
  const auto scaled = optimize_diag(v.scaled(c));
  EXPECT_NEAR(scaled.objective, c * base.objective, 2e-6 * c * base.objective);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(scaled.weights.w()[k], base.weights.w()[k], 1e-3);
}

TEST(OptimizeDiag, ZeroColumnsAndAllZero) {
  const auto opt = optimize_diag(DenseMatrix::from_rows({{1, 0, 4}, {2, 0, 1}}));
  EXPECT_GT(opt.weights.w()[1], 0.0);
  EXPECT_LT(opt.weights.w()[1], 1e-9);
  EXPECT_THROW(optimize_diag(DenseMatrix::zeros(2, 2)), AllZeroVariances);
}

TEST(SpectralBound, ExamplesAndClosedForms) {
  EXPECT_EQ(spectral_bound(MomentProfile(DenseMatrix::zeros(2, 2), DenseMatrix::zeros(2, 2), 0.0)).value, 0.0);
  for (std::size_t n : {4u, 9u, 16u}) {
    for (double b : {1.0, 2.5}) {
      const auto mp = moments(sparsebound::bind(QuantizeAM{b}, DenseMatrix::zeros(n, n)));
      const auto r = spectral_bound(mp);
      EXPECT_LE(r.terms.at("row_term"), std::sqrt(double(n)) * b + 1e-12);
      EXPECT_LE(r.terms.at("fourth_root_term"), std::pow(3.0 * n * n * std::pow(b, 4), 0.25) + 1e-12);
      EXPECT_LE(r.value, 4 * b * std::sqrt(double(n)) + 1e-9);
      EXPECT_EQ(r.constant_mode, ConstantMode::ModuloC);
    }
  }
}

TEST(SpectralBound, ModifiedNonuniformClosedFormWhenWide) {
  const double p = 0.5;
  const double b = 1.0;
  const auto mp = moments(sparsebound::bind(ModifiedNonuniform{p, b}, DenseMatrix::filled(4, 16, 1.0)));
  const double r_spread = 1.0;
  EXPECT_LE(spectral_bound(mp).value, (2 + std::sqrt(r_spread)) * b * std::sqrt(16 / p) + 1e-9);
}

TEST(SpectralBound, ModifiedNonuniformSquareCaseExceedsTheClosedForm) {
  // The fourth-moment term is larger than the quoted estimate by 1/p, which
  // only matters when m = n.
  const auto mp = moments(sparsebound::bind(ModifiedNonuniform{0.5, 1.0}, DenseMatrix::filled(8, 8, 1.0)));
  EXPECT_GT(spectral_bound(mp).value, 3.0 * std::sqrt(8 / 0.5));
}

TEST(Tails, Formulas) {
  EXPECT_EQ(tail_exponent_s(1), 1.0);
  EXPECT_EQ(tail_exponent_s(2), 0.0);
  EXPECT_EQ(tail_exponent_s(INFINITY), 0.0);
  EXPECT_THROW(tail_exponent_s(0.5), ParameterOutOfRange);
  EXPECT_EQ(tail_infp(1, 5, 5, 1.0, 0.0), 1.0);
  EXPECT_NEAR(tail_infp(2, 4, 4, 2.0, 8.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(tail_infp(1, 3, 4, 1.0, 6.0), std::exp(-36.0 / 48.0), 1e-15);
  EXPECT_NEAR(tail_spectral(3.0, 6.0), std::exp(-1.0), 1e-15);
  EXPECT_EQ(tail_spectral(3.0, INFINITY), 0.0);
  EXPECT_NEAR(tail_spectral_relative(2.0, 1.0, 8.0), std::exp(-4.0), 1e-15);
  EXPECT_NEAR(tail_infp_relative(2, 4, 4, 2.0, 0.5, 16.0), std::exp(-1.0), 1e-15);
  EXPECT_THROW(tail_spectral(0.0, 1.0), ParameterOutOfRange);
}

TEST(SymmetrizedEstimate, DeterministicSchemeGivesZero) {
  const auto bs = sparsebound::bind(UniformBernoulli{1.0}, DenseMatrix::filled(3, 3, 2.0));
  EXPECT_EQ(symmetrized_infp_estimate(bs, 1, 20, 1).mean, 0.0);
  EXPECT_EQ(symmetrized_infp_estimate(bs, 2, 20, 1).mean, 0.0);
}

TEST(SymmetrizedEstimate, ConvergesToExactOutcomeEnumeration) {
  // 2 × 2 ones quantised at b = 2: 16 equally structured outcomes.
  const auto a = DenseMatrix::filled(2, 2, 1.0);
  const auto bs = sparsebound::bind(QuantizeAM{2.0}, a);
  const double exact = oracle::expectation(bs, [&](const DenseMatrix& x) {
    const auto z = x - a;
    return 2.0 * (oracle::col_norm(z) + oracle::col_norm(z.transposed()));
  });
  const auto est = symmetrized_infp_estimate(bs, 1, 20000, 5);
  EXPECT_NEAR(est.mean, exact, 4.0 * est.std_err);

  // At b = max|a| every entry is a point mass.
  EXPECT_EQ(symmetrized_infp_estimate(sparsebound::bind(QuantizeAM{1.0}, a), 1, 10, 5).mean, 0.0);
}

TEST(SymmetrizedEstimate, DominatesTheRealisedNorm) {
  const auto a = DenseMatrix::from_rows({{1.0, 0.5, 2.0}, {0.25, 1.5, 1.0}, {2.0, 1.0, 0.5}});
  const auto bs = sparsebound::bind(UniformBernoulli{0.4}, a);
  const std::size_t trials = 2000;
  const std::uint64_t seed = 9;
  double inf1 = 0.0;
  double inf2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto z = sample(bs, seed, t) - a;
    inf1 += oracle::inf_to_1(z);
    inf2 += oracle::inf_to_2(z);
  }
  EXPECT_GE(symmetrized_infp_estimate(bs, 1, trials, seed).mean, inf1 / trials);
  EXPECT_GE(symmetrized_infp_estimate(bs, 2, trials, seed).mean, inf2 / trials);
  EXPECT_THROW(symmetrized_infp_estimate(bs, 3, trials, seed), ParameterOutOfRange);
}
