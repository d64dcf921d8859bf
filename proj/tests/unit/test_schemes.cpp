#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sparsebound/error.hpp"
#include "sparsebound/random.hpp"
#include "sparsebound/schemes.hpp"

using namespace sparsebound;

namespace {

std::vector<Scheme> all_schemes() {
  return {UniformBernoulli{0.3}, QuantizeAM{2.5}, NonuniformAM{0.2, 2.5, std::nullopt},
          ModifiedNonuniform{0.4, 2.5}, QuantizeSparsifyAHK{3.0, std::nullopt}};
}

DenseMatrix mixed_matrix() {
  return DenseMatrix::from_rows({{1.0, -2.0, 0.0}, {0.5, 2.5, -0.25}, {0.0, -1.5, 2.0}});
}

}  // namespace

TEST(EntryDistribution, Validation) {
  EXPECT_THROW(EntryDistribution({}), ParameterOutOfRange);
  EXPECT_THROW(EntryDistribution({{1.0, 0.5}, {2.0, 0.4}}), ParameterOutOfRange);
  EXPECT_THROW(EntryDistribution({{1.0, 0.0}, {2.0, 1.0}}), ParameterOutOfRange);
  EXPECT_NO_THROW(EntryDistribution({{1.0, 0.5}, {2.0, 0.5}}));
}

TEST(EntryDistribution, DrawFollowsTheCdf) {
  const EntryDistribution e({{-1.0, 0.25}, {3.0, 0.75}});
  EXPECT_EQ(e.draw(0.0), -1.0);
  EXPECT_EQ(e.draw(0.2499), -1.0);
  EXPECT_EQ(e.draw(0.25), 3.0);
  EXPECT_EQ(e.draw(0.9999999), 3.0);
}

TEST(Bind, BernoulliPOneIsDeterministic) {
  const auto a = mixed_matrix();
  const auto bs = sparsebound::bind(UniformBernoulli{1.0}, a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_TRUE(bs.table()[i].is_point_mass());
    EXPECT_EQ(bs.table()[i].atoms()[0].value, a.entries()[i]);
  }
  EXPECT_EQ(sample(bs, 7, 3), a);
}

TEST(Bind, QuantizeOnZero) {
  const auto bs = sparsebound::bind(QuantizeAM{1.0}, DenseMatrix::zeros(1, 1));
  const auto& atoms = bs.entry(0, 0).atoms();
  ASSERT_EQ(atoms.size(), 2u);
  double plus = 0.0;
  double minus = 0.0;
  for (const auto& atom : atoms) (atom.value > 0 ? plus : minus) += atom.prob;
  EXPECT_DOUBLE_EQ(plus, 0.5);
  EXPECT_DOUBLE_EQ(minus, 0.5);
}

TEST(Bind, ModifiedNonuniformKeepProbability) {
  const auto bs = sparsebound::bind(ModifiedNonuniform{0.5, 2.0}, DenseMatrix::from_rows({{1.0}}));
  const auto& atoms = bs.entry(0, 0).atoms();
  ASSERT_EQ(atoms.size(), 2u);
  for (const auto& atom : atoms) {
    if (atom.value != 0.0) {
      EXPECT_NEAR(atom.prob, 1.0 / 9.0, 1e-15);
      EXPECT_NEAR(atom.value, 9.0, 1e-13);
    }
  }
}

TEST(Bind, ParameterChecks) {
  const auto a = mixed_matrix();
  EXPECT_THROW(sparsebound::bind(UniformBernoulli{0.0}, a), ParameterOutOfRange);
  EXPECT_THROW(sparsebound::bind(UniformBernoulli{1.5}, a), ParameterOutOfRange);
  EXPECT_THROW(sparsebound::bind(QuantizeAM{2.0}, a), ParameterOutOfRange);
  EXPECT_THROW(sparsebound::bind(NonuniformAM{1.0, 3.0, std::nullopt}, a), ParameterOutOfRange);
  EXPECT_THROW(sparsebound::bind(ModifiedNonuniform{0.5, 1.0}, a), ParameterOutOfRange);
  EXPECT_THROW(sparsebound::bind(QuantizeSparsifyAHK{1.0, 5}, a), ParameterOutOfRange);
  EXPECT_THROW(sparsebound::bind(QuantizeSparsifyAHK{-1.0, std::nullopt}, a), ParameterOutOfRange);
}

TEST(Bind, DefaultsResolveFromTheTarget) {
  const auto a = mixed_matrix();
  const auto bs = sparsebound::bind(QuantizeAM{}, a);
  EXPECT_EQ(*std::get<QuantizeAM>(bs.scheme()).b, 2.5);
  const auto ahk = sparsebound::bind(QuantizeSparsifyAHK{1.0, std::nullopt}, a);
  EXPECT_EQ(*std::get<QuantizeSparsifyAHK>(ahk.scheme()).n, 3u);
}

TEST(Bind, EveryEntryIsUnbiasedAndZerosStayZero) {
  const auto a = mixed_matrix();
  for (const auto& s : all_schemes()) {
    const auto bs = sparsebound::bind(s, a);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& e = bs.table()[i];
      double total = 0.0;
      for (const auto& atom : e.atoms()) total += atom.prob;
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_LE(e.atoms().size(), 3u);
      EXPECT_NEAR(oracle::entry_moments(e).mean, a.entries()[i], 1e-12) << scheme_kind(s);
      if (a.entries()[i] == 0.0 && !std::holds_alternative<QuantizeAM>(s)) {
        EXPECT_TRUE(e.is_point_mass());
      }
    }
  }
}

TEST(Bind, CustomTable) {
  const auto a = DenseMatrix::from_rows({{1.0, 0.0}});
  CustomTable t{1, 2, {EntryDistribution({{0.0, 0.5}, {2.0, 0.5}}), EntryDistribution::point_mass(0.0)}};
  EXPECT_NO_THROW(sparsebound::bind(t, a));
  CustomTable biased{1, 2, {EntryDistribution::point_mass(3.0), EntryDistribution::point_mass(0.0)}};
  EXPECT_THROW(sparsebound::bind(biased, a), ParameterOutOfRange);
  CustomTable wrong{2, 1, t.entries};
  EXPECT_THROW(sparsebound::bind(wrong, a), ParameterOutOfRange);
}

TEST(Moments, Examples) {
  auto single = [](const Scheme& s, double a) {
    return moments(sparsebound::bind(s, DenseMatrix::from_rows({{a}})));
  };
  auto q0 = single(QuantizeAM{1.0}, 0.0);
  EXPECT_DOUBLE_EQ(q0.variance()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(q0.fourth_central()(0, 0), 1.0);

  auto qh = single(QuantizeAM{1.0}, 0.5);
  EXPECT_NEAR(qh.variance()(0, 0), 0.75, 1e-15);
  EXPECT_NEAR(qh.fourth_central()(0, 0), 1.3125, 1e-15);

  auto b = single(UniformBernoulli{0.5}, 1.0);
  EXPECT_DOUBLE_EQ(b.variance()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(b.fourth_central()(0, 0), 1.0);
}

TEST(Moments, MatchAtomSumsAndClosedForms) {
  const auto a = mixed_matrix();
  for (const auto& s : all_schemes()) {
    const auto bs = sparsebound::bind(s, a);
    const auto mp = moments(bs);
    double max_atom = 0.0;
    for (std::size_t j = 0; j < a.rows(); ++j) {
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const auto ref = oracle::entry_moments(bs.entry(j, k));
        EXPECT_NEAR(mp.variance()(j, k), ref.variance, 1e-11);
        EXPECT_NEAR(mp.fourth_central()(j, k), ref.fourth, 1e-10);
        EXPECT_GE(mp.fourth_central()(j, k), mp.variance()(j, k) * mp.variance()(j, k) * (1 - 1e-12));
        for (const auto& atom : bs.entry(j, k).atoms()) max_atom = std::max(max_atom, std::abs(atom.value));
      }
    }
    EXPECT_GE(mp.sup_bound() / 2.0, max_atom);
  }

  // Closed forms: Bernoulli a²(1−p)/p; quantization b² − a² and b⁴ + 2a²b² − 3a⁴.
  const double p = 0.3;
  const double bq = 2.5;
  const auto mb = moments(sparsebound::bind(UniformBernoulli{p}, a));
  const auto mq = moments(sparsebound::bind(QuantizeAM{bq}, a));
  for (std::size_t j = 0; j < a.rows(); ++j) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double v = a(j, k);
      EXPECT_NEAR(mb.variance()(j, k), v * v * (1 - p) / p, 1e-12);
      EXPECT_NEAR(mq.variance()(j, k), bq * bq - v * v, 1e-12);
      EXPECT_NEAR(mq.fourth_central()(j, k),
                  std::pow(bq, 4) + 2 * v * v * bq * bq - 3 * std::pow(v, 4), 1e-10);
    }
  }
}

TEST(Moments, ModifiedNonuniformVarianceIsBSquaredOverP) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  std::vector<double> v(30);
  for (double& x : v) x = dist(gen);
  const DenseMatrix a(5, 6, v);
  const double p = 0.37;
  const double b = 3.0;
  const auto mp = moments(sparsebound::bind(ModifiedNonuniform{p, b}, a));
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_NEAR(mp.variance().entries()[i], b * b / p, 1e-10 * b * b / p);
}

TEST(Moments, AhkPassThroughAndVariance) {
  const double delta = 2.0;
  const auto a = DenseMatrix::from_rows({{0.1, -0.5, 1.0, 2.0}});
  const double tau = delta / 2.0;
  const auto mp = moments(sparsebound::bind(QuantizeSparsifyAHK{delta, std::nullopt}, a));
  for (std::size_t k = 0; k < 4; ++k) {
    const double v = std::abs(a(0, k));
    if (v >= tau) {
      EXPECT_EQ(mp.variance()(0, k), 0.0);
      EXPECT_EQ(mp.fourth_central()(0, k), 0.0);
    } else {
      EXPECT_NEAR(mp.variance()(0, k), v * tau - v * v, 1e-14);
      EXPECT_LE(mp.variance()(0, k), delta * delta / 4.0);
    }
  }
}

TEST(Moments, MonteCarloVarianceAgrees) {
  const auto bs = sparsebound::bind(ModifiedNonuniform{0.3, 2.0}, DenseMatrix::from_rows({{1.3}}));
  const auto mp = moments(bs);
  const std::size_t n = 20000;
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double x = sample(bs, 4242, t)(0, 0);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  const double v = mp.variance()(0, 0);
  // se(sample variance) ≈ √((μ4 − σ⁴)/n)
  const double se = std::sqrt((mp.fourth_central()(0, 0) - v * v) / n);
  EXPECT_NEAR(var, v, 5.0 * se);
}

TEST(Sample, DeterministicAndWithinSupBound) {
  const auto a = mixed_matrix();
  for (const auto& s : all_schemes()) {
    const auto bs = sparsebound::bind(s, a);
    const double half_d = moments(bs).sup_bound() / 2.0;
    for (std::uint64_t t = 0; t < 50; ++t) {
      const auto x = sample(bs, 12345, t);
      EXPECT_EQ(x, sample(bs, 12345, t));
      EXPECT_LE(x.max_abs(), half_d);
      for (std::size_t i = 0; i < x.size(); ++i) {
        bool is_atom = false;
        for (const auto& atom : bs.table()[i].atoms()) is_atom = is_atom || atom.value == x.entries()[i];
        EXPECT_TRUE(is_atom);
      }
    }
  }
}

TEST(Sample, BernoulliHalfIsUnbiasedEntrywise) {
  const auto a = DenseMatrix::filled(50, 50, 1.0);
  const auto bs = sparsebound::bind(UniformBernoulli{0.5}, a);
  const std::size_t trials = 400;
  std::vector<double> sum(a.size(), 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = sample(bs, 77, t);
    for (std::size_t i = 0; i < a.size(); ++i) sum[i] += x.entries()[i];
  }
  // X ∈ {0, 2}: sd of the sample mean is 1/√trials.
  const double five_sigma = 5.0 / std::sqrt(static_cast<double>(trials));
  for (double s : sum) EXPECT_NEAR(s / trials, 1.0, five_sigma);
}

TEST(Sample, DifferentTrialsDiffer) {
  const auto bs = sparsebound::bind(UniformBernoulli{0.5}, DenseMatrix::filled(8, 8, 1.0));
  EXPECT_NE(sample(bs, 1, 0), sample(bs, 1, 1));
  EXPECT_NE(sample(bs, 1, 0), sample(bs, 2, 0));
}

TEST(ExpectedNnz, Examples) {
  const auto ones = DenseMatrix::filled(6, 5, 1.0);
  EXPECT_NEAR(expected_nnz(sparsebound::bind(UniformBernoulli{0.3}, ones)), 0.3 * 30, 1e-12);

  const auto a = mixed_matrix();
  const double p = 0.4;
  const double b = 2.5;
  double avg = 0.0;
  for (double v : a.entries()) avg += (v / b) * (v / b);
  avg /= static_cast<double>(a.size());
  EXPECT_LE(expected_nnz(sparsebound::bind(ModifiedNonuniform{p, b}, a)), p * a.size() * avg + 1e-12);

  const double n = 3.0;
  const double delta = std::sqrt(n) * 2.5;
  double expected = 0.0;
  for (double v : a.entries()) expected += std::abs(v) * std::sqrt(n) / delta;
  EXPECT_NEAR(expected_nnz(sparsebound::bind(QuantizeSparsifyAHK{delta, std::nullopt}, a)), expected, 1e-12);
}

TEST(SchemeText, ParseAndFormat) {
  for (const char* text : {"bernoulli:p=0.25", "quantize-am:b=2", "nonuniform-am:p=0.5,b=1,n=4",
                           "modified-nonuniform:p=0.5,b=2", "ahk:delta=1.5"}) {
    const auto s = parse_scheme(text);
    EXPECT_EQ(parse_scheme(format_scheme(s)).index(), s.index());
  }
  EXPECT_EQ(std::get<UniformBernoulli>(parse_scheme("bernoulli:p=0.25")).p, 0.25);
  EXPECT_FALSE(std::get<QuantizeAM>(parse_scheme("quantize-am")).b.has_value());
  EXPECT_THROW(parse_scheme("bernoulli:q=0.5"), ParameterOutOfRange);
  EXPECT_THROW(parse_scheme("bernoulli:p=abc"), ParameterOutOfRange);
  EXPECT_THROW(parse_scheme("dropout:p=0.5"), ParameterOutOfRange);
  EXPECT_THROW(parse_scheme("bernoulli"), ParameterOutOfRange);
}

TEST(CounterRng, PureFunctionOfItsKey) {
  const CounterRng a(5, Stream::Entries);
  const CounterRng b(5, Stream::Entries);
  const CounterRng c(5, Stream::Rademacher);
  EXPECT_EQ(a.bits(3, 9), b.bits(3, 9));
  EXPECT_NE(a.bits(3, 9), c.bits(3, 9));
  EXPECT_NE(a.bits(3, 9), a.bits(4, 9));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = a.uniform(0, i);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
