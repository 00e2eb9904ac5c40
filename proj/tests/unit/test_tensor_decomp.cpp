#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sl2hat/characters.hpp"
#include "sl2hat/partitions.hpp"
#include "sl2hat/tensor_decomp.hpp"
#include "sl2hat/theta_series.hpp"

using namespace sl2hat;

TEST(BranchingMult, TopComponent) {
  EXPECT_EQ(branching_mult(kLambda0, Weight{2, 0, 0}), 1);
  for (std::int64_t n = 1; n <= 6; ++n)
    for (std::int64_t x = 0; x <= n; ++x) EXPECT_EQ(branching_mult({n, x, 0}, Weight{n + 1, x, 0}), 1);
}

TEST(BranchingMult, AgreesWithFormalProduct) {
  const auto oracle6 = char_product_oracle(kLambda0, 6);
  const Weight beta{2, 2, -1};
  const auto it = oracle6.entries.find(beta);
  ASSERT_NE(it, oracle6.entries.end());
  EXPECT_EQ(branching_mult(kLambda0, beta), it->second);

  const auto oracle8 = char_product_oracle(Weight{2, 0, 0}, 8);
  const Weight gamma{3, 0, -3};
  const auto jt = oracle8.entries.find(gamma);
  const std::int64_t expected = jt == oracle8.entries.end() ? 0 : jt->second;
  EXPECT_EQ(branching_mult(Weight{2, 0, 0}, gamma), expected);
}

TEST(BranchingMult, Errors) {
  EXPECT_THROW(branching_mult(kLambda0, Weight{3, 0, 0}), std::invalid_argument);
  EXPECT_THROW(branching_mult(Weight{1, 2, 0}, Weight{2, 0, 0}), std::invalid_argument);
  EXPECT_THROW(branching_mult(Weight{0, 0, 0}, Weight{1, 0, 0}), std::invalid_argument);
  EXPECT_EQ(branching_mult(Weight{2, 1, 0}, Weight{3, -1, -2}), 0);  // not dominant
}

TEST(Decompose, DepthZero) {
  const auto d = decompose(kLambda0, 0);
  ASSERT_EQ(d.entries.size(), 1u);
  EXPECT_EQ(d.entries.begin()->first, (Weight{2, 0, 0}));
  EXPECT_EQ(d.entries.begin()->second, 1);
}

TEST(Decompose, StructuralInvariants) {
  for (std::int64_t n = 1; n <= 5; ++n) {
    for (std::int64_t x = 0; x <= n; ++x) {
      const Weight lambda{n, x, -2};
      const auto d = decompose(lambda, 8);
      ASSERT_TRUE(d.entries.count(lambda + kLambda0));
      EXPECT_EQ(d.entries.at(lambda + kLambda0), 1);
      for (const auto& [beta, m] : d.entries) {
        EXPECT_GT(m, 0);
        EXPECT_TRUE(is_dominant(beta));
        EXPECT_EQ(beta.level, n + 1);
        EXPECT_GT(weight_mult_basic(beta - lambda), 0u);
        EXPECT_GE(beta.delta_depth, lambda.delta_depth - 8);
      }
    }
  }
}

TEST(Decompose, OracleEquivalence) {
  for (std::int64_t n = 1; n <= 3; ++n) {
    for (std::int64_t x = 0; x <= n; ++x) {
      for (std::int64_t d : {0, -1, -4}) {
        const Weight lambda{n, x, d};
        EXPECT_EQ(decompose(lambda, 6).entries, char_product_oracle(lambda, 6).entries) << to_string(lambda);
      }
    }
  }
  EXPECT_EQ(decompose(kLambda0, 4).entries, char_product_oracle(kLambda0, 4).entries);
  EXPECT_EQ(decompose(Weight{2, 2, 0}, 6).entries, char_product_oracle(Weight{2, 2, 0}, 6).entries);
}

TEST(Freudenthal, BasicModuleMatchesPartitions) {
  const auto mult = freudenthal_multiplicities(kLambda0, 9);
  for (std::int64_t k = -4; k <= 4; ++k) {
    for (std::int64_t s = 0; s + k * k <= 9; ++s) {
      const Weight mu{1, 2 * k, -(k * k + s)};
      ASSERT_TRUE(mult.count(mu)) << to_string(mu);
      EXPECT_EQ(static_cast<std::uint64_t>(mult.at(mu)), partition_count(s));
    }
  }
  for (const auto& [mu, m] : mult) EXPECT_EQ(static_cast<std::uint64_t>(m), weight_mult_basic(mu));
}

TEST(Freudenthal, WeylInvariance) {
  const Weight lambda{3, 1, 0};
  const auto mult = freudenthal_multiplicities(lambda, 8);
  for (const auto& [mu, m] : mult) {
    const Weight image = weyl_reflect(1, mu);
    if (mult.count(image)) {
      EXPECT_EQ(mult.at(image), m);
    }
  }
}

TEST(CharProductOracle, DimensionConservationPerDepth) {
  // sum_beta m * dim V(beta)_(depth) = sum over split depths of products, checked with a = 0 series
  const Weight lambda{2, 1, 0};
  const std::int64_t depth = 6;
  const auto d = char_product_oracle(lambda, depth);
  const Weight top = lambda + kLambda0;
  const auto v0 = freudenthal_multiplicities(kLambda0, depth);
  const auto vl = freudenthal_multiplicities(lambda, depth);
  std::vector<std::int64_t> lhs(depth + 1, 0);
  for (const auto& [a, ma] : v0)
    for (const auto& [b, mb] : vl) {
      const std::int64_t dd = -(a.delta_depth + b.delta_depth - top.delta_depth);
      if (dd <= depth) lhs[dd] += ma * mb;
    }
  std::vector<std::int64_t> rhs(depth + 1, 0);
  for (const auto& [beta, m] : d.entries) {
    for (const auto& [mu, mm] : freudenthal_multiplicities(beta, depth)) {
      const std::int64_t dd = -(mu.delta_depth - top.delta_depth);
      if (dd <= depth) rhs[dd] += m * mm;
    }
  }
  EXPECT_EQ(lhs, rhs);
}

TEST(CharacterIdentity, ProductMatchesSumOfComponents) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 8; ++trial) {
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 5)(gen);
    const std::int64_t x = std::uniform_int_distribution<std::int64_t>(0, n)(gen);
    const Weight lambda{n, x, 0};
    for (double y : {0.3, 0.8}) {
      // depths beyond the cut carry less than 1e-6 of the mass at these tilts
      const std::int64_t cut = y < 0.5 ? 110 : 40;
      const auto d = decompose(lambda, cut);
      for (double a : {0.0, 0.7}) {
        const CharPoint pt{a, y};
        const auto lhs = char_eval(kLambda0, pt) * char_eval(lambda, pt);
        std::complex<long double> rhs = 0;
        for (const auto& [beta, m] : d.entries) rhs += static_cast<long double>(m) * char_eval(beta, pt);
        EXPECT_LT(std::abs(lhs - rhs) / std::abs(lhs), 1e-6L) << to_string(lambda) << " y=" << y << " a=" << a;
      }
    }
  }
}

TEST(BranchingSeries, CoefficientsMatchMultiplicities) {
  for (std::int64_t n = 1; n <= 4; ++n) {
    for (std::int64_t x = 0; x <= n; ++x) {
      for (std::int64_t xt = 0; xt <= n + 1; ++xt) {
        const auto coeffs = branching_coefficients(n, x, xt, 10);
        ASSERT_EQ(coeffs.size(), 11u);
        const std::int64_t j = (xt - x) / 2;
        const bool parity = (xt - x) % 2 == 0;
        for (std::int64_t D = 0; D <= 10; ++D) {
          if (!parity) {
            EXPECT_EQ(coeffs[D], 0);
            continue;
          }
          const Weight beta{n + 1, xt, -D};
          if (D < j * j) EXPECT_EQ(coeffs[D], 0);  // above the top of the column
          EXPECT_EQ(coeffs[D], branching_mult({n, x, 0}, beta)) << n << ' ' << x << ' ' << xt << ' ' << D;
        }
      }
    }
  }
}

TEST(BranchingSeries, ThetaMatchesCoefficientSeries) {
  const long double y = 0.9L;
  const auto coeffs = branching_coefficients(3, 1, 3, 200);
  long double series = 0;
  for (std::size_t D = 0; D < coeffs.size(); ++D) series += coeffs[D] * std::exp(-y * static_cast<long double>(D));
  // sum_D m_D q^D = C(q) / prod (1 - q^m)
  const long double c = branching_theta(3, 1, 3, y) * std::exp(log_euler_factor(y));
  EXPECT_LT(std::fabs(series - c) / c, 1e-14L);
  EXPECT_EQ(branching_theta(3, 1, 2, y), 0.0L);  // parity mismatch
  EXPECT_EQ(branching_theta(3, 1, 6, y), 0.0L);  // outside [0, n+1]
}

TEST(Decomposition, CsvLayout) {
  std::ostringstream os;
  write_csv(os, decompose(kLambda0, 2));
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "level,x,delta_depth,multiplicity");
  EXPECT_NE(text.find("2,0,0,1"), std::string::npos);
}
