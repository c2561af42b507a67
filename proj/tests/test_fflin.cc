// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "lncw/fflin.h"
#include "lncw/gf2.h"
#include "oracles.h"

namespace lncw {
namespace {

FqMatrix M(uint32_t p, std::vector<std::vector<int64_t>> rows) {
  return FqMatrix::FromRows(Fq(p), rows);
}

TEST(Fq, RejectsNonPrimeAndOutOfRange) {
  EXPECT_THROW(Fq(1), std::invalid_argument);
  EXPECT_THROW(Fq(4), std::invalid_argument);
  EXPECT_THROW(Fq(65537), std::invalid_argument);
  EXPECT_NO_THROW(Fq(65521));
}

TEST(Fq, FieldOps) {
  const Fq f2(2), f5(5), f7(7);
  EXPECT_EQ(f2.Add(1, 1), 0u);
  EXPECT_EQ(f2.Mul(1, 1), 1u);
  EXPECT_EQ(f2.Inv(1), 1u);
  EXPECT_EQ(f5.Add(2, 3), 0u);
  EXPECT_EQ(f5.Mul(2, 3), 1u);
  EXPECT_EQ(f5.Inv(2), 3u);
  EXPECT_EQ(f7.Add(0, 4), 4u);
  EXPECT_EQ(f7.Mul(0, 4), 0u);
  EXPECT_THROW(f7.Inv(0), std::domain_error);
  EXPECT_EQ(f7.FromInt(-1), 6u);
}

TEST(Fq, InverseOfEveryUnit) {
  for (uint32_t p : {2u, 3u, 5u, 7u, 65521u}) {
    const Fq f(p);
    for (uint32_t a = 1; a < std::min(p, 2000u); ++a) EXPECT_EQ(f.Mul(a, f.Inv(a)), 1u);
  }
}

TEST(Rref, Examples) {
  const RrefResult id = Rref(FqMatrix::Identity(Fq(2), 2));
  EXPECT_EQ(id.reduced, FqMatrix::Identity(Fq(2), 2));
  EXPECT_EQ(id.pivots, (std::vector<size_t>{0, 1}));
  const RrefResult eq = Rref(M(2, {{1, 1}, {1, 1}}));
  EXPECT_EQ(eq.reduced, M(2, {{1, 1}, {0, 0}}));
  EXPECT_EQ(eq.rank(), 1u);
  const RrefResult f5 = Rref(M(5, {{1, 2}, {2, 4}}));
  EXPECT_EQ(f5.reduced, M(5, {{1, 2}, {0, 0}}));
  EXPECT_EQ(f5.rank(), 1u);
}

TEST(Rref, EmptyShapes) {
  const Fq f(3);
  EXPECT_EQ(Rank(FqMatrix(f, 0, 4)), 0u);
  EXPECT_EQ(Rank(FqMatrix(f, 3, 0)), 0u);
}

TEST(RowspaceContains, Examples) {
  EXPECT_TRUE(RowspaceContains(FqMatrix::Identity(Fq(2), 3), M(2, {{1, 0, 1}, {0, 1, 1}})));
  EXPECT_FALSE(RowspaceContains(M(2, {{1, 1, 0}}), M(2, {{1, 0, 0}})));
  EXPECT_TRUE(RowspaceContains(M(3, {{1, 1}, {0, 1}}), M(3, {{1, 0}})));
  EXPECT_THROW(RowspaceContains(M(2, {{1, 1}}), M(2, {{1, 1, 1}})), std::invalid_argument);
}

TEST(SolveLeft, Examples) {
  const FqMatrix b = M(3, {{2, 1, 0}, {1, 1, 1}});
  EXPECT_EQ(*SolveLeft(FqMatrix::Identity(Fq(3), 3), b), b);
  EXPECT_FALSE(SolveLeft(M(2, {{1, 1, 0}}), M(2, {{1, 0, 0}})).has_value());
  const auto x = SolveLeft(M(2, {{1, 0}, {1, 1}}), M(2, {{0, 1}}));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x * M(2, {{1, 0}, {1, 1}}), M(2, {{0, 1}}));
  EXPECT_THROW(SolveLeft(M(2, {{1, 1}}), M(2, {{1}})), std::invalid_argument);
}

TEST(EnumerateRowspaces, Examples) {
  const auto lines = EnumerateRowspaces(2, 1, Fq(2));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], M(2, {{0, 1}}));
  EXPECT_EQ(lines[1], M(2, {{1, 0}}));
  EXPECT_EQ(lines[2], M(2, {{1, 1}}));
  EXPECT_EQ(EnumerateRowspaces(4, 2, Fq(2)).size(), oracle::GaussianBinomialFormula(4, 2, 2));
  const auto zero = EnumerateRowspaces(3, 0, Fq(5));
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].rows(), 0u);
  EXPECT_EQ(zero[0].cols(), 3u);
}

TEST(EnumerateRowspaces, BudgetCarriesRequiredCount) {
  try {
    EnumerateRowspaces(4, 2, Fq(2), 10);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required(), 35u);
  }
}

TEST(EnumerateRowspaces, MatchesSpanClosureCount) {
  for (int q : {2, 3}) {
    for (int n = 1; n <= 3; ++n) {
      for (int k = 0; k <= std::min(n, 2); ++k) {
        EXPECT_EQ(EnumerateRowspaces(n, k, Fq(q)).size(), oracle::CountSubspacesBySpans(n, k, q))
            << n << " " << k << " " << q;
      }
    }
  }
}

TEST(GaussianBinomial, MatchesFormula) {
  for (uint32_t q : {2u, 3u, 5u}) {
    for (int n = 0; n <= 8; ++n) {
      for (int k = 0; k <= n; ++k) EXPECT_EQ(GaussianBinomial(n, k, q), oracle::GaussianBinomialFormula(n, k, q));
    }
  }
}

class RandomMatrices : public ::testing::TestWithParam<uint32_t> {};

TEST_P(RandomMatrices, Properties) {
  const Fq f(GetParam());
  std::mt19937_64 rng(GetParam() * 7919);
  for (int it = 0; it < 300; ++it) {
    const size_t rows = rng() % 6, cols = 1 + rng() % 6;
    const FqMatrix a = oracle::RandomMatrix(f, rows, cols, rng);
    const RrefResult r = Rref(a);
    EXPECT_EQ(Rref(r.reduced).reduced, r.reduced);
    EXPECT_EQ(Rank(a), Rank(a.Transpose()));
    EXPECT_EQ(static_cast<int>(Rank(a)), oracle::SpanRank(a));
    EXPECT_TRUE(RowspaceContains(r.reduced, a));
    EXPECT_TRUE(RowspaceContains(a, r.reduced));
    FqMatrix b = oracle::RandomMatrix(f, 1 + rng() % 3, cols, rng);
    if (it % 2 == 0 && rows > 0) b = oracle::RandomMatrix(f, b.rows(), rows, rng) * a;
    const bool in = RowspaceContains(a, b);
    EXPECT_EQ(in, oracle::SpanContains(a, b));
    const auto x = SolveLeft(a, b);
    EXPECT_EQ(in, x.has_value());
    if (x) EXPECT_EQ(*x * a, b);
  }
}

INSTANTIATE_TEST_SUITE_P(Fields, RandomMatrices, ::testing::Values(2u, 3u, 5u));

TEST(MatrixJson, RoundTripAndValidation) {
  const FqMatrix a = M(5, {{1, 2, 3}, {4, 0, 1}});
  const auto j = MatrixToJson(a);
  EXPECT_EQ(j.at("p"), 5);
  EXPECT_EQ(j.at("rows"), 2);
  EXPECT_EQ(j.at("cols"), 3);
  EXPECT_EQ(MatrixFromJson(j), a);
  auto bad = j;
  bad["data"][0] = 7;
  EXPECT_THROW(MatrixFromJson(bad), std::invalid_argument);
  bad = j;
  bad["data"].erase(0);
  EXPECT_THROW(MatrixFromJson(bad), std::invalid_argument);
}

TEST(Gf2Basis, AgreesWithGenericRank) {
  std::mt19937_64 rng(11);
  const Fq f(2);
  for (int it = 0; it < 200; ++it) {
    const FqMatrix a = oracle::RandomMatrix(f, rng() % 10, 1 + rng() % 40, rng);
    Gf2Basis basis;
    for (uint64_t v : PackRows(a)) basis.Insert(v);
    EXPECT_EQ(static_cast<size_t>(basis.dim()), Rank(a));
  }
}

}  // namespace
}  // namespace lncw
