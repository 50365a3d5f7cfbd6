#include <gtest/gtest.h>

#include "cachedof/prime_field.hpp"
#include "cachedof/rng.hpp"

using namespace cachedof;

TEST(Primality, KnownValues) {
  EXPECT_TRUE(is_prime(7));
  EXPECT_TRUE(is_prime(kMersenne61));
  EXPECT_TRUE(is_prime(kMersenne31));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(kMersenne61 - 2));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(PrimeField, RejectsComposites) { EXPECT_THROW(PrimeField(15), out_of_range); }

TEST(PrimeField, Arithmetic) {
  PrimeField f(7);
  EXPECT_EQ(f.add(5, 4), 2u);
  EXPECT_EQ(f.sub(2, 5), 4u);
  EXPECT_EQ(f.neg(3), 4u);
  EXPECT_EQ(f.mul(3, 5), 1u);
  EXPECT_EQ(f.inv(3), 5u);
  EXPECT_EQ(f.reduce(-1), 6u);
  EXPECT_THROW(f.inv(0), domain_error);
}

TEST(PrimeField, InverseOverMersenne61) {
  PrimeField f;
  KeyedRng rng(1, "test");
  for (int i = 0; i < 100; ++i) {
    Element a = f.random_nonzero(rng);
    EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
  }
}

TEST(KeyedRng, DeterministicAndLabelSeparated) {
  KeyedRng a(5, "x", {1, 2}), b(5, "x", {1, 2}), c(5, "y", {1, 2}), d(5, "x", {2, 1});
  auto va = a(), vb = b(), vc = c(), vd = d();
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
  EXPECT_NE(va, vd);
  KeyedRng e(5, "x");
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(e.uniform(7), 7u);
    EXPECT_GE(e.uniform_nonzero(7), 1u);
  }
}

TEST(Rank, IdentityZeroAndRandom) {
  PrimeField f;
  EXPECT_EQ(rank(f, FieldMatrix::identity(3)), 3u);
  EXPECT_EQ(rank(f, FieldMatrix(2, 4)), 0u);
  KeyedRng rng(42, "rank");
  FieldMatrix m = FieldMatrix::random(f, 4, 4, rng);
  EXPECT_EQ(rank(f, m), 4u);
  const auto first = m.row(0);
  const FieldVector r0(first.begin(), first.end());
  FieldMatrix dup = FieldMatrix::from_rows({r0, r0}, 4);
  EXPECT_EQ(rank(f, dup), 1u);
}

TEST(Solve, IdentityDiagonalAndRoundTrip) {
  PrimeField f7(7);
  FieldVector b{3, 5};
  EXPECT_EQ(solve(f7, FieldMatrix::identity(2), b), b);
  FieldMatrix d(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 3;
  EXPECT_EQ(solve(f7, d, FieldVector{1, 1}), (FieldVector{4, 5}));

  PrimeField f;
  KeyedRng rng(9, "solve");
  FieldMatrix a = FieldMatrix::random(f, 5, 5, rng);
  FieldVector x;
  for (int i = 0; i < 5; ++i) x.push_back(f.random(rng));
  EXPECT_EQ(solve(f, a, multiply(f, a, x)), x);
}

TEST(Solve, SingularThrows) {
  PrimeField f(7);
  FieldMatrix a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 2;
  a(1, 1) = 4;
  EXPECT_THROW(solve(f, a, FieldVector{1, 1}), singular_matrix);
  EXPECT_FALSE(is_invertible(f, a));
}

TEST(Nullspace, SingleRowEmptyAndGeneric) {
  PrimeField f7(7);
  KeyedRng rng(3, "null");
  FieldMatrix one = FieldMatrix::from_rows({{1, 0}}, 2);
  for (int i = 0; i < 20; ++i) {
    FieldVector v = nullspace_sample(f7, one, rng);
    EXPECT_EQ(v[0], 0u);
    EXPECT_NE(v[1], 0u);
  }
  PrimeField f;
  FieldVector any = nullspace_sample(f, FieldMatrix(0, 3), rng);
  ASSERT_EQ(any.size(), 3u);
  EXPECT_TRUE(any[0] || any[1] || any[2]);

  FieldMatrix rows = FieldMatrix::random(f, 2, 4, rng);
  FieldVector v = nullspace_sample(f, rows, rng);
  EXPECT_EQ(multiply(f, rows, v), (FieldVector{0, 0}));
  EXPECT_TRUE(v[0] || v[1] || v[2] || v[3]);
}

TEST(Nullspace, TrivialThrows) {
  PrimeField f;
  KeyedRng rng(3, "null");
  EXPECT_THROW(nullspace_sample(f, FieldMatrix::identity(3), rng), full_row_rank_exhausted);
}
