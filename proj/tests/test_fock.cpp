#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace mvdyn;

namespace {

double diff(const FockOperator& a, const FockOperator& b) { return (a - b).frobenius_norm(); }

}  // namespace

TEST(FockRep, ClassicalTruncatedShift) {
  const BlockAlgebra alg({1});
  const MultivariableSystem s(alg, {StarIsomorphism::identity(alg)});
  const FockRep rep(s, 2);
  ASSERT_EQ(rep.dimension(), 3u);
  const Complex z(0.3, -1.2);
  const AlgebraElement a(alg, {Matrix::Constant(1, 1, z)});
  EXPECT_LE((rep.pi(a).assemble() - z * Matrix::Identity(3, 3)).norm(), 1e-15);
  Matrix shift = Matrix::Zero(3, 3);
  shift(1, 0) = 1.0;
  shift(2, 1) = 1.0;
  EXPECT_EQ(rep.generator(0).assemble(), shift);
}

TEST(FockRep, DimensionFormula) {
  Rng rng(81);
  const FockRep rep(random_system(rng, BlockAlgebra({2}), 2), 1);
  EXPECT_EQ(rep.dimension(), 12u);
  EXPECT_EQ(FockRep(random_system(rng, BlockAlgebra({2, 1}), 3), 2).dimension(), (1u + 3u + 9u) * 5u);
}

TEST(FockRep, DimensionCap) {
  Rng rng(82);
  try {
    FockRep(random_system(rng, BlockAlgebra({3}), 3), 4, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_budget_exceeded);
  }
}

TEST(FockRep, CovarianceAndIsometries) {
  Rng rng(83);
  for (const auto& sizes : {std::vector<int>{1}, {2}, {2, 1}, {1, 1, 1}})
    for (int n = 1; n <= 3; ++n) {
      const FockRep rep(random_system(rng, BlockAlgebra(sizes), n), 2);
      EXPECT_LE(covariance_residual(rep), 1e-12);
      EXPECT_LE(isometry_residual(rep), 1e-12);
    }
}

TEST(FockRep, PiIsAStarHomomorphism) {
  Rng rng(84);
  const BlockAlgebra alg({2, 1});
  const FockRep rep(random_system(rng, alg, 2), 2);
  const auto a = random_element(rng, alg);
  const auto b = random_element(rng, alg);
  EXPECT_LE(diff(rep.pi(a * b), rep.pi(a) * rep.pi(b)), 1e-12);
  EXPECT_LE(diff(rep.pi(a.adjoint()), rep.pi(a).adjoint()), 1e-12);
}

TEST(FockRep, GeneratorTimesElementIsIsometricOnA) {
  Rng rng(85);
  const BlockAlgebra alg({2, 1});
  const FockRep rep(random_system(rng, alg, 2), 2);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_element(rng, alg);
    for (int i = 0; i < 2; ++i) {
      const FockOperator x = rep.generator(i) * rep.pi(a);
      EXPECT_GE(x.norm(), op_norm(a) * (1.0 - 1e-12));
      EXPECT_NEAR(x.norm(), spectral_norm(x.assemble()), 1e-10);
    }
  }
}

TEST(GaugeExpectation, DegreeZeroElement) {
  Rng rng(86);
  const BlockAlgebra alg({2});
  const FockRep rep(random_system(rng, alg, 2), 2);
  const auto x = rep.pi(random_element(rng, alg));
  EXPECT_LE(diff(gauge_expectation(x, 0, rep), x), 1e-12);
}

TEST(GaugeExpectation, RotationScalesGenerators) {
  Rng rng(87);
  const FockRep rep(random_system(rng, BlockAlgebra({2}), 2), 3);
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 7.0);
  for (int i = 0; i < 2; ++i) EXPECT_LE(diff(gauge_rotate(rep.generator(i), 1), omega * rep.generator(i)), 1e-14);
}

TEST(GaugeExpectation, ExtractsGradedComponents) {
  Rng rng(88);
  const BlockAlgebra alg({2, 1});
  for (int level = 1; level <= 3; ++level) {
    const FockRep rep(random_system(rng, alg, 2), level);
    // A combination of monomials s_v pi(a) s_w^* of all degrees in [-L, L].
    FockOperator t = rep.zero();
    for (int k = 0; k < 12; ++k) {
      std::uniform_int_distribution<int> len(0, level), gen(0, 1);
      FockOperator m = rep.pi(random_element(rng, alg));
      const int left = len(rng), right = len(rng);
      for (int j = 0; j < left; ++j) m = rep.generator(gen(rng)) * m;
      for (int j = 0; j < right; ++j) m = m * rep.generator(gen(rng)).adjoint();
      t = t + m;
    }
    FockOperator sum = rep.zero();
    for (int d = -level; d <= level; ++d) {
      const FockOperator e = gauge_expectation(t, d, rep);
      EXPECT_LE(diff(e, oracle::graded_part(t, d)), 1e-12 * std::max(1.0, t.frobenius_norm()));
      sum = sum + e;
    }
    EXPECT_LE(diff(sum, t), 1e-12 * std::max(1.0, t.frobenius_norm()));
  }
}

TEST(GaugeExpectation, IdempotentOnRandomOperators) {
  Rng rng(89);
  const FockRep rep(random_system(rng, BlockAlgebra({2}), 2), 2);
  for (int t = 0; t < 5; ++t) {
    const auto x = random_fock_operator(rng, rep, 20);
    const auto e = gauge_expectation(x, 0, rep);
    EXPECT_LE(diff(gauge_expectation(e, 0, rep), e), 1e-12 * x.frobenius_norm());
  }
}

TEST(GaugeExpectation, DegreeOutOfRangeThrows) {
  Rng rng(90);
  const FockRep rep(random_system(rng, BlockAlgebra({1}), 1), 2);
  EXPECT_THROW(gauge_expectation(rep.identity(), 3, rep), Error);
}

TEST(CoefficientMap, SelectsMatchingGenerator) {
  Rng rng(91);
  const BlockAlgebra alg({2, 1});
  const FockRep rep(random_system(rng, alg, 3), 2);
  for (const auto& a : matrix_units(alg))
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const FockOperator x = rep.generator(j) * rep.pi(a);
        const FockOperator expected = i == j ? x : rep.zero();
        EXPECT_LE(diff(coefficient_map(x, i, rep).compress_right(1), expected.compress_right(1)), 1e-12);
      }
}

TEST(CoefficientMap, IdempotentAndMutuallyAnnihilating) {
  Rng rng(92);
  const FockRep rep(random_system(rng, BlockAlgebra({2}), 2), 2);
  const auto x = random_fock_operator(rng, rep, 30);
  const double scale = x.frobenius_norm();
  for (int i = 0; i < 2; ++i) {
    const auto f = coefficient_map(x, i, rep);
    EXPECT_LE(diff(coefficient_map(f, i, rep), f), 1e-12 * scale);
    EXPECT_LE(coefficient_map(f, 1 - i, rep).frobenius_norm(), 1e-12 * scale);
    EXPECT_LE(gauge_expectation(f, 0, rep).frobenius_norm(), 1e-12 * scale);
  }
}

TEST(InducedImages, IdentityCertificateGivesGenerators) {
  Rng rng(93);
  const BlockAlgebra alg({2, 1});
  const auto s = random_system(rng, alg, 2);
  const FockRep rep(s, 2);
  const UnitaryEquivalenceCertificate cert{StarIsomorphism::identity(alg), ElementMatrix::identity(alg, 2)};
  const auto images = induced_iso_images(cert, s, rep);
  for (int j = 0; j < 2; ++j) EXPECT_LE(diff(images.images[j], rep.generator(j)), 1e-14);
  EXPECT_LE(images.covariance_residual, 1e-12);
}

TEST(InducedImages, OuterCertificateIsPermutedTwist) {
  Rng rng(94);
  const BlockAlgebra alg({2});
  const auto a = random_system(rng, alg, 3);
  const auto b = random_unitary_equivalent(rng, a).system;
  const auto outer = *decide_outer_conjugacy(a, b).certificate;
  const FockRep fb(b, 2);
  const auto images = induced_iso_images(to_unitary_equivalence(outer, a, b), a, fb);
  EXPECT_LE(images.covariance_residual, 1e-9);
  for (int i = 0; i < 3; ++i) {
    const int j = outer.permutation[i];
    EXPECT_LE(diff(images.images[j], fb.generator(i) * fb.pi(outer.unitaries[i])), 1e-12);
  }
}

TEST(InducedImages, RandomCertificateIsCovariant) {
  Rng rng(95);
  const BlockAlgebra alg({2});
  const auto a = random_system_with_repeats(rng, alg, 2, 1);
  const auto pair = random_unitary_equivalent(rng, a);
  const FockRep fb(pair.system, 2);
  EXPECT_LE(induced_iso_images(pair.certificate, a, fb).covariance_residual, 1e-9);
}

TEST(InducedImages, UnverifiedCertificateThrows) {
  Rng rng(96);
  const BlockAlgebra alg({2});
  const auto a = random_system(rng, alg, 2);
  const auto b = random_system(rng, alg, 2);
  const FockRep fb(b, 1);
  const UnitaryEquivalenceCertificate cert{StarIsomorphism::identity(alg), ElementMatrix::identity(alg, 2)};
  try {
    induced_iso_images(cert, a, fb);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unverified_certificate);
  }
}

TEST(AssociatedMatrix, GeneratorsGiveIdentity) {
  Rng rng(97);
  const BlockAlgebra alg({2, 1});
  const FockRep rep(random_system(rng, alg, 3), 2);
  std::vector<FockOperator> images;
  for (int j = 0; j < 3; ++j) images.push_back(rep.generator(j));
  const auto am = extract_associated_matrix(images, rep);
  EXPECT_LE((am.entries - ElementMatrix::identity(alg, 3)).norm(), 1e-14);
  for (const auto& b0 : am.constant_terms) EXPECT_EQ(op_norm(b0), 0.0);
  EXPECT_LE(am.remainder_norm, 1e-14);
}

TEST(AssociatedMatrix, PlantAndRecover) {
  Rng rng(98);
  for (const auto& sizes : {std::vector<int>{2}, {2, 1}, {1, 1, 1}}) {
    const BlockAlgebra alg(sizes);
    const auto a = random_system_with_repeats(rng, alg, 3, 2);
    const auto pair = random_unitary_equivalent(rng, a);
    const FockRep fb(pair.system, 2);
    const auto images = induced_iso_images(pair.certificate, a, fb);
    const auto am = extract_associated_matrix(images.images, fb);
    EXPECT_LE((am.entries - pair.certificate.matrix).norm(), 1e-10);
    EXPECT_LE(element_intertwining_residual(am.entries, pair.system.maps(), transported_maps(a, pair.certificate.gamma)),
              1e-9);
    EXPECT_TRUE(right_invertible_test(am.entries).right_invertible);
    EXPECT_LE(am.remainder_norm, 1e-10);
  }
}

TEST(AssociatedMatrix, ConstantTermIsReported) {
  Rng rng(99);
  const BlockAlgebra alg({2});
  const FockRep rep(random_system(rng, alg, 1), 2);
  const auto c = random_element(rng, alg);
  const FockOperator image = rep.generator(0) + rep.pi(c);
  const auto am = extract_associated_matrix(std::vector<FockOperator>{image}, rep);
  EXPECT_LE(op_norm(am.constant_terms[0] - c), 1e-12);
  EXPECT_LE(op_norm(am.entries.at(0, 0) - AlgebraElement::identity(alg)), 1e-12);
}

TEST(FockOperator, NormRoutesAgree) {
  Rng rng(100);
  const FockRep rep(random_system(rng, BlockAlgebra({2}), 2), 2);
  const auto x = random_fock_operator(rng, rep, 15);
  const double dense = spectral_norm(x.assemble());
  EXPECT_NEAR(x.norm(), dense, 1e-10 * dense);
  EXPECT_NEAR(x.norm(0), dense, 1e-6 * dense);  // power iteration
}

TEST(ValidateFock, FullReportPasses) {
  Rng rng(101);
  const BlockAlgebra alg({2, 1});
  const auto a = random_system_with_repeats(rng, alg, 2, 1);
  const auto pair = random_unitary_equivalent(rng, a);
  const FockRep fb(pair.system, 2);
  const auto v = validate_fock(fb, rng, 2, pair.certificate, &a);
  EXPECT_TRUE(v.passed);
  EXPECT_TRUE(v.has_certificate);
  EXPECT_TRUE(v.associated_right_invertible);
}
