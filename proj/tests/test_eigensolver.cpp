#include <algorithm>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "tsg/eigensolver.hpp"
#include "tsg/linearization.hpp"
#include "tsg/spectrum.hpp"

#ifdef TSG_HAVE_EIGEN
#include <Eigen/Eigenvalues>
#endif

using namespace tsg;
using C = std::complex<double>;

namespace {

Matrix<double> from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix<double> m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

Matrix<double> random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix<double> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = g(rng);
  return m;
}

}  // namespace

TEST(Eigenvalues, Diagonal) {
  const auto ev = eigenvalues(from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_NEAR(std::abs(ev[0] - C(1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ev[1] - C(2)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ev[2] - C(3)), 0.0, 1e-14);
}

TEST(Eigenvalues, Rotation) {
  const auto ev = eigenvalues(from_rows({{0, 1}, {-1, 0}}));
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(std::abs(ev[0] - C(0, -1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ev[1] - C(0, 1)), 0.0, 1e-14);
}

TEST(Eigenvalues, Companion) {
  // lambda^3 - 6 lambda^2 + 11 lambda - 6 = (l-1)(l-2)(l-3)
  const auto ev = eigenvalues(from_rows({{6, -11, 6}, {1, 0, 0}, {0, 1, 0}}));
  ASSERT_EQ(ev.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(ev[k] - C(k + 1)), 0.0, 1e-12);
}

TEST(Eigenvalues, ExtendedPrecisionAgrees) {
  std::mt19937_64 rng(21);
  const auto a = random_matrix(12, rng);
  const auto ev = eigenvalues(a);
  const auto evq = eigenvalues(a.cast<Extended>());
  EXPECT_LT(bottleneck_distance(ev, evq), 1e-10);
}

TEST(Eigenvalues, Errors) {
  EXPECT_THROW(eigenvalues(Matrix<double>(2, 3)), DomainError);
  auto a = Matrix<double>::identity(3);
  a(1, 2) = std::nan("");
  EXPECT_THROW(eigenvalues(a), NumericalError);
  EXPECT_TRUE(eigenvalues(Matrix<double>(0, 0)).empty());
}

TEST(Eigenvalues, CanonicalOrder) {
  std::mt19937_64 rng(2);
  const auto ev = eigenvalues(random_matrix(15, rng));
  for (std::size_t i = 1; i < ev.size(); ++i) {
    ASSERT_TRUE(ev[i - 1].real() < ev[i].real() ||
                (ev[i - 1].real() == ev[i].real() && ev[i - 1].imag() <= ev[i].imag()));
  }
}

TEST(Eigenvalues, ResidualProbes) {
  std::mt19937_64 rng(13);
  for (std::size_t n : {1u, 2u, 5u, 10u, 24u, 40u}) {
    const auto a = random_matrix(n, rng);
    const double scale = norm_inf(a);
    for (const auto& lambda : eigenvalues(a)) {
      ASSERT_LE(eigenpair_residual(a, lambda), 1e-8 * scale) << "n=" << n << " lambda=" << lambda;
    }
  }
}

TEST(Eigenvalues, TraceAndDeterminant) {
  std::mt19937_64 rng(17);
  const auto a = random_matrix(8, rng);
  const auto ev = eigenvalues(a);
  C sum = 0;
  for (const auto& z : ev) sum += z;
  double trace = 0;
  for (std::size_t i = 0; i < 8; ++i) trace += a(i, i);
  EXPECT_NEAR(sum.real(), trace, 1e-10);
  EXPECT_NEAR(sum.imag(), 0.0, 1e-10);
}

#ifdef TSG_HAVE_EIGEN
TEST(Eigenvalues, MatchesEigenOracle) {
  std::mt19937_64 rng(29);
  for (std::size_t n : {3u, 7u, 16u, 20u, 33u}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto a = random_matrix(n, rng);
      Eigen::MatrixXd e(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e(i, j) = a(i, j);
      Eigen::EigenSolver<Eigen::MatrixXd> es(e, false);
      ASSERT_EQ(es.info(), Eigen::Success);
      Spectrum oracle(es.eigenvalues().data(), es.eigenvalues().data() + n);
      EXPECT_LT(bottleneck_distance(eigenvalues(a), oracle), 1e-9 * std::max(1.0, norm_inf(a)));
    }
  }
}

TEST(Eigenvalues, PlatoonJacobianMatchesEigenOracle) {
  // Double-precision Jacobian of a 3-vehicle platoon; compare with Eigen on
  // the same matrix so both see identical input.
  const auto rep = linearize(3, GuidanceParams{}, 50.0);
  const auto& a = rep.A_fd;
  const std::size_t n = a.rows();
  Eigen::MatrixXd e(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e(i, j) = a(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(e, false);
  Spectrum oracle(es.eigenvalues().data(), es.eigenvalues().data() + n);
  // Repeated defective eigenvalues (Jordan chains of length n) split by
  // about eps^(1/n) in double, differently in each solver.
  EXPECT_LT(bottleneck_distance(eigenvalues(a), oracle), 1e-4);
}
#endif

TEST(Spectrum, MatchingAndBottleneck) {
  const Spectrum a{C(1, 0), C(2, 1), C(2, -1)};
  const Spectrum b{C(2, -1), C(1.0005, 0), C(2, 1)};
  EXPECT_TRUE(match_spectra(a, b, 1e-3).matched);
  const auto m = match_spectra(a, b, 1e-4);
  EXPECT_FALSE(m.matched);
  ASSERT_EQ(m.unmatched.size(), 1u);
  EXPECT_EQ(m.unmatched[0], C(1, 0));
  EXPECT_NEAR(bottleneck_distance(a, b), 5e-4, 1e-15);
  // Multiplicity matters.
  EXPECT_FALSE(match_spectra(Spectrum{C(1), C(1)}, Spectrum{C(1), C(2)}, 0.1).matched);
}

TEST(Spectrum, Clusters) {
  const auto cl = cluster_spectrum({C(1), C(1 + 1e-9), C(-2, 1), C(1 - 1e-9), C(-2, 1)}, 1e-6);
  ASSERT_EQ(cl.size(), 2u);
  std::size_t total = 0;
  for (const auto& c : cl) total += c.multiplicity;
  EXPECT_EQ(total, 5u);
}
