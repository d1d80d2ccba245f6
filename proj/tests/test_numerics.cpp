#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rank2lu/lab.hpp"

using namespace rank2lu;

namespace {

ComplexMatrix random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index k = 0;
  for (auto x : d) v(k++) = x;
  return v.asDiagonal();
}

}  // namespace

TEST_SUITE_BEGIN("numerics");

TEST_CASE("tolerance config") {
  CHECK_NOTHROW(ToleranceConfig{}.validate());
  ToleranceConfig bad;
  bad.tol_eq = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ToleranceConfig{};
  bad.tol_rank = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  const auto c = ToleranceConfig::from_scale(1e-6);
  CHECK(c.tol_eq == 1e-6);
  CHECK(c.tol_rank == 1e-6);
  CHECK(c.tol_degenerate == doctest::Approx(1e-5));
}

TEST_CASE("hermitian_eig examples") {
  auto e = hermitian_eig(ComplexMatrix::Identity(3, 3));
  CHECK((e.eigenvalues - RealVector::Ones(3)).norm() < 1e-14);

  e = hermitian_eig(diag({2.0, 1.0}));
  CHECK(e.eigenvalues(0) == doctest::Approx(2.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(std::abs(std::abs(e.eigenvectors(0, 0)) - 1.0) < 1e-14);
  CHECK(std::abs(std::abs(e.eigenvectors(1, 1)) - 1.0) < 1e-14);

  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  e = hermitian_eig(x);
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(-1.0));

  ComplexMatrix nh(2, 2);
  nh << 0.0, 1.0, 0.0, 0.0;
  try {
    hermitian_eig(nh);
    FAIL("expected NotHermitian");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotHermitian);
  }
}

TEST_CASE("hermitian_eig reconstruction and gauge") {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 6; ++d) {
    const ComplexMatrix r = random_matrix(d, d, rng);
    const ComplexMatrix h = r + r.adjoint();
    const auto e = hermitian_eig(h);
    const ComplexMatrix rec = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() *
                              e.eigenvectors.adjoint();
    CHECK((rec - h).norm() <= 1e-9 * h.norm());
    CHECK(oracle::unitarity_defect(e.eigenvectors) < 1e-10);
    for (int k = 0; k + 1 < d; ++k) CHECK(e.eigenvalues(k) >= e.eigenvalues(k + 1));
    for (int k = 0; k < d; ++k) {
      Eigen::Index arg = 0;
      e.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
      CHECK(std::abs(e.eigenvectors(arg, k).imag()) < 1e-14);
      CHECK(e.eigenvectors(arg, k).real() > 0.0);
      CHECK((h * e.eigenvectors.col(k) - e.eigenvalues(k) * e.eigenvectors.col(k)).norm() <=
            1e-10 * h.norm());
    }
  }
}

TEST_CASE("svd examples") {
  auto s = svd(diag({3.0, 2.0}));
  CHECK(s.sigma(0) == doctest::Approx(3.0));
  CHECK(s.sigma(1) == doctest::Approx(2.0));
  CHECK((s.u * s.sigma.cast<Complex>().asDiagonal() * s.v.adjoint() - diag({3.0, 2.0})).norm() <
        1e-12);

  s = svd(ComplexMatrix::Zero(2, 3));
  CHECK(s.sigma.size() == 2);
  CHECK(s.sigma.norm() == 0.0);
  CHECK(oracle::unitarity_defect(s.u) < 1e-12);
  CHECK(oracle::unitarity_defect(s.v) < 1e-12);

  s = svd(family_a(0.4));
  CHECK(s.sigma(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.sigma(1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("svd reconstruction on rectangular inputs") {
  std::mt19937_64 rng(12);
  for (auto [r, c] : {std::pair{2, 3}, {3, 4}, {4, 4}, {1, 5}}) {
    const ComplexMatrix m = random_matrix(r, c, rng);
    const auto s = svd(m);
    ComplexMatrix d = ComplexMatrix::Zero(r, c);
    for (int k = 0; k < s.sigma.size(); ++k) d(k, k) = s.sigma(k);
    CHECK((s.u * d * s.v.adjoint() - m).norm() <= 1e-10 * (1.0 + m.norm()));
    CHECK(oracle::unitarity_defect(s.u) < 1e-10);
    CHECK(oracle::unitarity_defect(s.v) < 1e-10);
    for (int k = 0; k + 1 < s.sigma.size(); ++k) CHECK(s.sigma(k) >= s.sigma(k + 1));
  }
}

TEST_CASE("polar examples") {
  std::mt19937_64 rng(13);
  const ComplexMatrix u = haar_unitary(3, Seed{4});
  auto p = polar(u);
  CHECK((p.unitary - u).norm() < 1e-10);
  CHECK((p.positive - ComplexMatrix::Identity(3, 3)).norm() < 1e-10);

  const ComplexMatrix r = random_matrix(3, 3, rng);
  const ComplexMatrix pd = r * r.adjoint() + ComplexMatrix::Identity(3, 3);
  p = polar(pd);
  CHECK((p.unitary - ComplexMatrix::Identity(3, 3)).norm() < 1e-10);
  CHECK((p.positive - pd).norm() < 1e-10 * pd.norm());

  p = polar(diag({2.0, -1.0}));
  CHECK((p.unitary - diag({1.0, -1.0})).norm() < 1e-12);
  CHECK((p.positive - diag({2.0, 1.0})).norm() < 1e-12);

  try {
    polar(diag({1.0, 0.0}));
    FAIL("expected SingularInput");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::SingularInput);
  }
}

TEST_CASE("polar agrees with svd") {
  std::mt19937_64 rng(14);
  for (int d = 1; d <= 5; ++d) {
    const ComplexMatrix x = random_matrix(d, d, rng);
    const auto p = polar(x);
    const auto s = svd(x);
    CHECK((p.unitary - s.u * s.v.adjoint()).norm() < 1e-9);
    CHECK((p.unitary * p.positive - x).norm() <= 1e-10 * x.norm());
    CHECK(oracle::unitarity_defect(p.unitary) < 1e-10);
    CHECK(hermitian_eig(p.positive).eigenvalues.minCoeff() > 0.0);
  }
}

TEST_CASE("rank_tol") {
  CHECK(rank_tol(ComplexMatrix::Identity(4, 4)) == 4);
  CHECK(rank_tol(ComplexMatrix::Zero(3, 2)) == 0);
  CHECK(rank_tol(diag({1.0, 1e-12})) == 1);
  std::mt19937_64 rng(15);
  const ComplexMatrix low = random_matrix(4, 2, rng) * random_matrix(2, 5, rng);
  CHECK(rank_tol(low) == 2);
  CHECK(rank_tol(haar_unitary(4, Seed{1}) * low * haar_unitary(5, Seed{2})) == 2);
  CHECK(rank_tol(low) == static_cast<std::size_t>(oracle::numerical_rank(low)));
}

TEST_CASE("trace_power") {
  CHECK(std::abs(trace_power(ComplexMatrix::Identity(3, 3), 5) - 3.0) < 1e-14);
  const ComplexMatrix h = diag({0.5, -0.5});
  CHECK(std::abs(trace_power(h, 1)) < 1e-15);
  CHECK(std::abs(trace_power(h, 2) - 0.5) < 1e-15);
  ComplexMatrix nil(2, 2);
  nil << 0.0, 1.0, 0.0, 0.0;
  CHECK(std::abs(trace_power(nil, 2)) == 0.0);
  CHECK_THROWS_AS(trace_power(h, 0), Error);

  std::mt19937_64 rng(16);
  for (int d = 2; d <= 4; ++d) {
    const ComplexMatrix m = random_matrix(d, d, rng) / static_cast<double>(d);
    for (int a = 1; a <= 4; ++a)
      CHECK(std::abs(trace_power(m, a) - oracle::eigen_trace_power(m, a)) < 1e-9);
  }
}

TEST_CASE("frobenius_distance and kron") {
  CHECK(frobenius_distance(diag({1.0, 2.0}), diag({1.0, 2.0})) == 0.0);
  CHECK(frobenius_distance(ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2)) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(frobenius_distance(diag({1.0, 0.0}), diag({0.0, 1.0})) == doctest::Approx(std::sqrt(2.0)));
  try {
    frobenius_distance(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 3));
    FAIL("expected ShapeMismatch");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ShapeMismatch);
  }

  CHECK((kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) -
         ComplexMatrix::Identity(4, 4))
            .norm() == 0.0);
  const Complex a(1.5, 0.5), b(-2.0, 1.0);
  CHECK((kron(diag({a, b}), ComplexMatrix::Identity(2, 2)) - diag({a, a, b, b})).norm() == 0.0);
  ComplexMatrix nil(2, 2), two(1, 1), want(2, 2);
  nil << 0.0, 1.0, 0.0, 0.0;
  two << 2.0;
  want << 0.0, 2.0, 0.0, 0.0;
  CHECK((kron(nil, two) - want).norm() == 0.0);

  std::mt19937_64 rng(17);
  const ComplexMatrix x = random_matrix(2, 3, rng), y = random_matrix(3, 2, rng);
  CHECK((kron(x, y) - oracle::kron(x, y)).norm() < 1e-15);
}

TEST_CASE("expi_hermitian is unitary and matches the series") {
  std::mt19937_64 rng(18);
  const ComplexMatrix r = random_matrix(3, 3, rng) * 0.1;
  const ComplexMatrix h = r + r.adjoint();
  const ComplexMatrix u = expi_hermitian(h);
  CHECK(unitarity_defect(u) < 1e-12);
  ComplexMatrix series = ComplexMatrix::Identity(3, 3), term = series;
  for (int k = 1; k < 30; ++k) {
    term = term * (Complex(0.0, 1.0) * h) / static_cast<double>(k);
    series += term;
  }
  CHECK((u - series).norm() < 1e-12);
}

TEST_CASE("non-finite input") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    svd(m);
    FAIL("expected NonFinite");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NonFinite);
  }
}

TEST_SUITE_END();
