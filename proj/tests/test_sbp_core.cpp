#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "csbp/errors.hpp"
#include "csbp/sbp_core.hpp"
#include "doctest.h"

using namespace csbp;

namespace {

double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

DenseMatrix dense_global_q(const GlobalOperator& g) { return DenseMatrix(g.q()); }

}  // namespace

TEST_CASE("p=1 reference operator matches hand values") {
  const auto ref = build_reference_element(1);
  CHECK(ref.nodes(0) == -1.0);
  CHECK(ref.nodes(1) == 1.0);
  CHECK(ref.weights(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ref.weights(1) == doctest::Approx(1.0).epsilon(1e-15));
  DenseMatrix q(2, 2);
  q << -0.5, 0.5, -0.5, 0.5;
  CHECK(max_abs(ref.q - q) <= 1e-15);
}

TEST_CASE("p=2 reference operator matches hand values") {
  const auto ref = build_reference_element(2);
  CHECK(std::abs(ref.nodes(1)) <= 1e-15);
  CHECK(ref.weights(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(ref.weights(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  DenseMatrix q(3, 3);
  q << -0.5, 2.0 / 3.0, -1.0 / 6.0,
       -2.0 / 3.0, 0.0, 2.0 / 3.0,
       1.0 / 6.0, -2.0 / 3.0, 0.5;
  CHECK(max_abs(ref.q - q) <= 1e-14);
  DenseMatrix d(3, 3);
  d << -1.5, 2.0, -0.5,
       -0.5, 0.0, 0.5,
       0.5, -2.0, 1.5;
  CHECK(max_abs(ref.d - d) <= 1e-14);
}

TEST_CASE("LGL nodes and weights for p=3 and p=4") {
  const auto r3 = build_reference_element(3);
  CHECK(r3.nodes(1) == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-14));
  CHECK(r3.nodes(2) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
  CHECK(r3.weights(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(r3.weights(1) == doctest::Approx(5.0 / 6.0).epsilon(1e-14));

  const auto r4 = build_reference_element(4);
  CHECK(std::abs(r4.nodes(2)) <= 1e-15);
  CHECK(r4.nodes(3) == doctest::Approx(std::sqrt(3.0 / 7.0)).epsilon(1e-14));
  CHECK(r4.weights(0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(r4.weights(1) == doctest::Approx(49.0 / 90.0).epsilon(1e-14));
  CHECK(r4.weights(2) == doctest::Approx(32.0 / 45.0).epsilon(1e-14));
}

TEST_CASE("reference SBP property and polynomial exactness, p = 1..6") {
  for (int p = kMinDegree; p <= kMaxDegree; ++p) {
    CAPTURE(p);
    const auto ref = build_reference_element(p);
    CHECK(ref.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    const DenseMatrix e = ref.e.asDiagonal();
    CHECK(max_abs(ref.q + ref.q.transpose() - e) <= 1e-13 * max_abs(ref.q));
    for (int j = 1; j < ref.num_nodes(); ++j) CHECK(ref.nodes(j) > ref.nodes(j - 1));
    for (int k = 0; k <= p; ++k) {
      const DenseVector v = ref.nodes.array().pow(k);
      const DenseVector dv =
          k == 0 ? DenseVector::Zero(ref.num_nodes()) : DenseVector(k * ref.nodes.array().pow(k - 1));
      CHECK((ref.d * v - dv).cwiseAbs().maxCoeff() <= 1e-11);
    }
  }
}

TEST_CASE("unsupported degree and small mesh are rejected") {
  CHECK_THROWS_AS(build_reference_element(0), UnsupportedDegree);
  CHECK_THROWS_AS(build_reference_element(7), UnsupportedDegree);
  CHECK_THROWS_AS(PeriodicMesh(0.0, 1.0, 1, 3), MeshTooSmall);
}

TEST_CASE("p=1, four elements: H = h I") {
  const auto g = assemble_global(PeriodicMesh(0.0, 1.0, 4, 2), build_reference_element(1));
  REQUIRE(g.num_nodes() == 4);
  for (int i = 0; i < 4; ++i) CHECK(g.h_diag()(i) == doctest::Approx(2.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("global operator is skew, sums H to the domain length, and kills constants") {
  for (int p : {1, 2, 3, 4}) {
    for (int ne : {2, 4, 8, 16, 32, 64, 128}) {
      CAPTURE(p);
      CAPTURE(ne);
      const auto g = assemble_global(PeriodicMesh(-1.0, 2.0, ne, p + 1), build_reference_element(p));
      const DenseMatrix q = dense_global_q(g);
      CHECK(max_abs(q + q.transpose()) <= 1e-13);
      CHECK(g.h_diag().sum() == doctest::Approx(3.0).epsilon(1e-13));
      CHECK((q * DenseVector::Ones(q.rows())).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
}

TEST_CASE("apply_q on interleaved components equals the sparse product per component") {
  const auto g = assemble_global(PeriodicMesh(0.0, 1.0, 5, 4), build_reference_element(3));
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseVector a(n), b(n);
  std::vector<double> v(2 * n), out(2 * n), dout(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i) = dist(rng);
    b(i) = dist(rng);
    v[2 * i] = a(i);
    v[2 * i + 1] = b(i);
  }
  g.apply_q(v, out, 2);
  g.apply_d(v, dout, 2);
  const DenseVector qa = g.q() * a, qb = g.q() * b;
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(out[2 * i] == doctest::Approx(qa(i)).epsilon(1e-14));
    CHECK(out[2 * i + 1] == doctest::Approx(qb(i)).epsilon(1e-14));
    CHECK(dout[2 * i] == doctest::Approx(qa(i) / g.h_diag()(i)).epsilon(1e-14));
  }
}

TEST_CASE("element views scale with h/2") {
  const auto ref = build_reference_element(2);
  const auto g = assemble_global(PeriodicMesh(0.0, 1.0, 8, 3), ref);
  CHECK(max_abs(g.element_q(3) - ref.q) == 0.0);
  CHECK((g.element_h(3) - ref.weights / 16.0).cwiseAbs().maxCoeff() <= 1e-16);
  CHECK(max_abs(g.element_d(3) - 16.0 * ref.d) <= 1e-12);
  CHECK(g.w_min() == doctest::Approx(ref.weights.minCoeff() / 16.0));
  CHECK(g.w_max() == doctest::Approx(ref.weights.maxCoeff() / 16.0));
}

TEST_CASE("two_norm agrees with the SVD") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int n : {1, 2, 3, 5, 8}) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
    Eigen::JacobiSVD<DenseMatrix> svd(m);
    CHECK(two_norm(m) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));
  }
  for (int p = 1; p <= 6; ++p) {
    const auto ref = build_reference_element(p);
    Eigen::JacobiSVD<DenseMatrix> svd(ref.q);
    CHECK(two_norm(ref.q) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));
  }
  CHECK(two_norm(DenseMatrix::Zero(3, 3)) == 0.0);
  CHECK_THROWS_AS(two_norm(DenseMatrix::Ones(2, 3)), InvalidArgument);
}

TEST_CASE("operator norms scale as h, 1, 1/h") {
  for (int p : {1, 2, 3}) {
    const auto s = operator_scaling_study(p, {8, 16, 32, 64});
    CHECK(s.h_slope == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(s.q_slope) <= 1e-10);
    CHECK(s.d_slope == doctest::Approx(-1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(operator_scaling_study(2, {8, 16}), InsufficientData);
}
