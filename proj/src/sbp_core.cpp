#include "csbp/sbp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "csbp/errors.hpp"
#include "csbp/fit.hpp"

namespace csbp {

namespace {

struct LegendreEval {
  double value;
  double derivative;
};

// P_n(x) and P_n'(x) by the three-term recurrence.
LegendreEval legendre(int n, double x) {
  double p_prev = 1.0, p = x;
  double dp_prev = 0.0, dp = 1.0;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    const double dp_next = dp_prev + (2.0 * k + 1.0) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp};
}

DenseVector lgl_nodes(int degree) {
  DenseVector x(degree + 1);
  x(0) = -1.0;
  x(degree) = 1.0;
  // Interior nodes are the roots of P_p'. Newton from Chebyshev-Lobatto guesses.
  for (int j = 1; j < degree; ++j) {
    double xi = -std::cos(std::numbers::pi * j / degree);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(degree, xi);
      const double d2p = (2.0 * xi * dp - degree * (degree + 1.0) * p) / (1.0 - xi * xi);
      const double step = dp / d2p;
      xi -= step;
      if (std::abs(step) < 1e-14) break;
    }
    x(j) = xi;
  }
  // Exact mirror symmetry about the origin.
  for (int j = 0; j <= degree / 2; ++j) {
    const double s = 0.5 * (x(degree - j) - x(j));
    x(j) = -s;
    x(degree - j) = s;
  }
  if (degree % 2 == 0) x(degree / 2) = 0.0;
  return x;
}

DenseMatrix lagrange_differentiation(const DenseVector& x) {
  const int n = static_cast<int>(x.size());
  DenseVector bary(n);
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k != j) prod *= (x(j) - x(k));
    }
    bary(j) = 1.0 / prod;
  }
  DenseMatrix d = DenseMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (bary(j) / bary(i)) / (x(i) - x(j));
      row_sum += d(i, j);
    }
    d(i, i) = -row_sum;
  }
  return d;
}

}  // namespace

ReferenceElement build_reference_element(int degree) {
  if (degree < kMinDegree || degree > kMaxDegree) {
    throw UnsupportedDegree(degree);
  }
  ReferenceElement ref;
  ref.degree = degree;
  ref.nodes = lgl_nodes(degree);
  const int n = degree + 1;

  ref.weights.resize(n);
  for (int j = 0; j < n; ++j) {
    const double pj = legendre(degree, ref.nodes(j)).value;
    ref.weights(j) = 2.0 / (degree * (degree + 1.0) * pj * pj);
  }

  ref.e = DenseVector::Zero(n);
  ref.e(0) = -1.0;
  ref.e(n - 1) = 1.0;

  // Q = H D, then split into S + E/2 so that Q + Q^T = E holds to the last bit.
  const DenseMatrix hd = ref.weights.asDiagonal() * lagrange_differentiation(ref.nodes);
  const DenseMatrix s = 0.5 * (hd - hd.transpose());
  ref.q = s;
  ref.q.diagonal() += 0.5 * ref.e;
  ref.d = ref.weights.cwiseInverse().asDiagonal() * ref.q;
  return ref;
}

PeriodicMesh::PeriodicMesh(double x_left, double x_right, int num_elements,
                           int nodes_per_element)
    : x_left_(x_left),
      x_right_(x_right),
      num_elements_(num_elements),
      nodes_per_element_(nodes_per_element) {
  if (!(x_right > x_left)) {
    throw InvalidArgument("PeriodicMesh: x_right must exceed x_left");
  }
  if (nodes_per_element < 2) {
    throw InvalidArgument("PeriodicMesh: need at least 2 nodes per element");
  }
  if (num_elements < 2) {
    throw MeshTooSmall(num_elements);
  }
}

std::vector<double> PeriodicMesh::global_coordinates(const ReferenceElement& ref) const {
  std::vector<double> x(num_nodes());
  for (int k = 0; k < num_elements_; ++k) {
    for (int j = 0; j < nodes_per_element_ - 1; ++j) {
      x[global_index(k, j)] = coordinate(ref, k, j);
    }
  }
  return x;
}

GlobalOperator::GlobalOperator(PeriodicMesh mesh, ReferenceElement ref)
    : mesh_(std::move(mesh)), ref_(std::move(ref)) {
  if (mesh_.nodes_per_element() != ref_.num_nodes()) {
    throw DimensionMismatch("GlobalOperator: mesh and reference element disagree on n_p");
  }
  const int ne = mesh_.num_elements();
  const int np = ref_.num_nodes();
  const std::size_t n = mesh_.num_nodes();

  jacobian_.assign(ne, 0.5 * mesh_.h());
  h_ = DenseVector::Zero(static_cast<Eigen::Index>(n));

  // Element-ascending, local-index-ascending accumulation.
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(ne) * np * np);
  w_min_ = std::numeric_limits<double>::infinity();
  w_max_ = 0.0;
  for (int k = 0; k < ne; ++k) {
    const DenseVector hk = element_h(k);
    const DenseMatrix qk = element_q(k);
    for (int i = 0; i < np; ++i) {
      const auto gi = static_cast<Eigen::Index>(mesh_.global_index(k, i));
      h_(gi) += hk(i);
      w_min_ = std::min(w_min_, hk(i));
      w_max_ = std::max(w_max_, hk(i));
      for (int j = 0; j < np; ++j) {
        const auto gj = static_cast<Eigen::Index>(mesh_.global_index(k, j));
        triplets.emplace_back(gi, gj, qk(i, j));
      }
    }
  }
  q_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  q_.setFromTriplets(triplets.begin(), triplets.end());
  q_.prune(0.0);

  for (int k = 0; k < ne; ++k) {
    q_star_ = std::max(q_star_, two_norm(element_q(k)));
  }
}

DenseMatrix GlobalOperator::element_q(int) const {
  // In one dimension |J| * dxi/dx = 1, so the reference Q is unchanged.
  return ref_.q;
}

DenseVector GlobalOperator::element_h(int k) const { return jacobian_[k] * ref_.weights; }

DenseMatrix GlobalOperator::element_d(int k) const {
  return element_h(k).cwiseInverse().asDiagonal() * element_q(k);
}

void GlobalOperator::apply_q(std::span<const double> v, std::span<double> out,
                             int components) const {
  const std::size_t n = num_nodes();
  const auto nc = static_cast<std::size_t>(components);
  if (v.size() != n * nc || out.size() != n * nc) {
    throw DimensionMismatch("apply_q: vector length does not match nodes x components");
  }
  for (Eigen::Index row = 0; row < q_.outerSize(); ++row) {
    double* o = out.data() + row * nc;
    for (std::size_t c = 0; c < nc; ++c) o[c] = 0.0;
    for (SparseMatrix::InnerIterator it(q_, row); it; ++it) {
      const double* vi = v.data() + it.col() * nc;
      for (std::size_t c = 0; c < nc; ++c) o[c] += it.value() * vi[c];
    }
  }
}

void GlobalOperator::apply_d(std::span<const double> v, std::span<double> out,
                             int components) const {
  apply_q(v, out, components);
  const auto nc = static_cast<std::size_t>(components);
  for (std::size_t i = 0; i < num_nodes(); ++i) {
    const double inv = 1.0 / h_(static_cast<Eigen::Index>(i));
    for (std::size_t c = 0; c < nc; ++c) out[i * nc + c] *= inv;
  }
}

GlobalOperator assemble_global(const PeriodicMesh& mesh, const ReferenceElement& ref) {
  return GlobalOperator(mesh, ref);
}

double two_norm(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument("two_norm: matrix must be square");
  }
  const Eigen::Index n = m.cols();
  if (n == 0) return 0.0;
  const DenseMatrix mtm = m.transpose() * m;
  if (mtm.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 10000;
  DenseVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.5 * std::sin(1.0 + 2.0 * i);
  v.normalize();
  double mu = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    const DenseVector w = mtm * v;
    mu = v.dot(w);
    const double residual = (w - mu * v).norm();
    if (residual <= kTol * mu) return std::sqrt(mu);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
  }
  throw IterationLimit(kMaxIter, std::sqrt(std::max(mu, 0.0)));
}

OperatorScaling operator_scaling_study(int degree, const std::vector<int>& element_counts) {
  if (element_counts.size() < 3) {
    throw InsufficientData("operator_scaling_study: need at least 3 mesh levels");
  }
  const ReferenceElement ref = build_reference_element(degree);
  OperatorScaling out;
  for (int ne : element_counts) {
    const GlobalOperator gop(PeriodicMesh(0.0, 1.0, ne, ref.num_nodes()), ref);
    double hn = 0.0, qn = 0.0, dn = 0.0;
    for (int k = 0; k < ne; ++k) {
      hn = std::max(hn, two_norm(DenseMatrix(gop.element_h(k).asDiagonal())));
      qn = std::max(qn, two_norm(gop.element_q(k)));
      dn = std::max(dn, two_norm(gop.element_d(k)));
    }
    out.h.push_back(gop.mesh().h());
    out.h_norm.push_back(hn);
    out.q_norm.push_back(qn);
    out.d_norm.push_back(dn);
  }
  out.h_slope = fit_order(out.h, out.h_norm).slope;
  out.q_slope = fit_order(out.h, out.q_norm).slope;
  out.d_slope = fit_order(out.h, out.d_norm).slope;
  return out;
}

}  // namespace csbp
