#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstddef>
#include <span>
#include <vector>

namespace csbp {

using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 6;

/// Degree-p Legendre-Gauss-Lobatto collocation operator on [-1, 1].
///
/// Diagonal norm, diagonal boundary matrix: `q + q^T = diag(e)` with
/// `e = (-1, 0, ..., 0, 1)`, and `d = diag(h)^{-1} q` differentiates
/// polynomials of degree <= p exactly at the nodes.
struct ReferenceElement {
  int degree = 0;
  DenseVector nodes;    ///< n_p ascending points, nodes(0) = -1, nodes(p) = 1
  DenseVector weights;  ///< diagonal of H_ref, sums to 2
  DenseMatrix q;        ///< Q_ref
  DenseVector e;        ///< diagonal of E_ref
  DenseMatrix d;        ///< D_ref = H_ref^{-1} Q_ref

  int num_nodes() const { return degree + 1; }
};

ReferenceElement build_reference_element(int degree);

/// Uniform periodic mesh of [x_left, x_right] with shared element end nodes.
class PeriodicMesh {
 public:
  PeriodicMesh(double x_left, double x_right, int num_elements, int nodes_per_element);

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  double length() const { return x_right_ - x_left_; }
  int num_elements() const { return num_elements_; }
  int nodes_per_element() const { return nodes_per_element_; }
  double h() const { return length() / num_elements_; }
  std::size_t num_nodes() const {
    return static_cast<std::size_t>(num_elements_) * (nodes_per_element_ - 1);
  }

  /// Global index of local node `j` on element `k`; the last element wraps to node 0.
  std::size_t global_index(int k, int j) const {
    return (static_cast<std::size_t>(k) * (nodes_per_element_ - 1) + j) % num_nodes();
  }

  /// Physical coordinate of local node `j` on element `k` (never wrapped).
  double coordinate(const ReferenceElement& ref, int k, int j) const {
    return x_left_ + k * h() + 0.5 * (ref.nodes(j) + 1.0) * h();
  }

  /// Coordinates of every global node, in global order, inside [x_left, x_right).
  std::vector<double> global_coordinates(const ReferenceElement& ref) const;

 private:
  double x_left_;
  double x_right_;
  int num_elements_;
  int nodes_per_element_;
};

/// Assembled periodic C-SBP operator. Immutable after construction.
class GlobalOperator {
 public:
  GlobalOperator(PeriodicMesh mesh, ReferenceElement ref);

  const PeriodicMesh& mesh() const { return mesh_; }
  const ReferenceElement& reference() const { return ref_; }
  std::size_t num_nodes() const { return mesh_.num_nodes(); }
  int nodes_per_element() const { return ref_.num_nodes(); }

  const DenseVector& h_diag() const { return h_; }
  const SparseMatrix& q() const { return q_; }

  /// Element views: affine map with constant Jacobian h/2.
  DenseMatrix element_q(int k) const;
  DenseVector element_h(int k) const;
  DenseMatrix element_d(int k) const;

  double q_star_norm() const { return q_star_; }
  double w_min() const { return w_min_; }
  double w_max() const { return w_max_; }

  /// out = Q v, where v holds `components` interleaved values per node.
  void apply_q(std::span<const double> v, std::span<double> out, int components = 1) const;
  /// out = H^{-1} Q v.
  void apply_d(std::span<const double> v, std::span<double> out, int components = 1) const;

 private:
  PeriodicMesh mesh_;
  ReferenceElement ref_;
  std::vector<double> jacobian_;  // per element
  DenseVector h_;
  SparseMatrix q_;
  double q_star_ = 0.0;
  double w_min_ = 0.0;
  double w_max_ = 0.0;
};

GlobalOperator assemble_global(const PeriodicMesh& mesh, const ReferenceElement& ref);

/// Spectral norm by power iteration on M^T M (relative tolerance 1e-10,
/// at most 10000 iterations). Throws IterationLimit on non-convergence.
double two_norm(const DenseMatrix& m);

struct OperatorScaling {
  std::vector<double> h;
  std::vector<double> h_norm;
  std::vector<double> q_norm;
  std::vector<double> d_norm;
  double h_slope = 0.0;
  double q_slope = 0.0;
  double d_slope = 0.0;
};

/// Log-log slopes of max_k ||H_k||, ||Q_k||, ||D_k|| against h on [0, 1].
OperatorScaling operator_scaling_study(int degree, const std::vector<int>& element_counts);

}  // namespace csbp
