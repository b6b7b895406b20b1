#pragma once

// Euclidean distance geometry on squared distances: Gram matrices,
// independence tests, embeddings and recovery of a single missing distance.
//
// Everything here works on squared distances. Unknown entries of a
// SquaredDistanceMatrix are stored as NaN.

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "distrecon/error.hpp"

namespace distrecon {

struct Tolerance {
  /// Relative eigenvalue threshold; eigenvalues are compared to eps_rel * trace.
  double eps_rel = 1e-9;
  /// Decide positive definiteness and rank with exact integer arithmetic.
  bool exact_mode = false;
  /// Floor for the scale relative thresholds are measured against, so that a
  /// tiny subconfiguration inside a large instance is not judged on its own
  /// scale. 0 measures against the matrix at hand.
  double reference_scale = 0.0;

  void validate() const;
  /// Absolute slack used when checking that distances admit an embedding,
  /// relative to the largest squared distance involved.
  double consistency(double scale) const;
};

/// Multiset of n points in R^dim, one point per row.
struct PointConfig {
  int dim = 0;
  Eigen::MatrixXd coords;  // n x dim

  PointConfig() = default;
  PointConfig(int dim_, Eigen::MatrixXd coords_);
  static PointConfig zeros(int n, int dim);

  int size() const { return static_cast<int>(coords.rows()); }
  Eigen::VectorXd point(int i) const { return coords.row(i).transpose(); }
  PointConfig subset(std::span<const int> indices) const;
};

class SquaredDistanceMatrix {
 public:
  static constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

  SquaredDistanceMatrix() = default;
  /// All off-diagonal entries unknown.
  explicit SquaredDistanceMatrix(int n);
  /// Takes entries as given; NaN marks an unknown entry. Checks symmetry,
  /// zero diagonal and non-negativity.
  explicit SquaredDistanceMatrix(Eigen::MatrixXd entries);

  static SquaredDistanceMatrix from_points(const PointConfig& points);

  int size() const { return static_cast<int>(entries_.rows()); }
  bool known(int i, int j) const;
  bool complete() const;
  double operator()(int i, int j) const { return entries_(i, j); }
  void set(int i, int j, double dist2);
  void forget(int i, int j);
  const Eigen::MatrixXd& entries() const { return entries_; }
  SquaredDistanceMatrix subset(std::span<const int> indices) const;
  /// Largest known entry (0 for an empty or all-unknown matrix).
  double scale() const;

 private:
  Eigen::MatrixXd entries_;
};

/// Inner products of the vectors v_i - v_anchor over the k-1 non-anchor
/// points, in increasing index order.
struct GramMatrix {
  int anchor = 0;
  std::vector<int> order;  // original index of each row
  Eigen::MatrixXd entries;

  int size() const { return static_cast<int>(entries.rows()); }
};

GramMatrix gram_from_distances(const SquaredDistanceMatrix& d, int anchor);

bool is_positive_definite(const GramMatrix& g, const Tolerance& tol = {});
bool is_positive_definite(const Eigen::MatrixXd& g, const Tolerance& tol = {});

/// Whether d+1 points with complete squared distances affinely span R^d.
bool is_independent(const SquaredDistanceMatrix& d, int dim, const Tolerance& tol = {});

/// Coordinates in R^target_dim reproducing d. Point 0 sits at the origin;
/// eigenpairs are taken in descending order with each eigenvector's first
/// nonzero component made positive.
PointConfig embed_from_distances(const SquaredDistanceMatrix& d, int target_dim,
                                 const Tolerance& tol = {});

/// Same construction without the rank and sign-of-spectrum checks: keeps the
/// top target_dim eigenpairs and drops the rest.
PointConfig truncated_embedding(const SquaredDistanceMatrix& d, int target_dim);

struct Recovery {
  enum class Status { Determined, Dependent };
  Status status = Status::Dependent;
  double dist2 = SquaredDistanceMatrix::kUnknown;

  bool determined() const { return status == Status::Determined; }
};

/// `known` covers T plus u and v, with every entry known except (u, v).
/// T is embedded, u and v are placed uniquely relative to it and |u-v|^2 is
/// read off. Throws InconsistentDistances when u or v cannot be placed in
/// R^dim relative to T.
Recovery recover_missing_distance(const SquaredDistanceMatrix& known, int dim, int u, int v,
                                  const Tolerance& tol = {});
/// Locates the single unknown pair itself.
Recovery recover_missing_distance(const SquaredDistanceMatrix& known, int dim,
                                  const Tolerance& tol = {});

int affine_dimension(const PointConfig& points, const Tolerance& tol = {});

struct Projection {
  Eigen::VectorXd point;
  double dist2 = 0.0;  // squared distance to the subspace
};

/// Orthogonal projection of x onto the affine span of basis.
Projection project_onto_span(const Eigen::VectorXd& x, const PointConfig& basis,
                             const Tolerance& tol = {});

}  // namespace distrecon
