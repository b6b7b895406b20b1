#include "distrecon/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "distrecon/exact.hpp"

namespace distrecon {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::IncompleteMatrix: return "IncompleteMatrix";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::WrongCardinality: return "WrongCardinality";
    case ErrorKind::NonEuclidean: return "NonEuclidean";
    case ErrorKind::RankTooHigh: return "RankTooHigh";
    case ErrorKind::InconsistentDistances: return "InconsistentDistances";
    case ErrorKind::InconsistencyDetected: return "InconsistencyDetected";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::NegativeResidual: return "NegativeResidual";
    case ErrorKind::ZeroConflict: return "ZeroConflict";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

void Tolerance::validate() const {
  if (!(eps_rel > 0.0 && eps_rel < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "eps_rel must lie in (0, 1)");
  }
  if (!(reference_scale >= 0.0 && std::isfinite(reference_scale))) {
    throw Error(ErrorKind::InvalidArgument, "reference_scale must be finite and nonnegative");
  }
}

double Tolerance::consistency(double scale) const { return std::sqrt(eps_rel) * scale; }

PointConfig::PointConfig(int dim_, Eigen::MatrixXd coords_) : dim(dim_), coords(std::move(coords_)) {
  if (dim < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
  if (coords.rows() > 0 && coords.cols() != dim) {
    throw Error(ErrorKind::InvalidArgument, "coordinate vectors must have length " +
                                                std::to_string(dim));
  }
  coords.conservativeResize(coords.rows(), dim);
}

PointConfig PointConfig::zeros(int n, int dim) {
  return PointConfig(dim, Eigen::MatrixXd::Zero(n, dim));
}

PointConfig PointConfig::subset(std::span<const int> indices) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), dim);
  for (std::size_t k = 0; k < indices.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = coords.row(indices[k]);
  return PointConfig(dim, std::move(out));
}

SquaredDistanceMatrix::SquaredDistanceMatrix(int n)
    : entries_(Eigen::MatrixXd::Constant(n, n, kUnknown)) {
  entries_.diagonal().setZero();
}

SquaredDistanceMatrix::SquaredDistanceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw Error(ErrorKind::InvalidArgument, "distance matrix must be square");
  }
  const Eigen::Index n = entries_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (entries_(i, i) != 0.0) throw Error(ErrorKind::InvalidArgument, "nonzero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = entries_(i, j);
      const double b = entries_(j, i);
      if (std::isnan(a) != std::isnan(b) || (!std::isnan(a) && a != b)) {
        throw Error(ErrorKind::InvalidArgument, "distance matrix is not symmetric");
      }
      if (a < 0.0) throw Error(ErrorKind::NegativeEntry, "negative squared distance");
    }
  }
}

SquaredDistanceMatrix SquaredDistanceMatrix::from_points(const PointConfig& points) {
  const int n = points.size();
  Eigen::MatrixXd e(n, n);
  for (int i = 0; i < n; ++i) {
    e(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      e(i, j) = e(j, i) = (points.coords.row(i) - points.coords.row(j)).squaredNorm();
    }
  }
  SquaredDistanceMatrix d;
  d.entries_ = std::move(e);
  return d;
}

bool SquaredDistanceMatrix::known(int i, int j) const { return !std::isnan(entries_(i, j)); }

bool SquaredDistanceMatrix::complete() const { return !entries_.hasNaN(); }

void SquaredDistanceMatrix::set(int i, int j, double dist2) {
  if (i == j) throw Error(ErrorKind::InvalidArgument, "cannot set a diagonal entry");
  if (dist2 < 0.0) throw Error(ErrorKind::NegativeEntry, "negative squared distance");
  entries_(i, j) = entries_(j, i) = dist2;
}

void SquaredDistanceMatrix::forget(int i, int j) {
  if (i == j) return;
  entries_(i, j) = entries_(j, i) = kUnknown;
}

SquaredDistanceMatrix SquaredDistanceMatrix::subset(std::span<const int> indices) const {
  const auto k = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd e(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) e(a, b) = entries_(indices[a], indices[b]);
  }
  SquaredDistanceMatrix d;
  d.entries_ = std::move(e);
  return d;
}

double SquaredDistanceMatrix::scale() const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    const double x = entries_.data()[i];
    if (!std::isnan(x)) s = std::max(s, x);
  }
  return s;
}

namespace {

void require_complete(const SquaredDistanceMatrix& d) {
  if (!d.complete()) throw Error(ErrorKind::IncompleteMatrix, "all squared distances must be known");
}

// Eigenpairs sorted by descending eigenvalue; each eigenvector's first
// component that is not negligible is made positive.
struct SortedEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

SortedEigen sorted_eigen(const Eigen::MatrixXd& g) {
  SortedEigen out;
  const Eigen::Index k = g.rows();
  if (k == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
  out.values.resize(k);
  out.vectors.resize(k, k);
  // Eigen returns ascending order.
  for (Eigen::Index c = 0; c < k; ++c) {
    out.values(c) = solver.eigenvalues()(k - 1 - c);
    Eigen::VectorXd v = solver.eigenvectors().col(k - 1 - c);
    for (Eigen::Index r = 0; r < k; ++r) {
      if (std::abs(v(r)) > 1e-12) {
        if (v(r) < 0) v = -v;
        break;
      }
    }
    out.vectors.col(c) = v;
  }
  return out;
}

double smallest_eigenvalue(const Eigen::MatrixXd& g) {
  if (g.rows() == 1) return g(0, 0);
  if (g.rows() == 2) {
    const double a = g(0, 0), b = g(0, 1), c = g(1, 1);
    const double mean = 0.5 * (a + c);
    const double half_gap = std::hypot(0.5 * (a - c), b);
    return mean - half_gap;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Eigen::MatrixXd anchored_gram(const SquaredDistanceMatrix& d, int anchor) {
  const int k = d.size();
  Eigen::MatrixXd g(k - 1, k - 1);
  int a = 0;
  for (int i = 0; i < k; ++i) {
    if (i == anchor) continue;
    int b = 0;
    for (int j = 0; j < k; ++j) {
      if (j == anchor) continue;
      g(a, b) = (i == j) ? d(i, anchor) : 0.5 * (d(i, anchor) + d(j, anchor) - d(i, j));
      ++b;
    }
    ++a;
  }
  return g;
}

// Coordinates from a Gram matrix anchored at point 0 of the configuration.
PointConfig coordinates_from_gram(const Eigen::MatrixXd& g, int target_dim) {
  const int k = static_cast<int>(g.rows());
  PointConfig out = PointConfig::zeros(k + 1, target_dim);
  if (k == 0 || target_dim == 0) return out;
  const SortedEigen eig = sorted_eigen(g);
  const int used = std::min(target_dim, k);
  for (int c = 0; c < used; ++c) {
    const double s = std::sqrt(std::max(eig.values(c), 0.0));
    out.coords.col(c).tail(k) = eig.vectors.col(c) * s;
  }
  return out;
}

}  // namespace

GramMatrix gram_from_distances(const SquaredDistanceMatrix& d, int anchor) {
  const int k = d.size();
  if (anchor < 0 || anchor >= k) throw Error(ErrorKind::InvalidArgument, "anchor out of range");
  require_complete(d);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (d(i, j) < 0.0) throw Error(ErrorKind::NegativeEntry, "negative squared distance");
    }
  }
  GramMatrix g;
  g.anchor = anchor;
  for (int i = 0; i < k; ++i) {
    if (i != anchor) g.order.push_back(i);
  }
  g.entries = anchored_gram(d, anchor);
  return g;
}

bool is_positive_definite(const Eigen::MatrixXd& g, const Tolerance& tol) {
  if (g.rows() == 0) return true;
  if (tol.exact_mode) return exact::positive_definite(g);
  const double trace = g.trace();
  if (!(trace > 0.0)) return false;
  return smallest_eigenvalue(g) > tol.eps_rel * std::max(trace, tol.reference_scale);
}

bool is_positive_definite(const GramMatrix& g, const Tolerance& tol) {
  return is_positive_definite(g.entries, tol);
}

bool is_independent(const SquaredDistanceMatrix& d, int dim, const Tolerance& tol) {
  if (dim < 0 || d.size() != dim + 1) {
    throw Error(ErrorKind::WrongCardinality, "expected " + std::to_string(dim + 1) + " points, got " +
                                                 std::to_string(d.size()));
  }
  if (dim == 0) return true;
  return is_positive_definite(gram_from_distances(d, dim), tol);
}

PointConfig embed_from_distances(const SquaredDistanceMatrix& d, int target_dim, const Tolerance& tol) {
  if (target_dim < 0) throw Error(ErrorKind::InvalidArgument, "negative target dimension");
  require_complete(d);
  const int n = d.size();
  if (n == 0) return PointConfig::zeros(0, target_dim);
  const Eigen::MatrixXd g = gram_from_distances(d, 0).entries;
  if (g.rows() > 0) {
    const double trace = g.trace();
    const double threshold = tol.eps_rel * std::max(trace, tol.reference_scale);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& values = solver.eigenvalues();
    if (values(0) < -threshold) {
      throw Error(ErrorKind::NonEuclidean, "Gram matrix has eigenvalue " + std::to_string(values(0)));
    }
    int rank = 0;
    if (tol.exact_mode) {
      rank = exact::rank(g);
    } else {
      for (Eigen::Index i = 0; i < values.size(); ++i) rank += values(i) > threshold ? 1 : 0;
    }
    if (rank > target_dim) {
      throw Error(ErrorKind::RankTooHigh, "affine dimension " + std::to_string(rank) + " exceeds " +
                                              std::to_string(target_dim));
    }
  }
  return coordinates_from_gram(g, target_dim);
}

PointConfig truncated_embedding(const SquaredDistanceMatrix& d, int target_dim) {
  require_complete(d);
  if (d.size() == 0) return PointConfig::zeros(0, target_dim);
  return coordinates_from_gram(anchored_gram(d, 0), target_dim);
}

Recovery recover_missing_distance(const SquaredDistanceMatrix& known, int dim, int u, int v,
                                  const Tolerance& tol) {
  const int k = known.size();
  if (dim < 0 || k != dim + 3) {
    throw Error(ErrorKind::WrongCardinality, "expected " + std::to_string(dim + 3) + " points, got " +
                                                 std::to_string(k));
  }
  if (u == v || u < 0 || v < 0 || u >= k || v >= k) {
    throw Error(ErrorKind::InvalidArgument, "u and v must be distinct indices");
  }
  std::vector<int> base;
  for (int i = 0; i < k; ++i) {
    if (i != u && i != v) base.push_back(i);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if ((i == std::min(u, v) && j == std::max(u, v))) continue;
      if (!known.known(i, j)) throw Error(ErrorKind::IncompleteMatrix, "only the pair uv may be unknown");
      if (known(i, j) < 0.0) throw Error(ErrorKind::NegativeEntry, "negative squared distance");
    }
  }

  // Anchor the base at its last point; the other dim points give the rows of
  // a square Gram matrix.
  const int anchor = base.back();
  Eigen::MatrixXd g(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      const int i = base[a], j = base[b];
      g(a, b) = (a == b) ? known(i, anchor) : 0.5 * (known(i, anchor) + known(j, anchor) - known(i, j));
    }
  }
  if (!is_positive_definite(g, tol)) return {Recovery::Status::Dependent, SquaredDistanceMatrix::kUnknown};

  // G = L L^T embeds the base: row a of L holds the coordinates of base[a].
  const Eigen::LLT<Eigen::MatrixXd> llt(g);
  const Eigen::MatrixXd lower = llt.matrixL();
  const double slack = tol.consistency(std::max(known.scale(), tol.reference_scale));
  auto place = [&](int w) {
    Eigen::VectorXd rhs(dim);
    for (int a = 0; a < dim; ++a) rhs(a) = 0.5 * (known(w, anchor) + g(a, a) - known(w, base[a]));
    Eigen::VectorXd x = lower.triangularView<Eigen::Lower>().solve(rhs);
    const double residual = known(w, anchor) - x.squaredNorm();
    if (std::abs(residual) > slack) {
      throw Error(ErrorKind::InconsistentDistances,
                  "point " + std::to_string(w) + " is off the span of the base by " + std::to_string(residual));
    }
    return x;
  };
  const Eigen::VectorXd xu = place(u);
  const Eigen::VectorXd xv = place(v);
  return {Recovery::Status::Determined, (xu - xv).squaredNorm()};
}

Recovery recover_missing_distance(const SquaredDistanceMatrix& known, int dim, const Tolerance& tol) {
  int u = -1, v = -1;
  for (int i = 0; i < known.size(); ++i) {
    for (int j = i + 1; j < known.size(); ++j) {
      if (known.known(i, j)) continue;
      if (u >= 0) throw Error(ErrorKind::IncompleteMatrix, "more than one unknown pair");
      u = i;
      v = j;
    }
  }
  if (u < 0) throw Error(ErrorKind::InvalidArgument, "no unknown pair to recover");
  return recover_missing_distance(known, dim, u, v, tol);
}

int affine_dimension(const PointConfig& points, const Tolerance& tol) {
  const int n = points.size();
  if (n == 0) throw Error(ErrorKind::EmptyInput, "affine dimension of an empty set");
  if (n == 1 || points.dim == 0) return 0;
  const Eigen::MatrixXd diffs = points.coords.bottomRows(n - 1).rowwise() - points.coords.row(0);
  if (tol.exact_mode) return exact::rank(diffs);
  const Eigen::MatrixXd cov = diffs.transpose() * diffs;
  const double trace = cov.trace();
  if (!(trace > 0.0)) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
  int rank = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    rank += solver.eigenvalues()(i) > tol.eps_rel * std::max(trace, tol.reference_scale) ? 1 : 0;
  }
  return rank;
}

Projection project_onto_span(const Eigen::VectorXd& x, const PointConfig& basis, const Tolerance& tol) {
  const int k = basis.size();
  if (k == 0) throw Error(ErrorKind::EmptyInput, "empty basis");
  if (x.size() != basis.dim) throw Error(ErrorKind::InvalidArgument, "point has the wrong dimension");
  const Eigen::VectorXd origin = basis.point(0);
  Projection out;
  if (k == 1) {
    out.point = origin;
    out.dist2 = (x - origin).squaredNorm();
    return out;
  }
  const Eigen::MatrixXd w = basis.coords.bottomRows(k - 1).rowwise() - origin.transpose();
  const Eigen::MatrixXd g = w * w.transpose();
  if (!is_positive_definite(g, tol)) throw Error(ErrorKind::DegenerateBasis, "basis points are dependent");
  const Eigen::VectorXd c = g.llt().solve(w * (x - origin));
  out.point = origin + w.transpose() * c;
  out.dist2 = (x - out.point).squaredNorm();
  return out;
}

}  // namespace distrecon
