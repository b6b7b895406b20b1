#include "distrecon/exact.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <climits>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "distrecon/error.hpp"

namespace distrecon::exact {
namespace {

using Int = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<Int>>;

IntMatrix to_integers(const Eigen::MatrixXd& m) {
  struct Parts {
    std::int64_t mantissa;
    int exponent;
  };
  std::vector<Parts> parts;
  parts.reserve(static_cast<std::size_t>(m.size()));
  int min_exp = INT_MAX;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double x = m(i, j);
      if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");
      int e = 0;
      const double f = std::frexp(x, &e);
      const auto mant = static_cast<std::int64_t>(std::ldexp(f, 53));
      parts.push_back({mant, e - 53});
      if (mant != 0) min_exp = std::min(min_exp, e - 53);
    }
  }
  IntMatrix out(static_cast<std::size_t>(m.rows()),
                std::vector<Int>(static_cast<std::size_t>(m.cols())));
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j, ++k) {
      Int v = parts[k].mantissa;
      if (parts[k].mantissa != 0) v <<= static_cast<unsigned>(parts[k].exponent - min_exp);
      out[i][j] = std::move(v);
    }
  }
  return out;
}

}  // namespace

bool positive_definite(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "matrix is not square");
  const auto n = static_cast<std::size_t>(m.rows());
  if (n == 0) return true;
  IntMatrix a = to_integers(m);
  // Without pivoting, the k-th Bareiss pivot is the k-th leading principal minor.
  Int prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return true;
}

int rank(const Eigen::MatrixXd& m) {
  IntMatrix a = to_integers(m);
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  Int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) / prev;
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

}  // namespace distrecon::exact
