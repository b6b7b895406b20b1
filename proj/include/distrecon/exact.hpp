#pragma once

// Exact sign and rank decisions for matrices of doubles. Every finite double
// is a dyadic rational, so a matrix is rescaled by a common power of two into
// big integers and then reduced with fraction-free (Bareiss) elimination.

#include <Eigen/Dense>

namespace distrecon::exact {

/// Sylvester's criterion on the exact leading principal minors.
bool positive_definite(const Eigen::MatrixXd& m);

int rank(const Eigen::MatrixXd& m);

}  // namespace distrecon::exact
