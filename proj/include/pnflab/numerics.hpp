#pragma once

#include "pnflab/common.hpp"

#include <vector>

namespace pnf {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss–Legendre rule mapped to [a, b]. Cached per n.
QuadratureRule gauss_legendre(int n, double a, double b);

// Ascending eigenvalues of a symmetric matrix of size 1, 2 or 3.
Vec symmetric_eigenvalues(const Mat& A);
double min_eigenvalue(const Mat& A);
double max_eigenvalue(const Mat& A);

}  // namespace pnf
