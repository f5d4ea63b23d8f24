#pragma once

#include <algorithm>
#include <complex>
#include <utility>
#include <vector>

#include "lindchain/model.hpp"
#include "lindchain/types.hpp"

namespace testutil {

using lindchain::Boundary;
using lindchain::CMatrix;
using lindchain::Complex;
using lindchain::ModelSpec;

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline ModelSpec make_spec(int n_cells, double lambda, double eta, Boundary b = Boundary::periodic) {
  ModelSpec s;
  s.n_cells = n_cells;
  s.lambda = lambda;
  s.eta = eta;
  s.boundary = b;
  return s;
}

// Eigenvalues of a 2x2 matrix from its trace and determinant.
inline std::pair<Complex, Complex> eig2(Complex a, Complex b, Complex c, Complex d) {
  const Complex tr = a + d;
  const Complex disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return v;
}

inline std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, static_cast<double>(i) / (n - 1)));
  return v;
}

}  // namespace testutil
