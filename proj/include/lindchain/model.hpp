#pragma once

// Dissipative dimerized chain: control point, derived couplings and the
// single-particle matrices every other module is built on.
//
// Site layout: site index i = 2n + s with s = 0 (A) or 1 (B), n in [0, N).

#include <string>
#include <utility>
#include <vector>

#include "lindchain/types.hpp"

namespace lindchain {

enum class Boundary { periodic, open };

/// Relative sign of the two sites inside every jump operator.
/// standard: L = sqrt(g)(c_x - c_y); mirrored: L = sqrt(g)(c_x + c_y).
enum class JumpOrientation { standard, mirrored };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct ModelSpec {
  int n_cells = 2;
  double lambda = 0.2;
  double eta = 0.3;
  Boundary boundary = Boundary::periodic;
  JumpOrientation orientation = JumpOrientation::standard;

  int n_sites() const { return 2 * n_cells; }

  /// Checks 0 < lambda, eta < 1 and n_cells >= 1.
  void validate() const;
  /// validate() plus lambda <= 1/2 (non-negative loss rates).
  void validate_dissipative() const;
};

struct DerivedParams {
  double lambda = 0.0;
  double eta = 0.0;
  double w = 0.0;
  double v = 0.0;
  double gamma_A = 0.0;
  double gamma_B = 0.0;
  double gamma = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t1p = 0.0;
  double t2p = 0.0;
  double mu = 0.0;
};

DerivedParams derive_params(double lambda, double eta);

inline int site_index(int cell, int sublattice) { return 2 * cell + sublattice; }

/// L = sum_i coeff_i c_i, stored sparsely.
struct JumpOperator {
  std::vector<std::pair<int, Complex>> terms;

  CVector dense(int n_sites) const;
};

/// Single-particle description of a quadratic loss Lindbladian.
///
///   H0            = sum_mn h_mn c_m^dag c_n
///   sum_l L^dag L = sum_mn K_mn c_m^dag c_n
///   h_eff         = h - (i/2) K
///   D             = h^T + (i/2) K^T      (dC/dt = i(DC - CD^dag))
class OperatorSet {
 public:
  /// Assembles K, h_eff and D from a Hermitian h and a list of jumps.
  static OperatorSet from_parts(CMatrix h, std::vector<JumpOperator> jumps);

  int n_sites() const { return static_cast<int>(h_.rows()); }
  const CMatrix& h() const { return h_; }
  const CMatrix& K() const { return K_; }
  const CMatrix& h_eff() const { return h_eff_; }
  const CMatrix& D() const { return D_; }
  const std::vector<JumpOperator>& jumps() const { return jumps_; }

  /// Test hook: replaces h_eff without touching the other matrices.
  OperatorSet with_h_eff(CMatrix h_eff) const;

 private:
  CMatrix h_;
  CMatrix K_;
  CMatrix h_eff_;
  CMatrix D_;
  std::vector<JumpOperator> jumps_;
};

/// Hermitian hopping matrix with imaginary amplitudes i*w/2 (intracell) and
/// i*v/2 (intercell). Valid for every lambda in (0, 1).
CMatrix hopping_matrix(const ModelSpec& spec);

/// Jump list L_{n,A}, L_{n,B}. Requires lambda <= 1/2.
std::vector<JumpOperator> jump_operators(const ModelSpec& spec);

/// Full operator set. Requires lambda <= 1/2; PBC requires N >= 2.
OperatorSet build_operators(const ModelSpec& spec);

/// h - (i/2) K with the formally signed rates gamma_A, gamma_B (which turn
/// into gain for lambda > 1/2). Used by spectral analysis only.
CMatrix effective_hamiltonian(const ModelSpec& spec);

struct ConsistencyReport {
  double anti_hermitian_defect = 0.0;  // max |(h_eff - h_eff^dag)/2 + (i/2)K|
  double h_eff_defect = 0.0;           // max |h_eff - h + (i/2)K|
  double h_hermiticity_defect = 0.0;
  double k_hermiticity_defect = 0.0;
  double k_min_eigenvalue = 0.0;
  double damping_defect = 0.0;  // max |D - h^T - (i/2)K^T|

  double max_defect() const;
  bool pass(double tol = 1e-13) const;
};

ConsistencyReport consistency_check(const OperatorSet& ops);

}  // namespace lindchain
