#pragma once

// Reference engines: the closed-form two-site solution, and a brute-force
// Jordan-Wigner Fock-space Lindblad integrator for chains of up to 3 cells.

#include <vector>

#include "lindchain/model.hpp"
#include "lindchain/types.hpp"

namespace lindchain {

// ---- two-site problem ----------------------------------------------------

/// Basis {|00>, |10>, |01>, |11>} = index n_A + 2 n_B.
enum class TwoSiteInitial { singlet_like, doubly_occupied };

struct TwoSiteState {
  CMatrix rho;
  double t = 0.0;
  double gamma = 0.0;
};

/// Two sites, no hopping, single jump L = sqrt(2 gamma)(c_A - c_B), so that
/// the singlet-like state (|10> - |01>)/sqrt(2) loses its particle at rate
/// 4 gamma. singlet_like is evaluated in closed form; doubly_occupied by
/// exponentiating the 16 x 16 superoperator.
TwoSiteState two_site_rho(double gamma, double t, TwoSiteInitial initial);

/// The jump list used by two_site_rho, as a two-site operator set.
OperatorSet two_site_operators(double gamma);

struct TwoSiteMeasures {
  double S_AB = 0.0;
  double S_A = 0.0;
  double S_B = 0.0;
  double mutual_information = 0.0;
  double concurrence = 0.0;
  double eof = 0.0;  // bits
};

TwoSiteMeasures two_site_entropies(const TwoSiteState& state);

/// e^{-4 g t}[4 g t + (1 - e^{4 g t}) ln(1 - e^{-4 g t})].
double two_site_sab_closed_form(double gamma, double t);

/// -sum p ln p over the two nonzero eigenvalues e^{-4 g t}, 1 - e^{-4 g t}.
double two_site_sab_exact(double gamma, double t);

// ---- Fock-space Lindbladian ------------------------------------------------

inline constexpr int kMaxOracleCells = 3;
inline constexpr int kMaxSpectrumCells = 2;

/// Many-body operators on 2^n sites; basis index = sum_i n_i 2^i, fermion
/// order = site order.
class FockLindbladSystem {
 public:
  /// Jordan-Wigner realization of any single-particle operator set with at
  /// most 2 * kMaxOracleCells sites. Verifies the canonical anticommutation
  /// relations to 1e-13.
  static FockLindbladSystem from_ops(const OperatorSet& ops);

  int n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_sites_; }
  const CMatrix& hamiltonian() const { return H_; }
  const std::vector<CMatrix>& jumps() const { return jumps_; }
  const CMatrix& annihilator(int site) const { return c_[static_cast<std::size_t>(site)]; }

  /// L[rho] = -i[H, rho] + sum_l (L rho L^dag - {L^dag L, rho}/2).
  CMatrix apply(const CMatrix& rho) const;

  /// Dense column-stacking superoperator (dim^2 x dim^2).
  CMatrix superoperator() const;

  /// Largest |<i|{c_i, c_j^dag} - delta_ij|j>| and |{c_i, c_j}| entry.
  double car_defect() const;

 private:
  int n_sites_ = 0;
  std::vector<CMatrix> c_;
  CMatrix H_;
  std::vector<CMatrix> jumps_;
  CMatrix loss_;  // sum_l L^dag L
};

/// from_ops(build_operators(spec)) for N <= 3 cells.
FockLindbladSystem jw_build(const ModelSpec& spec);

/// rho(t) for each t of an ascending, non-negative grid. Systems with up to
/// 4 sites use a dense Padé superoperator exponential; larger ones a Taylor
/// expansion of the action of L.
std::vector<CMatrix> lindblad_integrate(const FockLindbladSystem& sys, const CMatrix& rho0,
                                        const std::vector<double>& t_grid);

/// C_ij = Tr[c_i^dag c_j rho].
CMatrix correlation_from_rho(const FockLindbladSystem& sys, const CMatrix& rho);

/// |0><0|.
CMatrix vacuum_state(const FockLindbladSystem& sys);

/// Pure Slater determinant whose correlator is C. C must be a projector.
CMatrix slater_state(const FockLindbladSystem& sys, const CMatrix& C);

/// Expectation of the total particle number.
double particle_number(const FockLindbladSystem& sys, const CMatrix& rho);

/// All 4^n eigenvalues of the superoperator; at most kMaxSpectrumCells cells.
std::vector<Complex> superoperator_spectrum(const FockLindbladSystem& sys);

}  // namespace lindchain
