#include "lindchain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lindchain/linalg.hpp"

namespace lindchain {

std::string to_string(PhaseClass c) {
  switch (c) {
    case PhaseClass::hermitian: return "hermitian";
    case PhaseClass::line_gapped: return "line_gapped";
    case PhaseClass::point_gapped: return "point_gapped";
    case PhaseClass::exceptional: return "exceptional";
    case PhaseClass::single_band: return "single_band";
  }
  return "unknown";
}

std::vector<double> momentum_grid(int n_cells) {
  if (n_cells < 1) throw DomainError("momentum_grid: need at least one cell");
  std::vector<double> ks;
  ks.reserve(static_cast<std::size_t>(n_cells));
  for (int m = 0; m < n_cells; ++m) {
    // Fold through the integer so that k and -k are exact negatives.
    const int folded = 2 * m > n_cells ? m - n_cells : m;
    ks.push_back(std::numbers::pi * (2.0 * folded) / n_cells);
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

std::pair<Complex, Complex> dispersion_pbc(const DerivedParams& p, double k) {
  const Complex e = std::polar(1.0, k);
  const Complex x = -(p.t1 + p.t2p * e) * (p.t2 * std::conj(e) - p.t1p);
  const Complex s = std::sqrt(x);
  const Complex shift = kI * p.mu;
  return {s + shift, -s + shift};
}

Eigen::Matrix2cd bloch_hopping(const ModelSpec& spec, double k) {
  const DerivedParams p = derive_params(spec.lambda, spec.eta);
  const Complex e = std::polar(1.0, k);
  Eigen::Matrix2cd h;
  h(0, 0) = 0.0;
  h(1, 1) = 0.0;
  h(0, 1) = -kI * (p.w / 2.0) + kI * (p.v / 2.0) * std::conj(e);
  h(1, 0) = std::conj(h(0, 1));
  return h;
}

Eigen::Matrix2cd bloch_dissipation(const ModelSpec& spec, double k) {
  const DerivedParams p = derive_params(spec.lambda, spec.eta);
  const double s = spec.orientation == JumpOrientation::standard ? -1.0 : 1.0;
  const Complex e = std::polar(1.0, k);
  Eigen::Matrix2cd K;
  K(0, 0) = p.gamma_A + p.gamma_B;
  K(1, 1) = p.gamma_A + p.gamma_B;
  K(0, 1) = s * p.gamma_A + s * p.gamma_B * std::conj(e);
  K(1, 0) = std::conj(K(0, 1));
  return K;
}

Eigen::Matrix2cd bloch_h_eff(const ModelSpec& spec, double k) {
  return bloch_hopping(spec, k) - 0.5 * kI * bloch_dissipation(spec, k);
}

Eigen::Matrix2cd bloch_damping(const ModelSpec& spec, double k) {
  return bloch_h_eff(spec, -k).conjugate();
}

PhaseClass classify_phase(double lambda, double eta, int k_points) {
  const DerivedParams p = derive_params(lambda, eta);
  if (std::abs(lambda - 0.5) <= 1e-12) return PhaseClass::hermitian;
  if (std::min(eta, 1.0 - eta) <= 1e-12) return PhaseClass::single_band;
  if (std::abs(lambda * (1.0 - lambda) - eta * (1.0 - eta)) <= 1e-10) return PhaseClass::exceptional;
  double min_re = std::numeric_limits<double>::infinity();
  for (double k : momentum_grid(k_points)) {
    min_re = std::min(min_re, std::abs(dispersion_pbc(p, k).first.real()));
  }
  return min_re > 1e-8 ? PhaseClass::line_gapped : PhaseClass::point_gapped;
}

GapReport liouvillian_gap(const std::vector<Complex>& eigenvalues) {
  if (eigenvalues.empty()) throw DomainError("liouvillian_gap: empty spectrum");
  double max_im = -std::numeric_limits<double>::infinity();
  double min_im = std::numeric_limits<double>::infinity();
  for (const Complex& e : eigenvalues) {
    max_im = std::max(max_im, e.imag());
    min_im = std::min(min_im, e.imag());
  }
  return {-max_im, -min_im};
}

GapReport dispersion_gap(const DerivedParams& p, int k_points) {
  std::vector<Complex> eps;
  eps.reserve(2 * static_cast<std::size_t>(k_points));
  for (double k : momentum_grid(k_points)) {
    const auto [plus, minus] = dispersion_pbc(p, k);
    eps.push_back(plus);
    eps.push_back(minus);
  }
  return liouvillian_gap(eps);
}

std::vector<Complex> rapidities(const std::vector<Complex>& damping_eigenvalues) {
  std::vector<Complex> out;
  out.reserve(damping_eigenvalues.size());
  for (const Complex& l : damping_eigenvalues) out.push_back(-kI * l);
  return out;
}

SpectrumReport analyze_spectrum(const ModelSpec& spec) {
  SpectrumReport r;
  const CMatrix h_eff = effective_hamiltonian(spec);
  r.eigenvalues = spectrum_numeric(h_eff);
  r.phase_class = classify_phase(spec.lambda, spec.eta);
  r.gap = liouvillian_gap(r.eigenvalues);
  // D = h^T + (i/2)K^T = conj(h_eff) for Hermitian h and K.
  r.rapidities = rapidities(spectrum_numeric(h_eff.conjugate()));
  return r;
}

namespace {

double binomial(std::size_t n, std::size_t k) {
  double b = 1.0;
  for (std::size_t i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

void enumerate_subsets(const std::vector<Complex>& slots, std::size_t start, int remaining,
                       Complex partial, std::vector<Complex>& out) {
  out.push_back(partial);
  if (remaining == 0) return;
  for (std::size_t j = start; j < slots.size(); ++j) {
    enumerate_subsets(slots, j + 1, remaining - 1, partial + slots[j], out);
  }
}

std::vector<Complex> deduplicate(std::vector<Complex> values, double tol) {
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Complex> unique;
  for (const Complex& v : values) {
    bool seen = false;
    // Sorted by real part: only the tail within tol can match.
    for (auto it = unique.rbegin(); it != unique.rend() && v.real() - it->real() <= tol; ++it) {
      if (std::abs(*it - v) <= tol) {
        seen = true;
        break;
      }
    }
    if (!seen) unique.push_back(v);
  }
  return unique;
}

}  // namespace

std::vector<Complex> many_body_spectrum(const std::vector<Complex>& rapidities,
                                        std::optional<int> max_excitations, ManyBodyRule rule,
                                        double dedup_tol) {
  if (!max_excitations && rapidities.size() > kMaxUnboundedModes) {
    std::ostringstream os;
    os << "many_body_spectrum: " << rapidities.size()
       << " modes without an excitation bound (limit " << kMaxUnboundedModes << ")";
    throw DomainError(os.str());
  }
  if (max_excitations && *max_excitations < 0) {
    throw DomainError("many_body_spectrum: max_excitations must be non-negative");
  }

  std::vector<Complex> slots;
  if (rule == ManyBodyRule::independent_subsets) {
    for (const Complex& l : rapidities) slots.push_back(-l);
    for (const Complex& l : rapidities) slots.push_back(-std::conj(l));
  } else {
    for (const Complex& l : rapidities) slots.push_back(-2.0 * l.real());
  }

  const int bound = max_excitations ? std::min<int>(*max_excitations, static_cast<int>(slots.size()))
                                    : static_cast<int>(slots.size());
  double count = 0.0;
  for (int m = 0; m <= bound; ++m) count += binomial(slots.size(), static_cast<std::size_t>(m));
  if (count > static_cast<double>(kMaxManyBodyCandidates)) {
    std::ostringstream os;
    os << "many_body_spectrum: " << count << " candidates exceed the limit of "
       << kMaxManyBodyCandidates << "; lower max_excitations";
    throw DomainError(os.str());
  }

  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  enumerate_subsets(slots, 0, bound, Complex{0.0, 0.0}, out);
  if (dedup_tol > 0.0) return deduplicate(std::move(out), dedup_tol);
  return out;
}

}  // namespace lindchain
