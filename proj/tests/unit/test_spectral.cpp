#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "lindchain/linalg.hpp"
#include "lindchain/model.hpp"
#include "lindchain/spectral.hpp"

using namespace lindchain;
using testutil::eig2;
using testutil::make_spec;
using testutil::max_abs;

namespace {

// Bloch block assembled directly from the real-space matrix, independent of
// the library's Bloch helpers.
Eigen::Matrix2cd block_from_real(const CMatrix& m, int n_cells, double k) {
  Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
  for (int d = 0; d < n_cells; ++d) b += m.block(0, 2 * d, 2, 2) * std::exp(kI * (k * d));
  return b;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("dispersion equals eigenvalues of the real-space Bloch block") {
  const int N = 16;
  for (double lambda : {0.1, 0.2, 0.35, 0.5}) {
    for (double eta : {0.15, 0.3, 0.5, 0.8}) {
      const ModelSpec spec = make_spec(N, lambda, eta);
      const CMatrix heff = build_operators(spec).h_eff();
      const DerivedParams p = derive_params(lambda, eta);
      for (double k : momentum_grid(N)) {
        const Eigen::Matrix2cd b = block_from_real(heff, N, k);
        const auto [a1, a2] = eig2(b(0, 0), b(0, 1), b(1, 0), b(1, 1));
        const auto [e1, e2] = dispersion_pbc(p, k);
        CHECK(multiset_distance({a1, a2}, {e1, e2}) < 1e-12);
        CHECK(max_abs(b - bloch_h_eff(spec, k)) < 1e-13);
      }
    }
  }
}

TEST_CASE("Hermitian line has a real dispersion") {
  const DerivedParams p = derive_params(0.5, 0.3);
  for (double k : testutil::linspace(-3.0, 3.1, 40)) {
    const auto [e1, e2] = dispersion_pbc(p, k);
    CHECK(std::abs(e1.imag()) < 1e-15);
    CHECK(std::abs(e2.imag()) < 1e-15);
    // SSH magnitude |w/2 - v/2 e^{ik}|.
    CHECK(std::abs(e1) == doctest::Approx(std::abs(0.5 * p.w - 0.5 * p.v * std::exp(kI * k))).epsilon(1e-13));
  }
}

TEST_CASE("near the eta = 0 limit the bands are flat and real at k = 0") {
  // X(0) = lambda (1 - lambda) > 0, so the square root is real.
  const DerivedParams p = derive_params(0.2, 1e-9);
  const auto [ep, em] = dispersion_pbc(p, 0.0);
  const double r = std::sqrt(0.2 * 0.8);
  CHECK(std::abs(ep - Complex(r, p.mu)) < 1e-8);
  CHECK(std::abs(em - Complex(-r, p.mu)) < 1e-8);
  for (double k : {-2.0, 1.0, 3.0}) CHECK(std::abs(dispersion_pbc(p, k).first - ep) < 1e-8);
}

TEST_CASE("slow branch touches zero decay at eta = 1/2, k = 0") {
  const auto [ep, em] = dispersion_pbc(derive_params(0.2, 0.5), 0.0);
  CHECK(std::max(ep.imag(), em.imag()) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("periodic numeric spectrum equals the dispersion multiset") {
  const int N = 100;
  const ModelSpec spec = make_spec(N, 0.2, 0.3);
  const auto numeric = spectrum_numeric(build_operators(spec).h_eff());
  std::vector<Complex> analytic;
  const DerivedParams p = derive_params(0.2, 0.3);
  for (int j = 0; j < N; ++j) {
    const auto [a, b] = dispersion_pbc(p, -M_PI + 2.0 * M_PI * j / N);
    analytic.push_back(a);
    analytic.push_back(b);
  }
  CHECK(multiset_distance(numeric, analytic) < 1e-10);
}

TEST_CASE("open chain spectrum differs from the periodic one") {
  const auto pbc = spectrum_numeric(build_operators(make_spec(100, 0.2, 0.3, Boundary::periodic)).h_eff());
  const auto obc = spectrum_numeric(build_operators(make_spec(100, 0.2, 0.3, Boundary::open)).h_eff());
  CHECK(hausdorff_distance(pbc, obc) > 0.05);
}

TEST_CASE("phase classification examples") {
  CHECK(classify_phase(0.5, 0.3) == PhaseClass::hermitian);
  CHECK(classify_phase(0.3, 0.3) == PhaseClass::exceptional);
  CHECK(classify_phase(0.3, 0.7) == PhaseClass::exceptional);
  const PhaseClass a = classify_phase(0.2, 0.3);
  const PhaseClass b = classify_phase(0.3, 0.2);
  CHECK(a != b);
  for (PhaseClass c : {a, b}) CHECK((c == PhaseClass::point_gapped || c == PhaseClass::line_gapped));
  CHECK(classify_phase(0.2, 1e-13) == PhaseClass::single_band);
  CHECK_THROWS_AS(classify_phase(0.0, 0.3), DomainError);
  CHECK_THROWS_AS(classify_phase(0.3, 1.2), DomainError);
}

TEST_CASE("classification is stable under grid refinement") {
  for (double l : testutil::linspace(0.05, 0.95, 10)) {
    for (double e : testutil::linspace(0.05, 0.95, 10)) {
      CHECK(classify_phase(l, e, 2048) == classify_phase(l, e, 8192));
    }
  }
}

TEST_CASE("gap examples") {
  const GapReport herm = analyze_spectrum(make_spec(20, 0.5, 0.3)).gap;
  CHECK(std::abs(herm.slow) < 1e-12);
  CHECK(std::abs(herm.fast) < 1e-12);
  CHECK(dispersion_gap(derive_params(0.2, 0.5), 4096).slow <= 1e-6);
  CHECK(dispersion_gap(derive_params(0.2, 0.3), 4096).slow > 0.01);
  CHECK_THROWS_AS(liouvillian_gap({}), DomainError);
  const GapReport g = liouvillian_gap({Complex(0.0, -0.1), Complex(1.0, -0.7)});
  CHECK(g.slow == doctest::Approx(0.1));
  CHECK(g.fast == doctest::Approx(0.7));
}

TEST_CASE("gap converges as the grid densifies") {
  const DerivedParams closing = derive_params(0.2, 0.5);
  CHECK(dispersion_gap(closing, 4096).slow <= dispersion_gap(closing, 64).slow + 1e-15);
  const DerivedParams open = derive_params(0.2, 0.3);
  CHECK(dispersion_gap(open, 8192).slow == doctest::Approx(dispersion_gap(open, 4096).slow).epsilon(1e-5));
}

TEST_CASE("rapidities") {
  const auto r = rapidities({Complex(0.0, 0.5)});
  CHECK(std::abs(r[0] - 0.5) < 1e-16);

  const OperatorSet ops = build_operators(make_spec(50, 0.2, 0.3));
  auto heff = spectrum_numeric(ops.h_eff());
  for (auto& e : heff) e = std::conj(e);
  CHECK(multiset_distance(spectrum_numeric(ops.D()), heff) < 1e-10);

  const SpectrumReport rep = analyze_spectrum(make_spec(50, 0.2, 0.3));
  for (const Complex& l : rep.rapidities) CHECK(l.real() >= -1e-12);

  for (const Complex& l : analyze_spectrum(make_spec(10, 0.5, 0.3)).rapidities) CHECK(std::abs(l.real()) < 1e-12);
}

TEST_CASE("numerical range bound on random draws") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> lam(0.01, 0.5);
  std::uniform_real_distribution<double> eta(0.01, 0.99);
  std::uniform_int_distribution<int> cells(1, 12);
  for (int draw = 0; draw < 40; ++draw) {
    const Boundary b = draw % 2 ? Boundary::open : Boundary::periodic;
    const int n = cells(gen) + (b == Boundary::periodic ? 1 : 0);
    const auto ev = spectrum_numeric(build_operators(make_spec(n, lam(gen), eta(gen), b)).h_eff());
    for (const Complex& e : ev) CHECK(e.imag() <= 1e-12);
  }
}

TEST_CASE("many-body candidates") {
  const std::vector<Complex> r = {Complex(0.3, 0.1), Complex(0.2, -0.4)};
  const auto mb = many_body_spectrum(r);
  CHECK(std::any_of(mb.begin(), mb.end(), [](Complex z) { return std::abs(z) < 1e-15; }));
  CHECK(mb.size() == 16);
  // |S| + |S'| <= 1: zero plus four single excitations.
  CHECK(many_body_spectrum(r, 1).size() == 5);
  CHECK(many_body_spectrum(r, std::nullopt, ManyBodyRule::conjugate_pairs).size() == 4);

  for (const Complex& z : many_body_spectrum(analyze_spectrum(make_spec(3, 0.5, 0.3)).rapidities, 3)) {
    CHECK(std::abs(z.real()) < 1e-12);
  }
  CHECK_THROWS_AS(many_body_spectrum(std::vector<Complex>(17, Complex(0.1, 0.0))), DomainError);
  CHECK_NOTHROW(many_body_spectrum(std::vector<Complex>(17, Complex(0.1, 0.0)), 2));
}

}  // TEST_SUITE
