#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "lindchain/model.hpp"

using namespace lindchain;
using testutil::make_spec;
using testutil::max_abs;

TEST_SUITE("model") {

TEST_CASE("derived couplings by hand arithmetic") {
  const DerivedParams a = derive_params(0.2, 0.3);
  CHECK(a.t1 == doctest::Approx(0.56).epsilon(1e-15));
  CHECK(a.t2 == doctest::Approx(0.24).epsilon(1e-15));
  CHECK(a.t1p == doctest::Approx(0.14).epsilon(1e-15));
  CHECK(a.t2p == doctest::Approx(-0.06).epsilon(1e-15));
  CHECK(a.mu == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(a.gamma_A == doctest::Approx(0.42).epsilon(1e-15));
  CHECK(a.gamma_B == doctest::Approx(0.18).epsilon(1e-15));

  const DerivedParams b = derive_params(0.3, 0.2);
  CHECK(b.t1 == doctest::Approx(0.56).epsilon(1e-15));
  CHECK(b.t2 == doctest::Approx(0.14).epsilon(1e-15));
  CHECK(b.t1p == doctest::Approx(0.24).epsilon(1e-15));
  CHECK(b.t2p == doctest::Approx(-0.06).epsilon(1e-15));
  CHECK(b.mu == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(b.gamma_A == doctest::Approx(0.32).epsilon(1e-15));
  CHECK(b.gamma_B == doctest::Approx(0.08).epsilon(1e-15));
}

TEST_CASE("hermitian line has no loss") {
  const DerivedParams p = derive_params(0.5, 0.3);
  CHECK(p.gamma_A == 0.0);
  CHECK(p.gamma_B == 0.0);
  CHECK(p.mu == 0.0);
}

TEST_CASE("coupling identities over a grid") {
  for (double l = 0.05; l < 1.0; l += 0.1) {
    for (double e = 0.05; e < 1.0; e += 0.1) {
      const DerivedParams p = derive_params(l, e);
      CHECK(p.t1 + p.t1p == doctest::Approx(p.w).epsilon(1e-15));
      CHECK(p.t2 - p.t2p == doctest::Approx(p.v).epsilon(1e-15));
      CHECK(p.gamma_A + p.gamma_B == doctest::Approx(1.0 - 2.0 * l).epsilon(1e-14));
    }
  }
}

TEST_CASE("out-of-range parameters name the culprit") {
  CHECK_THROWS_WITH_AS(derive_params(0.0, 0.3), doctest::Contains("lambda"), DomainError);
  CHECK_THROWS_WITH_AS(derive_params(0.2, 1.0), doctest::Contains("eta"), DomainError);
  CHECK_THROWS_AS(derive_params(-0.1, 0.3), DomainError);
}

TEST_CASE("build_operators argument checks") {
  CHECK_THROWS_WITH_AS(build_operators(make_spec(2, 0.6, 0.3)), doctest::Contains("negative loss rates"), DomainError);
  CHECK_THROWS_AS(build_operators(make_spec(1, 0.2, 0.3, Boundary::periodic)), DomainError);
  CHECK_NOTHROW(build_operators(make_spec(1, 0.2, 0.3, Boundary::open)));
  // Spectral use is allowed above 1/2.
  CHECK_NOTHROW(effective_hamiltonian(make_spec(3, 0.8, 0.3)));
}

TEST_CASE("lossless operator set is Hermitian") {
  const OperatorSet ops = build_operators(make_spec(2, 0.5, 0.3));
  CHECK(max_abs(ops.K()) == 0.0);
  CHECK(max_abs(ops.h_eff() - ops.h()) == 0.0);
  CHECK(max_abs(ops.D() - ops.h().transpose()) == 0.0);
  CHECK(consistency_check(ops).max_defect() == 0.0);
}

TEST_CASE("single dimer under open boundary") {
  const OperatorSet ops = build_operators(make_spec(1, 0.2, 0.7, Boundary::open));
  REQUIRE(ops.jumps().size() == 1);
  const double gA = derive_params(0.2, 0.7).gamma_A;
  CMatrix expected(2, 2);
  expected << gA, -gA, -gA, gA;
  CHECK(max_abs(ops.K() - expected) < 1e-15);
}

TEST_CASE("h_eff hoppings carry i t1, i t1p, i t2, i t2p") {
  const ModelSpec spec = make_spec(2, 0.2, 0.3, Boundary::open);
  const OperatorSet ops = build_operators(spec);
  const DerivedParams p = derive_params(0.2, 0.3);
  const CMatrix& H = ops.h_eff();
  const Complex i{0.0, 1.0};
  // B0 <- A0, A0 <- B0, A1 <- B0, B0 <- A1 ; rows are the creation index.
  CHECK(std::abs(H(1, 0) - i * p.t1) < 1e-15);
  CHECK(std::abs(H(0, 1) + i * p.t1p) < 1e-15);  // sign as derived from the Lindblad data
  CHECK(std::abs(H(2, 1) - i * p.t2) < 1e-15);
  CHECK(std::abs(H(1, 2) - i * p.t2p) < 1e-15);
  // On-site i mu only where both jumps touch the site.
  CHECK(std::abs(H(1, 1) - i * p.mu) < 1e-15);
  CHECK(std::abs(H(2, 2) - i * p.mu) < 1e-15);
  // Open ends: A0 only sees L_A.
  CHECK(std::abs(H(0, 0) + 0.5 * i * p.gamma_A) < 1e-15);
}

TEST_CASE("K is positive semidefinite for loss-only parameters") {
  for (double l : {0.01, 0.2, 0.35, 0.5}) {
    for (double e : {0.1, 0.5, 0.9}) {
      for (Boundary b : {Boundary::periodic, Boundary::open}) {
        const OperatorSet ops = build_operators(make_spec(5, l, e, b));
        const ConsistencyReport r = consistency_check(ops);
        CHECK(r.k_min_eigenvalue >= -1e-12);
        CHECK(r.pass());
      }
    }
  }
}

TEST_CASE("consistency report on a large periodic chain") {
  const ConsistencyReport r = consistency_check(build_operators(make_spec(50, 0.2, 0.3)));
  CHECK(r.max_defect() <= 1e-13);
  CHECK(r.pass());
}

TEST_CASE("injected fault shows up in the report") {
  const OperatorSet ops = build_operators(make_spec(4, 0.2, 0.3));
  CMatrix bad = ops.h_eff();
  bad(3, 2) += 1e-6;
  const ConsistencyReport r = consistency_check(ops.with_h_eff(bad));
  CHECK(r.h_eff_defect == doctest::Approx(1e-6).epsilon(1e-6));
  CHECK(r.anti_hermitian_defect == doctest::Approx(5e-7).epsilon(1e-6));
  CHECK_FALSE(r.pass());
}

TEST_CASE("periodic operators are block circulant") {
  const int N = 5;
  const OperatorSet ops = build_operators(make_spec(N, 0.2, 0.3));
  for (const CMatrix* M : {&ops.h(), &ops.K(), &ops.h_eff(), &ops.D()}) {
    for (int n = 0; n < N; ++n) {
      for (int m = 0; m < N; ++m) {
        const CMatrix a = M->block(2 * n, 2 * m, 2, 2);
        const CMatrix b = M->block(0, 2 * (((m - n) % N + N) % N), 2, 2);
        CHECK(max_abs(a - b) < 1e-15);
      }
    }
  }
}

TEST_CASE("open chain equals periodic chain minus the wrap bond") {
  const int N = 4;
  const OperatorSet pbc = build_operators(make_spec(N, 0.2, 0.3, Boundary::periodic));
  const OperatorSet obc = build_operators(make_spec(N, 0.2, 0.3, Boundary::open));
  const int n = 2 * N;
  // Hopping: identical after removing the (B_{N-1}, A_0) bond.
  CMatrix h = pbc.h();
  h(0, n - 1) = 0.0;
  h(n - 1, 0) = 0.0;
  CHECK(max_abs(h - obc.h()) == 0.0);
  // Interior of K away from the wrap sites is unchanged.
  CHECK(max_abs(pbc.K().block(1, 1, n - 2, n - 2) - obc.K().block(1, 1, n - 2, n - 2)) < 1e-15);
}

TEST_CASE("boundary names") {
  CHECK(boundary_from_string("pbc") == Boundary::periodic);
  CHECK(boundary_from_string("open") == Boundary::open);
  CHECK_THROWS_AS(boundary_from_string("twisted"), DomainError);
  CHECK(to_string(Boundary::open) == "open");
}

}  // TEST_SUITE
