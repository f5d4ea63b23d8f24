import math

import numpy as np
import pytest

import lindchain as lc


def test_derived_params():
    p = lc.derive_params(0.2, 0.3)
    assert p.t1 == pytest.approx(0.56)
    assert p.t2p == pytest.approx(-0.06)
    assert p.mu == pytest.approx(-0.3)


def test_out_of_range_raises():
    with pytest.raises(ValueError):
        lc.derive_params(0.0, 0.3)


def test_operators_and_dispersion():
    spec = lc.ModelSpec(n_cells=8, lambda_=0.2, eta=0.3)
    ops = lc.build_operators(spec)
    assert ops.h_eff.shape == (16, 16)
    np.testing.assert_allclose(ops.h_eff, ops.h - 0.5j * ops.K, atol=1e-14)
    p = lc.derive_params(0.2, 0.5)
    plus, minus = lc.dispersion(p, 0.0)
    assert max(plus.imag, minus.imag) == pytest.approx(0.0, abs=1e-15)


def test_spectrum_report():
    r = lc.spectrum(lc.ModelSpec(n_cells=10, lambda_=0.2, eta=0.3))
    assert max(e.imag for e in r["eigenvalues"]) <= 1e-12
    assert r["gap_slow"] > 0
    assert lc.classify_phase(0.5, 0.3) == "hermitian"


def test_evolution_is_physical():
    spec = lc.ModelSpec(n_cells=6, lambda_=0.2, eta=0.3)
    c0 = lc.initial_correlator(spec, "half")
    assert np.trace(c0).real == pytest.approx(6.0)
    c = lc.evolve(spec, c0, 3.0)
    np.testing.assert_allclose(c, c.conj().T, atol=1e-12)
    ev = np.linalg.eigvalsh(c)
    assert ev.min() >= -1e-10 and ev.max() <= 1 + 1e-10
    assert lc.block_entropy(c, 6) >= 0.0


def test_two_site():
    d = lc.two_site(0.25, 1.0)
    assert d["concurrence"] == pytest.approx(math.exp(-1.0), abs=1e-12)
    assert d["rho"][1, 2] == pytest.approx(-math.exp(-1.0) / 2)


def test_msee_independent_of_interaction():
    a = lc.msee_short_time(1.0, 0.0, 0.1, [0.5], 1e-3)
    b = lc.msee_short_time(1.0, 0.6, 0.1, [0.5], 1e-3)
    assert a == b > 0
