"""Closed-form rates and the Bessel/quadrature machinery behind them."""

import io
import math

import mpmath
import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings, strategies as st

from aokr.theory import (
    QuadratureError,
    UnsupportedLevelError,
    bessel_j,
    bessel_j_row,
    diffusion_curve,
    diffusion_rate,
    diffusion_rate_with_noise,
    kick_strength_from_energy,
    noise_averaged_bessel,
    quantum_kick_strength,
    resonance_height,
    write_diffusion_curve,
)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Bessel evaluation against an independent arbitrary-precision oracle
# ---------------------------------------------------------------------------

def test_bessel_row_against_mpmath():
    mpmath.mp.dps = 30
    for x in (0.0, 1e-8, 0.5, 1.0, 3.77, 10.0, 25.3, 60.0):
        row = bessel_j_row(12, x)
        want = [float(mpmath.besselj(n, x)) for n in range(13)]
        assert np.max(np.abs(row - np.array(want))) < 1e-12


def test_bessel_scalar_signs():
    mpmath.mp.dps = 30
    for order in (-5, -2, -1, 0, 1, 3, 8):
        for x in (-7.3, -1.0, 0.0, 2.5, 11.0):
            want = float(mpmath.besselj(order, x))
            assert bessel_j(order, x) == pytest.approx(want, abs=1e-12)


def test_bessel_row_against_scipy():
    x = 17.9
    row = bessel_j_row(40, x)
    want = scipy.special.jn(np.arange(41), x)
    assert np.max(np.abs(row - want)) < 1e-12


def test_bessel_high_order_underflow_is_clean():
    row = bessel_j_row(200, 1.0)
    assert row[0] == pytest.approx(scipy.special.j0(1.0), abs=1e-13)
    assert np.all(np.isfinite(row))
    assert abs(row[200]) < 1e-300 or row[200] == 0.0


@settings(max_examples=50, deadline=None)
@given(x=st.floats(min_value=0.0, max_value=80.0))
def test_bessel_row_normalization(x):
    # J0 + 2 J2 + 2 J4 + ... = 1 for any argument
    row = bessel_j_row(int(x) + 40, x)
    total = row[0] + 2.0 * np.sum(row[2::2])
    assert total == pytest.approx(1.0, abs=1e-10)
    assert np.all(np.abs(row) <= 1.0 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(
    order=st.integers(min_value=-10, max_value=10),
    x=st.floats(min_value=-30.0, max_value=30.0),
)
def test_bessel_parity_relations(order, x):
    direct = bessel_j(order, x)
    assert bessel_j(-order, x) == pytest.approx((-1.0) ** order * direct, abs=1e-12)
    assert bessel_j(order, -x) == pytest.approx((-1.0) ** order * direct, abs=1e-12)


# ---------------------------------------------------------------------------
# effective kick strength and diffusion rates
# ---------------------------------------------------------------------------

def test_quantum_kick_strength_zeroes_at_resonance():
    kappa = 3.7 * TWO_PI
    assert abs(quantum_kick_strength(kappa, TWO_PI)) < 1e-12
    assert abs(quantum_kick_strength(kappa, 2.0 * TWO_PI)) < 1e-12


def test_quantum_kick_strength_classical_limit():
    # kappa fixed, hbar -> 0: quantum value approaches the bare strength
    assert quantum_kick_strength(5.0, 1e-6) == pytest.approx(5.0, rel=1e-9)


def test_diffusion_rate_quasilinear_at_large_strength():
    # correlation corrections decay like K^(-1/2), about 6% at K = 300
    kappa, hbar = 300.0, 1.0
    quasi = kappa**2 / (4.0 * hbar**2)
    assert diffusion_rate(kappa, hbar, "classical") == pytest.approx(quasi, rel=0.10)


def test_diffusion_rate_classical_vs_direct_formula():
    kappa, hbar = 5.0, TWO_PI
    j1, j2, j3 = (scipy.special.jn(n, kappa) for n in (1, 2, 3))
    want = 0.5 * (kappa / hbar) ** 2 * (0.5 - j2 - j1**2 + j2**2 + j3**2)
    assert diffusion_rate(kappa, hbar, "classical") == pytest.approx(want, rel=1e-12)


def test_diffusion_rate_quantum_uses_effective_strength():
    kappa, hbar = 5.0, 2.0
    keff = quantum_kick_strength(kappa, hbar)
    j1, j2, j3 = (scipy.special.jn(n, keff) for n in (1, 2, 3))
    want = 0.5 * (kappa / hbar) ** 2 * (0.5 - j2 - j1**2 + j2**2 + j3**2)
    assert diffusion_rate(kappa, hbar, "quantum") == pytest.approx(want, rel=1e-12)


def test_noise_averaged_bessel_reduces_to_plain():
    for n in (1, 2, 3):
        assert noise_averaged_bessel(n, 2.0, 0.0) == pytest.approx(
            scipy.special.jn(n, 2.0), abs=1e-12
        )
    assert noise_averaged_bessel(0, 0.0, 2.0) == 1.0
    assert noise_averaged_bessel(2, 0.0, 2.0) == 0.0


def test_noise_averaged_bessel_against_dense_quadrature():
    # independent fixed-order Gauss-Legendre on the same average
    for n, big_k, level in ((1, 0.5, 1.0), (2, 2.0, 2.0), (3, 5.0, 2.0), (2, -3.0, 1.0)):
        nodes, weights = np.polynomial.legendre.leggauss(256)
        vals = scipy.special.jn(n, big_k * (1.0 + 0.5 * level * nodes))
        want = float(np.sum(weights * vals) / 2.0)
        assert noise_averaged_bessel(n, big_k, level) == pytest.approx(want, abs=1e-9)


def test_noise_averaged_bessel_closed_form_order_one():
    # d(-J0)/dx = J1, so the level-2 average at K has the exact value
    # [J0(K(1 - L/2)) - J0(K(1 + L/2))] / (K L)
    want = (scipy.special.j0(0.0) - scipy.special.j0(10.0)) / 10.0
    assert noise_averaged_bessel(1, 5.0, 2.0) == pytest.approx(want, abs=1e-9)
    # and averaging shrinks |J1| well below its pointwise value here
    assert abs(want) < abs(scipy.special.j1(5.0))


def test_noisy_rate_identity_at_resonance():
    # at hbar = 2 pi the effective strength vanishes and only the
    # quasilinear-with-noise part survives: kappa^2 (1 + L^2/12) / (4 hbar^2)
    kappa = 3.7 * TWO_PI
    want = kappa**2 * (1.0 + 4.0 / 12.0) / (4.0 * TWO_PI**2)
    got = diffusion_rate_with_noise(kappa, TWO_PI, 2.0, "quantum")
    assert got == pytest.approx(want, abs=1e-12)
    assert got == pytest.approx(kappa**2 / (3.0 * TWO_PI**2), abs=1e-12)


def test_noisy_rate_reduces_to_clean_at_zero_level():
    kappa, hbar = 9.5, 3.1
    assert diffusion_rate_with_noise(kappa, hbar, 0.0, "classical") == pytest.approx(
        diffusion_rate(kappa, hbar, "classical"), rel=1e-12
    )


def test_rate_rejects_bad_inputs():
    with pytest.raises(ValueError):
        diffusion_rate(5.0, 0.0)
    with pytest.raises(ValueError):
        diffusion_rate(5.0, 1.0, "semiclassical")
    with pytest.raises(ValueError):
        diffusion_rate_with_noise(5.0, 1.0, 2.5)


# ---------------------------------------------------------------------------
# resonance peaks and inversion
# ---------------------------------------------------------------------------

def test_resonance_height_values():
    assert resonance_height(3.77, 30) == pytest.approx(0.25 * 3.77**2 * 30)
    assert resonance_height(3.77, 30, "quasilinear") == resonance_height(3.77, 30)
    assert resonance_height(3.77, 20, 2.0) == pytest.approx(3.77**2 * 20 / 3.0)
    with pytest.raises(UnsupportedLevelError):
        resonance_height(3.77, 20, 1.0)


def test_kick_strength_round_trip():
    for mode, level in (("quasilinear", 0.0), ("resonant-max-noise", 2.0)):
        energy = resonance_height(3.63, 20, level)
        assert kick_strength_from_energy(energy, 20, mode) == pytest.approx(3.63, rel=1e-12)
    with pytest.raises(ValueError):
        kick_strength_from_energy(10.0, 0)
    with pytest.raises(ValueError):
        kick_strength_from_energy(10.0, 20, "other")


def test_diffusion_curve_rows_and_csv():
    rows = diffusion_curve(3.7, [TWO_PI, 2 * TWO_PI], [0.0, 2.0])
    assert len(rows) == 4
    hbar0, level0, dc0, dq0 = rows[0]
    assert (hbar0, level0) == (TWO_PI, 0.0)
    assert dc0 == pytest.approx(diffusion_rate(3.7 * TWO_PI, TWO_PI, "classical"))
    assert dq0 == pytest.approx(diffusion_rate(3.7 * TWO_PI, TWO_PI, "quantum"))
    buf = io.StringIO()
    write_diffusion_curve(buf, 3.7, [TWO_PI], [0.0, 2.0])
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "hbar,level,d_classical,d_quantum"
    assert len(lines) == 3
    # repr round trip: parsing the text recovers the exact float
    first = [float(part) for part in lines[1].split(",")]
    assert first[0] == TWO_PI
