import math
import warnings

import numpy as np
import pytest
from scipy.integrate import IntegrationWarning, quad

from discuniform.energy import lobachevsky


def lobachevsky_quadrature(x: float) -> float:
    """Adaptive quadrature of the defining integral; the independent oracle."""
    singular = [k * math.pi for k in range(-2, 3)]
    points = [p for p in singular if min(0.0, x) < p < max(0.0, x)]
    with warnings.catch_warnings():
        # the integrand's log singularities trip quad's convergence
        # heuristics; the returned estimates are good to ~1e-12 regardless
        warnings.simplefilter("ignore", IntegrationWarning)
        value, _ = quad(
            lambda t: -math.log(abs(2.0 * math.sin(t))),
            0.0,
            x,
            points=points or None,
            limit=400,
        )
    return value


def test_zeros():
    assert lobachevsky(0.0) == 0.0
    assert abs(lobachevsky(math.pi / 2)) < 1e-12
    assert abs(lobachevsky(math.pi)) < 1e-12
    assert abs(lobachevsky(-math.pi / 2)) < 1e-12


def test_against_quadrature_oracle():
    rng = np.random.default_rng(21)
    xs = rng.uniform(-math.pi, 2 * math.pi, 250)
    for x in xs:
        assert lobachevsky(float(x)) == pytest.approx(
            lobachevsky_quadrature(float(x)), abs=1e-10
        )


def test_odd_and_periodic():
    rng = np.random.default_rng(22)
    for x in rng.uniform(-10.0, 10.0, 500):
        x = float(x)
        assert lobachevsky(-x) == pytest.approx(-lobachevsky(x), abs=1e-12)
        assert lobachevsky(x + math.pi) == pytest.approx(lobachevsky(x), abs=1e-12)
        # reflection identity
        assert lobachevsky(math.pi - x) == pytest.approx(-lobachevsky(x), abs=1e-12)


def test_maximum_at_pi_over_6():
    peak = lobachevsky(math.pi / 6)
    assert peak == pytest.approx(lobachevsky_quadrature(math.pi / 6), abs=1e-10)
    assert peak == pytest.approx(0.5074708032048266, abs=1e-12)
    for delta in (1e-3, 1e-2, 0.1):
        assert lobachevsky(math.pi / 6 + delta) < peak
        assert lobachevsky(math.pi / 6 - delta) < peak
    # global bound over a dense sweep
    xs = np.linspace(-math.pi, 2 * math.pi, 4001)
    values = [abs(lobachevsky(float(x))) for x in xs]
    assert max(values) <= peak + 1e-14
