import math

import numpy as np
import pytest

from odlro_lab.quadrature import adaptive_simpson, sine_product


@pytest.mark.parametrize("f,lo,hi,exact", [
    (np.sin, 0.0, math.pi, 2.0),
    (np.exp, 0.0, 1.0, math.e - 1),
    (lambda x: x**3, -1.0, 2.0, 3.75),
    (lambda x: np.sqrt(x), 0.0, 1.0, 2 / 3),
])
def test_known_integrals(f, lo, hi, exact):
    assert adaptive_simpson(f, lo, hi) == pytest.approx(exact, abs=1e-11)


def test_empty_interval():
    assert adaptive_simpson(np.sin, 0.3, 0.3) == 0.0


def test_reversed_interval_changes_sign():
    assert adaptive_simpson(np.cos, 1.0, 0.0) == pytest.approx(-math.sin(1.0), abs=1e-12)


def test_sine_product_orthonormal():
    assert adaptive_simpson(sine_product(3, 3), 0, 1) == pytest.approx(1.0, abs=1e-12)
    assert adaptive_simpson(sine_product(2, 5), 0, 1) == pytest.approx(0.0, abs=1e-12)
