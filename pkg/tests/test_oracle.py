from fractions import Fraction

import mpmath
import pytest

from rzeta.digitset import DigitSet
from rzeta.errors import DomainError
from rzeta.oracle import (
    Bracket,
    double_precision_closed_form_demo,
    eta_weights,
    restricted_sum_bracket,
    zeta_reference,
)

HP = mpmath.MPContext()
HP.dps = 120


def test_eta_weights_are_integers_ending_in_known_value():
    d = eta_weights(5)
    assert d[0] == 1 and all(a < b for a, b in zip(d, d[1:]))
    # d_n = sum of the Chebyshev coefficients, known closed forms for small n
    assert eta_weights(1) == [1, 3]
    assert eta_weights(2) == [1, 9, 17]


def test_classical_values():
    assert abs(zeta_reference(2, 100) - HP.pi**2 / 6) < HP.mpf(10) ** -100
    assert abs(zeta_reference(4, 100) - HP.pi**4 / 90) < HP.mpf(10) ** -100


@pytest.mark.parametrize("s", ["1.01", "3", "2+20i", "5-3i"])
def test_against_mpmath(s):
    z = zeta_reference(s, 50)
    mp = mpmath.MPContext()
    mp.dps = 70
    sigma, _, t = s.partition("+") if "+" in s else s.partition("-")
    val = mp.mpc(mp.mpf(sigma), (mp.mpf(t[:-1]) if t else 0) * (1 if "+" in s else -1))
    want = mp.zeta(val)
    assert abs(z - want) < mp.mpf(10) ** -50 * max(1, abs(want))


def test_self_consistency():
    for s in ("3", "1.5+7i"):
        assert abs(zeta_reference(s, 40) - zeta_reference(s, 80)) < HP.mpf(10) ** -40


def test_rejects_pole_region():
    for s in (1, "0.5", "1+3i"):
        with pytest.raises(DomainError):
            zeta_reference(s, 20)


def test_bracket_full_set_sigma2():
    br = restricted_sum_bracket(DigitSet.full(2), 2, 20)
    assert br.lower <= float(HP.pi**2 / 6) <= br.upper
    # geometric tail 2^-19 plus a rounding allowance far below it
    assert 2.0**-19 <= br.width <= 2.0**-19 + 1e-12


def test_bracket_no9():
    ds = DigitSet(10, tuple(range(9)))
    br = restricted_sum_bracket(ds, 1, 7)
    assert br.lower <= 22.920676619264150 <= br.upper
    tail = 8 * 0.9**7 / 0.1
    assert br.width == pytest.approx(tail, rel=1e-6)


def test_bracket_singleton_lower_value():
    br = restricted_sum_bracket(DigitSet(10, (1,)), 1, 4)
    assert br.lower == pytest.approx(1 + 1 / 11 + 1 / 111 + 1 / 1111, rel=1e-14)


def test_bracket_width_shrinks_geometrically():
    ds = DigitSet(10, (1, 3, 7))
    w = [restricted_sum_bracket(ds, Fraction(3, 2), L).width for L in (3, 4, 5, 6)]
    rho = 3 / 10**1.5
    for a, b in zip(w, w[1:]):
        assert b / a == pytest.approx(rho, rel=1e-3)


def test_bracket_rejects_divergent():
    with pytest.raises(DomainError):
        restricted_sum_bracket(DigitSet.full(10), 1, 3)
    with pytest.raises(ValueError):
        Bracket(2.0, 1.0)


def test_closed_form_demo():
    cf2, rec2 = double_precision_closed_form_demo(2, 3, 2)
    assert cf2 < 1e-12 and rec2 < 1e-12
    cf30, rec30 = double_precision_closed_form_demo(2, 3, 30)
    assert cf30 > 1e3 * rec30
    cf40, rec40 = double_precision_closed_form_demo(2, 3, 40)
    assert cf40 > 1e3 * rec40
    errs = [double_precision_closed_form_demo(2, 3, m)[0] for m in (10, 20, 30, 40)]
    assert errs == sorted(errs)
