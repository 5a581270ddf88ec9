import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from absnorm import (INF, ONE, TWO, Extreme, InconsistentNorm, InfinityNormExcluded,
                     PNorm, Polygonal, asq_obstruction, classify_extremes, is_sc_point,
                     lasq2_modulus, loh3_modulus, positive_octahedrality, profile, r_of, swap)
from absnorm.geometry import EQ_TAU

from conftest import L15, L3, P1, NORMS, absolute_norms, inscribed_polygons


def test_classify_examples():
    assert classify_extremes(INF) is Extreme.INFINITY
    assert classify_extremes(ONE) is Extreme.ONE
    assert classify_extremes(TWO) is Extreme.NEITHER
    assert classify_extremes(P1) is Extreme.NEITHER


def test_classify_detects_inconsistency():
    class Liar(PNorm):
        def _eval(self, a, b):
            out = np.maximum(a, b) * 1.0
            return np.where((a == 1.0) & (b == 1.0), 2.0, out)

    with pytest.raises(InconsistentNorm):
        classify_extremes(Liar(2), 16)


def test_classify_needs_two_points():
    with pytest.raises(ValueError):
        classify_extremes(TWO, 1)


@pytest.mark.parametrize("name, expected", [
    ("l1", 0.0), ("l1.5", 1.0), ("l2", 1.0), ("l3", 1.0), ("linf", 1.0), ("P1", 0.5)])
def test_r_values(name, expected):
    F = NORMS[name]
    assert r_of(F) == pytest.approx(expected, abs=1e-6)
    assert r_of(F, exact=False) == pytest.approx(expected, abs=1e-6)


def test_r_oracle_dense_scan_p1():
    # oracle: first a on a dense grid with F(a + 1, f(a)) >= 2 - 1e-9
    a = np.linspace(0, 1, 200_001)
    ok = P1(a + 1, P1.boundary(a)) >= 2 - 1e-9
    assert a[np.argmax(ok)] == pytest.approx(0.5, abs=1e-5)
    assert P1(1.5, 0.75) == 2.0


def test_r_swapped_polygon():
    assert r_of(swap(P1)) == 0.75


def test_r_rejects_bad_tol():
    with pytest.raises(ValueError):
        r_of(TWO, 0)


def test_sc_examples():
    assert is_sc_point(TWO, (1, 0))
    assert not is_sc_point(ONE, (1, 0))
    assert not is_sc_point(P1, (1, 0))
    assert ONE(1 + 0, 0 + 1) == 2
    with pytest.raises(ValueError):
        is_sc_point(TWO, (0.5, 0.5))


def test_lasq2_examples():
    d = lasq2_modulus(ONE, 0.1)
    assert 0.04 <= d <= 0.1
    assert lasq2_modulus(TWO, 0.1) > 0
    with pytest.raises(InfinityNormExcluded):
        lasq2_modulus(INF, 0.1)
    with pytest.raises(ValueError):
        lasq2_modulus(TWO, 1.5)


@pytest.mark.parametrize("F", [ONE, L15, TWO, P1, swap(P1)], ids=repr)
def test_lasq2_certificate_on_dense_grid(F):
    eps = 0.1
    delta = lasq2_modulus(F, eps)
    a = np.linspace(0, 1, 100_001)
    f = F.boundary(a, 1e-13)
    bad = f < 1 - eps
    assert np.all(F(a[bad], 1.0) > 1 + delta)


def test_loh3_examples():
    assert loh3_modulus(TWO, 0.2) > 0
    d = loh3_modulus(ONE, 0.5)
    # sharp value 0.5, the corner bound halves it
    assert d == pytest.approx(0.25, abs=1e-12)
    assert loh3_modulus(P1, 0.1) > 0
    with pytest.raises(ValueError):
        loh3_modulus(TWO, 0)


@pytest.mark.parametrize("F, eps", [(TWO, 0.2), (ONE, 0.5), (P1, 0.1), (L3, 0.05)],
                         ids=["l2", "l1", "P1", "l3"])
def test_loh3_oracle_dense_2d_scan(F, eps):
    delta = loh3_modulus(F, eps)
    r = r_of(F)
    a = np.linspace(0, 1, 2001)[:, None]
    b = F.boundary(a, 1e-13)
    c = np.linspace(0, 1, 2001)[None, :] * np.minimum(1 + a, 1 + r - eps)
    assert np.max(F(c, b)) <= 2 - delta


def test_positive_octahedrality_examples():
    assert positive_octahedrality(ONE) == (1.0, 0.0)
    assert positive_octahedrality(INF) == (1.0, 1.0)
    assert positive_octahedrality(TWO) is None
    c, d = positive_octahedrality(P1)
    assert P1(c, d) == pytest.approx(1) and P1(c + 1, d) == pytest.approx(2)
    assert P1(c, d + 1) == pytest.approx(2)


def test_asq_obstruction_examples():
    with pytest.raises(InfinityNormExcluded):
        asq_obstruction(INF)
    eps2 = (1 - 1 / np.sqrt(2)) / 2
    assert asq_obstruction(TWO) == pytest.approx(
        min(lasq2_modulus(TWO, eps2), lasq2_modulus(swap(TWO), eps2)))
    assert asq_obstruction(ONE) == pytest.approx(
        min(lasq2_modulus(ONE, 0.25), lasq2_modulus(ONE, 0.25)))
    assert asq_obstruction(ONE) > 0


def _check_profile(F):
    tol = 1e-9
    p = profile(F, tol, resolution=1024)
    assert 1 - tol <= p.F11 <= 2 + tol
    assert (abs(p.rF - 1) <= 2 * tol) == (p.sc_at_10 or p.f_at_1 > tol)
    assert (abs(p.rF) <= 2 * tol) == (abs(p.F11 - 2) <= tol)
    if p.po_witness is not None:
        c, d = p.po_witness
        assert abs(F(c, d) - 1) <= tol
        assert abs(F(c + 1, d) - 2) <= tol and abs(F(c, d + 1) - 2) <= tol
    return p


def test_profile_invariants(any_norm):
    _check_profile(any_norm)


def test_profile_dict():
    d = profile(ONE).to_dict()
    assert d["class"] == "OneNorm" and d["rF"] == 0 and d["po"] == [1.0, 0.0]


@settings(max_examples=20, deadline=None)
@given(inscribed_polygons())
def test_polygon_r_paths_agree(F):
    assert abs(r_of(F) - r_of(F, exact=False)) <= 1e-6


@settings(max_examples=15, deadline=None)
@given(st.one_of(st.floats(1.0, 4.0).map(PNorm), inscribed_polygons()))
def test_profile_invariants_random(F):
    # beyond p = 4 the sphere is flatter near (1, 0) than the 1e-9 equality
    # threshold can resolve at the SC exclusion radius
    _check_profile(F)


def test_sc_threshold_floor_for_flat_norms():
    assert is_sc_point(PNorm(4), (1, 0))
    assert not is_sc_point(PNorm(6), (1, 0))


@settings(max_examples=20, deadline=None)
@given(absolute_norms(), st.floats(0.02, 0.9))
def test_lasq2_positive_and_bounded(F, eps):
    if classify_extremes(F, 32) is Extreme.INFINITY:
        return
    d = lasq2_modulus(F, eps)
    assert 0 < d <= 1


def test_r_timing():
    for F in (ONE, L15, TWO, L3, INF):
        t = time.perf_counter()
        r_of(F)
        assert time.perf_counter() - t < 1.0


def test_tau_is_strict():
    assert EQ_TAU == 1e-9
