import math

import numpy as np
import pytest

from absnorm import (INF, ONE, TWO, InfinityNormExcluded, PSpace, check_asq_impossible,
                     check_lemma_infty, check_loh2, check_loh3, check_prop_loh,
                     check_sum_lasq_transfer, lasq_defect)
from absnorm.space import FSum
from absnorm.verify import lasq_transfer_bound

from conftest import L15, LINF_2, L2_2, P1

R1 = PSpace(2, 1)


@pytest.mark.parametrize("F", [ONE, TWO, INF, P1, L15], ids=repr)
def test_lemma_infty_passes(F):
    rep = check_lemma_infty(F)
    assert rep.verdict == "pass" and rep.worst_margin >= 0


def test_lemma_infty_p1_disagrees_with_both():
    assert P1(0.5, 0.75) != max(0.5, 0.75) and P1(0.5, 0.75) != 1.25


def test_lemma_infty_catches_a_fake():
    from absnorm.norm2 import AbsoluteNorm

    class Fake(AbsoluteNorm):
        # F(1,1) = 1 but not the max-norm elsewhere; not a norm
        def _eval(self, a, b):
            return np.where(np.isclose(a, b), np.maximum(a, b), a + b)

        def to_spec(self):
            return {"type": "fake"}

    rep = check_lemma_infty(Fake())
    assert rep.verdict == "fail" and rep.counterexample["norm"] == "max"
    assert rep.worst_margin < 0


def test_loh2_examples():
    assert ONE(1.3, 0.7) == 2 and 0.3 >= 0
    assert P1(1.7, 0.45) == pytest.approx(2) and P1.boundary(0.7) == pytest.approx(0.45)
    for F in (ONE, L15, TWO, INF, P1):
        rep = check_loh2(F)
        assert rep.verdict == "pass", rep


def test_loh2_qualifying_counts():
    assert check_loh2(ONE).details["qualifying"] == 10_000
    # only a = 1 qualifies for a strictly convex norm
    assert check_loh2(TWO).details["qualifying"] == 1
    assert check_loh2(P1).details["qualifying"] == 5000


@pytest.mark.parametrize("F, eps", [(TWO, 0.2), (ONE, 0.5), (P1, 0.1), (L15, 0.05),
                                    (INF, 0.1)], ids=["l2", "l1", "P1", "l1.5", "linf"])
def test_loh3(F, eps):
    rep = check_loh3(F, eps)
    assert rep.verdict == "pass" and rep.worst_margin >= 0


def test_loh3_rejects_eps():
    with pytest.raises(ValueError):
        check_loh3(TWO, 0)


def test_loh3_doubling_never_flips():
    for F in (TWO, P1):
        assert check_loh3(F, 0.1, 5000).verdict == check_loh3(F, 0.1, 10_000).verdict == "pass"


def test_prop_loh_linf():
    rep = check_prop_loh(LINF_2, LINF_2, TWO, 0.2, resolution=40_000)
    assert rep.verdict == "pass"
    g = rep.details["global"]
    assert g["m_sum"][1] < g["threshold"]


def test_prop_loh_real_line():
    rep = check_prop_loh(R1, LINF_2, TWO, 0.2)
    assert rep.verdict == "pass"
    assert rep.details["global"]["m_X"] == [0.0, 0.0]


def test_prop_loh_l1_vacuous():
    rep = check_prop_loh(LINF_2, LINF_2, ONE, 0.2, resolution=2000)
    assert rep.verdict == "vacuous"


def test_prop_loh_dim_cap():
    with pytest.raises(ValueError):
        check_prop_loh(PSpace(2, 3), LINF_2, TWO, 0.2)


def test_lasq_transfer_examples():
    rep = check_sum_lasq_transfer(LINF_2, LINF_2, TWO)
    assert rep.verdict == "pass" and rep.details["g"] > 0
    rep = check_sum_lasq_transfer(L2_2, L2_2, ONE, mu=0.4)
    assert rep.verdict == "pass"
    assert rep.details["g"] == lasq_transfer_bound(ONE, 0.4)
    with pytest.raises(InfinityNormExcluded):
        check_sum_lasq_transfer(LINF_2, LINF_2, INF)


def test_lasq_transfer_oracle_sum_defect():
    # oracle: the certified defect of the 4-dim sum sits above g
    rep = check_sum_lasq_transfer(LINF_2, LINF_2, TWO, resolution=40_000)
    sum_def = lasq_defect(FSum(LINF_2, LINF_2, TWO), 40_000, 256)
    assert sum_def.lasq_defect_upper >= rep.details["g"]


def test_lasq_transfer_vacuous_when_mu_too_big():
    rep = check_sum_lasq_transfer(L2_2, L2_2, ONE, mu=0.9)
    assert rep.verdict == "vacuous"


@pytest.mark.parametrize("F", [ONE, TWO, P1], ids=repr)
def test_asq_impossible(F):
    rep = check_asq_impossible(LINF_2, LINF_2, F, resolution=5000, xy_resolution=64)
    assert rep.verdict == "pass"


def test_asq_impossible_refuses_max_norm():
    with pytest.raises(InfinityNormExcluded):
        check_asq_impossible(LINF_2, LINF_2, INF)
    # the refusal is warranted: (x, 0) and (0, y) are a square pair for the max-norm
    Z = FSum(LINF_2, LINF_2, INF)
    assert Z([1, 0, 1, 0]) == Z([1, 0, -1, 0]) == 1


def test_asq_oracle_exhaustive_coarse():
    # oracle: brute-force triple loop on a coarse grid
    from absnorm.geometry import asq_obstruction
    from absnorm.sampling import sphere_cover

    F = TWO
    delta = asq_obstruction(F)
    Z = FSum(LINF_2, LINF_2, F)
    zs = sphere_cover(Z.norm, 4, 600).points
    xs = sphere_cover(LINF_2.norm, 2, 16).points
    worst = np.inf
    for x in xs:
        for y in xs:
            u, v = zs[:, :2], zs[:, 2:]
            q = np.max([F(LINF_2.norm(x + u), LINF_2.norm(v)),
                        F(LINF_2.norm(x - u), LINF_2.norm(v)),
                        F(LINF_2.norm(u), LINF_2.norm(y + v)),
                        F(LINF_2.norm(u), LINF_2.norm(y - v))], axis=0)
            worst = min(worst, q.min())
    rep = check_asq_impossible(LINF_2, LINF_2, F, resolution=600, xy_resolution=16)
    assert rep.details["min_max_quantity"] == pytest.approx(worst, abs=1e-12)
    assert worst > 1 + delta


def test_determinism():
    a = check_prop_loh(R1, LINF_2, TWO, 0.2, resolution=5000).to_dict()
    b = check_prop_loh(R1, LINF_2, TWO, 0.2, resolution=5000).to_dict()
    assert a == b
