import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grunskylab.bounds import (
    PHI,
    PSI,
    BoundObjective,
    DomainError,
    chain_slacks,
    maximize,
    phi,
    psi,
)
from grunskylab.coefficients import CoefficientError
from grunskylab.scan import CorpusSpec, build_corpus
from grunskylab.zoo import FamilySpec, realize

INV_SQRT5 = 1 / math.sqrt(5)
INV_SQRT7 = 1 / math.sqrt(7)


# ---- point evaluations ----------------------------------------------------

def test_phi_examples():
    assert phi(0, 0) == pytest.approx(0.4472135954999579, abs=1e-15)
    assert phi(1, 0) == pytest.approx(1 / 6, abs=1e-15)


@pytest.mark.parametrize("u", [0.25, 0.5, 0.75])
def test_phi_on_upper_edge_is_cubic(u):
    assert phi(u, math.sqrt((1 - u * u) / 3)) == pytest.approx(u**3 / 6, abs=1e-9)


def test_psi_examples():
    assert psi(0, 0) == pytest.approx(INV_SQRT7, abs=1e-15)
    assert psi(1, 0) == pytest.approx(1 / 12, abs=1e-15)
    assert psi(0, 1 / 3) == pytest.approx(1 / 6, abs=1e-15)


@pytest.mark.parametrize("point", [(1.1, 0.0), (-0.01, 0.0), (0.5, 0.6), (0.0, -0.1)])
def test_phi_rejects_outside(point):
    with pytest.raises(DomainError):
        phi(*point)


@pytest.mark.parametrize("point", [(1.2, 0.0), (0.5, 0.2), (0.0, 0.34)])
def test_psi_rejects_outside(point):
    with pytest.raises(DomainError):
        psi(*point)


def test_radicand_dust_is_clamped():
    # one ulp past the edge still evaluates
    v = math.sqrt(1 / 3) * (1 + 1e-15)
    assert phi(0.0, v) == pytest.approx(0.0, abs=1e-7)
    assert psi(0.0, 1 / 3 + 1e-14) == pytest.approx(1 / 6, abs=1e-12)


def test_membership_matches_inequalities():
    assert PHI.contains(0.5, math.sqrt(0.75 / 3))
    assert not PHI.contains(0.5, math.sqrt(0.75 / 3) + 1e-9)
    assert PSI.contains(0.25, 0.25)
    assert not PSI.contains(0.25, 0.25 + 1e-9)
    assert not PSI.contains(-1e-9, 0)


# ---- maximizer ------------------------------------------------------------

def test_maximize_phi():
    r = maximize("phi")
    assert r.value == pytest.approx(0.4472135955, abs=1e-6)
    assert math.hypot(*r.argmax) < 1e-3
    assert r.grid_step == pytest.approx(1e-9) and r.refinement_rounds == 6


def test_maximize_psi():
    r = maximize(PSI)
    assert r.value == pytest.approx(0.3779644730, abs=1e-6)
    assert r.argmax == (0.0, 0.0)


@pytest.mark.parametrize("obj", [PHI, PSI])
def test_max_result_invariants(obj):
    r = maximize(obj, 1e-2, 3)
    assert obj.contains(*r.argmax, tol=1e-12)
    assert abs(r.value - obj(np.array([r.argmax[0]]), np.array([r.argmax[1]]))[0]) <= 1e-14
    d = r.to_dict()
    assert d["refinement_rounds"] == 3 and len(d["argmax"]) == 2


def test_constant_objective_picks_lexicographic_corner():
    box = BoundObjective("box", lambda x, y: 0.0 * x + 2.5, lambda x: 0.0 * x + 0.5, 0.25, 0.75)
    r = maximize(box, 0.05, 2)
    assert r.value == 2.5
    assert r.argmax == (0.25, 0.0)


def test_off_axis_maximum_found():
    # peak at (0.3, 0.2) inside the triangle 0 <= y <= 1 - x
    tri = BoundObjective("bump", lambda x, y: -(x - 0.3) ** 2 - (y - 0.2) ** 2, lambda x: 1 - x)
    r = maximize(tri, 0.01, 4)
    assert abs(r.argmax[0] - 0.3) < 1e-5 and abs(r.argmax[1] - 0.2) < 1e-5


@pytest.mark.parametrize("step,rounds", [(0.0, 2), (0.2, 2), (1e-2, 0)])
def test_maximize_rejects_bad_arguments(step, rounds):
    with pytest.raises(ValueError):
        maximize(PHI, step, rounds)


@pytest.mark.parametrize("obj,bound", [(PHI, INV_SQRT5), (PSI, INV_SQRT7)])
@pytest.mark.parametrize("h", [0.1, 0.03, 1e-2, 3e-3])
def test_grid_certificate(obj, bound, h):
    xs = np.arange(0, 1 + h / 2, h)
    X, Y = np.meshgrid(xs, np.linspace(0, 1, xs.size), indexing="ij")
    Y = Y * obj.y_upper(X)
    assert np.max(obj(X, Y)) <= bound + 1e-9


def test_phi_edge_profiles():
    u = np.linspace(0, 1, 2001)
    assert abs(np.max(PHI(u, 0 * u)) - phi(0, 0)) <= 1e-9
    v = np.linspace(0, math.sqrt(1 / 3), 2001)
    assert np.all(np.diff(PHI(0 * v, v)) <= 0)


def test_phi_has_negative_v_slope_inside():
    h = 1e-3
    u, v = np.meshgrid(np.arange(h, 1, 7 * h), np.arange(2 * h, 0.6, 7 * h), indexing="ij")
    inside = v + h < PHI.y_upper(u)
    dq = (PHI(u, v + h) - PHI(u, v)) / h
    assert inside.sum() > 1000
    assert np.all(dq[inside] < 0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_objectives_below_constants(a, b):
    assert phi(a, b * math.sqrt((1 - a * a) / 3)) <= INV_SQRT5 + 1e-12
    assert psi(a, b * (1 - a) / 3) <= INV_SQRT7 + 1e-12


# ---- proof-chain audit ----------------------------------------------------

def test_chain_koebe():
    rep = chain_slacks(realize(FamilySpec("koebe"), 16))
    c1, c2 = rep.chain(1), rep.chain(2)
    assert c1[0].lhs == pytest.approx(-1 / 6, abs=1e-12)
    assert rep.min_slack >= -1e-15
    # both sides of the collapsed second difference equal |0 + 0 - 1/12|
    assert rep.equality_residuals[1] <= 1e-10
    by_name = {s.step.split(" <= ")[0]: s.lhs for s in c2}
    assert by_name["|g4-w11*g3|"] == pytest.approx(1 / 12, abs=1e-12)
    assert c1[-1].rhs == INV_SQRT5 and c2[-1].rhs == INV_SQRT7


def test_chain_identity():
    rep = chain_slacks(realize(FamilySpec("identity"), 16))
    for k, top in ((1, INV_SQRT5), (2, INV_SQRT7)):
        steps = rep.chain(k)
        # every modulus expression vanishes, so each slack is its right-hand side
        assert all(s.lhs == 0 and s.slack == s.rhs for s in steps[:-2])
        # the auxiliary function sits at its maximum at the origin
        assert steps[-1].lhs == pytest.approx(top, abs=1e-15)
        assert steps[-1].rhs == top
    assert rep.equality_residuals == (0.0, 0.0)


def test_chain_needs_order_16():
    with pytest.raises(CoefficientError, match="order >= 16"):
        chain_slacks(realize(FamilySpec("koebe"), 15))


def test_chain_on_corpus():
    worst = math.inf
    for fs in build_corpus(CorpusSpec().replace(order=16, n_max=4)):
        rep = chain_slacks(realize(fs, 16))
        worst = min(worst, rep.min_slack)
        assert max(rep.equality_residuals) <= 1e-10
        assert rep.chain(1)[-1].rhs == INV_SQRT5 and rep.chain(2)[-1].rhs == INV_SQRT7
    assert worst >= -1e-9


def test_chain_records_serialize():
    recs = chain_slacks(realize(FamilySpec("halfplane"), 16)).to_records()
    assert {r["chain"] for r in recs} == {1, 2}
    assert all(r["slack"] == r["rhs"] - r["lhs"] for r in recs)
