from fractions import Fraction

import pytest

from transym.cartan import build_cartan
from transym.dgbv import (DGBVError, basic_dgbv, bracket, cartan_dgbv,
                          equivariant_niceness, frobenius_potential,
                          pairing_and_niceness, perturb_potential,
                          quasi_iso_check, verify_gbv, verify_integral,
                          wdvv_check)
from transym.foliation import build, trivial_action
from transym.gca import parse_expression
from transym.hodge import basic_cohomology
from transym.linalg import LinearOp
from transym.series import TSeries, integrate_family, t_derivative


def test_series_arithmetic():
    par = (0, 1, 1)
    s = TSeries({(1, 1, 0): Fraction(2)})
    t = TSeries({(0, 0, 1): Fraction(3)})
    p = s.mul(t, par)
    assert p.coefficient((1, 1, 1)) == 6
    # odd squares vanish
    assert t.mul(t, par).is_zero()
    # anticommutativity of odd coordinates
    u = TSeries({(0, 1, 0): Fraction(1)})
    v = TSeries({(0, 0, 1): Fraction(1)})
    assert u.mul(v, par) == v.mul(u, par).scale(-1)


def test_series_integration_round_trip():
    par = (0, 1, 1)
    phi = TSeries({(2, 1, 1): Fraction(5), (3, 0, 0): Fraction(1)})
    fam = [t_derivative(phi, a, par) for a in range(3)]
    back = integrate_family(fam, 3, par, 4)
    assert back == phi


def test_bracket_unit_and_torus():
    d1 = basic_dgbv(build("torus1"))
    unit = (Fraction(1),)
    for k in d1.space.degrees:
        for i in range(d1.space.dim(k)):
            v = tuple(Fraction(1 if j == i else 0)
                      for j in range(d1.space.dim(k)))
            out = bracket(d1, 0, unit, k, v)
            assert not out or all(x == 0 for x in out)


def test_bracket_poisson_oracle():
    # [dx1 • y1] recovers the Poisson pairing of the coordinate
    # functions: with Pi = -W^{-1} the frozen convention gives -1
    tl = build("trunc_linear_1_4")
    dl = basic_dgbv(tl)
    b = tl.basic
    dx = b.generator("dx1").vector(1)
    y = b.generator("y1").vector(0)
    out = bracket(dl, 1, dx, 0, y)
    elem = b.element_from_vector(0, out)
    assert elem == b.unit().scale(-1)


@pytest.mark.parametrize("name", ["torus1", "torus2", "heisenberg5",
                                  "cosym5", "trunc_linear_1_4"])
def test_verify_gbv(name):
    data = basic_dgbv(build(name))
    rep = verify_gbv(data)
    assert rep.passed, [f.name for f in rep.failures()]
    assert any("exhaustive" in n for n in rep.notes)


def test_corrupted_delta_fails_with_witness():
    # d = 0 on the other shipped basic complexes makes delta vanish, so
    # the truncated linear model is the one with a live delta to corrupt
    data = basic_dgbv(build("trunc_linear_1_4"))
    blocks = {k: [list(row) for row in data.delta.block(k)]
              for k in data.space.degrees}
    flipped = False
    for k in sorted(blocks):
        for row in blocks[k]:
            for j, x in enumerate(row):
                if x != 0:
                    row[j] = -x
                    flipped = True
                    break
            if flipped:
                break
        if flipped:
            break
    assert flipped
    data.delta = LinearOp(
        data.space, data.space, -1,
        {k: tuple(tuple(r) for r in b) for k, b in blocks.items()})
    rep = verify_gbv(data)
    assert not rep.passed
    assert any("triple" in (f.witness or "") for f in rep.failures())


@pytest.mark.parametrize("name", ["torus1", "torus2", "heisenberg5",
                                  "cosym5", "trunc_linear_1_4"])
def test_integral_axioms(name):
    rep = verify_integral(basic_dgbv(build(name)))
    assert rep.passed, [f.name for f in rep.failures()]


def test_pairing_niceness_and_radical():
    for name in ("torus1", "torus2", "heisenberg5"):
        verdict = pairing_and_niceness(basic_dgbv(build(name)))
        assert verdict.nondegenerate, name
        assert not verdict.notes
    # torus1 H^0 x H^2 pairing is the 1x1 identity
    v1 = pairing_and_niceness(basic_dgbv(build("torus1")))
    assert v1.matrices[(0, 2)] == ((Fraction(1),),)
    # chi := 0 gives a degenerate pairing with a radical vector
    data = basic_dgbv(build("heisenberg5"))
    data.integral_fn = lambda k, v: Fraction(0)
    verdict = pairing_and_niceness(data)
    assert not verdict.nondegenerate
    assert verdict.radical is not None


def test_heisenberg5_h1_h3_pairing_nondegenerate():
    verdict = pairing_and_niceness(basic_dgbv(build("heisenberg5")))
    m = verdict.matrices[(1, 3)]
    assert len(m) == 4 and len(m[0]) == 4
    from transym.linalg import nullspace
    assert nullspace(m, 4) == ()


def test_quasi_isomorphisms():
    for name in ("torus1", "heisenberg5"):
        rep = quasi_iso_check(basic_dgbv(build(name)))
        assert rep.passed, [f.name for f in rep.failures()]


def test_frobenius_torus1_pure_cubic():
    data = basic_dgbv(build("torus1"))
    pot = frobenius_potential(data, 4)
    assert pot.phi == TSeries({(1, 1, 1, 0): Fraction(1),
                               (2, 0, 0, 1): Fraction(1, 2)})
    assert wdvv_check(pot, 4).passed


def test_frobenius_heisenberg5_cubic_oracle():
    model = build("heisenberg5")
    data = basic_dgbv(model)
    pot = frobenius_potential(data, 3)
    coh = basic_cohomology(model)
    # locate the class of e3^e4 in H^2 and the classes of e1, e2 in H^1
    basic = model.basic
    e34 = parse_expression("e3^e4", basic).vector(2)
    cc = coh.class_coords(2, e34)
    off1 = 1  # H^0 has dimension 1, H^1 classes start at coordinate 1
    off2 = off1 + coh.dim(1)
    got = Fraction(0)
    for j, c in enumerate(cc):
        got += c * pot.third_partial(off1 + 0, off1 + 1,
                                     off2 + j).coefficient((0,) * 16)
    want = model.integral(parse_expression("e1^e2^e3^e4", basic))
    assert want == 1
    assert got == want


def test_wdvv_perturbation_detected():
    pot = frobenius_potential(basic_dgbv(build("torus1")), 4)
    bad = perturb_potential(pot, (2, 0, 0, 1))
    rep = wdvv_check(bad, 4)
    assert not rep.passed
    assert "quadruple" in rep.failures()[0].witness


def test_equivariant_carrier():
    cx = build_cartan(trivial_action(build("heisenberg5")), 2)
    data = cartan_dgbv(cx)
    assert verify_gbv(data).passed
    assert verify_integral(data).passed
    # S(g*)-linearity: u^1 (x) (top basic form) integrates to u^1
    k, off = cx.offsets[(1, 4)]
    v = [Fraction(0)] * cx.space.dim(k)
    v[off] = Fraction(1)
    assert data.integral_fn(k, tuple(v)) == {(1,): Fraction(1)}
    assert equivariant_niceness(cx).passed
