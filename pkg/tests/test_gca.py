from fractions import Fraction

import pytest

from transym.gca import (ParseError, free_gca, install_differential,
                         parse_expression, render, verify_cdga)


def _torus2():
    alg = free_gca([(f"e{i}", 1) for i in range(1, 5)])
    install_differential(alg, {})
    return alg


def test_graded_commutativity_signs():
    alg = _torus2()
    e1, e2 = alg.generator("e1"), alg.generator("e2")
    assert alg.wedge(e1, e2) == alg.wedge(e2, e1).scale(-1)
    assert alg.wedge(e1, e1).is_zero()


def test_poly_truncation_ideal():
    alg = free_gca([("x", 0), ("dx", 1)], poly_cutoff=2)
    x = alg.generator("x")
    x2 = alg.wedge(x, x)
    assert not x2.is_zero()
    assert alg.wedge(x2, x).is_zero()  # poly degree 3 > cutoff


def test_parser_and_render_round_trip():
    alg = _torus2()
    for text in ("e1^e2 + 2*e3^e4", "1", "-3/2*e1", "e1^e2^e3^e4"):
        elem = parse_expression(text, alg)
        assert parse_expression(render(elem), alg) == elem


def test_parser_errors_carry_position():
    alg = _torus2()
    with pytest.raises(ParseError):
        parse_expression("e1 +", alg)
    with pytest.raises(ParseError):
        parse_expression("nosuch", alg)


def test_verify_cdga_passes_on_free_model():
    alg = free_gca([("x", 0), ("y", 0), ("dx", 1), ("dy", 1)],
                   poly_cutoff=3)
    install_differential(alg, {"x": alg.generator("dx"),
                               "y": alg.generator("dy")})
    rep = verify_cdga(alg)
    assert rep.passed, rep.failures()


def test_differential_squares_to_zero_detected():
    alg = free_gca([("a", 1), ("b", 1), ("c", 1)])
    # d(a) = b^c, d(b) = a^b  gives  d^2(a) = a^b^c != 0
    install_differential(alg, {
        "a": alg.wedge(alg.generator("b"), alg.generator("c")),
        "b": alg.wedge(alg.generator("a"), alg.generator("b"))})
    rep = verify_cdga(alg)
    assert not rep.passed
    assert any("d_squared" in f.name for f in rep.failures())
