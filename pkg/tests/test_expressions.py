import cmath
import math

import pytest

from diskflow.errors import ExpressionSyntaxError, SingularEvaluationError
from diskflow.expr import (
    berkson_porta_p,
    boundary_limit,
    compile_expr,
    differentiate,
    evaluate,
    parse,
    validate_generator,
)

POINTS = [0.3 + 0.1j, -0.4 - 0.25j, 0.05j, 0.6]


def test_evaluate_basic():
    f = parse("i*(1-z)^2")
    assert evaluate(f, 0.5) == pytest.approx(0.25j)
    assert evaluate(parse("2+3*z"), 1j) == pytest.approx(2 + 3j)


def test_power_binds_tighter_than_unary_minus():
    assert evaluate(parse("-z^2"), 2.0) == pytest.approx(-4.0)


def test_roundtrip_through_printer():
    for text in (
        "i*(1-z)^2",
        "-(1-z)^2*sqrt((1+z)/(1-z))",
        "0.5*(z^2-1) + i*0.25*(1-z)^2",
        "exp(-(1+z)/(1-z))",
        "log(1-z)/(2-z)",
    ):
        node = parse(text)
        again = parse(str(node))
        for z in POINTS:
            assert evaluate(again, z) == pytest.approx(evaluate(node, z))


def test_differentiate_matches_finite_differences():
    h = 1e-6
    for text in (
        "i*(1-z)^2",
        "(1-z)^2*sqrt((1+z)/(1-z))",
        "exp(2*z)/(1+z)",
        "log(1-z) + z^3",
    ):
        node = parse(text)
        d = compile_expr(differentiate(node))
        g = compile_expr(node)
        for z in POINTS:
            fd = (g(z + h) - g(z - h)) / (2 * h)
            assert d(z) == pytest.approx(fd, abs=1e-7)


def test_compile_matches_evaluate():
    node = parse("(1-z)^2*(1+z)/(1+z^2)")
    fn = compile_expr(node)
    for z in POINTS:
        assert fn(z) == pytest.approx(evaluate(node, z))


def test_singular_evaluation_raises():
    fn = compile_expr(parse("1/(1-z)"))
    with pytest.raises(SingularEvaluationError):
        fn(1.0 + 0j)


def test_syntax_error_position():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("1+*z")
    assert info.value.position == 2


def test_syntax_error_at_end_of_input():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("2+")
    assert info.value.position == 1


def test_berkson_porta_quotient():
    p = berkson_porta_p(parse("i*(1-z)^2"))
    for z in POINTS:
        assert evaluate(p, z) == pytest.approx(-1j)


def test_validate_generator_verdicts():
    assert validate_generator(parse("i*(1-z)^2"))["is_generator"]
    assert validate_generator(parse("-(1-z)^2"))["is_generator"]
    report = validate_generator(parse("(1-z)^2"))
    assert not report["is_generator"]
    assert report["min_re_p"] < 0


def test_boundary_limit_radial():
    est = boundary_limit(parse("(1+z)/2"), "radial")
    assert est.converged and not est.infinite
    assert est.value == pytest.approx(1.0)


def test_boundary_limit_infinite():
    est = boundary_limit(parse("1/(1-z)"), "radial")
    assert est.infinite


def test_boundary_limit_stolz_ray():
    # (1-z)^0.5 -> 0 along any ray inside the disk
    est = boundary_limit(parse("(1-z)^0.5"), "stolz-ray(0.7)", tol=1e-4)
    assert est.converged
    assert abs(est.value) < 1e-3
    with pytest.raises(ValueError):
        boundary_limit(parse("z"), "stolz-ray(1.6)")


def test_boundary_limit_unknown_approach():
    with pytest.raises(ValueError):
        boundary_limit(parse("z"), "spiral")
