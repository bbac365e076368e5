import numpy as np
import pytest

from filippov.errors import (
    EvalDomainError,
    ExprSyntaxError,
    UnknownIdentifierError,
)
from filippov.expr import (
    BinOp,
    Call,
    Neg,
    Num,
    ScalarField,
    Var,
    VectorField,
    evaluate,
    format_expr,
    gradient_fd,
    jacobian_fd,
    parse_expr,
)

# expressions exercised throughout the suite; also the round-trip corpus
CORPUS = [
    "x1",
    "x1 + 2*x2^2",
    "-x1^2",
    "x1*x2 - x3/2",
    "sin(x1)*x2 + cos(x3)",
    "exp(-x1^2 - x2^2)",
    "sqrt(x1^2 + x2^2 + 1)",
    "abs(x1 - x2)",
    "2^3^2 - x1",
    "-(x1 + x2)*x3",
    "1.5e-3*x1 + 2.25",
    "x1^-2 + 1",
    "((x1))",
    "x1 - x2 - x3",
    "x1/(x2 + 10)/2",
]


def test_parse_single_variable():
    assert parse_expr("x1") == Var("x1")


def test_parse_precedence_example():
    tree = parse_expr("x1 + 2*x2^2")
    expected = BinOp("+", Var("x1"),
                     BinOp("*", Num(2.0), BinOp("^", Var("x2"), Num(2.0))))
    assert tree == expected


def test_parse_whitespace_insensitive():
    assert parse_expr(" x1+ x2 ") == parse_expr("x1+x2")


def test_power_right_associative():
    assert evaluate(parse_expr("2^3^2"), (0, 0, 0)) == 512.0


def test_unary_minus_binds_below_power():
    assert evaluate(parse_expr("-x1^2"), (2, 0, 0)) == -4.0
    assert evaluate(parse_expr("2*-3"), (0, 0, 0)) == -6.0


def test_unbalanced_paren_offset():
    with pytest.raises(ExprSyntaxError) as exc_info:
        parse_expr("sin(x3")
    assert exc_info.value.offset == 7
    assert '")"' in exc_info.value.expected


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError):
        parse_expr("x1 + y2")
    with pytest.raises(UnknownIdentifierError):
        parse_expr("tan(x1)")


def test_empty_and_trailing_garbage():
    with pytest.raises(ExprSyntaxError):
        parse_expr("")
    with pytest.raises(ExprSyntaxError):
        parse_expr("x1 x2")


def test_eval_examples():
    assert evaluate(parse_expr("x1+x2+x3"), (1, 2, 3)) == 6.0
    assert evaluate(parse_expr("x1*x2"), (0, 7, -1)) == 0.0


def test_eval_domain_errors():
    with pytest.raises(EvalDomainError):
        evaluate(parse_expr("1/x1"), (0, 0, 0))
    with pytest.raises(EvalDomainError):
        evaluate(parse_expr("sqrt(x1)"), (-1, 0, 0))
    with pytest.raises(EvalDomainError):
        evaluate(parse_expr("x1^0.5"), (-4, 0, 0))
    with pytest.raises(EvalDomainError):
        evaluate(parse_expr("exp(x1)"), (1e4, 0, 0))


def test_integer_power_of_negative_base_is_fine():
    assert evaluate(parse_expr("x1^2"), (-3, 0, 0)) == 9.0
    assert evaluate(parse_expr("x1^3"), (-2, 0, 0)) == -8.0


def test_no_silent_nan():
    # 0 * (1/x1) at x1=0 must error out, not propagate NaN
    with pytest.raises(EvalDomainError):
        evaluate(parse_expr("(1/x1)*x1"), (0, 0, 0))


@pytest.mark.parametrize("text", CORPUS)
def test_roundtrip_identical_tree(text):
    tree = parse_expr(text)
    assert parse_expr(format_expr(tree)) == tree


@pytest.mark.parametrize("text", CORPUS)
def test_roundtrip_eval_agreement(text):
    tree = parse_expr(text)
    reparsed = parse_expr(format_expr(tree))
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 100:
        point = rng.uniform(-3, 3, size=3)
        try:
            want = evaluate(tree, point)
        except EvalDomainError:
            continue
        assert evaluate(reparsed, point) == want
        checked += 1


def _random_tree(rng, depth):
    # literals are non-negative, as the parser produces (a leading minus
    # always parses as a Neg node)
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return Num(float(np.round(rng.uniform(0, 5), 3)))
        return Var(str(rng.choice(["x1", "x2", "x3"])))
    kind = rng.integers(0, 3)
    if kind == 0:
        return Neg(_random_tree(rng, depth - 1))
    if kind == 1:
        func = str(rng.choice(["sin", "cos", "exp", "sqrt", "abs"]))
        return Call(func, _random_tree(rng, depth - 1))
    op = str(rng.choice(["+", "-", "*", "/", "^"]))
    return BinOp(op, _random_tree(rng, depth - 1), _random_tree(rng, depth - 1))


def test_negative_literal_formats_with_parens():
    # not producible by the parser, but must stay semantically correct
    tree = BinOp("^", Num(-2.0), Num(2.0))
    assert evaluate(parse_expr(format_expr(tree)), (0, 0, 0)) == 4.0


def test_roundtrip_random_trees():
    rng = np.random.default_rng(0)
    for _ in range(300):
        tree = _random_tree(rng, 4)
        assert parse_expr(format_expr(tree)) == tree


# --------------------------------------------------------------------------
# finite differences
# --------------------------------------------------------------------------

def test_gradient_linear_exact():
    field = ScalarField.parse("x1")
    grad = gradient_fd(field, (0, 0, 0))
    assert np.max(np.abs(grad - [1, 0, 0])) <= 1e-9
    affine = ScalarField.parse("2*x1 - 3*x2 + 0.5*x3 + 7")
    grad = gradient_fd(affine, (0.3, -1.2, 4.0))
    assert np.max(np.abs(grad - [2, -3, 0.5])) <= 1e-9


def test_gradient_square():
    grad = gradient_fd(ScalarField.parse("x1^2"), (3, 0, 0))
    assert abs(grad[0] - 6.0) <= 1e-6 * 6.0


def test_gradient_product_vs_hand_derivative():
    # d/dx (sin(x1) x2) = (x2 cos x1, sin x1, 0); at (0, 2, 0) -> (2, 0, 0)
    grad = gradient_fd(ScalarField.parse("sin(x1)*x2"), (0, 2, 0))
    assert np.max(np.abs(grad - [2, 0, 0])) <= 1e-6


def test_gradient_domain_error_near_boundary():
    with pytest.raises(EvalDomainError):
        gradient_fd(ScalarField.parse("sqrt(x1)"), (0, 0, 0))


def test_jacobian_identity_and_shift():
    jac = jacobian_fd(VectorField.parse(["x1", "x2", "x3"]), (0.2, -0.4, 1.0))
    assert np.max(np.abs(jac - np.eye(3))) <= 1e-9
    jac = jacobian_fd(VectorField.parse(["x2", "x3", "0"]), (1, 2, 3))
    want = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0.0]])
    assert np.max(np.abs(jac - want)) <= 1e-9


# polynomial fields with hand-written Jacobians (the symbolic oracle)
_POLY_CASES = [
    (
        ["x1^2 + x2*x3", "x1*x2 - x3^2", "x2^3"],
        lambda x: np.array([
            [2 * x[0], x[2], x[1]],
            [x[1], x[0], -2 * x[2]],
            [0.0, 3 * x[1] ** 2, 0.0],
        ]),
    ),
    (
        ["x1*x2*x3", "x1^3 - x2", "x1 + x2^2*x3"],
        lambda x: np.array([
            [x[1] * x[2], x[0] * x[2], x[0] * x[1]],
            [3 * x[0] ** 2, -1.0, 0.0],
            [1.0, 2 * x[1] * x[2], x[1] ** 2],
        ]),
    ),
    (
        ["2*x1 - x3^3", "x2^2 + x1*x3", "x3"],
        lambda x: np.array([
            [2.0, 0.0, -3 * x[2] ** 2],
            [x[2], 2 * x[1], x[0]],
            [0.0, 0.0, 1.0],
        ]),
    ),
]


@pytest.mark.parametrize("exprs,jac_fn", _POLY_CASES)
def test_jacobian_polynomial_vs_symbolic(exprs, jac_fn):
    field = VectorField.parse(exprs)
    rng = np.random.default_rng(11)
    for _ in range(25):
        point = rng.uniform(-2, 2, size=3)
        want = jac_fn(point)
        got = jacobian_fd(field, point)
        scale = max(1.0, np.max(np.abs(want)))
        assert np.max(np.abs(got - want)) <= 1e-6 * scale


def test_fields_reject_bad_shapes():
    with pytest.raises(ValueError):
        VectorField.parse(["x1", "x2"])


def test_scalar_field_is_callable():
    f = ScalarField.parse("x1 + x2*x3")
    assert f((1.0, 2.0, 3.0)) == 7.0
    assert f(np.array([1.0, 2.0, 3.0])) == 7.0


def test_trees_are_hashable_and_reusable():
    tree = parse_expr("x1 + x2")
    assert hash(tree) == hash(parse_expr("x1 + x2"))
    assert evaluate(tree, (1, 1, 0)) == 2.0
    assert evaluate(tree, (2, 2, 0)) == 4.0
