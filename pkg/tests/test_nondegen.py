import numpy as np
import pytest

from oscillab.nondegen import (
    SearchOptions,
    check_C_nondegenerate,
    check_R_nondegenerate,
)
from oscillab.poly import parse

OPTS = SearchOptions(starts=40, seed=0)


def test_diagonal_quartic_is_likely_nondegenerate():
    verdict = check_R_nondegenerate(parse("x1^4 + x2^4", 2), OPTS)
    assert not verdict.degenerate
    assert verdict.witness is None
    assert verdict.status == "likely-nondegenerate"


def test_squared_difference_is_degenerate_with_witness():
    f = parse("(x1 - x2)^2 + x1^4 + x2^4", 2)
    verdict = check_R_nondegenerate(f, OPTS)
    assert verdict.degenerate
    assert verdict.residual < 1e-12
    x1, x2 = verdict.witness
    # the witness sits on the line x1 = x2, away from the axes
    assert x1 == pytest.approx(x2, rel=1e-5)
    assert min(abs(x1), abs(x2)) > 0.05
    # it really kills the face gradient
    fsig = f.restrict_to_weights(verdict.face.weights, 1)
    grads = [fsig.partial(i).evaluate([x1, x2]) for i in (1, 2)]
    assert sum(g * g for g in grads) < 1e-10


def test_real_versus_complex_verdicts_can_differ():
    # Sum of a square and high-order diagonal terms: no real torus critical
    # point on the principal face, but x2 = +/- i*x1 gives a complex one.
    f = parse("(x1^2 + x2^2)^2 + x1^6 + x2^6", 2)
    assert not check_R_nondegenerate(f, OPTS).degenerate
    cverdict = check_C_nondegenerate(f, SearchOptions(starts=80, seed=0))
    assert cverdict.degenerate
    z1, z2 = cverdict.witness
    assert abs(z1**2 + z2**2) < 1e-5


def test_three_variable_quartic_real_nondegenerate_complex_degenerate():
    f = parse("(x1^2 + x2^2 + x3^2)^2 + x1^6 + x2^6 + x3^6", 3)
    assert not check_R_nondegenerate(f, OPTS).degenerate
    cverdict = check_C_nondegenerate(f, SearchOptions(starts=120, seed=0))
    assert cverdict.degenerate
    # the witness kills the gradient of the face polynomial of its own face
    z = list(cverdict.witness)
    fsig = f.restrict_to_weights(cverdict.face.weights, 1)
    grads = [fsig.partial(i).evaluate(z) for i in (1, 2, 3)]
    assert sum(abs(g) ** 2 for g in grads) < 1e-10
    assert min(abs(zi) for zi in z) > 0.05


def test_requires_convenient():
    with pytest.raises(ValueError):
        check_R_nondegenerate(parse("x1*x2", 2), OPTS)


def test_seed_determinism():
    f = parse("(x1 - x2)^2 + x1^4 + x2^4", 2)
    a = check_R_nondegenerate(f, SearchOptions(starts=20, seed=7))
    b = check_R_nondegenerate(f, SearchOptions(starts=20, seed=7))
    assert a.witness == b.witness
    assert a.residual == b.residual
