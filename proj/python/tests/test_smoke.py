from fractions import Fraction

import numpy as np
import pytest

import lyapkit

HALVING = """\
space euclidean 1
timeline discrete
matrix
  row 1/2
point origin 0
observable dist0 distance origin
observable xsq quadratic
  row 1
"""

DOUBLING = """\
space euclidean 1
timeline discrete
matrix
  row 2
point origin 0
"""

CHAIN = """\
space finite 3
  row 0 1 2
  row 1 0 1
  row 2 1 0
timeline discrete
map 0 0 1
point base 0
observable d0 distance 0
"""

IDENTITY_DELTA = """\
certificate delta
x-star 0
grid 1 2
delta
  point 1 1
  left 1
  right 1
scope {scope}
"""

SAMPLED_SCOPE = """sampled
  horizon steps 8
  states 48
  seed 17
  box 4
"""


def test_system_parsing_and_observation():
    sys = lyapkit.System.from_text(HALVING)
    assert not sys.is_finite
    assert sys.state_count is None
    assert "xsq" in sys.observable_names
    assert sys.point("origin") == [Fraction(0)]
    assert sys.observe("xsq", [3]) == Fraction(9)
    assert sys.evolve([3], "2") == [Fraction(3, 4)]

    reparsed = lyapkit.System.from_text(sys.text)
    assert reparsed.observe("dist0", [Fraction(-3, 2)]) == Fraction(3, 2)


def test_finite_checks_are_proved():
    chain = lyapkit.System.from_text(CHAIN)
    assert chain.is_finite and chain.state_count == 3
    v = lyapkit.check_monovariant(chain, "d0", "decreasing")
    assert v.proved and bool(v)
    assert lyapkit.check_monovariant(chain, "d0", "increasing").passed is False

    assert lyapkit.check_attractor(chain, "base").proved
    assert lyapkit.is_equilibrium(chain, 0).proved
    assert not lyapkit.is_equilibrium(chain, 2).passed


def test_delta_verification_and_witness():
    chain = lyapkit.System.from_text(CHAIN)
    cert = lyapkit.parse_certificate(
        IDENTITY_DELTA.format(scope="exact"), chain)
    assert isinstance(cert, lyapkit.DeltaCertificate)
    assert cert.grid == [Fraction(1), Fraction(2)]
    assert cert.delta(Fraction(3, 2)) == Fraction(3, 2)
    assert lyapkit.verify_delta(chain, cert).proved
    assert lyapkit.check_global(cert).passed

    doubling = lyapkit.System.from_text(DOUBLING)
    bad = lyapkit.parse_certificate(
        IDENTITY_DELTA.format(scope=SAMPLED_SCOPE), doubling)
    v = lyapkit.verify_delta(doubling, bad)
    assert v.passed is False and v.outcome == "FAIL"
    assert v.witness is not None
    assert v.witness["epsilon"] is not None
    assert v.witness["time"] is not None


def test_certificate_pipeline_on_finite_system():
    chain = lyapkit.System.from_text(CHAIN)
    dc = lyapkit.parse_certificate(IDENTITY_DELTA.format(scope="exact"), chain)

    lc = lyapkit.converse_construct(chain, dc)
    assert lyapkit.verify_lyapunov(chain, lc).proved
    assert lc.member(chain, 1, 0)
    assert lc.value(chain, 0) <= Fraction(1)

    back = lyapkit.delta_from_lyapunov(lc)
    assert lyapkit.verify_delta(chain, back).proved

    f = lyapkit.factorize(chain, dc)
    assert lyapkit.verify_factorization(chain, f).proved
    squashed = lyapkit.compose_factorization(f)
    for g in dc.grid:
        assert squashed.delta(g) == dc.delta(g)

    text = dc.text(chain)
    assert text.startswith("certificate delta")
    again = lyapkit.parse_certificate(text, chain)
    assert again.grid == dc.grid


def test_quadratic_layer_with_numpy():
    p = lyapkit.solve_discrete_lyapunov(0.5 * np.eye(2), np.eye(2))
    assert np.max(np.abs(p - (4.0 / 3.0) * np.eye(2))) < 1e-10

    sys = lyapkit.System.from_text(
        "space euclidean 2\ntimeline discrete\nmatrix\n"
        "  row 1/2 0\n  row 0 1/2\n")
    lc = lyapkit.quadratic_to_lyapunov(
        sys, np.diag([1.0, 4.0]), [1, 4, 16],
        lyapkit.Scope.sampled(steps=6, states=32, seed=9))
    dc = lyapkit.delta_from_lyapunov(lc)
    assert abs(float(dc.delta(2)) - 1.0) < 1e-10
    v = lyapkit.verify_delta(sys, dc)
    assert v.passed and v.outcome == "SAMPLED"

    assert lyapkit.check_common_quadratic(sys, np.eye(2)).passed


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError, match="line"):
        lyapkit.System.from_text("space bogus\n")
    with pytest.raises(ArithmeticError):
        lyapkit.solve_discrete_lyapunov(np.eye(2), np.eye(2))
    chain = lyapkit.System.from_text(CHAIN)
    with pytest.raises(KeyError):
        chain.observe("missing", 0)
