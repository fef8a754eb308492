import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from engine.errors import InvalidDataError, MoveError, PatternError
from engine.exact_values import PI, GaussianRat, PowerProduct, Twist, UnitPhase
from engine.gamma_algebra import (
    Contract,
    DecoratedGamma,
    Expand,
    GammaData,
    Merge,
    MoveTrace,
    RationalFactor,
    Split,
    apply_trace,
    contract,
    expand,
    is_reduced,
    merge,
    reduce,
    split,
)
from engine.invariants import fingerprint
from strategies import decorated

i = GaussianRat(0, 1)
half = Fraction(1, 2)


def gamma(*factors, Q=None, omega=None, rational=None):
    data = GammaData(
        omega=omega or UnitPhase(),
        Q=Q or PowerProduct(),
        lambdas=tuple(Fraction(lam) for lam, _ in factors),
        mus=tuple(GaussianRat.coerce(mu) for _, mu in factors),
    )
    return DecoratedGamma(rational or RationalFactor(), data)


# -------------------------------
# Data validation
# -------------------------------
def test_rejects_non_positive_lambda():
    with pytest.raises(InvalidDataError, match="λ must be positive"):
        gamma((-1, 0))


def test_rejects_negative_real_mu():
    with pytest.raises(InvalidDataError, match="Re"):
        gamma((1, Fraction(-1, 2)))


def test_rational_factor_cancels_common_roots_and_poles():
    r = RationalFactor(roots=(GaussianRat(1), half), poles=(half,))
    assert r.roots == (GaussianRat(1),)
    assert r.poles == ()


# -------------------------------
# Factorial formula
# -------------------------------
def test_expand_examples():
    out = expand(gamma((1, Fraction(3, 2))), 0)
    assert out.rational == RationalFactor(roots=(-half,))
    assert out.gamma.mus == (GaussianRat(half),)

    out = expand(gamma((2, 1)), 0)
    assert out.rational.kappa == PowerProduct({2: 1})
    assert out.rational.roots == (GaussianRat(0),)
    assert out.gamma.mus == (GaussianRat(0),)


def test_expand_root_cancels_existing_pole():
    out = expand(gamma((1, Fraction(3, 2)), rational=RationalFactor(poles=(-half,))), 0)
    assert out.rational.is_constant()
    assert out.gamma.mus == (GaussianRat(half),)


def test_expand_needs_real_part_at_least_one():
    with pytest.raises(MoveError, match="Re"):
        expand(gamma((1, half)), 0)


def test_move_index_out_of_range():
    with pytest.raises(MoveError, match="out of range"):
        contract(gamma((1, 0)), 1)


def test_contract_examples():
    out = contract(gamma((1, half)), 0)
    assert out.rational == RationalFactor(poles=(-half,))
    assert out.gamma.mus == (GaussianRat(Fraction(3, 2)),)

    out = contract(gamma((2, i)), 0)
    assert out.rational.kappa == PowerProduct({2: -1})
    assert out.rational.poles == (GaussianRat(0, -half),)
    assert out.gamma.mus == (1 + i,)


@settings(max_examples=500)
@given(decorated(min_r=1))
def test_contract_then_expand_is_identity(g):
    for j in range(g.gamma.r):
        assert expand(contract(g, j), j) == g


@settings(max_examples=500)
@given(decorated(min_r=1), st.data())
def test_expand_then_contract_is_identity(g, draw):
    j = draw.draw(st.integers(0, g.gamma.r - 1))
    lifted = contract(g, j)
    assert contract(expand(lifted, j), j) == lifted
    ready = [k for k, mu in enumerate(g.gamma.mus) if mu.re >= 1]
    for k in ready:
        assert contract(expand(g, k), k) == g


# -------------------------------
# Multiplication formula
# -------------------------------
def test_split_order_one_is_identity():
    g = gamma((1, 0))
    assert split(g, 0, 1) == (g, Twist())


def test_split_duplication_real():
    out, update = split(gamma((1, 0)), 0, 2)
    assert out.gamma.Q == PowerProduct({2: 1})
    assert out.gamma.factors() == [(half, GaussianRat(0)), (half, GaussianRat(half))]
    assert update.is_empty()
    assert out.gamma.omega == UnitPhase()


def test_split_duplication_complex():
    out, update = split(gamma((1, i)), 0, 2)
    assert out.gamma.factors() == [(half, i / 2), (half, half + i / 2)]
    assert out.gamma.Q == PowerProduct({2: 1})
    assert update == Twist({2: -2})
    assert out.gamma.omega.twist == Twist({2: -2})


def test_merge_examples():
    out, update = merge(gamma((half, 0), (half, half), Q=PowerProduct({2: 1})), [0, 1], 2)
    assert out == gamma((1, 0))
    assert update.is_empty()

    quarter = Fraction(1, 4)
    out, update = merge(gamma((1, quarter + i), (1, 3 * quarter + i)), (0, 1), 2)
    assert out.gamma.factors() == [(Fraction(2), half + 2 * i)]
    assert out.gamma.Q == PowerProduct({2: -2})
    assert update == Twist({2: 4})


def test_merge_places_result_at_smallest_index():
    g = gamma((3, 5), (half, half), (7, 1), (half, 0))
    out, _ = merge(g, {1, 3}, 2)
    assert out.gamma.factors() == [
        (Fraction(3), GaussianRat(5)),
        (Fraction(1), GaussianRat(0)),
        (Fraction(7), GaussianRat(1)),
    ]


@pytest.mark.parametrize(
    "factors, indices, m",
    [
        (((1, 0), (2, half)), (0, 1), 2),
        (((1, 0), (1, Fraction(1, 3))), (0, 1), 2),
        (((1, 0), (1, half), (1, 1)), (0, 1), 3),
    ],
)
def test_merge_rejects_non_progressions(factors, indices, m):
    with pytest.raises(PatternError):
        merge(gamma(*factors), indices, m)


@settings(max_examples=500)
@given(decorated(min_r=1), st.integers(1, 6), st.data())
def test_split_then_merge_is_identity(g, m, data):
    j = data.draw(st.integers(0, g.gamma.r - 1))
    out, update = split(g, j, m)
    back, inverse = merge(out, range(j, j + m), m)
    assert back == g
    assert (update * inverse).is_empty()


# -------------------------------
# Traces and reduction
# -------------------------------
def test_reduce_examples():
    g = gamma((1, half))
    assert reduce(g) == (g, MoveTrace())

    out, trace = reduce(gamma((1, Fraction(5, 2))))
    assert out.gamma.mus == (GaussianRat(half),)
    assert out.rational.roots == (GaussianRat(Fraction(-3, 2)), GaussianRat(-half))
    assert out.rational.kappa.is_empty()
    assert list(trace) == [Expand(0), Expand(0)]

    out, trace = reduce(gamma((2, 1 + 3 * i)))
    assert out.gamma.mus == (3 * i,)
    assert out.rational.roots == (GaussianRat(0, Fraction(-3, 2)),)
    assert out.rational.kappa == PowerProduct({2: 1})
    assert is_reduced(out)


@given(decorated())
def test_reduce_lands_in_reduced_form(g):
    out, trace = reduce(g)
    assert is_reduced(out)
    assert apply_trace(g, trace) == out


def test_reduce_large_real_part_is_linear():
    start = time.perf_counter()
    out, trace = reduce(gamma((1, 5000)))
    assert time.perf_counter() - start < 5
    assert out.gamma.mus == (GaussianRat(0),)
    assert len(out.rational.roots) == 5000
    assert len(trace) == 5000
    assert set(trace) == {Expand(0)}
    assert is_reduced(out)
    assert fingerprint(out, 4) == fingerprint(gamma((1, 5000)), 4)


@pytest.mark.parametrize(
    "factors, poles",
    [
        ([(1, 60)], ()),
        ([(half, Fraction(121, 2)), (3, 2 + i)], (GaussianRat(-101), GaussianRat(Fraction(-1, 3), Fraction(-1, 3)))),
    ],
)
def test_reduce_matches_single_expands(factors, poles):
    g = gamma(*factors, rational=RationalFactor(poles=poles))
    out, trace = reduce(g)
    assert apply_trace(g, trace) == out
    assert is_reduced(out)


def test_apply_trace_inverse_pairs():
    g = gamma((1, 0), Q=PowerProduct({PI: 1}))
    assert apply_trace(g, MoveTrace()) == g
    assert apply_trace(g, [Split(0, 2), Merge((0, 1), 2)]) == g
    h = gamma((1, 2))
    assert apply_trace(h, [Expand(0), Contract(0)]) == h


def test_apply_trace_reports_position():
    with pytest.raises(MoveError) as info:
        apply_trace(gamma((1, half)), [Contract(0), Expand(0), Expand(0)])
    assert info.value.position == 2
    assert "expand(0)" in info.value.detail


def test_move_text_forms():
    trace = MoveTrace((Expand(0), Split(1, 3), Merge((2, 0, 1), 3), Merge((0, 2), 2)))
    assert str(trace) == "expand(0), split(1,3), merge(0..2,3), merge({0,2},2)"
    assert len(trace[1:]) == 3
