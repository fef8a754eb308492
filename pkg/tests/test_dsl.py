from fractions import Fraction

import pytest
from hypothesis import given, settings
from pydantic import ValidationError

from engine.dsl import parse, parse_gauss, parse_script, print_gamma, print_script
from engine.errors import GammaSyntaxError, InvalidDataError
from engine.exact_values import PI, GaussianRat, PowerProduct, Twist, UnitPhase
from engine.gamma_algebra import DecoratedGamma, Expand, GammaData, Merge, RationalFactor, Split
from schemas.gamma_schema import DecoratedGammaSchema
from strategies import decorated

ZETA_TEXT = "omega=tag; Q=pi^-1/2; G(1/2*s+0)\n"


def test_parse_zeta_shape():
    g = parse(ZETA_TEXT)
    assert g == DecoratedGamma.plain(GammaData(Q=PowerProduct({PI: Fraction(-1, 2)}), lambdas=(Fraction(1, 2),), mus=(0,)))
    assert print_gamma(g) == ZETA_TEXT


def test_parse_full_form():
    text = """
    # a decorated product
    omega=tag*2^i(-2)*pi^i(1/3); Q=6^1/2;
    G(2*s+1/2-3i); G(1*s+4i)
    R: kappa=-3^2*pi; roots=[0, 1/2+1i]; poles=[-1/2]
    """
    g = parse(text)
    assert g.gamma.omega == UnitPhase("tag", Twist({2: -2, PI: Fraction(1, 3)}))
    assert g.gamma.Q == PowerProduct({2: Fraction(1, 2), 3: Fraction(1, 2)})
    assert g.gamma.factors() == [
        (Fraction(2), GaussianRat(Fraction(1, 2), -3)),
        (Fraction(1), GaussianRat(0, 4)),
    ]
    assert g.rational == RationalFactor(
        kappa=PowerProduct({3: 2, PI: 1}),
        roots=(GaussianRat(0), GaussianRat(Fraction(1, 2), 1)),
        poles=(GaussianRat(Fraction(-1, 2)),),
        sign=-1,
    )


def test_print_decoration_line():
    g = DecoratedGamma(RationalFactor(kappa=PowerProduct({2: 1}), roots=(GaussianRat(0, Fraction(-3, 2)),)))
    assert print_gamma(g) == "omega=tag; Q=1;\nR: kappa=2^1; roots=[0-3/2i]; poles=[]\n"


@settings(max_examples=200)
@given(decorated())
def test_print_parse_is_identity(g):
    text = print_gamma(g)
    assert parse(text) == g
    assert print_gamma(parse(text)) == text


def test_json_mirror_matches_text():
    g = parse("omega=tag*3^i(1); Q=2*pi; G(1*s+1/2+1i)\nR: kappa=5; roots=[]; poles=[1]")
    doc = DecoratedGammaSchema.from_domain(g).model_dump_json()
    assert DecoratedGammaSchema.model_validate_json(doc).to_domain() == g


def test_negative_lambda_is_rejected():
    with pytest.raises(InvalidDataError, match="λ must be positive"):
        parse("omega=tag; Q=1; G(-1*s+0)")


def test_negative_real_mu_is_rejected():
    with pytest.raises(InvalidDataError):
        parse("omega=tag; Q=1; G(1*s-1/2)")


def test_syntax_error_carries_position():
    with pytest.raises(GammaSyntaxError) as info:
        parse("omega=tag; Q=1;\nG(1*s+")
    assert info.value.line >= 1
    assert info.value.column >= 1
    assert "syntax error at line" in info.value.detail


def test_parse_gauss_forms():
    assert parse_gauss("3") == 3
    assert parse_gauss("-1/2i") == GaussianRat(0, Fraction(-1, 2))
    assert parse_gauss("1/3-2i") == GaussianRat(Fraction(1, 3), -2)
    with pytest.raises(InvalidDataError):
        parse_gauss("i")


def test_scripts():
    trace = parse_script("expand(0), split(1,3), merge(0..2,3), merge({2,0},2)")
    assert list(trace) == [Expand(0), Split(1, 3), Merge((0, 1, 2), 3), Merge((0, 2), 2)]
    assert print_script(trace) == "expand(0), split(1,3), merge(0..2,3), merge({0,2},2)"
    assert len(parse_script("")) == 0


def test_script_errors():
    with pytest.raises(GammaSyntaxError):
        parse_script("explode(0)")
    with pytest.raises(InvalidDataError):
        parse_script("merge(2..1,2)")


def test_tags_are_identifiers():
    text = "omega=omega0*2^i(1); Q=1;\n"
    g = parse(text)
    assert g.gamma.omega == UnitPhase("omega0", Twist({2: 1}))
    assert print_gamma(g) == text
    doc = DecoratedGammaSchema.from_domain(g).model_dump_json()
    assert DecoratedGammaSchema.model_validate_json(doc).to_domain() == g


def test_schema_rejects_tags_the_text_form_cannot_hold():
    doc = DecoratedGammaSchema.from_domain(parse(ZETA_TEXT)).model_dump()
    doc["omega"]["tag"] = "bad tag"
    with pytest.raises(ValidationError):
        DecoratedGammaSchema.model_validate(doc)
