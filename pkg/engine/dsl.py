"""Text form of decorated gamma factors and move scripts. "#" starts a comment."""
import re
from fractions import Fraction
from typing import Dict

import pyparsing as pp

from engine.errors import GammaSyntaxError, InvalidDataError
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
)

# omega tags are identifiers; "tag" is the default
TAG_PATTERN = r"[A-Za-z_][A-Za-z0-9_]*"
_RAT = r"-?\d+(?:/\d+)?"
_GAUSS_RE = re.compile(rf"(?P<re>{_RAT})(?:(?P<sign>[+-])(?P<im>\d+(?:/\d+)?)i)?")
_IMAG_RE = re.compile(rf"(?P<im>{_RAT})i")

# -------------------------------
# Grammar
# -------------------------------
def _expr_grammar() -> pp.ParserElement:
    S = pp.Suppress
    rat = pp.Regex(_RAT)
    gauss = pp.Regex(rf"{_RAT}i|{_RAT}(?:[+-]\d+(?:/\d+)?i)?")
    base = pp.Regex(r"pi|\d+")

    twist = pp.Group(base("base") + S("^i(") + rat("t") + S(")"))
    phase = pp.Regex(TAG_PATTERN)("tag") + pp.Group(pp.ZeroOrMore(S("*") + twist))("twists")

    power = pp.Group(base("base") + pp.Opt(S("^") + rat("exp")))
    posreal = pp.Group(power + pp.ZeroOrMore(S("*") + power))

    factor = pp.Group(
        S("G(") + rat("lam") + S("*") + S("s") + pp.one_of("+ -")("sign") + gauss("mu") + S(")")
    )
    gauss_list = pp.Group(pp.Opt(gauss + pp.ZeroOrMore(S(",") + gauss)))
    decoration = pp.Group(
        S("R:") + S(pp.Keyword("kappa")) + S("=") + pp.Opt(pp.Literal("-"))("neg") + posreal("kappa") + S(";")
        + S(pp.Keyword("roots")) + S("=") + S("[") + gauss_list("roots") + S("]") + S(";")
        + S(pp.Keyword("poles")) + S("=") + S("[") + gauss_list("poles") + S("]")
    )
    expr = (
        S(pp.Keyword("omega")) + S("=") + phase + S(";")
        + S(pp.Keyword("Q")) + S("=") + posreal("Q") + S(";")
        + pp.Group(pp.ZeroOrMore(factor + pp.Opt(S(";"))))("factors")
        + pp.Opt(decoration("rational"))
    )
    expr.ignore(pp.python_style_comment)
    return expr


def _script_grammar() -> pp.ParserElement:
    S = pp.Suppress
    idx = pp.Regex(r"\d+")
    expand = pp.Group(pp.Keyword("expand")("op") + S("(") + idx("j") + S(")"))
    contract = pp.Group(pp.Keyword("contract")("op") + S("(") + idx("j") + S(")"))
    split = pp.Group(pp.Keyword("split")("op") + S("(") + idx("j") + S(",") + idx("m") + S(")"))
    index_range = pp.Group(idx("lo") + S("..") + idx("hi"))("range")
    index_set = pp.Group(S("{") + idx + pp.ZeroOrMore(S(",") + idx) + S("}"))("set")
    merge = pp.Group(
        pp.Keyword("merge")("op") + S("(") + (index_range | index_set) + S(",") + idx("m") + S(")")
    )
    move = expand | contract | split | merge
    return pp.Opt(move + pp.ZeroOrMore(S(",") + move))


_EXPR = _expr_grammar()
_SCRIPT = _script_grammar()


def _run(grammar: pp.ParserElement, text: str) -> pp.ParseResults:
    try:
        return grammar.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise GammaSyntaxError(e.lineno, e.col, e.msg)


# -------------------------------
# Conversion of parse results
# -------------------------------
def parse_rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidDataError(f"invalid rational {text!r}")


def parse_gauss(text: str) -> GaussianRat:
    m = _IMAG_RE.fullmatch(text)
    if m:
        return GaussianRat(0, parse_rat(m["im"]))
    m = _GAUSS_RE.fullmatch(text)
    if not m:
        raise InvalidDataError(f"invalid Gaussian rational {text!r}")
    im = parse_rat(m["im"]) if m["im"] else Fraction(0)
    if m["sign"] == "-":
        im = -im
    return GaussianRat(parse_rat(m["re"]), im)


def _base(text: str):
    if text == PI:
        return PI
    value = int(text)
    if value < 1:
        raise InvalidDataError(f"base must be a positive integer or pi, got {text}")
    return value


def _power_product(group) -> PowerProduct:
    mapping: Dict = {}
    for power in group:
        base = _base(power["base"])
        exp = parse_rat(power["exp"]) if "exp" in power else Fraction(1)
        if base == 1:
            continue
        mapping[base] = mapping.get(base, Fraction(0)) + exp
    return PowerProduct.of(mapping)


def _phase(result) -> UnitPhase:
    mapping: Dict = {}
    for tw in result.get("twists", []):
        base = _base(tw["base"])
        if base == 1:
            continue
        mapping[base] = mapping.get(base, Fraction(0)) + parse_rat(tw["t"])
    return UnitPhase(result["tag"], Twist.of(mapping))


def parse(text: str) -> DecoratedGamma:
    """Parse the text form; type invariants are checked and reported as InvalidDataError."""
    result = _run(_EXPR, text)
    lambdas, mus = [], []
    for factor in result.get("factors", []):
        mu = parse_gauss(factor["mu"])
        if factor["sign"] == "-":
            mu = -mu
        lambdas.append(parse_rat(factor["lam"]))
        mus.append(mu)
    gamma = GammaData(omega=_phase(result), Q=_power_product(result["Q"]), lambdas=tuple(lambdas), mus=tuple(mus))
    rational = RationalFactor()
    if "rational" in result:
        dec = result["rational"]
        rational = RationalFactor(
            kappa=_power_product(dec["kappa"]),
            roots=tuple(parse_gauss(t) for t in dec["roots"]),
            poles=tuple(parse_gauss(t) for t in dec["poles"]),
            sign=-1 if "neg" in dec else 1,
        )
    return DecoratedGamma(rational, gamma)


def print_gamma(g: DecoratedGamma) -> str:
    gamma, rational = g.gamma, g.rational
    head = f"omega={gamma.omega}; Q={gamma.Q};"
    factors = " ".join(f"G({lam}*s+{mu})" for lam, mu in gamma.factors())
    lines = [f"{head} {factors}" if factors else head]
    if not rational.is_trivial():
        kappa = ("-" if rational.sign < 0 else "") + str(rational.kappa)
        roots = ", ".join(str(a) for a in rational.roots)
        poles = ", ".join(str(b) for b in rational.poles)
        lines.append(f"R: kappa={kappa}; roots=[{roots}]; poles=[{poles}]")
    return "\n".join(lines) + "\n"


def parse_script(text: str) -> MoveTrace:
    moves = []
    for move in _run(_SCRIPT, text):
        op = move["op"]
        if op == "expand":
            moves.append(Expand(int(move["j"])))
        elif op == "contract":
            moves.append(Contract(int(move["j"])))
        elif op == "split":
            moves.append(Split(int(move["j"]), int(move["m"])))
        elif "range" in move:
            lo, hi = int(move["range"]["lo"]), int(move["range"]["hi"])
            if hi < lo:
                raise InvalidDataError(f"empty merge range {lo}..{hi}")
            moves.append(Merge(tuple(range(lo, hi + 1)), int(move["m"])))
        else:
            moves.append(Merge(tuple(int(i) for i in move["set"]), int(move["m"])))
    return MoveTrace(tuple(moves))


def print_script(trace: MoveTrace) -> str:
    return str(trace)
