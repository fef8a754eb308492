# fuzz_harness.py
import hashlib
import logging
import random
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from engine.errors import GammaError, OracleError
from engine.exact_values import DEFAULT_TAG, PI, GaussianRat, PowerProduct, Twist, UnitPhase
from engine.gamma_algebra import (
    Contract,
    DecoratedGamma,
    Expand,
    GammaData,
    Merge,
    Move,
    MoveTrace,
    Split,
    apply_move,
    apply_trace,
)
from engine.invariants import fingerprint
from engine.numeric_oracle import SamplePlan, verify_move
from schemas.fuzz_schema import FuzzConfig

_logger = logging.getLogger(__name__)

# small denominators make split/merge progressions show up on their own
SMALL_DENOMINATORS = (1, 2, 3, 4, 5, 6)
Q_BASES = (2, 3, 5, 7, PI)
TWIST_BASES = (2, 3, 5, PI)


def case_rng(seed: int, case: int, stream: str) -> random.Random:
    digest = hashlib.blake2b(f"{seed}:{case}:{stream}".encode(), digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "big"))


# -------------------------------
# Generators
# -------------------------------
def _random_lambda(rng: random.Random, cfg: FuzzConfig) -> Fraction:
    return Fraction(rng.randint(1, cfg.max_numerator), rng.randint(1, cfg.max_denominator))


def _random_mu(rng: random.Random, cfg: FuzzConfig) -> GaussianRat:
    dens = [d for d in SMALL_DENOMINATORS if d <= cfg.max_denominator]
    re = Fraction(rng.randint(0, cfg.max_numerator), rng.choice(dens))
    im = Fraction(0)
    if rng.random() < 0.5:
        im = Fraction(rng.randint(-cfg.max_numerator, cfg.max_numerator), rng.choice(dens))
    return GaussianRat(re, im)


def gen_gamma(cfg: FuzzConfig, i: int) -> DecoratedGamma:
    rng = case_rng(cfg.seed, i, "gamma")
    r = rng.randint(0, cfg.max_r)
    factors: List[Tuple[Fraction, GaussianRat]] = []
    while len(factors) < r:
        room = r - len(factors)
        if room >= 2 and cfg.max_m >= 2 and rng.random() < 0.25:
            m = rng.randint(2, min(room, cfg.max_m))
            lam, mu = _random_lambda(rng, cfg), _random_mu(rng, cfg)
            factors.extend((lam, mu + Fraction(k, m)) for k in range(m))
        else:
            factors.append((_random_lambda(rng, cfg), _random_mu(rng, cfg)))
    rng.shuffle(factors)
    Q = PowerProduct(tuple(
        (b, Fraction(rng.randint(-3, 3), rng.choice((1, 2)))) for b in rng.sample(Q_BASES, rng.randint(0, 2))
    ))
    twist = Twist(tuple(
        (b, Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3)))) for b in rng.sample(TWIST_BASES, rng.randint(0, 2))
    ))
    gamma = GammaData(
        omega=UnitPhase(DEFAULT_TAG, twist),
        Q=Q,
        lambdas=tuple(lam for lam, _ in factors),
        mus=tuple(mu for _, mu in factors),
    )
    return DecoratedGamma.plain(gamma)


def merge_candidates(g: DecoratedGamma, max_m: int) -> List[Merge]:
    """Every index set that currently forms a merge pattern of order 2..max_m."""
    by_lambda: Dict[Fraction, List[int]] = defaultdict(list)
    for j, lam in enumerate(g.gamma.lambdas):
        by_lambda[lam].append(j)
    found = set()
    for idxs in by_lambda.values():
        for m in range(2, min(max_m, len(idxs)) + 1):
            for j0 in idxs:
                start = g.gamma.mus[j0]
                chosen = [j0]
                for k in range(1, m):
                    target = start + Fraction(k, m)
                    nxt = next((j for j in idxs if j not in chosen and g.gamma.mus[j] == target), None)
                    if nxt is None:
                        break
                    chosen.append(nxt)
                else:
                    found.add(Merge(tuple(chosen), m))
    return sorted(found, key=lambda mv: (mv.m, mv.indices))


def gen_trace(cfg: FuzzConfig, g: DecoratedGamma, i: int) -> MoveTrace:
    """A valid trace: each move's precondition holds at the point it is applied."""
    rng = case_rng(cfg.seed, i, "trace")
    target = rng.randint(0, cfg.max_trace)
    moves: List[Move] = []
    cur = g
    while len(moves) < target and cur.gamma.r > 0:
        r = cur.gamma.r
        kinds = ["expand", "contract"]
        if cfg.max_m >= 2 and r + 1 <= cfg.max_factors:
            kinds.append("split")
        merges = merge_candidates(cur, cfg.max_m)
        if merges:
            kinds.append("merge")
        kind = rng.choice(kinds)
        step: List[Move]
        if kind == "expand":
            ready = [j for j in range(r) if cur.gamma.mus[j].re >= 1]
            if ready:
                step = [Expand(rng.choice(ready))]
            else:
                j = rng.randrange(r)
                # raise Re(mu) first so the expand is legal
                step = [Contract(j), Expand(j)] if len(moves) + 2 <= target else [Contract(j)]
        elif kind == "contract":
            step = [Contract(rng.randrange(r))]
        elif kind == "split":
            m = rng.randint(2, min(cfg.max_m, cfg.max_factors - r + 1))
            step = [Split(rng.randrange(r), m)]
        else:
            step = [rng.choice(merges)]
        for move in step:
            cur = apply_move(cur, move)
            moves.append(move)
    return MoveTrace(tuple(moves))


# -------------------------------
# Checking
# -------------------------------
@dataclass(frozen=True)
class Failure:
    case: int
    position: int
    move: Move
    kind: str
    detail: str
    gamma: DecoratedGamma
    trace: MoveTrace


@dataclass
class _Stats:
    moves_by_family: Counter = field(default_factory=Counter)
    numeric_checks: int = 0
    numeric_skipped: int = 0


def _first_failure(g: DecoratedGamma, trace: MoveTrace, cfg: FuzzConfig, stats: Optional[_Stats] = None):
    """(position, kind, detail) of the first step that breaks stability, or None."""
    stats = stats if stats is not None else _Stats()
    try:
        baseline = fingerprint(g, cfg.depth)
    except GammaError as e:
        return 0, "error", e.detail
    plan = SamplePlan(tolerance=cfg.tolerance)
    cur = g
    for position, move in enumerate(trace):
        try:
            nxt = apply_move(cur, move)
            diffs = fingerprint(nxt, cfg.depth).differences(baseline)
        except GammaError as e:
            return position, "error", e.detail
        stats.moves_by_family[move.family] += 1
        if diffs:
            return position, "fingerprint", "changed: " + ", ".join(diffs)
        if cfg.numeric:
            try:
                report = verify_move(cur, nxt, plan)
            except OracleError as e:
                _logger.debug("numeric check skipped at %s: %s", move, e.detail)
                stats.numeric_skipped += 1
            else:
                stats.numeric_checks += 1
                if not report.ok:
                    return position, "numeric", (
                        f"max_rel_dev={report.max_rel_dev:.3e} omega_consistent={report.omega_consistent}"
                    )
        cur = nxt
    return None


def _failure_kind(g: DecoratedGamma, trace: MoveTrace, cfg: FuzzConfig) -> Optional[str]:
    found = _first_failure(g, trace, cfg)
    return found[1] if found else None


def _move_indices(move: Move) -> Tuple[int, ...]:
    return move.indices if isinstance(move, Merge) else (move.j,)


def _without_factor(move: Move, j: int) -> Move:
    def shift(k: int) -> int:
        return k - 1 if k > j else k

    if isinstance(move, Expand):
        return Expand(shift(move.j))
    if isinstance(move, Contract):
        return Contract(shift(move.j))
    if isinstance(move, Split):
        return Split(shift(move.j), move.m)
    return Merge(tuple(shift(k) for k in move.indices), move.m)


def shrink(g: DecoratedGamma, trace: MoveTrace, cfg: FuzzConfig) -> Tuple[DecoratedGamma, MoveTrace]:
    """
    Minimize a failing (g, trace): cut trailing moves, drop interior moves, fold the
    remaining prefix into the start value, then drop factors the failing move does not use.
    Every accepted candidate fails the same way as the input.
    """
    found = _first_failure(g, trace, cfg)
    if found is None:
        return g, trace
    position, kind, _ = found
    trace = trace[:position + 1]

    progress = True
    while progress and len(trace) > 1:
        progress = False
        for k in range(len(trace) - 1):
            candidate = MoveTrace(trace.moves[:k] + trace.moves[k + 1:])
            hit = _first_failure(g, candidate, cfg)
            if hit and hit[1] == kind:
                trace = candidate[:hit[0] + 1]
                progress = True
                break

    if len(trace) > 1:
        g = apply_trace(g, trace[:-1])
        trace = trace[-1:]

    if not g.rational.is_trivial() and _failure_kind(DecoratedGamma.plain(g.gamma), trace, cfg) == kind:
        g = DecoratedGamma.plain(g.gamma)

    move = trace[0]
    for j in reversed(range(g.gamma.r)):
        if j in _move_indices(move):
            continue
        factors = g.gamma.factors()
        del factors[j]
        candidate_g = DecoratedGamma(g.rational, g.gamma.with_factors(factors))
        candidate_move = _without_factor(move, j)
        if _failure_kind(candidate_g, MoveTrace((candidate_move,)), cfg) == kind:
            g, move = candidate_g, candidate_move
    return g, MoveTrace((move,))


@dataclass(frozen=True)
class CaseResult:
    case: int
    moves_by_family: Dict[str, int]
    numeric_checks: int
    numeric_skipped: int
    failure: Optional[Failure]


def run_case(cfg: FuzzConfig, i: int) -> CaseResult:
    g = gen_gamma(cfg, i)
    trace = gen_trace(cfg, g, i)
    stats = _Stats()
    found = _first_failure(g, trace, cfg, stats)
    failure = None
    if found is not None:
        position, kind, detail = found
        small_g, small_trace = shrink(g, trace, cfg)
        failure = Failure(i, position, trace[position], kind, detail, small_g, small_trace)
        _logger.warning("case %d failed at move #%d %s (%s): %s", i, position, trace[position], kind, detail)
    return CaseResult(i, dict(stats.moves_by_family), stats.numeric_checks, stats.numeric_skipped, failure)


@dataclass(frozen=True)
class SuiteSummary:
    config: FuzzConfig
    cases_run: int
    moves_by_family: Dict[str, int]
    numeric_checks: int
    numeric_skipped: int
    failures: Tuple[Failure, ...]

    @property
    def moves_checked(self) -> int:
        return sum(self.moves_by_family.values())

    @property
    def ok(self) -> bool:
        return not self.failures


def _run_case_args(args: Tuple[FuzzConfig, int]) -> CaseResult:
    return run_case(*args)


def run_suite(cfg: FuzzConfig, workers: int = 1) -> SuiteSummary:
    jobs = [(cfg, i) for i in range(cfg.cases)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_case_args, jobs, chunksize=16))
    else:
        results = [_run_case_args(job) for job in jobs]
    results.sort(key=lambda res: res.case)

    families: Counter = Counter()
    for res in results:
        families.update(res.moves_by_family)
    summary = SuiteSummary(
        config=cfg,
        cases_run=len(results),
        moves_by_family=dict(sorted(families.items())),
        numeric_checks=sum(res.numeric_checks for res in results),
        numeric_skipped=sum(res.numeric_skipped for res in results),
        failures=tuple(res.failure for res in results if res.failure is not None),
    )
    _logger.info(
        "fuzz seed=%d: %d cases, %d moves, %d failures",
        cfg.seed, summary.cases_run, summary.moves_checked, len(summary.failures),
    )
    return summary
