import pytest

from engine import gamma_algebra, invariants
from engine.exact_values import ZERO, Twist
from engine.fuzz_harness import case_rng, gen_gamma, gen_trace, merge_candidates, run_case, run_suite, shrink
from engine.gamma_algebra import DecoratedGamma, Expand, GammaData, Merge, MoveTrace, Split, apply_trace
from schemas.fuzz_schema import FuzzConfig, FuzzSummarySchema


@pytest.fixture
def cfg():
    return FuzzConfig(seed=20240101, cases=60, max_trace=8)


def test_case_rng_is_keyed_by_seed_case_and_stream():
    assert case_rng(1, 2, "gamma").random() == case_rng(1, 2, "gamma").random()
    assert case_rng(1, 2, "gamma").random() != case_rng(1, 3, "gamma").random()
    assert case_rng(1, 2, "gamma").random() != case_rng(1, 2, "trace").random()


def test_generation_is_deterministic(cfg):
    for i in range(20):
        g = gen_gamma(cfg, i)
        assert g == gen_gamma(cfg, i)
        assert gen_trace(cfg, g, i) == gen_trace(cfg, g, i)
        assert g.gamma.r <= cfg.max_r
        assert g.rational.is_trivial()


def test_generated_traces_are_valid(cfg):
    for i in range(40):
        g = gen_gamma(cfg, i)
        trace = gen_trace(cfg, g, i)
        assert len(trace) <= cfg.max_trace
        apply_trace(g, trace)


def test_generated_traces_keep_the_fingerprint(cfg):
    for i in range(100):
        g = gen_gamma(cfg, i)
        verdict = invariants.equivalent(g, apply_trace(g, gen_trace(cfg, g, i)), 12)
        assert not verdict.is_distinct, (i, verdict)
        assert str(verdict) == "fingerprint-equal(12)"


def test_degenerate_configs():
    cfg = FuzzConfig(max_r=0, max_trace=0, cases=3)
    g = gen_gamma(cfg, 0)
    assert g.gamma.r == 0
    assert len(gen_trace(cfg, g, 0)) == 0
    assert run_case(cfg, 0).failure is None


def test_merge_candidates_find_split_output():
    g = DecoratedGamma.plain(GammaData(lambdas=(1, 2), mus=(0, 1)))
    out = gamma_algebra.split(g, 1, 3)[0]
    assert Merge((1, 2, 3), 3) in merge_candidates(out, 6)
    assert merge_candidates(g, 6) == []


def test_suite_passes_on_the_engine(cfg):
    summary = run_suite(cfg)
    assert summary.ok, [f.detail for f in summary.failures]
    assert summary.cases_run == cfg.cases
    assert summary.moves_checked > 0
    assert set(summary.moves_by_family) <= {"fact", "mult"}
    assert summary.numeric_checks > 0


def test_suite_without_numeric_checks(cfg):
    summary = run_suite(cfg.model_copy(update={"numeric": False, "cases": 20}))
    assert summary.ok
    assert summary.numeric_checks == 0


def test_empty_suite():
    summary = run_suite(FuzzConfig(cases=0))
    assert summary.cases_run == 0
    assert summary.moves_checked == 0
    assert summary.ok


def test_suite_is_reproducible(cfg):
    small = cfg.model_copy(update={"cases": 15})
    assert FuzzSummarySchema.from_domain(run_suite(small)) == FuzzSummarySchema.from_domain(run_suite(small))


# -------------------------------
# Mutation sensitivity
# -------------------------------
def test_dropping_the_root_term_is_caught(cfg, monkeypatch):
    monkeypatch.setattr(invariants, "_root_pole_sum", lambda rational, n: ZERO)
    summary = run_suite(cfg.model_copy(update={"numeric": False}))
    assert not summary.ok
    for failure in summary.failures:
        assert failure.kind == "fingerprint"
        assert failure.move.family == "fact"
        assert len(failure.trace) == 1
        assert failure.gamma.rational.is_trivial()


def test_dropping_the_split_twist_is_caught(cfg, monkeypatch):
    original = gamma_algebra.split

    def split_without_twist(g, j, m):
        out, _ = original(g, j, m)
        gamma = out.gamma.with_factors(out.gamma.factors(), omega=g.gamma.omega)
        return DecoratedGamma(out.rational, gamma), Twist()

    monkeypatch.setattr(gamma_algebra, "split", split_without_twist)
    summary = run_suite(cfg.model_copy(update={"cases": 120}))
    assert not summary.ok
    for failure in summary.failures:
        assert len(failure.trace) == 1
        assert isinstance(failure.trace[0], Split)
        assert failure.kind in ("fingerprint", "numeric")


def test_shrink_folds_prefix_into_start_value(cfg, monkeypatch):
    monkeypatch.setattr(invariants, "_root_pole_sum", lambda rational, n: ZERO)
    g = DecoratedGamma.plain(GammaData(lambdas=(1, 1, 3), mus=(0, 2, 1)))
    small_g, small_trace = shrink(g, MoveTrace((Split(0, 2), Expand(2), Expand(1))), cfg)
    assert len(small_trace) == 1
    assert isinstance(small_trace[0], Expand)
    assert small_g.gamma.r == 1


@pytest.mark.slow
def test_default_acceptance_run():
    summary = run_suite(FuzzConfig(seed=20240101), workers=4)
    assert summary.cases_run == 1000
    assert summary.ok, [f.detail for f in summary.failures]
