from fractions import Fraction

import numpy as np
import pytest

from chemoflow import (
    Field,
    Grid,
    ReactionSpec,
    Verdict,
    classify_regime,
    classify_sublinear,
    collapse_threshold_hint,
    eval_reaction,
)


def test_spec_validation():
    with pytest.raises(ValueError):
        ReactionSpec.nonlocal_logistic(alpha=0.5, beta=2.0)
    with pytest.raises(ValueError):
        ReactionSpec.nonlocal_logistic(alpha=2.0, beta=1.0)
    with pytest.raises(ValueError):
        ReactionSpec.local_logistic(alpha=1.0, mu=0.0)
    ReactionSpec.off()  # always valid


def test_eval_reaction_homogeneous_steady_state():
    # u == 1 on a unit box: the global integral is exactly 1, so f vanishes
    g = Grid.unit_box(2, 16)
    u = Field.constant(g, 1.0)
    for alpha, beta in ((2.0, 2.0), (1.0, 3.0), (2.5, 1.5)):
        f = eval_reaction(u, ReactionSpec.nonlocal_logistic(alpha, beta))
        assert np.abs(f.values).max() < 1e-14


def test_eval_reaction_constant_value():
    # u == 2, alpha = beta = 2: integral is 4, f = 4 * (1 - 4) = -12
    g = Grid.unit_box(2, 8)
    f = eval_reaction(Field.constant(g, 2.0), ReactionSpec.nonlocal_logistic(2.0, 2.0))
    assert np.abs(f.values + 12.0).max() < 1e-12


def test_eval_reaction_zero_density():
    g = Grid.unit_box(1, 8)
    z = Field.zeros(g)
    for spec in (
        ReactionSpec.off(),
        ReactionSpec.local_logistic(2.0),
        ReactionSpec.nonlocal_logistic(2.0, 2.0),
    ):
        assert np.abs(eval_reaction(z, spec).values).max() == 0.0


def test_eval_reaction_local_logistic():
    g = Grid.unit_box(1, 8)
    f = eval_reaction(Field.constant(g, 2.0), ReactionSpec.local_logistic(alpha=2.0, mu=3.0))
    # mu*u*(1 - u^alpha) = 3*2*(1-4) = -18
    assert np.abs(f.values + 18.0).max() < 1e-12


def test_eval_reaction_rejects_negative():
    g = Grid.unit_box(1, 8)
    u = Field(g, np.ones(8))
    u.values[0] = -0.1
    with pytest.raises(ValueError):
        eval_reaction(u, ReactionSpec.off())


def test_classify_paper_examples():
    v = classify_regime(3, 2.0, 2.0)
    assert v.verdict is Verdict.COVERED_CASE1
    assert (v.lhs, v.rhs) == (2.0, pytest.approx(7.0 / 3.0))

    v = classify_regime(3, 2.0, 1.5)  # upper bound is exactly 2, strict fails
    assert v.verdict is Verdict.NOT_COVERED

    v = classify_regime(4, 1.5, 4.0)
    assert v.verdict is Verdict.COVERED_CASE2
    assert v.lhs == pytest.approx(0.75)
    assert v.rhs == pytest.approx(1.5)


def test_classify_hypothesis_violations():
    with pytest.raises(ValueError):
        classify_regime(2, 2.0, 2.0)
    with pytest.raises(ValueError):
        classify_regime(3, 0.8, 2.0)
    with pytest.raises(ValueError):
        classify_regime(3, 2.0, 1.0)


def _oracle_verdict(n: int, alpha: Fraction, beta: Fraction) -> str:
    """Exact-rational restatement of the two covered conditions."""
    if alpha >= 2:
        return "CoveredCase1" if alpha < 1 + 2 * beta / n else "NotCovered"
    lhs = Fraction(n + 2, n) * (2 - alpha)
    rhs = 1 + 2 * beta / n - alpha
    return "CoveredCase2" if lhs < rhs else "NotCovered"


def test_classifier_against_rational_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(3, 8))
        alpha = Fraction(int(rng.integers(4, 16)), 4)  # 1.0 .. 3.75 in quarters
        beta = Fraction(int(rng.integers(5, 24)), 4)  # 1.25 .. 5.75
        got = classify_regime(n, float(alpha), float(beta)).verdict.value
        assert got == _oracle_verdict(n, alpha, beta), (n, alpha, beta)


def test_cases_are_disjoint_by_alpha_split():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(3, 7))
        alpha = float(rng.uniform(1.0, 4.0))
        beta = float(rng.uniform(1.01, 6.0))
        v = classify_regime(n, alpha, beta).verdict
        if v is Verdict.COVERED_CASE1:
            assert alpha >= 2
        if v is Verdict.COVERED_CASE2:
            assert alpha < 2


def test_covered_implies_collapse_threshold():
    # any covered tuple with alpha >= 2 has beta > n(alpha-1)/2 >= n/2
    rng = np.random.default_rng(8)
    found = 0
    for _ in range(300):
        n = int(rng.integers(3, 7))
        alpha = float(rng.uniform(2.0, 3.5))
        beta = float(rng.uniform(1.01, 8.0))
        if classify_regime(n, alpha, beta).covered:
            found += 1
            assert beta > n * (alpha - 1) / 2 - 1e-12
            assert collapse_threshold_hint(n, beta)
    assert found > 20  # the sample actually hit the covered region


def test_classifier_monotone_in_beta():
    rng = np.random.default_rng(9)
    for _ in range(100):
        n = int(rng.integers(3, 7))
        alpha = float(rng.uniform(1.0, 3.0))
        beta = float(rng.uniform(1.01, 5.0))
        if classify_regime(n, alpha, beta).covered:
            assert classify_regime(n, alpha, beta + rng.uniform(0.1, 2.0)).covered


def test_boundary_alpha_equals_cap_is_not_covered():
    # alpha = 1 + 2 beta / n exactly: strict upper bound fails
    assert classify_regime(3, 2.0, 1.5).verdict is Verdict.NOT_COVERED
    assert classify_regime(4, 2.0, 2.0).verdict is Verdict.NOT_COVERED
    assert classify_regime(6, 3.0, 6.0).verdict is Verdict.NOT_COVERED


def test_classify_sublinear():
    assert classify_sublinear(4, 0.5, 1.5) is True  # 0.5 < 0.75
    assert classify_sublinear(6, 0.9, 2.5) is False  # 0.9 > 5/6
    # boundary: xi = 2 beta / n exactly is rejected by strictness
    assert classify_sublinear(4, 0.75, 1.5) is False
    with pytest.raises(ValueError):
        classify_sublinear(3, 1.0, 2.0)  # xi = 1 belongs to classify_regime
    with pytest.raises(ValueError):
        classify_sublinear(3, 0.5, 0.9)


def test_collapse_threshold_hint():
    assert collapse_threshold_hint(3, 2.0) is True
    assert collapse_threshold_hint(4, 2.0) is False  # equality is not strict
    assert collapse_threshold_hint(6, 3.01) is True
