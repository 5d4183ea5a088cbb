import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxcorr import (
    DomainError,
    PointSet,
    SequenceSpec,
    classify_gap_trajectories,
    distinct_gap_count,
    gap_profile,
    generate,
)
from boxcorr.gaps import circular_gaps, prefix_gap_counts

from conftest import unit_floats


def test_lattice_profile():
    prof = gap_profile(PointSet([0, 0.25, 0.5, 0.75]), tol=0)
    assert list(prof.gaps) == [(0.25, 4)]
    assert prof.distinct == 1 and prof.n == 4


def test_wrap_gap():
    gaps = circular_gaps(PointSet([0.9, 0.1]))
    assert sorted(gaps.tolist()) == pytest.approx([0.2, 0.8])


def test_small_examples():
    assert distinct_gap_count(generate(SequenceSpec.kronecker("sqrt2_over_5"), 30), 1e-12) <= 3
    spec = SequenceSpec.van_der_corput(2, include_zero=True)
    for n in (2, 3, 5, 17, 100):
        assert distinct_gap_count(generate(spec, n), 1e-12) <= 2


def test_random_gaps_all_distinct():
    for seed in (1, 2, 3):
        assert distinct_gap_count(generate(SequenceSpec.uniform_random(seed), 1000), 0.0) == 1000


def test_errors():
    with pytest.raises(DomainError):
        gap_profile(PointSet([0.5]))
    with pytest.raises(DomainError):
        gap_profile(PointSet([0.1, 0.5]), tol=-1.0)
    with pytest.raises(DomainError):
        classify_gap_trajectories(SequenceSpec.kronecker("sqrt2"), [])


def test_duplicates_give_zero_gap():
    prof = gap_profile(PointSet([0.3, 0.3, 0.6]))
    assert prof.gaps[0][0] == 0.0
    assert prof.gaps[0][1] == 1


@given(st.lists(unit_floats, min_size=2, max_size=60), st.floats(0, 1e-3))
def test_profile_invariants(xs, tol):
    prof = gap_profile(PointSet(xs), tol)
    assert abs(prof.total - 1.0) <= 1e-9
    assert sum(m for _, m in prof.gaps) == len(xs)
    vals = [v for v, _ in prof.gaps]
    assert vals == sorted(vals)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 255), min_size=2, max_size=40), st.integers(0, 255), st.randoms())
def test_permutation_and_shift_invariance(ks, shift, rnd):
    xs = np.asarray(ks) / 256
    base = gap_profile(PointSet(xs), 1e-12).gaps
    perm = xs.copy()
    rnd.shuffle(perm)
    assert gap_profile(PointSet(perm), 1e-12).gaps == base
    moved = np.mod(xs + shift / 256, 1.0)
    assert gap_profile(PointSet(moved), 1e-12).gaps == base


def test_prefix_counter_matches_direct(rng):
    for spec in (SequenceSpec.kronecker("golden"), SequenceSpec.uniform_random(4),
                 SequenceSpec.van_der_corput(3, include_zero=True)):
        pts = generate(spec, 400)
        fast = prefix_gap_counts(pts, 1e-9)
        assert fast == [distinct_gap_count(pts.prefix(n), 1e-9) for n in range(2, 401)]
    dup = PointSet(np.repeat(rng.random(50), 2))
    assert prefix_gap_counts(dup, 1e-9) == [distinct_gap_count(dup.prefix(n), 1e-9) for n in range(2, 101)]


@pytest.mark.parametrize("alpha", ["sqrt2", "sqrt2_over_5", "golden"])
def test_three_gaps(alpha):
    assert max(prefix_gap_counts(generate(SequenceSpec.kronecker(alpha), 10_000), 1e-9)) <= 3


@pytest.mark.parametrize("base,zero,bound", [(2, True, 2), (3, True, 3), (2, False, 4)])
def test_van_der_corput_gap_bounds(base, zero, bound):
    pts = generate(SequenceSpec.van_der_corput(base, include_zero=zero), 10_000)
    assert max(prefix_gap_counts(pts, 1e-12)) <= bound


def test_kronecker_trajectories():
    grid = np.unique(np.geomspace(10, 10_000, 25).astype(int)).tolist()
    trajs = classify_gap_trajectories(SequenceSpec.kronecker("sqrt2"), grid)
    assert len(trajs) == 3
    assert all(t.label in ("medium", "large") for t in trajs)
    for t in trajs:
        assert all(n * d == pytest.approx(nd) for n, d, nd in t.series)


def test_dyadic_lattice_is_medium():
    spec = SequenceSpec.van_der_corput(2, include_zero=True)
    trajs = classify_gap_trajectories(spec, [2**m for m in range(1, 13)], tol=1e-12)
    assert len(trajs) == 1
    assert trajs[0].label == "medium"
    assert [row[2] for row in trajs[0].series] == [1.0] * 12


def test_duplicated_points_rank_one_zero():
    x = generate(SequenceSpec.kronecker("sqrt2"), 500).points
    dup = PointSet(np.repeat(x, 2))
    trajs = classify_gap_trajectories(dup, [100, 200, 400, 800, 1000])
    assert trajs[0].label == "zero"


def test_large_gap_detected():
    # the dyadic sequence squeezed into [0, 1/2) keeps one gap above 1/2
    half = generate(SequenceSpec.van_der_corput(2, include_zero=True), 4096).points / 2
    trajs = classify_gap_trajectories(PointSet(half), [2**m for m in range(2, 13)], tol=1e-12)
    assert [t.label for t in trajs] == ["medium", "large"]
