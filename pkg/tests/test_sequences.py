import math

import numpy as np
import pytest

from boxcorr import DomainError, ParseError, PointSet, SequenceSpec, generate, load
from boxcorr.sequences import format_points, parse_alpha


def test_kronecker_direct_multiples():
    assert generate(SequenceSpec.kronecker(0.4), 2).points.tolist() == pytest.approx([0.4, 0.8])


def test_van_der_corput_base2():
    assert generate(SequenceSpec.van_der_corput(2), 3).points.tolist() == [0.5, 0.25, 0.75]


def test_van_der_corput_include_zero():
    assert generate(SequenceSpec.van_der_corput(2, include_zero=True), 4).points.tolist() == [0.0, 0.5, 0.25, 0.75]


def test_kronecker_figure_construction():
    pts = generate(SequenceSpec.kronecker("sqrt2_over_5"), 30).points
    alpha = math.sqrt(2) / 5
    assert pts.tolist() == pytest.approx([(n * alpha) % 1 for n in range(1, 31)], abs=1e-15)


def test_alpha_tokens():
    assert parse_alpha("sqrt2") == math.sqrt(2)
    assert parse_alpha("golden") == pytest.approx(1.618033988749895)
    assert parse_alpha("0.25") == 0.25
    with pytest.raises(DomainError):
        parse_alpha("pi")


@pytest.mark.parametrize("bad", [
    lambda: generate(SequenceSpec.kronecker(0.3), 0),
    lambda: SequenceSpec.van_der_corput(1),
    lambda: SequenceSpec.uniform_random(-1),
    lambda: SequenceSpec("halton"),
])
def test_generate_errors(bad):
    with pytest.raises(DomainError):
        bad()


@pytest.mark.parametrize("spec", [
    SequenceSpec.kronecker("sqrt2"),
    SequenceSpec.van_der_corput(3, include_zero=True),
    SequenceSpec.uniform_random(12345),
])
def test_prefix_stability(spec):
    small = generate(spec, 257).points
    big = generate(spec, 1000).points
    assert small.tobytes() == big[:257].tobytes()
    assert generate(spec, 257).points.tobytes() == small.tobytes()


def test_random_seed_determinism():
    a = generate(SequenceSpec.uniform_random(2**64 - 1), 100).points
    b = generate(SequenceSpec.uniform_random(2**64 - 1), 100).points
    c = generate(SequenceSpec.uniform_random(1), 100).points
    assert a.tobytes() == b.tobytes()
    assert a.tobytes() != c.tobytes()
    assert np.all((a >= 0) & (a < 1))


def test_rational_kronecker_has_at_most_q_values():
    pts = generate(SequenceSpec.kronecker(3 / 7), 500).points
    assert len(np.unique(np.round(pts, 9))) <= 7


def test_van_der_corput_dyadic_prefix():
    spec = SequenceSpec.van_der_corput(2, include_zero=True)
    for m in range(1, 12):
        pts = generate(spec, 2**m).points
        assert sorted(pts.tolist()) == [j / 2**m for j in range(2**m)]


def test_pointset_sorted_view():
    ps = PointSet([0.7, 0.1, 0.4, 0.1])
    assert sorted(ps.sorted_view.tolist()) == [0, 1, 2, 3]
    srt = ps.points[ps.sorted_view]
    assert np.all(np.diff(srt) >= 0)
    assert ps.sorted_points.tolist() == srt.tolist()
    with pytest.raises(ValueError):
        ps.points[0] = 0.5


def test_pointset_rejects_empty():
    with pytest.raises(DomainError):
        PointSet([])


def test_load_examples(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("0.25\n0.75\n")
    assert load(f).points.tolist() == [0.25, 0.75]
    f.write_text("1.25\n")
    assert load(f).points.tolist() == [0.25]
    f.write_text("# header\n\n0.5\n  -0.25 \n")
    assert load(f).points.tolist() == [0.5, 0.75]


def test_load_errors(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("abc\n")
    with pytest.raises(ParseError) as info:
        load(f)
    assert info.value.lineno == 1
    assert "line 1" in str(info.value)
    f.write_text("0.5\nnan\n")
    with pytest.raises(ParseError) as info:
        load(f)
    assert info.value.lineno == 2
    f.write_text("# only a comment\n")
    with pytest.raises(DomainError):
        load(f)
    with pytest.raises(DomainError):
        load(tmp_path / "missing.txt")


def test_format_round_trip(tmp_path):
    pts = generate(SequenceSpec.uniform_random(3), 200)
    f = tmp_path / "r.txt"
    f.write_text(format_points(pts))
    assert load(f).points.tobytes() == pts.points.tobytes()
