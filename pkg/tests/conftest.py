import numpy as np
import pytest
from hypothesis import strategies as st

from boxcorr import GHQuery, PointSet, g_beta, h_beta


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_points(rng, n, lattice=False):
    """Uniform points, or points snapped to a coarse lattice to force ties."""
    if lattice:
        return PointSet(np.floor(rng.random(n) * 8) / 8)
    return PointSet(rng.random(n))


unit_floats = st.floats(min_value=0.0, max_value=1.0, exclude_max=True, allow_nan=False)
point_lists = st.lists(unit_floats, min_size=4, max_size=14)


def k2_total_variation(pts, q):
    """Exact total variation of t -> G*H for k=2 (piecewise constant in t)."""
    n = pts.n
    r = q.s[0] / (2 * n**q.beta)
    ev = np.sort(np.mod(np.concatenate([pts.points - r, pts.points + r]), 1.0))
    ev = np.concatenate([ev, [ev[0] + 1.0]])
    mids = (ev[:-1] + ev[1:]) / 2
    vals = []
    for t in mids:
        gh = GHQuery(q, (t,))
        vals.append(g_beta(pts, gh) * h_beta(pts, gh))
    vals = np.asarray(vals)
    return float(np.abs(np.diff(np.concatenate([vals, vals[:1]]))).sum())


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
