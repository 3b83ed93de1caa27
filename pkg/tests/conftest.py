import sys
import numpy as np
import pytest

from segmental.segments import Segment, SegmentSet


def chain_from_nodes(nodes, interval=(-1.0, 1.0)):
    nodes = [float(v) for v in nodes]
    return SegmentSet.from_segments(
        [Segment(a, b) for a, b in zip(nodes[:-1], nodes[1:])], interval)


def random_chain(rng, r, interval=(-1.0, 1.0), min_gap=0.02):
    lo, hi = interval
    while True:
        inner = np.sort(rng.uniform(lo, hi, r - 1))
        nodes = np.concatenate([[lo], inner, [hi]])
        if np.min(np.diff(nodes)) > min_gap * (hi - lo) / r:
            return chain_from_nodes(nodes, interval)


def random_left_anchored(rng, r, alpha=-1.0):
    while True:
        betas = np.sort(rng.uniform(alpha, 1.0, r))
        if np.min(np.diff(np.concatenate([[alpha], betas]))) > 0.05 / r:
            return SegmentSet.from_segments([Segment(alpha, float(b)) for b in betas])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
