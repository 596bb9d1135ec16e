"""Pinned interaction-trace fixtures: the cross-component test vectors."""

import glob
import os

import numpy as np
import pytest

from latentring.ring import format_values, load_trace, replay_trace

TRACE_DIR = os.path.join(os.path.dirname(__file__), "fixtures", "traces")
TRACES = sorted(glob.glob(os.path.join(TRACE_DIR, "*.jsonl")))


def expected_path(trace_path: str) -> str:
    return trace_path.replace(".jsonl", ".expected")


@pytest.mark.parametrize("trace_path", TRACES, ids=[os.path.basename(p) for p in TRACES])
def test_trace_replay_matches_pinned_values(trace_path):
    trace = load_trace(trace_path)
    values = replay_trace(trace)
    with open(expected_path(trace_path), "r", encoding="utf-8") as fh:
        expected_lines = [ln.strip() for ln in fh if ln.strip()]
    assert len(expected_lines) == 512
    assert format_values(values) == expected_lines


@pytest.mark.parametrize("trace_path", TRACES, ids=[os.path.basename(p) for p in TRACES])
def test_trace_replay_is_deterministic(trace_path):
    trace = load_trace(trace_path)
    assert np.array_equal(replay_trace(trace), replay_trace(trace))


def test_fixture_count():
    assert len(TRACES) == 5
