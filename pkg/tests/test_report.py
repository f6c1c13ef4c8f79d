from __future__ import annotations

import json

import numpy as np
import pytest

from dtrig.report import ResidualReport, summarize


def test_summarize_masks_and_nan():
    r = summarize("eq1", [0.1, np.nan, 0.2], 0.5, evaluated=[True, False, True])
    assert r.passed and r.max_residual == 0.2 and r.skipped_indices == (1,) and r.evaluated == 2
    r = summarize("eq1", [0.1, np.nan], 0.5)
    assert not r.passed and r.max_residual == float("inf")
    r = summarize("eq1", [1.0, 2.0], 0.5, evaluated=[False, False], indices=[4, 5])
    assert r.passed and r.skipped_indices == (4, 5) and r.evaluated == 0


def test_report_round_trip_and_order():
    rep = ResidualReport([summarize("eq2", [0.0], 1e-9), summarize("eq1", [1.0], 1e-9)], {"n": 2})
    assert rep.ids() == ["eq2", "eq1"]
    assert not rep.passed and [r.id for r in rep.failures()] == ["eq1"]
    d = json.loads(rep.to_json())
    assert d["identities"][1] == {
        "id": "eq1", "max_residual": 1.0, "tolerance": 1e-9, "pass": False,
        "skipped_indices": [], "evaluated_indices": 1,
    }
    back = ResidualReport.from_dict(d)
    assert back.ids() == rep.ids() and back["eq1"] == rep["eq1"]
    with pytest.raises(ValueError):
        rep.add(summarize("eq1", [0.0], 1.0))
    assert len(rep.format_lines()) == 2
