from __future__ import annotations

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from conftest import LN2, constant_hyp, zero_trig
from dtrig import io
from dtrig.cli import main, scalar_demo_rows
from dtrig.errors import ShapeError
from dtrig.generators import gen_hyp, gen_trig
from dtrig.symplectic_core import BlockSequence, principal_solution


@pytest.mark.parametrize("coeffs", [gen_trig(3, 5, 1.3, 7), gen_hyp(2, 4, 0.9, [1, -1], 3)])
def test_coefficient_round_trip_is_bit_exact(tmp_path, coeffs):
    path = tmp_path / "c.json"
    io.save_coefficients(coeffs, path)
    back = io.load_coefficients(path)
    assert type(back) is type(coeffs)
    assert np.array_equal(back.p, coeffs.p) and np.array_equal(back.q, coeffs.q)
    assert back.seed == coeffs.seed and back.amplitude == coeffs.amplitude


def test_symplectic_round_trip():
    s = gen_trig(2, 3, 1.0, 1).block_sequence()
    back = io.coefficients_from_dict(json.loads(io.dumps_coefficients(s)))
    assert isinstance(back, BlockSequence) and np.array_equal(back.c, s.c)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(kind="elliptic"),
        lambda d: d["P"].pop(),
        lambda d: d["Q"][0].append(1.0),
        lambda d: d.pop("Q"),
        lambda d: d["P"][0].__setitem__(0, "x"),
        lambda d: d.update(n=0),
    ],
)
def test_schema_errors(mutate):
    d = io.coefficients_to_dict(gen_trig(2, 2, 1.0, 1))
    mutate(d)
    with pytest.raises(ShapeError):
        io.coefficients_from_dict(d)


def test_trajectory_csv_round_trip():
    c = gen_trig(2, 6, 1.0, 4)
    z = principal_solution(c.block_sequence())
    text = io.trajectory_csv(z)
    lines = text.splitlines()
    assert lines[0] == "k,i,j,X,U" and len(lines) - 1 == (6 + 2) * 4
    back = io.read_trajectory_csv(text)
    assert np.array_equal(back.x, z.x) and np.array_equal(back.u, z.u)


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_is_deterministic_and_valid(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(["generate", "--kind", "trig", "--n", 3, "--N", 64, "--seed", 7, "--out", p], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    code, _, _ = run(["verify", a, "--tol", "1e-9", "--out", tmp_path / "r.json"], capsys)
    assert code == 0


def test_usage_errors(capsys):
    assert run(["generate", "--kind", "trig", "--n", 0, "--N", 3], capsys)[0] == 3
    assert run(["scalar-demo", "--kind", "trig", "--steps", 0, "--angle", 1], capsys)[0] == 3
    assert run(["frobnicate"], capsys)[0] == 3
    assert run(["simulate", "/nonexistent/file.json"], capsys)[0] == 3


def test_simulate_outputs(tmp_path, capsys):
    path = tmp_path / "z.json"
    io.save_coefficients(zero_trig(2, 3), path)
    code, out, _ = run(["simulate", path], capsys)
    assert code == 0
    rows = [r.split(",") for r in out.splitlines()[1:]]
    assert len(rows) == (3 + 2) * 4
    assert all(float(r[3]) == 0.0 for r in rows)
    assert all(float(r[4]) == (1.0 if r[1] == r[2] else 0.0) for r in rows)
    io.save_coefficients(constant_hyp(LN2, 3), path)
    code, out, _ = run(["simulate", path], capsys)
    assert "2,0,0,1.875,2.125" in out.splitlines()


def test_verify_reports_and_exit_codes(tmp_path, capsys):
    path = tmp_path / "t.json"
    run(["generate", "--kind", "trig", "--n", 2, "--N", 32, "--seed", 1, "--out", path], capsys)
    report = tmp_path / "r.json"
    code, _, _ = run(["verify", path, "--tol", "1e-9", "--out", report], capsys)
    d = json.loads(report.read_text())
    assert code == 0 and d["pass"] and d["meta"]["partner_seed"] == 2
    ids = [r["id"] for r in d["identities"]]
    assert len(ids) == len(set(ids)) and "eq13" in ids and "eq52" in ids

    data = json.loads(path.read_text())
    data["Q"][5][0] += 1e-3
    path.write_text(json.dumps(data))
    code, _, err = run(["verify", path], capsys)
    assert code == 2 and "eq10" in err
    code, out, _ = run(["verify", path, "--skip-validation"], capsys)
    assert code == 1
    failed = {r["id"] for r in json.loads(out)["identities"] if not r["pass"]}
    assert "eq13" in failed


def test_verify_zero_system_skips_cotangents(tmp_path, capsys):
    path = tmp_path / "z.json"
    io.save_coefficients(zero_trig(2, 4), path)
    code, out, _ = run(["verify", path], capsys)
    d = json.loads(out)
    assert code == 0
    by_id = {r["id"]: r for r in d["identities"]}
    for key in ("eq38", "eq39", "eq40"):
        assert by_id[key]["evaluated_indices"] == 0


def test_verify_hyperbolic_and_symplectic(tmp_path, capsys):
    path = tmp_path / "h.json"
    run(["generate", "--kind", "hyperbolic", "--n", 2, "--N", 16, "--seed", 3, "--sign-diag", "1,-1", "--out", path], capsys)
    assert run(["verify", path], capsys)[0] == 0
    io.save_coefficients(gen_trig(2, 5, 1.0, 2).block_sequence(), path)
    code, out, _ = run(["verify", path], capsys)
    assert code == 0 and json.loads(out)["meta"]["kind"] == "symplectic"


def test_scalar_demo(tmp_path, capsys):
    rows = scalar_demo_rows("trig", 12, math.pi / 6)
    assert max(r[3] for r in rows) <= 1e-13
    rows = scalar_demo_rows("hyperbolic", 10, LN2)
    assert [r[1] for r in rows] == [(2.0 ** k - 2.0 ** -k) / 2 for k in range(11)]
    out = tmp_path / "demo.csv"
    code, stdout, _ = run(["scalar-demo", "--kind", "hyp", "--steps", 10, "--a", LN2, "--out", out], capsys)
    assert code == 0 and "max abs_err" in stdout
    assert out.read_text().splitlines()[0] == "k,recurrence,closed_form,abs_err"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dtrig", "scalar-demo", "--kind", "trig", "--steps", "3", "--angle", "0.5"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("k,recurrence")
