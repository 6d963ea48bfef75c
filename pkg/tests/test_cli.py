import csv
import json

import pytest

from purecode.cli import main


def _rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_table2(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["table2", "--k", "14", "--out", str(out)]) == 0
    printed = capsys.readouterr().out.splitlines()
    assert printed[0].split() == ["k", "f_threshold"]
    assert printed[5].split() == ["5", "0.8096", "Best"]
    rows = _rows(out)
    assert rows[0] == ["k", "f_threshold"]
    assert len(rows) == 15
    assert min(rows[1:], key=lambda r: float(r[1]))[0] == "5"


def test_table2_single_row(capsys):
    assert main(["table2", "--k", "1"]) == 0
    assert capsys.readouterr().out == "k,f_threshold\n1,0.8107\n"


def test_table2_rejects_zero(capsys):
    assert main(["table2", "--k", "0"]) == 1
    assert "error" in capsys.readouterr().err


def test_yield_curve(tmp_path):
    out = tmp_path / "y.csv"
    assert main(["yield-curve", "--k-list", "1-7", "--f-min", "0.80", "--f-max", "1.00",
                 "--step", "0.005", "--out", str(out)]) == 0
    rows = _rows(out)
    assert rows[0] == ["k", "f", "D"]
    assert len(rows) == 1 + 7 * 41
    assert rows[41] == ["1", "1.000000", "1.000000"]
    keys = [(int(r[0]), float(r[1])) for r in rows[1:]]
    assert keys == sorted(keys)


def test_yield_curve_threshold_row(capsys):
    assert main(["yield-curve", "--k", "5", "--f-min", "0.8096", "--f-max", "0.8097",
                 "--step", "0.0001"]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[1][:2] == ["5", "0.809600"]
    assert abs(float(rows[1][2])) <= 1e-4


def test_yield_curve_bad_grid(capsys):
    assert main(["yield-curve", "--f-min", "0.9", "--f-max", "0.8"]) == 1


def test_precision_flag(capsys):
    main(["yield-curve", "--k", "1", "--f-min", "0.85", "--f-max", "0.86", "--step", "0.01",
          "--precision", "full"])
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert len(rows[1][2]) > 10
    main(["yield-curve", "--k", "1", "--f-min", "0.85", "--f-max", "0.86", "--step", "0.01",
          "--precision", "2"])
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[1] == ["1", "0.85", "0.15"]


def test_simulate_k1(tmp_path, capsys):
    out = tmp_path / "h.csv"
    assert main(["simulate", "--k", "1", "--f", "0.8", "--shots", "100000", "--out", str(out)]) == 0
    rows = _rows(out)
    assert rows[0] == ["agreement_bits", "residual", "count"]
    counts = {r[1]: int(r[2]) for r in rows[1:]}
    assert sum(counts.values()) == 100000
    assert abs(counts["Phi+"] / 1e5 - 0.8) < 0.006


def test_simulate_seed_determinism(tmp_path, capsys):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    main(["simulate", "--k", "3", "--shots", "20000", "--seed", "5", "--out", str(a)])
    main(["simulate", "--k", "3", "--shots", "20000", "--seed", "5", "--out", str(b)])
    main(["simulate", "--k", "3", "--shots", "20000", "--seed", "6", "--out", str(c)])
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()


def test_seed_env_override(tmp_path, monkeypatch, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    monkeypatch.setenv("PURECODE_SEED", "5")
    main(["simulate", "--k", "3", "--shots", "20000", "--out", str(a)])
    monkeypatch.delenv("PURECODE_SEED")
    main(["simulate", "--k", "3", "--shots", "20000", "--seed", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_simulate_summary_k4(tmp_path, capsys):
    out = tmp_path / "h.csv"
    main(["simulate", "--k", "4", "--f", "0.85", "--shots", "1000000", "--out", str(out)])
    text = capsys.readouterr().out
    assert text.count("stage ") == 3
    fields = dict(kv.split("=") for kv in text.splitlines()[-1].split())
    assert float(fields["weighted_conditional_tvd"]) < 5e-3


def test_breed(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["breed", "--n-pairs", "6", "--m", "0", "--f", "0.9", "--trials", "5",
                 "--out", str(out)]) == 0
    rows = _rows(out)
    assert rows[0] == ["trial", "m", "n_pairs", "f", "success_prob", "matched_candidates"]
    assert {r[4] for r in rows[1:]} == {f"{0.9 ** 6:.6f}"}
    assert main(["breed", "--n-pairs", "5", "--m", "4", "--f", "1", "--trials", "4",
                 "--out", str(out)]) == 0
    assert {r[4] for r in _rows(out)[1:]} == {"1.000000"}
    summary = capsys.readouterr().out
    assert "collision_bound" in summary


def test_breed_too_many_pairs(capsys):
    assert main(["breed", "--n-pairs", "11"]) == 1
    assert "10" in capsys.readouterr().err


def test_channel_verdicts(tmp_path, capsys):
    spec = tmp_path / "c.json"
    spec.write_text(json.dumps({"kind": "depolarizing", "x": 1.0}))
    assert main(["channel", str(spec), "--k", "1"]) == 0
    assert "usable=yes" in capsys.readouterr().out
    spec.write_text(json.dumps({"kind": "depolarizing", "x": (4 * 0.81 - 1) / 3}))
    assert main(["channel", str(spec), "--k", "1"]) == 2
    assert main(["channel", str(spec), "--k", "5"]) == 0
    out = tmp_path / "v.csv"
    main(["channel", str(spec), "--k", "5", "--out", str(out)])
    assert _rows(out) == [["k", "f", "f_c", "usable"], ["5", "0.810000", "0.8096", "yes"]]


def test_channel_malformed(tmp_path, capsys):
    spec = tmp_path / "bad.json"
    spec.write_text('{"kind": "pauli",\n "probabilities": [0.5, 0.5]}')
    assert main(["channel", str(spec)]) == 1
    assert "probabilities" in capsys.readouterr().err
    assert main(["channel", str(tmp_path / "missing.json")]) == 1
