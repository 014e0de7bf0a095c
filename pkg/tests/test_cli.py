import json

import pytest

from ddwl.cli import main
from ddwl.digraph import Digraph


def test_build_writes_text_digraph(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert main(["build", "3", "1", "--out", str(out)]) == 0
    g = Digraph.from_text(out.read_text())
    assert g.n == 27
    assert set(g.out_degrees().tolist()) == {9}
    legend = capsys.readouterr().out
    assert "index(x, y, z)" in legend


def test_build_q9(tmp_path, capsys):
    out = tmp_path / "g9.txt"
    assert main(["build", "9", "2", "--out", str(out)]) == 0
    g = Digraph.from_text(out.read_text())
    assert g.n == 729
    assert set(g.out_degrees().tolist()) == {81}
    legend = capsys.readouterr().out
    assert '"modulus": [1, 0]' in legend  # t**2 + 1


def test_build_loopless(tmp_path):
    out = tmp_path / "g.txt"
    assert main(["build", "3", "1", "--loopless", "--out", str(out)]) == 0
    g = Digraph.from_text(out.read_text())
    assert not g.arcs.diagonal().any()


def test_build_rejects_even_and_composite_q(tmp_path, capsys):
    assert main(["build", "4", "0", "--out", str(tmp_path / "x.txt")]) == 2
    assert main(["build", "15", "0", "--out", str(tmp_path / "x.txt")]) == 2
    assert main(["build", "3", "7", "--out", str(tmp_path / "x.txt")]) == 2
    capsys.readouterr()


def test_build_respects_env_cap(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("DDWL_MAX_Q", "3")
    assert main(["build", "5", "1", "--out", str(tmp_path / "x.txt")]) == 2
    capsys.readouterr()


def test_verify_fast_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    rc = main(["verify", "3", "--suite", "fast", "--no-timings", "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["ok"] is True
    assert report["q"] == 3
    assert "timings" not in report
    names = [c["name"] for c in report["checks"]]
    assert names == sorted(set(names), key=names.index)  # each check appears once
    assert all(c["status"] in ("pass", "fail", "undetermined") for c in report["checks"])
    capsys.readouterr()


def test_verify_byte_identical_reports(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "3", "--suite", "fast", "--no-timings", "--out", str(a)])
    main(["verify", "3", "--suite", "fast", "--no-timings", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_verify_rejects_non_prime_power(capsys):
    assert main(["verify", "15"]) == 2
    capsys.readouterr()


def test_wl_tensor_export(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert main(["wl", "3", "1", "--tensor-out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["rank"] == 5
    assert sorted(payload["valencies"]) == [1, 2, 8, 8, 8]
    entries = payload["tensor"]
    assert all(len(e) == 4 and e[3] > 0 for e in entries)
    assert entries == sorted(entries)
    capsys.readouterr()


def test_iso_command(tmp_path, capsys):
    out = tmp_path / "iso.json"
    assert main(["iso", "3", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["labels"] == [1, 2]
    assert payload["exact"] is True
    assert payload["classes"] == 1
    wit = payload["witnesses"]["1,2"]
    assert wit["type"] == "isomorphic" and len(wit["mapping"]) == 27
    capsys.readouterr()


def test_design_command(tmp_path, capsys):
    out = tmp_path / "d.json"
    assert main(["design", "5", "3", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload == {
        "crit_holds": True,
        "det_A_nonzero": True,
        "i": 3,
        "mode": "full",
        "pairs_checked": 15625,
        "q": 5,
    }
    capsys.readouterr()


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "ddwl" in capsys.readouterr().out
