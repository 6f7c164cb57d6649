"""
命令行测试
"""
import json

import pytest

from tests.test_utils import EXAMPLES_DIR
from tsl.core.lfunctions.fiber import FiberL
from tsl.main import main


def _problem(name):
    return str(EXAMPLES_DIR / f"{name}.json")


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    payload = json.loads(captured.out) if captured.out.strip() else None
    lines = captured.err.splitlines()
    # ErrorResponse 是标准错误中最后一段以 "{" 单独成行开头的 JSON
    starts = [i for i, line in enumerate(lines) if line == "{"]
    error = json.loads("\n".join(lines[starts[-1]:])) if code and starts else None
    return code, payload, error


def test_analyze(capsys, tmp_path):
    code, payload, _ = _run(capsys, "analyze", "--problem", _problem("kl2"), "--cache-dir", str(tmp_path))
    assert code == 0
    report = payload["report"]
    assert (report["D"], report["d"], report["e"], report["N"]) == (1, 1, 1, 2)
    assert report["case"] == "below"
    manifest = payload["manifest"]
    assert manifest["command"] == "analyze"
    assert len(manifest["input_hash"]) == 64
    assert manifest["resolved"]["k_max"] == 2


def test_analyze_above_and_deformed(capsys):
    code, payload, _ = _run(capsys, "analyze", "--problem", _problem("above"))
    assert code == 0
    assert payload["report"]["case"] == "above"
    assert payload["report"]["upsilon"] is None

    code, payload, _ = _run(capsys, "analyze", "--problem", _problem("deformed"))
    assert code == 0
    assert payload["report"]["upsilon"]["vertices"] == [["0/1"], ["1/1"]]


def test_check_exit_codes(capsys):
    code, payload, _ = _run(capsys, "check", "--problem", _problem("kl3"), "--kmax", "1")
    assert code == 0
    assert payload["report"]["h3"]["status"] == "pass"

    code, payload, _ = _run(capsys, "check", "--problem", _problem("h5_fail"), "--kmax", "1")
    assert code == 2
    assert payload["report"]["h5"]["status"] == "fail"


def test_basis_and_fiber(capsys):
    code, payload, _ = _run(capsys, "basis", "--problem", _problem("kl2"), "--lambda", "all")
    assert code == 0
    assert payload["report"]["independent"]
    assert payload["report"]["reference"] == [[0], [-1]]

    code, payload, _ = _run(capsys, "fiber", "--problem", _problem("kl2"), "--lambda", "2", "--kmax", "1")
    assert code == 0
    (fiber,) = payload["report"]["fibers"]
    assert fiber["degree"] == 2
    assert fiber["dominates"]
    assert fiber["nondegeneracy"]["status"] == "nondegenerate_up_to"
    assert payload["report"]["all_consistent"]


def test_fiber_inconsistency_sets_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(FiberL, "endpoints_agree", property(lambda self: False))
    code, payload, _ = _run(capsys, "fiber", "--problem", _problem("kl2"), "--lambda", "2", "--kmax", "1")
    assert code == 3
    assert payload["report"]["all_dominate"]
    assert not payload["report"]["all_consistent"]
    assert payload["report"]["fibers"][0]["endpoints_agree"] is False


def test_global_to_file(capsys, tmp_path):
    out = tmp_path / "global.json"
    code, payload, _ = _run(
        capsys, "global", "--problem", _problem("kl2"), "--op", "sym0", "--dmax", "2", "--json-out", str(out)
    )
    assert code == 0
    assert payload is None
    report = json.loads(out.read_text(encoding="utf-8"))["report"]
    assert report["global_l"]["cross_check"]
    assert len(report["global_l"]["coefficients"]) == 3
    assert report["bounds"]["ratio"] == "1/2"


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["analyze", "--problem", "does-not-exist.json"], 1),
        (["analyze", "--problem", _problem("nonquasi")], 2),
        (["basis", "--problem", _problem("kl2"), "--lambda", "0"], 1),
        (["fiber", "--problem", _problem("kl2"), "--ceiling", "5", "--kmax", "1"], 4),
    ],
)
def test_errors_on_stderr(capsys, argv, expected):
    code, payload, error = _run(capsys, *argv)
    assert code == expected
    assert payload is None
    assert error["code"] == expected
    assert error["message"]


def test_cache_gc(capsys, tmp_path):
    code, payload, _ = _run(capsys, "cache", "gc", "--cache-dir", str(tmp_path / "c"), "--purge")
    assert code == 0
    assert payload["report"] == {"kept": 0, "removed": 0, "purged": True}
