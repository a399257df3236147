import json
import subprocess
import sys
from pathlib import Path

import pytest

from envlab.cli import main, run
from envlab.io import parse_map

DATA = Path(__file__).resolve().parent.parent / "data"


def d(name: str) -> str:
    return str(DATA / name)


@pytest.mark.parametrize(
    "argv, code",
    [
        (["poset-envelope", d("chain_fold.json")], 0),
        (["poset-universal", d("d2_to_sigma.json")], 0),
        (["poset-compose", d("sigma_swap.json"), d("d2_to_sigma.json")], 0),
        (["poset-bundle", d("chain_fold.json")], 0),
        (["real-envelope", d("jump_f.json")], 0),
        (["real-compose", d("jump_g.json"), d("jump_f.json")], 0),
        (["real-universal", d("jump_f.json")], 0),
        (["real-universal", d("jump_g.json")], 1),
        (["real-modulus", d("affine_2x.json"), "--x0", "1", "--eps", "1"], 0),
        (["real-modulus", d("jump_f.json"), "--x0", "0", "--eps", "1/2"], 1),
        (["verify-corpus", "--max-size", "1", "--suite", "monad-laws"], 0),
        (["verify-corpus", "--max-size", "1", "--suite", "uniform-axioms"], 1),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code


def test_input_errors_exit_two(tmp_path, capsys):
    assert main(["poset-envelope", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"domain": {"elements": ["a"]}, "codomain": {"elements": ["b"]}, "map": {"a": "c"}}')
    report, code = run(["poset-envelope", str(bad)])
    assert code == 2
    assert report["result"]["location"] == "$.map.a"
    assert "not in the codomain" in capsys.readouterr().err
    assert main(["real-modulus", d("affine_2x.json"), "--x0", "1", "--eps", "0"]) == 2
    assert main(["verify-corpus", "--suite", "nope"]) == 2


def test_cycle_is_an_input_error(tmp_path, capsys):
    bad = tmp_path / "cycle.json"
    space = {"elements": ["a", "b"], "le": [["a", "b"], ["b", "a"]]}
    bad.write_text(json.dumps({"domain": space, "codomain": space, "map": {"a": "a", "b": "b"}}))
    report, code = run(["poset-envelope", str(bad)])
    assert code == 2 and report["result"]["location"] == "$.domain"


def test_cap_exceeded_exits_three(capsys):
    report, code = run(["poset-envelope", d("chain_fold.json"), "--cap-opens", "1"])
    assert code == 3
    assert report["result"]["cap"] == "cap_opens"
    assert "--cap-opens" in capsys.readouterr().err
    assert main(["real-compose", d("jump_g.json"), d("jump_f.json"), "--cap-branches", "0"]) == 3


def test_real_compose_keeps_zero_at_origin(capsys):
    report, _ = run(["real-compose", d("jump_g.json"), d("jump_f.json")])
    comp = report["result"]["composite"]
    assert comp["breakpoints"][0]["values"] == ["0", "1"]


def test_outputs_are_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        main(["poset-bundle", d("chain_fold.json"), "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_embedded_inputs_round_trip(tmp_path):
    report, _ = run(["poset-envelope", d("chain_fold.json"), "--out", str(tmp_path / "r.json")])
    f = parse_map(json.loads((DATA / "chain_fold.json").read_text()))
    assert parse_map(report["inputs"]["map"]) == f


def test_text_format_is_rendered_from_json(tmp_path):
    out = tmp_path / "r.txt"
    main(["real-universal", d("jump_g.json"), "--format", "text", "--out", str(out)])
    text = out.read_text()
    assert text.startswith("envlab ") and "(exit 1)" in text
    assert "(0,+inf)" in text


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "envlab.cli", "real-universal", d("jump_f.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["schema"] == "envlab/1"
