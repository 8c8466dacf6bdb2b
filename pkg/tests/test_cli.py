import json
import os
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
PROOF = CORPUS / "brec_elim" / "proof.cl15"
ATOMS = CORPUS / "brec_elim" / "atoms.game"


def cli(*args: str, stdin: str = "", env: dict | None = None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "cirquent", *args],
        capture_output=True,
        text=True,
        input=stdin,
        cwd=ROOT,
        env=full_env,
        timeout=120,
    )


def test_check_ok():
    r = cli("check", str(PROOF))
    assert r.returncode == 0
    assert r.stdout.startswith("ok: 3 steps")
    assert "?~F | F" in r.stdout


def test_check_failure_exits_1(tmp_path):
    text = PROOF.read_text().replace("DisjIntro", "ConjIntro")
    bad = tmp_path / "bad.cl15"
    bad.write_text(text)
    r = cli("check", str(bad))
    assert r.returncode == 1
    assert "step" in r.stdout


def test_missing_file_exits_2():
    r = cli("check", "no/such/file.cl15")
    assert r.returncode == 2
    assert "error:" in r.stderr


def test_usage_error_exits_2():
    assert cli("frobnicate").returncode == 2
    assert cli().returncode == 2


def test_fuse():
    r = cli("fuse", "000", "11")
    assert r.returncode == 0
    assert r.stdout.split() == ["01010"]
    assert cli("fuse", "2").returncode == 2


def test_fuse_cap_exits_3():
    r = cli("fuse", "0", "1" * 20)
    assert r.returncode == 3


def test_defuse():
    r = cli("defuse", "01011010", "--n", "3")
    assert r.returncode == 0
    assert r.stdout.strip() == "011 110 00"
    assert cli("defuse", "01021010", "--n", "3").returncode == 2


def test_compile_writes_a_bundle(tmp_path):
    out = tmp_path / "bundle.json"
    r = cli("compile", str(PROOF), "-o", str(out))
    assert r.returncode == 0
    data = json.loads(out.read_text())
    assert data["formula"] == "?~F | F"
    assert "strategy for ?~F | F" in r.stderr


def test_play_scripted_win():
    r = cli("play", str(PROOF), "--atoms", str(ATOMS), "--moves", "1.q")
    assert r.returncode == 0
    assert "winner: T" in r.stdout
    assert "B: 1.q" in r.stdout and "T: 0..q" in r.stdout


def test_play_tiny_budget_is_inconclusive():
    r = cli("play", str(PROOF), "--atoms", str(ATOMS), "--moves", "1.q", "--budget", "1")
    assert r.returncode == 1
    assert "inconclusive" in r.stdout


def test_play_random_and_spoiler_win():
    assert cli("play", str(PROOF), "--atoms", str(ATOMS), "--seed", "5").returncode == 0
    assert cli("play", str(PROOF), "--atoms", str(ATOMS), "--spoiler").returncode == 0


def test_eval_formula():
    r = cli("eval", "--formula", "F | ~F", "--atoms", str(ATOMS), "--run", "B:0.q")
    assert r.returncode == 0
    assert "run: legal" in r.stdout
    assert "winner: B" in r.stdout
    r = cli("eval", "--formula", "F | ~F", "--atoms", str(ATOMS), "--run", "T:0.a")
    assert "first offender T" in r.stdout
    assert "winner: B" in r.stdout


def test_eval_needs_exactly_one_subject():
    r = cli("eval", "--atoms", str(ATOMS))
    assert r.returncode == 2
    r = cli(
        "eval", "--formula", "F", "--cirquent", "x", "--atoms", str(ATOMS)
    )
    assert r.returncode == 2


def test_eval_cirquent_diagram(tmp_path):
    path = tmp_path / "c.cq"
    path.write_text('cirquent { oformulas: ["~F", "F"]; under: [[1, 2]]; over: [[1, 2]] }')
    r = cli("eval", "--cirquent", str(path), "--atoms", str(ATOMS), "--run", "B:2;.q")
    assert r.returncode == 0
    assert "*" in r.stdout
    assert "winner: B" in r.stdout


def test_eval_accepts_a_cirquent_literal():
    literal = 'cirquent { oformulas: ["~F", "F"]; under: [[1, 2]]; over: [[1, 2]] }'
    r = cli("eval", "--cirquent", literal, "--atoms", str(ATOMS), "--run", "B:2;.q")
    assert r.returncode == 0
    assert "winner: B" in r.stdout


def test_eval_reports_unreadable_and_malformed_cirquents():
    r = cli("eval", "--cirquent", "/no/such/file.cq", "--atoms", str(ATOMS), "--run", "")
    assert r.returncode == 2
    assert "cannot read" in r.stderr
    r = cli("eval", "--cirquent", "cirquent { oformulas: }", "--atoms", str(ATOMS), "--run", "")
    assert r.returncode == 2
    assert "error:" in r.stderr


def test_corpus_runs_every_case():
    r = cli("corpus", str(CORPUS))
    assert r.returncode == 0
    assert "7/7 cases pass" in r.stdout
    assert r.stdout.count("PASS") == 7


def test_corpus_default_root_from_env(tmp_path):
    r = cli("corpus", env={"CIRQUENT_CORPUS": str(CORPUS)})
    assert r.returncode == 0
    missing = cli("corpus", str(tmp_path / "nowhere"))
    assert missing.returncode == 2


def test_repl_session():
    script = "show\nB 0.q\nT 0.a\nbogus\nquit\n"
    r = cli("repl", "--formula", "F | ~F", "--atoms", str(ATOMS), stdin=script)
    assert r.returncode == 0
    assert "winner if play stops here: T" in r.stdout
    assert "unknown command" in r.stdout
