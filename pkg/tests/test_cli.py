import json

import pytest

from parikhbound import family_instance, pdn_to_json
from parikhbound.cli import main

ANBN_TEXT = "start S\nS -> a S b | a b\n"
ABSTAR_TEXT = "start T\nT -> a b T | eps\n"
A_PLUS_TEXT = "start A\nA -> a A | a\n"
B_PLUS_TEXT = "start B\nB -> b B | b\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_bound_command(files, capsys):
    path = files("g.txt", ANBN_TEXT)
    assert main(["bound", path, "--verify", "6"]) == 0
    out = capsys.readouterr().out
    assert out.strip()


def test_bound_json(files, capsys):
    path = files("g.txt", ANBN_TEXT)
    assert main(["--format", "json", "bound", path, "--subset"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "bounded" in payload and "subset_grammar" in payload


def test_parikh_command(files, capsys):
    path = files("g.txt", ANBN_TEXT)
    assert main(["--format", "json", "parikh", path, "--verify", "6"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["alphabet"] == ["a", "b"]
    assert payload["verified_to_length"] == 6
    assert all("constant" in c and "witness" in c for c in payload["components"])


def test_check_intersection_witness(files, capsys):
    g1 = files("g1.txt", ANBN_TEXT)
    g2 = files("g2.txt", ABSTAR_TEXT)
    assert main(["--format", "json", "check-intersection", g1, g2]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "nonempty"
    assert payload["witness"] == "a b"


def test_check_intersection_empty(files, capsys):
    g1 = files("g1.txt", A_PLUS_TEXT)
    g2 = files("g2.txt", B_PLUS_TEXT)
    assert main(["--format", "json", "check-intersection", g1, g2]) == 1
    assert json.loads(capsys.readouterr().out)["status"] == "empty"


def test_check_intersection_bounded_mode(files, capsys):
    g1 = files("g1.txt", ANBN_TEXT)
    g2 = files("g2.txt", ABSTAR_TEXT)
    b = files("b.txt", "a\nb\n")
    assert main(["check-intersection", g1, g2, "--bounded", b]) == 0
    assert "a b" in capsys.readouterr().out
    b2 = files("b2.txt", "b\na\n")
    assert main(["check-intersection", g1, g2, "--bounded", b2]) == 1


def test_reach_pdn_family(capsys):
    assert main(["--format", "json", "reach-pdn", "--family", "1",
                 "--oracle-depth", "12"]) == 0
    assert json.loads(capsys.readouterr().out)["oracle_reachable"] is True


def test_reach_pdn_file(files, capsys):
    pdn, init, target = family_instance(1)
    path = files("net.json", pdn_to_json(pdn, init, target))
    assert main(["reach-pdn", path, "--oracle-depth", "12"]) == 0


def test_reach_pdn_requires_input(capsys):
    assert main(["reach-pdn"]) == 2
    assert "error" in capsys.readouterr().err


def test_oracle_verify(files, capsys):
    path = files("g.txt", ANBN_TEXT)
    assert main(["oracle-verify", path, "--length", "6"]) == 0
    out = capsys.readouterr().out
    assert "pass" in out


def test_bad_input_exits_2(files, capsys):
    assert main(["parikh", "/nonexistent/file"]) == 2
    bad = files("bad.txt", "no productions here")
    assert main(["parikh", bad]) == 2
