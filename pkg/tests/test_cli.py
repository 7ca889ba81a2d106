import pytest

from choiceliberal.cli import main
from choiceliberal.demos import TWO_COPIES_PROFILE


@pytest.fixture
def files(tmp_path):
    prof = tmp_path / "demo62.prof"
    prof.write_text(TWO_COPIES_PROFILE)
    const = tmp_path / "const1.gf"
    const.write_text("outcomes: 4\nrows: 2\ncols: 2\nrow 1: 1 1\nrow 2: 1 1\n")
    two = tmp_path / "two.prof"
    two.write_text("outcomes: 4\nplayers: 2\npref 1: 4 > 3 > 2 > 1\npref 2: 2 = 3 > 1 > 4\n")
    bad = tmp_path / "bad.prof"
    bad.write_text("outcomes: 2\nplayers: 1\npref 1: 1 > 1 = 2\n")
    return {"prof": str(prof), "const": str(const), "two": str(two), "bad": str(bad)}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_liberal(files, capsys):
    code, out, _ = run(capsys, "solve", "--pairs", "2,4;3,6;1,5", "--profile", files["prof"])
    assert code == 0
    assert "equilibrium outcomes: {w4, w5, w6}" in out
    assert "liberal rule: {w4, w5, w6}" in out


def test_solve_matrix(files, capsys):
    code, out, _ = run(capsys, "solve", "--matrix", files["const"], "--profile", files["two"])
    assert code == 0 and "equilibrium outcomes: {w1}" in out


def test_solve_both_sources_is_usage_error(files, capsys):
    code, _, _ = run(capsys, "solve", "--pairs", "1,2;3,4;5,6", "--matrix", files["const"], "--profile", files["prof"])
    assert code == 2


def test_solve_parse_error(files, capsys):
    code, _, err = run(capsys, "solve", "--pairs", "1,2", "--profile", files["bad"])
    assert code == 2 and "line 3" in err


def test_solve_missing_file(capsys):
    code, _, err = run(capsys, "solve", "--pairs", "1,2;3,4;5,6", "--profile", "/nonexistent/x.prof")
    assert code == 2 and "cannot read" in err


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--m", "6", "--samples", "500", "--seed", "42")
    assert code == 0
    last = out.strip().splitlines()[-1]
    assert last.startswith("tested=") and last.endswith("violations=0 seed=42")


@pytest.mark.parametrize("n, m", [("2", "4"), ("3", "5")])
def test_verify_bounds(capsys, n, m):
    assert run(capsys, "verify", "--n", n, "--m", m)[0] == 2


def test_verify_output_is_reproducible(capsys):
    args = ("verify", "--n", "3", "--m", "7", "--samples", "300", "--seed", "9")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_witness_book(capsys):
    code, out, _ = run(capsys, "witness", "--n", "3", "--m", "4", "--pairs", "1,4;2,4;3,4")
    assert code == 0 and "share outcome w4" in out


def test_witness_auto(capsys):
    code, out, _ = run(capsys, "witness", "--n", "3", "--m", "5")
    assert code == 0 and "contradiction" in out


def test_witness_disjoint(capsys):
    assert run(capsys, "witness", "--n", "3", "--m", "6", "--pairs", "1,2;3,4;5,6")[0] == 2
    assert run(capsys, "witness", "--n", "3", "--m", "6")[0] == 2


def test_search2p(capsys):
    code, out, err = run(capsys, "search2p", "--rows", "2", "--cols", "2", "--m", "4")
    assert code == 0
    assert "enumerated=256 refuted=256 unrefuted=0" in out
    assert "searched 256/256" in err


def test_search2p_guard(capsys):
    assert run(capsys, "search2p", "--rows", "5", "--cols", "5", "--m", "4")[0] == 2


def test_search2p_needs_room_for_pairs(capsys):
    assert run(capsys, "search2p", "--rows", "2", "--cols", "2", "--m", "3")[0] == 2


@pytest.mark.parametrize("which, text", [("6.1", "share outcome w4"), ("6.2", "{w4, w5, w6}"), ("6.3", "rows containing only w1: [1]")])
def test_demos(capsys, which, text):
    code, out, _ = run(capsys, "demo", which)
    assert code == 0 and text in out and "matches expected" in out


def test_unknown_demo(capsys):
    assert run(capsys, "demo", "7.1")[0] == 2


def test_no_subcommand(capsys):
    assert run(capsys)[0] == 2
