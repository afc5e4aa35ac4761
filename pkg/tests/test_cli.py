import json
import subprocess
import sys

import pytest

from nonprojdp.cli import decide, loglog_slope, main
from nonprojdp.transitions import DepTree, preset
from nonprojdp.treebank import write_conllu_heads

PROJECTIVE = [DepTree((2, 0)), DepTree((0, 1, 2)), DepTree((0,))]
CROSSING = DepTree((3, 4, 0, 3))
# a second crossing tree (arc 4->2 crosses 1->4 and 1->5)
HARDER = DepTree((0, 4, 5, 1, 1))


@pytest.fixture
def corpus(tmp_path):
    proj = tmp_path / "proj.conllu"
    proj.write_text(write_conllu_heads(PROJECTIVE))
    mixed = tmp_path / "mixed.conllu"
    mixed.write_text(write_conllu_heads([CROSSING, DepTree((2, 0))]))
    return tmp_path, proj, mixed


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_stats_projective_only(capsys, corpus):
    _, proj, _ = corpus
    code, out, _ = run(capsys, "stats", str(proj))
    assert code == 0
    assert out.splitlines()[-1] == "3\t0\t0.00%"


def test_stats_directory_and_json(capsys, corpus):
    tmp, _, _ = corpus
    code, out, _ = run(capsys, "stats", "--json", str(tmp))
    data = json.loads(out)
    assert code == 0
    assert (data["total"], data["nonprojective"], data["pct"]) == (5, 1, 20.0)
    assert len(data["files"]) == 2


def test_stats_glob(capsys, corpus):
    tmp, _, _ = corpus
    code, out, _ = run(capsys, "stats", str(tmp / "*.conllu"))
    assert code == 0 and out.splitlines()[-1] == "5\t1\t20.00%"


def test_stats_missing_path(capsys, tmp_path):
    code, _, err = run(capsys, "stats", str(tmp_path / "nope.conllu"))
    assert code == 2 and "nope.conllu" in err


def test_stats_all_inputs_unreadable(capsys, tmp_path):
    bad = tmp_path / "bad.conllu"
    bad.write_text("1\tx\n")
    code, _, err = run(capsys, "stats", str(bad))
    assert code == 2 and "bad.conllu" in err


def test_coverage_tsv(capsys, corpus):
    tmp, _, _ = corpus
    code, out, _ = run(capsys, "coverage", str(tmp), "--system", "arcstandard", "--system", "attardi2")
    lines = [l.split("\t") for l in out.splitlines()]
    assert code == 0
    assert lines[0][:4] == ["system", "total", "covered", "pct"]
    assert lines[1][:4] == ["arcstandard", "1", "0", "0.00"]
    assert lines[2][:4] == ["attardi2", "1", "1", "100.00"]


@pytest.mark.parametrize("oracle", ["greedy", "exact", "chart"])
def test_coverage_json_schema(capsys, tmp_path, oracle):
    f = tmp_path / "c.conllu"
    f.write_text(write_conllu_heads([CROSSING, HARDER, DepTree((0, 1))]) + "1\tx\t_\t_\t_\t_\t1\t_\t_\t_\n")
    code, out, _ = run(capsys, "coverage", str(f), "--oracle", oracle, "--json")
    rows = json.loads(out)
    assert code == 0
    assert [r["system"] for r in rows] == ["attardi2", "alldeg1", "all", "alls0s1"]
    for r in rows:
        assert set(r) == {"system", "total", "covered", "pct", "flagged_long", "excluded_malformed"}
        assert r["total"] == 2 and r["excluded_malformed"] == 1
    by = {r["system"]: r["covered"] for r in rows}
    assert by["attardi2"] <= by["alldeg1"] <= by["all"]


def test_coverage_flags_long_sentences(capsys, tmp_path):
    f = tmp_path / "c.conllu"
    f.write_text(write_conllu_heads([CROSSING]))
    code, out, _ = run(capsys, "coverage", str(f), "--oracle", "chart", "--max-len", "3", "--json",
                       "--system", "attardi2")
    [row] = json.loads(out)
    assert row["flagged_long"] == 1 and row["covered"] == 1


def test_coverage_budget_fallback_is_flagged():
    [(covered, flagged)] = decide((preset("attardi2"),), "exact", 2, None, CROSSING.heads)
    assert covered and flagged


def test_coverage_parallel_matches_serial(capsys, tmp_path):
    f = tmp_path / "c.conllu"
    f.write_text(write_conllu_heads([CROSSING, HARDER] * 5))
    _, serial, _ = run(capsys, "coverage", str(f))
    _, parallel, _ = run(capsys, "coverage", str(f), "--jobs", "2")
    assert serial == parallel


def test_coverage_unknown_system(capsys, corpus):
    tmp, _, _ = corpus
    code, _, err = run(capsys, "coverage", str(tmp), "--system", "bogus")
    assert code == 2 and "bogus" in err


def test_coverage_chart_rejects_wide_systems(capsys, corpus):
    tmp, _, _ = corpus
    code, _, _ = run(capsys, "coverage", str(tmp), "--system", "attardi3", "--oracle", "chart")
    assert code == 2


def test_parse_forced_chain(capsys, tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("# forced\nn 2\n0 1 1\n1 2 1\n")
    code, out, _ = run(capsys, "parse", "--system", "arcstandard", "--scores", str(f))
    assert code == 0
    assert out.splitlines() == ["1\t0", "2\t1", "score\t2"]


def test_parse_crossing(capsys, tmp_path):
    f = tmp_path / "s.txt"
    lines = ["n 4"]
    for h in range(5):
        for m in range(1, 5):
            if h != m:
                lines.append(f"{h} {m} {1 if CROSSING.head_of(m) == h else 0}")
    f.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "parse", "--system", "attardi2", "--scores", str(f))
    assert code == 0
    assert out.splitlines() == ["1\t3", "2\t4", "3\t0", "4\t3", "score\t4"]
    code, out2, _ = run(capsys, "parse", "--system", "attardi2", "--scores", str(f), "--engine", "general")
    assert out2 == out


def test_parse_no_parse(capsys, tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("n 3\n")
    code, _, err = run(capsys, "parse", "--system", "all", "--scores", str(f))
    assert code == 1 and "no parse" in err


def test_parse_malformed_score_file(capsys, tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("n 2\n0 1\n")
    code, _, err = run(capsys, "parse", "--system", "all", "--scores", str(f))
    assert code == 2 and "line 2" in err


def test_crosscheck_small(capsys):
    code, out, _ = run(capsys, "crosscheck", "--max-n", "3", "--trials", "10", "--seed", "3")
    assert code == 0
    assert "FAIL" not in out and out.rstrip().endswith("checks passed")


def test_crosscheck_rejects_large_n(capsys):
    code, _, _ = run(capsys, "crosscheck", "--max-n", "6")
    assert code == 2


def test_complexity(capsys):
    code, out, _ = run(capsys, "complexity", "--system", "alls0s1", "--sizes", "3", "4", "5")
    assert code == 0
    assert out.splitlines()[1].startswith("alls0s1\t3\t")
    assert "slope" in out.splitlines()[-1]


def test_loglog_slope_of_power_law():
    assert loglog_slope([2, 4, 8], [3 * x**5 for x in (2, 4, 8)]) == pytest.approx(5.0)


def test_module_entry_point(corpus):
    _, proj, _ = corpus
    res = subprocess.run([sys.executable, "-m", "nonprojdp", "stats", str(proj)], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[-1] == "3\t0\t0.00%"
