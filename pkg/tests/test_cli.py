import csv
import io
import json
import subprocess
import sys

import pytest

from symbreak.cli import (
    MENUS,
    RunConfig,
    UsageError,
    main,
    parse_breaking,
    parse_heuristic,
    run_bench,
    run_config,
)
from symbreak.ordering import OrderingKind


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestParsing:
    @pytest.mark.parametrize("label,kind,scheme", [
        ("anti-gray snake", OrderingKind.ANTI_GRAY, "snake"),
        ("anti-gray col-snake", OrderingKind.ANTI_GRAY, "col-snake"),
        ("lex row", OrderingKind.LEX, "row"),
        ("lex-row", OrderingKind.LEX, "row"),
        ("anti-gray-col", OrderingKind.ANTI_GRAY, "col"),
        ("gray spiral", OrderingKind.GRAY, "spiral"),
        ("anti-lex", OrderingKind.ANTI_LEX, "row"),
    ])
    def test_matrix_labels(self, label, kind, scheme):
        b = parse_breaking(label, (3, 3))
        assert (b.kind, b.scheme) == (kind, scheme)

    def test_sequence_default_scheme(self):
        b = parse_breaking("gray", (6,))
        assert b.scheme == "left2right" and b.label == "gray"
        assert parse_breaking("anti-lex rev", (6,)).scheme == "rev"

    def test_decompositions(self):
        assert parse_breaking("none").label == "none"
        assert parse_breaking("doublelex").decomposition == "doublelex"
        assert parse_breaking("snakelex").decomposition == "snakelex-col"
        assert parse_breaking("snakelex-row").decomposition == "snakelex-row"

    @pytest.mark.parametrize("label", ["lexx row", "gray diagonal", "random"])
    def test_bad_labels(self, label):
        with pytest.raises(UsageError):
            parse_breaking(label, (3, 3))

    def test_scheme_must_fit_shape(self):
        with pytest.raises(UsageError):
            parse_breaking("lex outside-in", (3, 3))

    @pytest.mark.parametrize("model,shape", [("still-life", (4, 4)), ("labs", (8,)),
                                             ("queens-armies", (4, 4))])
    def test_every_menu_label_parses(self, model, shape):
        for label in MENUS[model]:
            parse_breaking(label, shape)

    def test_menu_sizes(self):
        assert len(MENUS["still-life"]) == 21
        assert len(MENUS["queens-armies"]) == 21
        assert len(MENUS["labs"]) == 17

    def test_heuristics(self):
        assert parse_heuristic("row", (3, 3)).kind == "static"
        assert parse_heuristic("degree", (3, 3)).kind == "degree"
        assert parse_heuristic("ff-spiral", (3, 3)).order[:3] == (0, 1, 2)
        with pytest.raises(UsageError):
            parse_heuristic("zigzag", (3, 3))


class TestRunConfig:
    def test_still_life_3_lex_row(self):
        res = run_config(RunConfig("still-life", 3, "lex-row", "row"))
        assert res.status == "optimal" and res.optimum == 6
        assert res.witness is not None and sum(res.witness) == 6

    def test_breaking_keeps_optimum(self):
        a = run_config(RunConfig("queens-armies", 3, "anti-gray-col"))
        b = run_config(RunConfig("queens-armies", 3, "none"))
        assert a.optimum == b.optimum == 1

    def test_budget_exceeded_has_no_optimum(self):
        res = run_config(RunConfig("still-life", 8, "none", node_budget=10))
        assert res.status == "budget-exceeded" and res.optimum is None and res.witness is None

    def test_deterministic(self):
        cfg = RunConfig("labs", 9, "gray outside-in", "ff")
        a, b = run_config(cfg), run_config(cfg)
        assert (a.nodes, a.backtracks, a.optimum) == (b.nodes, b.backtracks, b.optimum)


class TestMain:
    def test_solve_json(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert main(["solve", "labs", "5", "--break", "none", "--json", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["status"] == "optimal" and data["optimum"] == 2
        assert set(data) >= {"config", "backtracks", "nodes", "optimum", "witness", "status"}
        assert "optimum=2" in capsys.readouterr().out

    def test_solve_flags(self, capsys):
        assert main(["solve", "--model", "still-life", "--size", "3", "--break", "anti-gray snake",
                     "--heur", "degree", "--value-order", "descending"]) == 0
        assert "optimum=6" in capsys.readouterr().out

    def test_solve_budget_exits_zero(self, capsys):
        assert main(["solve", "still-life", "8", "--node-budget", "10"]) == 0
        assert "budget-exceeded" in capsys.readouterr().out

    @pytest.mark.parametrize("argv", [
        ["solve"],
        ["solve", "labs", "5", "--break", "zigzag"],
        ["solve", "chess", "5"],
        ["solve", "labs", "five"],
        ["frobnicate"],
        ["bench"],
    ])
    def test_usage_errors(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            rc = main(argv)
            raise SystemExit(rc)
        assert exc.value.code == 1

    def test_verify_pass(self, capsys):
        assert main(["verify", "--model", "matrix", "--size", "3x3", "--break", "gray row"]) == 0
        out = capsys.readouterr().out
        assert "orbits: 36" in out and "PASS" in out

    def test_verify_decomposition_reports_incompleteness(self, tmp_path, capsys):
        out = tmp_path / "v.json"
        assert main(["verify", "matrix", "3x3", "--break", "doublelex", "--json", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["sound"] and not data["complete"]
        assert "several survivors" in capsys.readouterr().out

    def test_verify_failure(self, capsys):
        rc = main(["verify", "matrix", "3x3", "--break", "gray row", "--strict"])
        out = capsys.readouterr().out
        assert rc == 2 and "FAIL" in out and "counterexample" in out

    def test_verify_guard(self, capsys):
        assert main(["verify", "matrix", "6x6", "--break", "lex row"]) == 3
        assert "guard" in capsys.readouterr().err

    def test_verify_benchmark_model(self, capsys):
        assert main(["verify", "labs", "6", "--break", "anti-gray outside-in"]) == 0


class TestBench:
    def test_empty_sweep(self, tmp_path):
        sweep = tmp_path / "s.csv"
        sweep.write_text("model,size,break\n")
        out = tmp_path / "o.csv"
        assert main(["bench", str(sweep), "--csv", str(out)]) == 0
        text = out.read_text()
        assert text.splitlines() == ["model,n,config,heur,status,backtracks,nodes,optimum,time-ms"]

    def test_sweep_order_and_errors(self, tmp_path):
        sweep = tmp_path / "s.csv"
        sweep.write_text(
            "model,size,break,heur,node_budget\n"
            "labs,6,gray rev,,\n"
            "still-life,3,bogus,,\n"
            "still-life,8,none,,10\n"
            "queens-armies,3,anti-lex snake,,\n")
        out = tmp_path / "o.csv"
        assert main(["bench", str(sweep), "--csv", str(out)]) == 0
        r = rows(out.read_text())
        assert [x["model"] for x in r] == ["labs", "still-life", "still-life", "queens-armies"]
        assert r[0]["optimum"] == "7" and r[0]["config"] == "gray rev"
        assert r[1]["status"].startswith("error")
        assert r[2]["status"] == "budget-exceeded" and r[2]["optimum"] == ""
        assert r[3]["optimum"] == "1"
        assert all(x["time-ms"] == "" for x in r)

    def test_menu_invariance_and_parallel(self, capsys):
        assert main(["bench", "--menu", "--model", "still-life", "--size", "3", "--jobs", "2"]) == 0
        r = rows(capsys.readouterr().out)
        assert len(r) == 21 and {x["optimum"] for x in r} == {"6"}
        serial = run_bench([RunConfig("still-life", 3, b) for b in MENUS["still-life"]])
        assert [x["nodes"] for x in rows(serial)] == [x["nodes"] for x in r]

    def test_timing_column(self):
        r = rows(run_bench([RunConfig("labs", 5, "none")], timing=True))
        assert float(r[0]["time-ms"]) >= 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symbreak", "solve", "still-life", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "optimum=6" in proc.stdout
