import random

import pytest

from polypart import report
from polypart.cli import main, parse_params, read_surfaces
from polypart.errors import ParseError


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rng = random.Random(3)
    (tmp_path / "p.txt").write_text(
        "".join(f"{rng.randint(-50, 50) / 10} {rng.randint(-50, 50) / 10}\n" for _ in range(40)))
    (tmp_path / "a.txt").write_text("".join(f"{rng.randint(-50, 50)} {rng.randint(-50, 50)}\n" for _ in range(5)))
    (tmp_path / "b.txt").write_text("".join(f"{rng.randint(-50, 50)} {rng.randint(-50, 50)}\n" for _ in range(7)))
    (tmp_path / "plane.txt").write_text(
        "".join(f"{rng.randint(-50, 50)} {rng.randint(-50, 50)} 0 0\n" for _ in range(60)))
    (tmp_path / "line.txt").write_text("".join(f"{i} {2 * i} 0 0\n" for i in range(5)))
    (tmp_path / "x3.txt").write_text("1 0 0 1 0\n")
    (tmp_path / "x4.txt").write_text("1 0 0 0 1\n")
    (tmp_path / "t1.txt").write_text("1 1 0\n")
    (tmp_path / "t2.txt").write_text("1 0 1\n")
    (tmp_path / "z.txt").write_text("# dimension 2\n")
    (tmp_path / "plane.var").write_text(
        "dimension = 4\ndim = 2\ndegree = 1\ndelta1 = 1\ndelta2 = 1\n"
        "equations = x3.txt, x4.txt\nparametrization = t1.txt, t2.txt, z.txt, z.txt\n")
    return tmp_path


def test_bounds_command(capsys):
    assert main(["bounds", "chardin_upper", "--deg", "2", "--e", "1", "--ell", "3"]) == 0
    assert capsys.readouterr().out.strip() == "8"
    assert main(["bounds", "betti_bound", "--degs", "2,3", "--deg-g", "7", "--d", "4"]) == 0
    assert capsys.readouterr().out.strip() == "294"
    assert main(["bounds", "chardin_philippon_lower", "--deg", "2", "--delta", "2",
                 "--d", "2", "--e", "1", "--ell", "1"]) == 3
    assert main(["bounds", "chardin_upper", "--deg", "2"]) == 2


def test_partition_reports_are_byte_identical_and_verifiable(workdir, capsys):
    args = ["partition", "--points", "p.txt", "--degree", "4", "--seed", "7"]
    assert main(args + ["--out", "r1.txt"]) == 0
    assert main(args + ["--out", "r2.txt"]) == 0
    a, b = (workdir / "r1.txt").read_bytes(), (workdir / "r2.txt").read_bytes()
    assert a == b
    kv = report.loads(a.decode())
    assert kv["config.seed"] == "7" and kv["budget_check"] == "true"
    for key in ("stages", "degrees", "cell_count", "max_cell", "residue_size"):
        assert key in kv
    assert main(["verify", "--report", "r1.txt"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_tampered_report_fails_verification(workdir, capsys):
    main(["partition", "--points", "p.txt", "--degree", "4", "--out", "r.txt"])
    text = (workdir / "r.txt").read_text()
    kv = report.loads(text)
    (workdir / "r.txt").write_text(text.replace(f"max_cell = {kv['max_cell']}",
                                                f"max_cell = {int(kv['max_cell']) + 1}"))
    assert main(["verify", "--report", "r.txt"]) == 1
    assert "max_cell = FAIL" in capsys.readouterr().out


def test_variety_and_kernel_fallback(workdir, capsys):
    assert main(["partition-variety", "--points", "plane.txt", "--variety", "plane.var",
                 "--degree", "96", "--out", "v.txt"]) == 0
    assert main(["verify", "--report", "v.txt"]) == 0
    capsys.readouterr()
    assert main(["partition-variety", "--points", "line.txt", "--variety", "plane.var",
                 "--degree", "24"]) == 0
    kv = report.loads(capsys.readouterr().out)
    assert kv["kernel_fallback"] == "true" and kv["residue_size"] == "5"


def test_hamsandwich_and_hilbert(workdir, capsys):
    assert main(["hamsandwich", "--points", "a.txt,b.txt", "--degree", "2", "--out", "h.txt"]) == 0
    assert report.read(workdir / "h.txt")["valid"] == "true"
    assert main(["verify", "--report", "h.txt"]) == 0
    capsys.readouterr()
    assert main(["hilbert", "--points", "p.txt", "--degree", "2"]) == 0
    kv = report.loads(capsys.readouterr().out)
    assert kv["value"] == "6" and kv["saturated"] == "true"


def test_generate_then_incidence(workdir, capsys):
    assert main(["generate", "--family", "quadrics_4d", "--params", "m=30,n=8", "--seed", "2",
                 "--out-dir", "inst"]) == 0
    capsys.readouterr()
    assert main(["incidence", "--points", "inst/points.txt", "--surfaces", "inst/surfaces.txt",
                 "--k", "2", "--report", "i.txt"]) == 0
    kv = report.read(workdir / "i.txt")
    assert kv["branch"] == "clamped" and int(kv["count"]) >= 24
    assert main(["incidence", "--family", "grid_lines_2d", "--params", "q=5"]) == 0
    assert report.loads(capsys.readouterr().out)["count"] == "50"


def test_error_categories(workdir, capsys):
    assert main(["partition", "--points", "missing.txt", "--degree", "3"]) == 2
    assert "error[PARSE]" in capsys.readouterr().err
    assert main(["partition-variety", "--points", "plane.txt", "--variety", "plane.var",
                 "--degree", "10"]) == 3
    assert "error[PRECOND]" in capsys.readouterr().err
    (workdir / "pts.txt").write_text("".join(f"{i} {i * i % 11}\n" for i in range(40)))
    assert main(["partition", "--points", "pts.txt", "--degree", "6",
                 "--max-iterations", "0", "--restarts", "1"]) == 4
    assert "error[SEARCH]" in capsys.readouterr().err
    with pytest.raises(SystemExit) as err:
        main(["nope"])
    assert err.value.code == 2


def test_verify_selected_criteria(capsys):
    assert main(["verify", "--criteria", "2,6"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 2


def test_helpers(tmp_path):
    assert parse_params("m=3, n=1/2") == {"m": 3, "n": __import__("fractions").Fraction(1, 2)}
    with pytest.raises(ParseError):
        parse_params("m")
    with pytest.raises(ParseError):
        parse_params("m=x")
    f = tmp_path / "s.txt"
    f.write_text("# dimension 2\n1 1 0; -1 0 0\n1 0 1\n")
    polys = read_surfaces(f)
    assert len(polys) == 2 and polys[0].dimension == 2
