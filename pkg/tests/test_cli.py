import subprocess
import sys

import pytest

from lexiforge.cli import main
from lexiforge.object_dict import save


@pytest.fixture(scope="session")
def dic_path(spanish_dict, tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "spanish.dic"
    save(spanish_dict, str(path))
    return str(path)


@pytest.fixture(scope="session")
def rules_path(fixtures_dir):
    return str(fixtures_dir / "wf.rules")


ERA_CANON = (
    "agr num = sing\n"
    "agr pers = 1 3\n"
    "concat = w\n"
    "lex = ser\n"
    "vinfo mood = ind\n"
    "vinfo tense = impf\n"
)


# -- compile and check -------------------------------------------------------

def test_compile_writes_the_dictionary(fixtures_dir, tmp_path, capsys):
    out = tmp_path / "spanish.dic"
    code = main(["compile", str(fixtures_dir / "spanish.lex"), "-o", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == "wrote 41 entries for 41 surfaces to %s\n" % out
    assert captured.err == ""
    assert out.read_text(encoding="utf-8").startswith("LEXIFORGE-OBJDICT 1\n")


def test_compile_reproduces_the_golden_bytes(fixtures_dir, tmp_path, capsys):
    out = tmp_path / "fragment.dic"
    code = main(["compile", str(fixtures_dir / "pedir_minimal.lex"), "-o", str(out)])
    capsys.readouterr()
    assert code == 0
    golden = fixtures_dir.parent / "tests" / "golden" / "pedir_minimal.dic"
    assert out.read_bytes() == golden.read_bytes()


def test_compile_default_output_sits_next_to_the_source(
    fixtures_dir, tmp_path, capsys
):
    src = tmp_path / "base.lex"
    src.write_text(
        (fixtures_dir / "pedir_minimal.lex").read_text(encoding="utf-8"),
        encoding="utf-8",
    )
    code = main(["compile", str(src)])
    captured = capsys.readouterr()
    assert code == 0
    assert (tmp_path / "base.dic").exists()
    assert str(tmp_path / "base.dic") in captured.out


def test_compile_failure_reports_to_stderr(tmp_path, capsys):
    src = tmp_path / "bad.lex"
    src.write_text("#LEXEMES\n\nd (Nope)\n", encoding="utf-8")
    code = main(["compile", str(src)])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.out == ""
    assert "unknown class 'Nope'" in captured.err
    assert not (tmp_path / "bad.dic").exists()


def test_compile_missing_source_is_unusable_input(capsys):
    code = main(["compile", "no/such/base.lex"])
    captured = capsys.readouterr()
    assert code == 2
    assert "cannot read no/such/base.lex" in captured.err


def test_check_clean_source(fixtures_dir, capsys):
    code = main(["check", str(fixtures_dir / "spanish.lex")])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == "0 errors, 0 warnings\n"
    assert captured.err == ""


def test_check_prints_diagnostics_to_stdout(tmp_path, capsys):
    src = tmp_path / "bad.lex"
    src.write_text(
        "#LEXEMES\n\nd (Nope)\n\ne\nwild = 1\nstem = x\n\n"
        "#DATA-DICT\n\nstem =\n\n#DICT-RULES\n\nLEXEMES\n\n@ = @\n$$ = $$\n",
        encoding="utf-8",
    )
    code = main(["check", str(src)])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.err == ""
    lines = captured.out.splitlines()
    assert lines[-1] == "1 errors, 1 warnings"
    assert any("unknown class 'Nope'" in line for line in lines)
    assert any("feature 'wild' is not declared" in line for line in lines)


# -- lookup ---------------------------------------------------------------------

def test_lookup_prints_indented_canonical_form(dic_path, capsys):
    code = main(["lookup", dic_path, "era"])
    captured = capsys.readouterr()
    assert code == 0
    expected = "era:\n" + "".join(
        "  %s\n" % line for line in ERA_CANON.splitlines()
    ) + "\n"
    assert captured.out == expected


def test_lookup_miss_marks_unknown_and_fails(dic_path, capsys):
    code = main(["lookup", dic_path, "ped", "nope"])
    captured = capsys.readouterr()
    assert code == 1
    assert "ped:\n" in captured.out
    assert "nope: *UNKNOWN*\n" in captured.out


def test_lookup_porcelain_escapes_newlines(dic_path, capsys):
    code = main(["lookup", "--porcelain", dic_path, "era", "nope"])
    captured = capsys.readouterr()
    assert code == 1
    era, nope = captured.out.splitlines()
    assert era == "era\t" + ERA_CANON.rstrip("\n").replace("\n", "\\n")
    assert nope == "nope\t*UNKNOWN*"


# -- analyze --------------------------------------------------------------------

def test_analyze_human_output(dic_path, rules_path, capsys):
    code = main(["analyze", dic_path, rules_path, "pedíamos"])
    captured = capsys.readouterr()
    assert code == 0
    lines = captured.out.splitlines()
    assert lines[0] == "pedíamos: Word pedir ped+íamos"
    assert "  lex = pedir" in lines
    assert "  vinfo tense = impf" in lines


def test_analyze_porcelain_record(dic_path, rules_path, capsys):
    code = main(["analyze", "--porcelain", dic_path, rules_path, "pido"])
    captured = capsys.readouterr()
    assert code == 0
    fields = captured.out.rstrip("\n").split("\t")
    assert fields[0] == "pido"
    assert fields[1] == "Word"
    assert fields[2] == "pedir"
    assert fields[3] == "pid+o"
    assert "\\n" in fields[4] and "agr num = sing" in fields[4]


def test_analyze_miss(dic_path, rules_path, capsys):
    code = main(["analyze", dic_path, rules_path, "pedo"])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.out == "pedo: *UNKNOWN*\n"


# -- generate --------------------------------------------------------------------

def test_generate_with_constraints(dic_path, rules_path, capsys):
    code = main(
        [
            "generate", dic_path, rules_path, "pedir",
            "vinfo.tense=impf", "agr.pers=1", "agr.num=plu",
        ]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == "pedíamos\n"


def test_generate_lists_sorted_distinct_surfaces(dic_path, rules_path, capsys):
    code = main(["generate", dic_path, rules_path, "amar", "vinfo.tense=impf"])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out.splitlines() == [
        "amaba", "amabais", "amaban", "amabas", "amábamos",
    ]


def test_generate_accepts_value_disjunctions(dic_path, rules_path, capsys):
    code = main(
        ["generate", dic_path, rules_path, "pedir",
         "vinfo.tense=impf", "agr.pers=1,3", "agr.num=sing"]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == "pedía\n"


def test_generate_no_answer(dic_path, rules_path, capsys):
    code = main(["generate", dic_path, rules_path, "correr"])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.out == "*UNKNOWN*\n"


@pytest.mark.parametrize(
    "constraint", ["vinfo.tense", "=impf", "vinfo.tense=", "lex=a lex.sub=b"]
)
def test_generate_rejects_bad_constraints(dic_path, rules_path, capsys, constraint):
    code = main(
        ["generate", dic_path, rules_path, "pedir"] + constraint.split()
    )
    captured = capsys.readouterr()
    assert code == 2
    assert "bad constraint" in captured.err


# -- dump and stats ------------------------------------------------------------------

def test_dump_reprints_the_stored_bytes(dic_path, capsys):
    code = main(["dump", dic_path])
    captured = capsys.readouterr()
    assert code == 0
    with open(dic_path, encoding="utf-8") as handle:
        assert captured.out == handle.read()


def test_stats_summary(dic_path, capsys):
    code = main(["stats", dic_path])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == (
        "entries: 41\nsurfaces: 41\nlemmas: 14\nhomographs: 0\n"
    )


# -- unusable inputs -------------------------------------------------------------------

def test_missing_dictionary(capsys):
    code = main(["stats", "no/such.dic"])
    captured = capsys.readouterr()
    assert code == 2
    assert "cannot read no/such.dic" in captured.err


def test_undecodable_dictionary(tmp_path, capsys):
    bad = tmp_path / "bad.dic"
    bad.write_bytes(b"LEXIFORGE-OBJDICT 1\n\xff\xfe\n")
    code = main(["stats", str(bad)])
    captured = capsys.readouterr()
    assert code == 2
    assert "invalid UTF-8 at byte 20" in captured.err


def test_malformed_dictionary(tmp_path, capsys):
    bad = tmp_path / "bad.dic"
    bad.write_text("LEXIFORGE-OBJDICT 1\nx\n  a = 1\n  a = 2\n\n", encoding="utf-8")
    code = main(["stats", str(bad)])
    captured = capsys.readouterr()
    assert code == 2
    assert "line 4: duplicate feature path 'a'" in captured.err


def test_wrong_dictionary_version(tmp_path, capsys):
    bad = tmp_path / "bad.dic"
    bad.write_text("LEXIFORGE-OBJDICT 9\n", encoding="utf-8")
    code = main(["stats", str(bad)])
    captured = capsys.readouterr()
    assert code == 2
    assert "unsupported dictionary version" in captured.err


def test_malformed_rules_file(dic_path, tmp_path, capsys):
    rules = tmp_path / "bad.rules"
    rules.write_text("#WF-RULES\n\nWord -> Stem\n", encoding="utf-8")
    code = main(["analyze", dic_path, str(rules), "x"])
    captured = capsys.readouterr()
    assert code == 2
    assert "at least two constituents" in captured.err


# -- the installed entry point -----------------------------------------------------------

def test_module_runs_as_a_subprocess(dic_path, rules_path):
    result = subprocess.run(
        [
            sys.executable, "-m", "lexiforge.cli",
            "generate", dic_path, rules_path, "pedir",
            "vinfo.tense=impf", "agr.pers=1", "agr.num=plu",
        ],
        capture_output=True,
    )
    assert result.returncode == 0
    assert result.stdout.decode("utf-8") == "pedíamos\n"
