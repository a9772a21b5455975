import pytest

from sparsecount.cli import run

C3 = "a b\nb c\nc a\n"
C4 = "a b\nb c\nc d\nd a\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def test_count(files, capsys):
    assert run(["count", "-k", "2", files("c3.txt", C3)]) == 0
    assert capsys.readouterr().out == "3\n"


def test_count_is_problem(files, capsys):
    assert run(["count", "--problem", "is", "-k", "2", files("c4.txt", C4)]) == 0
    assert capsys.readouterr().out == "2\n"


def test_condense_then_extract(files, capsys, tmp_path):
    g = files("c3.txt", C3)
    assert run(["condense", "-k", "2", g]) == 0
    data = capsys.readouterr().out
    f = files("c3.cmp", data)
    assert run(["extract", f]) == 0
    assert capsys.readouterr().out == "3\n"


def test_null_file(files, capsys):
    k8 = "".join(f"{i} {j}\n" for i in range(8) for j in range(i + 1, 8))
    assert run(["condense", "--c", "2", "-k", "1", files("k8.txt", k8)]) == 0
    data = capsys.readouterr().out
    assert data.splitlines()[-1] == "NULL"
    assert run(["extract", files("k8.cmp", data)]) == 0
    assert capsys.readouterr().out == "0\n"


def test_output_is_deterministic(files, capsys):
    g = files("c4.txt", C4)
    outs = []
    for _ in range(2):
        assert run(["condense", "-k", "3", g]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_oracle_and_modulator(files, capsys):
    g = files("c4.txt", C4)
    assert run(["oracle", "-k", "2", g]) == 0
    assert capsys.readouterr().out == "2\n"
    assert run(["modulator", "-k", "2", g]) == 0
    names = capsys.readouterr().out.split()
    assert len(names) <= 8 and set(names) <= {"a", "b", "c", "d"}


def test_decompose(files, capsys):
    assert run(["decompose", "-k", "2", files("c3.txt", C3)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("center ")
    assert "params alpha=" in out


def test_modulator_file(files, capsys):
    g = files("c4.txt", C4)
    m = files("m.txt", "a c\n")
    assert run(["count", "--problem", "ds", "--modulator-file", m, "-k", "2", g]) == 0
    assert capsys.readouterr().out == "6\n"


def test_selftest(capsys):
    assert run(["selftest", "--max-n", "12", "--count", "10"]) == 0
    assert "agree with the oracle" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [[], ["count"], ["count", "-k", "x", "g"], ["bogus"], ["count", "-k", "-1", "g"], ["count", "--t", "-1", "-k", "1", "g"]],
)
def test_usage_errors(argv, capsys):
    assert run(argv) == 64


def test_ds_needs_modulator(files):
    assert run(["count", "--problem", "ds", "-k", "1", files("c4.txt", C4)]) == 64


def test_bad_modulator_name(files):
    g = files("c4.txt", C4)
    assert run(["count", "--problem", "ds", "--modulator-file", files("m.txt", "zz"), "-k", "1", g]) == 65


def test_bad_input_files(files):
    assert run(["extract", files("junk.cmp", "garbage\n")]) == 65
    assert run(["count", "-k", "1", files("dup.txt", "a b\nb a\n")]) == 65
    assert run(["count", "-k", "1", files("bad.txt", "a b c\n")]) == 65


def test_missing_file(tmp_path):
    assert run(["count", "-k", "1", str(tmp_path / "nope.txt")]) == 66
    assert run(["extract", str(tmp_path / "nope.cmp")]) == 66


def test_verbose_reports_stats(files, capsys):
    assert run(["count", "-v", "-k", "2", files("c3.txt", C3)]) == 0
    err = capsys.readouterr().err
    assert "stored_values=" in err
