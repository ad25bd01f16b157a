import io
import subprocess
import sys

import pytest

from colorsieve.cli import run
from colorsieve.planar_pfaffian import format_planar

from gen import cycle_graph


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue().splitlines(), err.getvalue()


@pytest.fixture
def path3(tmp_path):
    f = tmp_path / "path3.dg"
    f.write_text("p digraph 3 2\na 1 2\na 2 3\n")
    return str(f)


@pytest.fixture
def colored(tmp_path):
    f = tmp_path / "col.dg"
    f.write_text("p digraph 3 2\na 1 2 4\na 2 3 9\n")
    return str(f)


@pytest.fixture
def c4(tmp_path):
    f = tmp_path / "c4.pg"
    f.write_text(format_planar(cycle_graph(4, [1, 2, 2, 2])))
    return str(f)


def without_timing(lines):
    return [" ".join(w for w in line.split() if not w.startswith("ms=")) for line in lines]


class TestIob:
    def test_yes(self, path3):
        code, lines, _ = call(["iob", "--input", path3, "--k", "2"])
        assert code == 0 and lines[0] == "YES"
        assert lines[-1].startswith("stats colorings=")

    def test_no(self, path3):
        code, lines, _ = call(["iob", "--input", path3, "--k", "3"])
        assert code == 1 and lines[0] == "NO"

    def test_recover(self, path3):
        code, lines, _ = call(["iob", "--input", path3, "--k", "2", "--recover", "--space", "exp"])
        assert code == 0 and lines[1:3] == ["w 1 2", "w 2 3"]

    def test_golden(self, path3):
        _, lines, _ = call(["iob", "--input", path3, "--k", "2"])
        assert without_timing(lines) == ["YES", "stats colorings=2 evals=8"]

    def test_threads_do_not_change_output(self, path3):
        a = call(["iob", "--input", path3, "--k", "2"])[1]
        b = call(["iob", "--input", path3, "--k", "2", "--threads", "2"])[1]
        assert without_timing(a) == without_timing(b)


class TestOthers:
    def test_colorful_ob(self, colored):
        assert call(["colorful-ob", "--input", colored, "--k", "2"])[0] == 0
        code, lines, _ = call(["colorful-ob", "--input", colored, "--k", "2", "--exact-k"])
        assert code == 0 and without_timing(lines) == ["YES", "stats colorings=1 evals=4"]

    def test_colorful_pm(self, c4):
        assert call(["colorful-pm", "--input", c4, "--k", "2"])[0] == 0
        assert call(["colorful-pm", "--input", c4, "--k", "3"])[0] == 1

    def test_splitter_verify(self):
        code, lines, _ = call(["splitter", "--n", "10", "--k", "3", "--verify"])
        assert code == 0 and lines[0] == "YES"
        assert "size=130" in lines[-1]

    def test_splitter_enumerate(self):
        code, lines, _ = call(["splitter", "--n", "4", "--k", "2", "--t", "2", "--enumerate", "--limit", "2"])
        assert code == 0 and lines[:2] == ["v 2 1 2 1", "v 1 1 2 2"]

    def test_splitter_greedy(self):
        code, lines, _ = call(["splitter", "--n", "8", "--k", "3", "--greedy", "--alpha", "1.302017", "--verify"])
        assert code == 0 and "t=4" in lines[-1]

    def test_splitter_truncated_fails(self):
        code, lines, _ = call(["splitter", "--n", "10", "--k", "3", "--verify", "--limit", "1"])
        assert code == 1 and lines[0] == "NO" and lines[1].startswith("uncovered")

    def test_oracle(self, path3, c4):
        assert call(["oracle", "iob", "--input", path3, "--k", "2"])[:2] == (0, ["YES"])
        assert call(["oracle", "max-internal", "--input", path3])[1] == ["max_internal 2"]
        assert call(["oracle", "ob-count", "--input", path3])[1] == ["count 1"]
        code, lines, _ = call(["oracle", "pm-enum", "--input", c4])
        assert code == 0 and lines[-1] == "count 2"


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["iob", "--input", "/nonexistent", "--k", "2"],
            ["iob", "--k", "2"],
            ["iob", "--input", "x", "--k", "0"],
            ["bogus"],
            ["iob", "--input", "x", "--k", "2", "--wat"],
        ],
    )
    def test_exit_two(self, argv):
        code, _, err = call(argv)
        assert code == 2 and err.startswith("colorsieve:")

    def test_parse_error(self, tmp_path):
        f = tmp_path / "bad.dg"
        f.write_text("p digraph 2 1\na 1 1\n")
        code, _, err = call(["iob", "--input", str(f), "--k", "1"])
        assert code == 2 and "line 2" in err

    def test_oracle_guard(self, tmp_path):
        f = tmp_path / "big.dg"
        f.write_text("p digraph 12 0\n")
        assert call(["oracle", "max-internal", "--input", str(f)])[0] == 2

    def test_exact_k_mismatch(self, colored):
        assert call(["colorful-ob", "--input", colored, "--k", "1", "--exact-k"])[0] == 2


def test_console_entry_point(path3):
    proc = subprocess.run([sys.executable, "-m", "colorsieve.cli", "iob", "--input", path3, "--k", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout.splitlines()[0] == "NO"
