import io
import json
import subprocess
import sys

import pytest

from nilrad import scenarios
from nilrad.cli import Session, main
from nilrad.errors import DuplicateName, ExprSyntaxError, MalformedAlpha


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def session_output(script):
    buf = io.StringIO()
    Session(out=buf).run_script(script)
    return buf.getvalue()


class TestLet:
    def test_witness_square(self):
        assert session_output("let h in D_2\neval h^2") == "1·t^1\n"

    def test_literal_zero(self):
        assert session_output("let x = 0; eval x") == "0\n"

    def test_weil_generators(self):
        assert session_output("algebra B = [[1,0],[0,1],[1,1]]; let (u,v) in B; eval u*v") == "1·u·v\n"

    def test_errors(self):
        s = Session(out=io.StringIO())
        s.execute("let h in D_2")
        with pytest.raises(DuplicateName):
            s.execute("let h in D_3")
        with pytest.raises(MalformedAlpha):
            s.execute("algebra A = [[1,1]]")
        with pytest.raises(ExprSyntaxError):
            s.execute("let in D_2")
        with pytest.raises(ExprSyntaxError):
            s.execute("frobnicate x")


class TestEval:
    def test_sqrt(self, capsys):
        assert run(["eval", "sqrt(1+h)", "--let", "h in D_1"], capsys)[1] == "1 + 0.5·t^1\n"

    def test_zero(self, capsys):
        assert run(["eval", "0"], capsys)[1] == "0\n"

    def test_geometric(self, capsys):
        assert run(["eval", "1/(1+h)", "--let", "h in D_2"], capsys)[1] == "1 − 1·t^(1/2) + 1·t^1\n"

    def test_json(self, capsys):
        code, out, _ = run(["eval", "exp(h)", "--let", "h in D_2", "--json"], capsys)
        assert code == 0
        assert json.loads(out) == {"std": 1, "terms": [{"num": 1, "den": 2, "coef": 1},
                                                       {"num": 1, "den": 1, "coef": 0.5}]}

    def test_seventeen_digits(self, capsys):
        out = run(["eval", "exp(1+h)", "--let", "h in D_1", "--json"], capsys)[1]
        assert '"std": 2.7182818284590451' in out

    def test_syntax_error(self, capsys):
        code, _, err = run(["eval", "1 + * 2"], capsys)
        assert code == 1
        assert "position 4" in err and err.rstrip().endswith("^")

    def test_domain_error(self, capsys):
        code, _, err = run(["eval", "sqrt(h)", "--let", "h in D_1"], capsys)
        assert code == 1 and "error" in err

    def test_unbound(self, capsys):
        assert run(["eval", "y + 1"], capsys)[0] == 1


class TestDeriv:
    def test_exp(self, capsys):
        out = run(["deriv", "exp(x)", "--at", "0", "--order", "3"], capsys)[1]
        assert out.splitlines() == ["c_0 = 1", "c_1 = 1", "c_2 = 0.5", "c_3 = 0.166667"]

    def test_square(self, capsys):
        out = run(["deriv", "x^2", "--at", "1", "--order", "1"], capsys)[1]
        assert out.splitlines() == ["c_0 = 1", "c_1 = 2"]

    def test_inverse_sqrt(self, capsys):
        out = run(["deriv", "1/sqrt(1-x)", "--at", "0", "--order", "2"], capsys)[1]
        assert out.splitlines() == ["c_0 = 1", "c_1 = 0.5", "c_2 = 0.375"]

    def test_derivatives_and_json(self, capsys):
        out = run(["deriv", "exp(x)", "--at", "0", "--order", "3", "--derivatives"], capsys)[1]
        assert out.splitlines()[-1] == "f^(3) = 1"
        out = run(["deriv", "x^2", "--at", "1", "--json"], capsys)[1]
        assert json.loads(out) == {"x0": 1, "k": 1, "coeffs": [1, 2]}

    def test_script_form(self):
        assert session_output("deriv x^2 at 1 order 1") == "c_0 = 1\nc_1 = 2\n"


class TestCompare:
    def test_weak(self, capsys):
        assert run(["compare", "0", "weak", "h", "--let", "h in D_1"], capsys)[1] == "weakly-less\n"

    def test_equal(self, capsys):
        assert run(["compare", "x", "eq", "x", "--let", "x = 2 + t"], capsys)[1] == "equal\n"

    def test_strict(self, capsys):
        assert run(["compare", "1+h", "strict", "2", "--let", "h in D_1"], capsys)[1] == "strict-less\n"

    def test_close_and_iso(self):
        out = session_output("let h in D_1; compare 0 strict h; compare 1 iso 1+h; compare 1 eq 1+h")
        lines = out.splitlines()
        assert lines[0] == "infinitely-close"
        assert lines[1].startswith("iso: ") and "1" in lines[1]
        assert lines[2] == "not-equal"


class TestExamples:
    @pytest.mark.parametrize("name", sorted(scenarios.SCENARIOS))
    def test_passes(self, name, capsys):
        code, out, _ = run(["example", name], capsys)
        assert code == 0
        assert out.rstrip().endswith(f"example {name}: PASS")
        assert "[FAIL]" not in out

    def test_seed_changes_samples_not_verdict(self, monkeypatch, capsys):
        monkeypatch.setenv("NILRAD_SEED", "7")
        code, out, _ = run(["example", "ode-roots"], capsys)
        assert code == 0


class TestRepl:
    def test_script_file(self, tmp_path):
        script = tmp_path / "s.nil"
        script.write_text("let h in D_2\neval h^2\n# comment\neval 1/(1+h)\n", encoding="utf-8")
        proc = subprocess.run([sys.executable, "-m", "nilrad", "repl", "--script", str(script)],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout == "1·t^1\n1 − 1·t^(1/2) + 1·t^1\n"

    def test_stdin_stops_on_error(self):
        proc = subprocess.run([sys.executable, "-m", "nilrad", "repl"], input="eval log(0)\neval 1\n",
                              capture_output=True, text=True)
        assert proc.returncode == 1
        assert proc.stdout == ""
