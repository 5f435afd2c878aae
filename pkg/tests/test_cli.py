"""Tests for problem files and the command-line driver."""

import io
import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

import pytest

from helpers import PROBLEMS, SL2, nc

from acgb.cli import main, parse_problem, render_problem, run
from acgb.commands import CommandRegistry
from acgb.exceptions import ProblemError, ProblemParseError
from acgb.kernel import GF, MonomialOrderKind, WordOrderKind


def problem_path(name):
    return os.path.join(PROBLEMS, name)


def read(name):
    with open(problem_path(name), encoding="utf-8") as handle:
        return handle.read()


class TestParser(unittest.TestCase):
    """Test parse_problem."""

    def test_sl2_file(self):
        """Test the sl2 example file."""
        problem = parse_problem(read("sl2.gb"))
        self.assertEqual(problem.variables, ("e", "f", "h"))
        self.assertEqual(problem.mode, "lie")
        self.assertEqual(problem.lie().table, SL2.table)
        self.assertEqual(list(problem.generators), nc("e f h", "e^3, f^3, h^3 - 4h"))
        self.assertEqual(problem.order.kind, MonomialOrderKind.GREVLEX)
        self.assertEqual(problem.order.word, WordOrderKind.ET)

    def test_defaults_and_inference(self):
        """Test the inferred mode and word ordering."""
        problem = parse_problem("vars x y\nideal x*y\n")
        self.assertEqual(problem.mode, "free")
        self.assertEqual(problem.order.word, WordOrderKind.ET)
        problem = parse_problem("vars x y\norder lex\nideal x*y\n")
        self.assertEqual(problem.order.word, WordOrderKind.DEGLEX)
        self.assertEqual(parse_problem(read("infinite.gb")).mode, "lie")

    def test_separators(self):
        """Test commas, line breaks and sign-less term starts between polynomials."""
        expected = nc("x y", "x^2, y - 1, x*y")
        self.assertEqual(list(parse_problem("vars x y\nideal x^2  y - 1\n      x*y\n").generators), expected)
        problem = parse_problem("vars x y\nideal x^2, y - 1, x*y # comment\n")
        self.assertEqual(list(problem.generators), expected)

    def test_coefficients(self):
        """Test fractions, implicit products and finite fields."""
        (f,) = parse_problem("vars x y\nideal 3/4 x*y - 2*x + 1/2\n").generators
        self.assertEqual(f, nc("x y", "3/4*x*y - 2x + 1/2")[0])
        problem = parse_problem("field GF 7\nvars x\nideal 8x + 1/2\n")
        self.assertEqual(problem.field, GF(7))
        (g,) = problem.generators
        self.assertEqual(g.coefficient((0,)), GF(7)(1))
        self.assertEqual(g.coefficient(()), GF(7)(4))

    def test_bracket_orientation(self):
        """Test that [y,x] and [x,y] give opposite tables."""
        a = parse_problem("vars x y\nbracket [y,x] = x\n").lie()
        b = parse_problem("vars x y\nbracket [x,y] = -x\n").lie()
        self.assertEqual(a.table, b.table)
        self.assertEqual(a.bracket(1, 0), {0: 1})

    def test_options(self):
        """Test option lines and their settings overrides."""
        problem = parse_problem("vars x\noption max-deg 4\noption verify off\noption max-deg 5\n")
        self.assertEqual(problem.settings_overrides(), {"verify": False, "max_degree": 5})

    def test_errors_carry_positions(self):
        """Test line and column of malformed input."""
        cases = [
            ("vars x y\nideal x^ + y\n", 2, 10),
            ("vars x y\nideal x + w\n", 2, 11),
            ("vars x y\nfoo x\n", 2, 1),
            ("vars x y\nideal x,\n", 2, 9),
            ("vars x y\nideal 1/0 x\n", 2, 9),
            ("vars x y\norder grevlex sideways\n", 2, 15),
            ("vars x y\nideal x $ y\n", 2, 9),
        ]
        for text, line, column in cases:
            with self.assertRaises(ProblemParseError, msg=text) as ctx:
                parse_problem(text)
            self.assertEqual((ctx.exception.line, ctx.exception.column), (line, column), text)

    def test_semantic_errors(self):
        """Test well-formed but meaningless problems."""
        cases = [
            "ideal x\n",
            "vars x x\n",
            "vars x y\nmode free\nbracket [x,y] = x\n",
            "vars x y\nbracket [x,x] = y\n",
            "vars x y\nbracket [x,y] = x\nbracket [y,x] = y\n",
            "vars x y\nbracket [x,y] = x*y\n",
            "vars x y\norder lex et\n",
            "vars x\noption colour blue\n",
            "vars x\noption workers 0\n",
            "field GF 8\nvars x\n",
        ]
        for text in cases:
            with self.assertRaises(ProblemError, msg=text):
                parse_problem(text)

    def test_render_round_trip(self):
        """Test that rendered problems parse back to equal problems."""
        for name in ("sl2.gb", "heisenberg.gb", "sl2_relations.gb", "not_groebner.gb", "infinite.gb"):
            problem = parse_problem(read(name))
            self.assertEqual(parse_problem(render_problem(problem)), problem, name)
        problem = parse_problem("field GF 5\nvars a b\noption seed 3\noption verify false\nideal 2a*b - 3\n")
        self.assertEqual(parse_problem(render_problem(problem)), problem)


class TestDriver(unittest.TestCase):
    """Test run() on the problem files."""

    def setUp(self):
        self.stderr = io.StringIO()
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def write(self, text):
        path = os.path.join(self.tmpdir, "problem.gb")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def run_cli(self, *argv):
        return run(list(argv), stderr=self.stderr)

    def test_registry(self):
        """Test that every subcommand is registered."""
        self.assertEqual(sorted(CommandRegistry.names()), ["check", "comgb", "envgb", "freegb", "pipeline"])

    def test_pipeline_text(self):
        """Test the text output of the sl2 pipeline."""
        code, out = self.run_cli("pipeline", problem_path("sl2.gb"))
        self.assertEqual(code, 0)
        self.assertIn("stage two_sided_basis (10 elements", out)
        self.assertIn("stage final_basis (13 elements", out)
        self.assertIn("  f*e - e*f + h", out)
        self.assertIn("  e*f*h - 1/2*h^2 - h", out)
        self.assertIn("verification: verified", out)

    def test_pipeline_json(self):
        """Test the structured document of the sl2 pipeline."""
        code, out = self.run_cli("pipeline", "--json", problem_path("sl2.gb"))
        self.assertEqual(code, 0)
        document = json.loads(out)
        self.assertEqual(
            set(document),
            {"command", "problem", "stages", "verification", "complete", "notes", "basis_change"},
        )
        self.assertEqual(document["problem"]["variables"], ["e", "f", "h"])
        self.assertEqual(
            [s["name"] for s in document["stages"]],
            ["two_sided_basis", "symbols", "graded_basis", "u_sets", "homogeneous_lift", "final_basis"],
        )
        final = document["stages"][-1]
        self.assertEqual(final["kind"], "free")
        self.assertEqual(len(final["basis"]), 13)
        # f*e - e*f + h with 1-based letters
        self.assertEqual(final["basis"][0], [[1, 1, [2, 1]], [-1, 1, [1, 2]], [1, 1, [3]]])
        self.assertEqual(document["verification"]["status"], "verified")
        self.assertTrue(all(document["verification"]["checks"].values()))

    def test_no_verify_keeps_bases(self):
        """Test that skipping verification changes nothing but the status."""
        _, verified = self.run_cli("pipeline", "--json", problem_path("heisenberg.gb"))
        code, skipped = self.run_cli("pipeline", "--json", "--no-verify", problem_path("heisenberg.gb"))
        self.assertEqual(code, 0)
        verified, skipped = json.loads(verified), json.loads(skipped)
        self.assertEqual(skipped["verification"]["status"], "unverified")
        self.assertEqual(
            [s["basis"] for s in verified["stages"]],
            [s["basis"] for s in skipped["stages"]],
        )

    def test_check_verdict(self):
        """Test the counterexample printed for a non-basis."""
        code, out = self.run_cli("check", problem_path("not_groebner.gb"))
        self.assertEqual(code, 0)
        self.assertIn("verdict: not a Groebner basis", out)
        self.assertIn("witness:", out)
        self.assertIn("verification: not_groebner", out)

    def test_check_basis(self):
        """Test that the lifted sl2 relations pass the check."""
        code, out = self.run_cli("check", problem_path("sl2_relations.gb"))
        self.assertEqual(code, 0)
        self.assertIn("verification: verified", out)
        self.assertIn("graded_quotient_commutative: ok", out)
        self.assertIn("stage graded_basis (10 elements", out)

    def test_other_commands(self):
        """Test comgb, envgb and freegb."""
        code, out = self.run_cli("comgb", self.write("vars x y\nideal x^2 - y, x*y - x\n"))
        self.assertEqual(code, 0)
        self.assertIn("stage commutative_basis (3 elements", out)
        self.assertIn("  y^2 - y", out)
        code, out = self.run_cli("envgb", problem_path("sl2.gb"))
        self.assertEqual(code, 0)
        self.assertIn("stage two_sided_basis (10 elements", out)
        code, out = self.run_cli("freegb", problem_path("heisenberg.gb"))
        self.assertEqual(code, 0)
        self.assertIn("completion: complete", out)
        self.assertIn("is_groebner: ok", out)

    def test_freegb_keeps_the_ideal(self):
        """Test completion of a linear generator of U(sl2) and its membership check."""
        text = read("sl2.gb").replace("ideal e^3  f^3  h^3 - 4h", "ideal e")
        code, out = self.run_cli("freegb", self.write(text))
        self.assertEqual(code, 0)
        self.assertIn("stage bounded_completion (3 elements", out)
        self.assertIn("completion: complete", out)
        self.assertIn("generators_reduce_to_zero: ok", out)
        self.assertIn("verification: verified", out)

    def test_exit_codes(self):
        """Test parse, domain and resource errors."""
        code, out = self.run_cli("pipeline", self.write("vars x y\nideal x^ + y\n"))
        self.assertEqual((code, out), (2, ""))
        self.assertIn("line 2, column 10", self.stderr.getvalue())

        self.assertEqual(self.run_cli("pipeline", problem_path("not_groebner.gb"))[0], 2)
        self.assertEqual(self.run_cli("pipeline", os.path.join(self.tmpdir, "missing.gb"))[0], 2)
        self.assertEqual(self.run_cli("pipeline", "--workers", "0", problem_path("sl2.gb"))[0], 2)
        self.assertEqual(self.run_cli("freegb", "--max-deg", "2", problem_path("sl2_relations.gb"))[0], 3)

        code, _ = self.run_cli("pipeline", problem_path("jacobi_bad.gb"))
        self.assertEqual(code, 3)
        self.assertIn("witness x, y, z", self.stderr.getvalue())

        code, _ = self.run_cli("pipeline", problem_path("infinite.gb"))
        self.assertEqual(code, 4)
        self.assertIn("monomial x*z", self.stderr.getvalue())

    def test_error_document(self):
        """Test the structured error document."""
        code, out = self.run_cli("pipeline", "--json", problem_path("infinite.gb"))
        self.assertEqual(code, 4)
        document = json.loads(out)
        self.assertEqual(document["kind"], "InfiniteUSetError")
        self.assertEqual(document["stage"], "u_sets")
        self.assertEqual(document["exit_code"], 4)
        self.assertEqual(document["data"]["unbounded"], [1])
        self.assertEqual(document["data"]["witnesses"][:2], [[0, 0, 0], [0, 1, 0]])

    def test_usage_errors(self):
        """Test argparse failures and invalid environment settings."""
        with mock.patch("sys.stderr", io.StringIO()):
            self.assertEqual(self.run_cli("frobnicate")[0], 2)
        with mock.patch.dict(os.environ, {"ACGB_LOG_LEVEL": "LOUD"}):
            self.assertEqual(self.run_cli("check", problem_path("sl2.gb"))[0], 2)

    def test_environment_settings(self):
        """Test that ACGB_VERIFY switches verification off."""
        with mock.patch.dict(os.environ, {"ACGB_VERIFY": "false"}):
            code, out = self.run_cli("envgb", problem_path("sl2.gb"))
        self.assertEqual(code, 0)
        self.assertIn("verification: unverified", out)

    def test_main(self):
        """Test the console entry point."""
        with mock.patch("sys.stdout", io.StringIO()) as stdout, mock.patch("sys.stderr", io.StringIO()):
            self.assertEqual(main(["comgb", problem_path("abelian.gb")]), 0)
        self.assertIn("stage commutative_basis (0 elements", stdout.getvalue())


if __name__ == "__main__":
    pytest.main([__file__])
