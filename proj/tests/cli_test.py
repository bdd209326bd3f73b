"""End-to-end checks of the command-line tool: exit codes, output facts,
determinism and schema conformance."""

import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

CLI = sys.argv.pop(1)
ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
SCHEMA = json.loads((ROOT / "docs" / "report-schema.json").read_text())

TWO_PENDULA_INIT = """\
guess x 0 0
guess y 0 -1
guess x 1 2
guess y 1 0
guess u 0 5
guess v 3 3
v 0 -0.5
v 1 0.1
"""


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)


class Cli(unittest.TestCase):
    def test_analyze_text(self):
        p = run("analyze", MODELS / "twopendula.dae", "--format", "text")
        self.assertEqual(p.returncode, 0, p.stderr)
        self.assertIn("Structural index 7", p.stdout)
        self.assertIn("values:  v^(≤2)", p.stdout)
        self.assertIn("guesses: x^(≤1), y^(≤1), u, v'''", p.stdout)
        self.assertEqual(p.stdout.count("{"), 2 + 4)  # coarse and fine block lines

    def test_analyze_json(self):
        p = run("analyze", MODELS / "twopendula.dae", "--format", "json", "--stages", "-6..2")
        self.assertEqual(p.returncode, 0, p.stderr)
        r = json.loads(p.stdout)
        jsonschema.validate(r, SCHEMA)
        self.assertEqual([b["size"] for b in r["blocks"]], [1, 1, 1, 3])
        self.assertEqual(r["lead_times"], [0, 0, 2, 4])
        self.assertEqual(r["metrics"]["index"], 7)
        guesses = {(e["variable"], e["order"]) for e in r["init"]["guesses"]}
        values = {(e["variable"], e["order"]) for e in r["init"]["values"]}
        self.assertEqual(guesses, {("x", 0), ("x", 1), ("y", 0), ("y", 1), ("u", 0), ("v", 3)})
        self.assertEqual(values, {("v", 0), ("v", 1), ("v", 2)})
        self.assertEqual((r["stages"]["from"], r["stages"]["to"]), (-6, 2))

    def test_schema_all_models(self):
        for model in ["twopendula.dae", "pendulum.dae", "linear.dae"]:
            for scheme in ["basic", "block"]:
                p = run("analyze", MODELS / model, "--format", "json", "--scheme", scheme)
                self.assertEqual(p.returncode, 0, p.stderr)
                jsonschema.validate(json.loads(p.stdout), SCHEMA)

    def test_text_and_json_agree(self):
        t = run("analyze", MODELS / "pendulum.dae").stdout
        r = json.loads(run("analyze", MODELS / "pendulum.dae", "--format", "json").stdout)
        self.assertIn(f"Structural index {r['metrics']['index']}, "
                      f"degrees of freedom {r['metrics']['dof']}", t)
        for e in r["ql"]["per_equation"]:
            self.assertRegex(t, rf"\n  {e['equation']}\s+{e['global']}\s+{e['blockwise']}\n")

    def test_deterministic(self):
        for fmt in ["text", "json"]:
            a = run("analyze", MODELS / "twopendula.dae", "--format", fmt, "--stages", "-6..2")
            b = run("analyze", MODELS / "twopendula.dae", "--format", fmt, "--stages", "-6..2")
            self.assertEqual(a.stdout, b.stdout)
        a = run("solve", MODELS / "pendulum.dae", "--order", 6, "--init", MODELS / "pendulum_swing.init")
        b = run("solve", MODELS / "pendulum.dae", "--order", 6, "--init", MODELS / "pendulum_swing.init")
        self.assertEqual(a.returncode, 0, a.stderr)
        self.assertEqual(a.stdout, b.stdout)

    def test_ill_posed(self):
        self.assertEqual(run("analyze", MODELS / "illposed.dae").returncode, 3)

    def test_bad_input(self):
        with tempfile.NamedTemporaryFile("w", suffix=".dae") as f:
            f.write("var x;\neq A: Der(x,1) + = 0;\n")
            f.flush()
            self.assertEqual(run("analyze", f.name).returncode, 2)
        self.assertEqual(run("analyze", MODELS / "missing.dae").returncode, 2)
        with tempfile.NamedTemporaryFile("w", suffix=".init") as f:
            f.write("guess q 0 1\n")
            f.flush()
            p = run("solve", MODELS / "pendulum.dae", "--order", 1, "--init", f.name)
            self.assertEqual(p.returncode, 2)

    def test_usage(self):
        self.assertEqual(run().returncode, 1)
        self.assertEqual(run("analyze", MODELS / "pendulum.dae", "--stages", "3..1").returncode, 1)
        self.assertEqual(run("analyze", MODELS / "pendulum.dae", "--format", "xml").returncode, 1)

    def test_solve_pendulum(self):
        p = run("solve", MODELS / "pendulum.dae", "--order", 4, "--init",
                MODELS / "pendulum_swing.init", "--format", "json")
        self.assertEqual(p.returncode, 0, p.stderr)
        r = json.loads(p.stdout)
        d = {v["variable"]: v["derivatives"] for v in r["variables"]}
        self.assertAlmostEqual(d["lambda"][0], 4.0, places=10)
        self.assertAlmostEqual(d["x"][2], -4.0, places=10)
        self.assertAlmostEqual(d["y"][2], 9.8, places=10)
        self.assertLess(r["max_scaled_residual"], 1e-10)

    def test_solve_two_pendula_missing_value(self):
        with tempfile.NamedTemporaryFile("w", suffix=".init") as f:
            f.write(TWO_PENDULA_INIT)
            f.flush()
            p = run("solve", MODELS / "twopendula.dae", "--order", 2, "--init", f.name)
            self.assertEqual(p.returncode, 5)
            self.assertIn("(v,2)", p.stderr)
        with tempfile.NamedTemporaryFile("w", suffix=".init") as f:
            f.write(TWO_PENDULA_INIT + "v 2 -0.2\n")
            f.flush()
            p = run("solve", MODELS / "twopendula.dae", "--order", 2, "--init", f.name)
            self.assertEqual(p.returncode, 0, p.stderr)

    def test_executor_failure(self):
        # With x = 1, y = 0, y' = 2 the pendulum block gives lambda'' = 288,
        # and then F has no real root u, so Newton cannot converge.
        with tempfile.NamedTemporaryFile("w", suffix=".init") as f:
            f.write(TWO_PENDULA_INIT.replace("guess x 0 0", "guess x 0 1")
                    .replace("guess y 0 -1", "guess y 0 0")
                    .replace("guess x 1 2", "guess x 1 0")
                    .replace("guess y 1 0", "guess y 1 2") + "v 2 -0.2\n")
            f.flush()
            p = run("solve", MODELS / "twopendula.dae", "--order", 2, "--init", f.name)
            self.assertEqual(p.returncode, 4, p.stdout + p.stderr)


if __name__ == "__main__":
    unittest.main()
