import io
import json
import os
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from app_runner import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from streamforge.bench import REPORT_COLUMNS, run_benchmarks, schemes_agree, summarize, write_report
from streamforge.ir.parser import parse_scheme
from tests.fakes import SUM, WELFORD, quick_config

BENCHMARKS = Path(__file__).resolve().parent.parent / "benchmarks"
CORE_BENCHMARKS = ("sum", "count", "mean", "variance", "min", "max", "sum_of_squares", "m2",
                   "mean_of_squares", "count_above")
SUM_SCHEME = "(scheme (init 0) (update (y1) x (tuple (+ y1 x))))"


class TestSchemesAgree(unittest.TestCase):
    def test_same_behaviour_different_text(self):
        a = parse_scheme(SUM_SCHEME)
        b = parse_scheme("(scheme (init 0) (update (y1) x (tuple (+ x y1))))")
        self.assertTrue(schemes_agree(a, b))

    def test_different_behaviour(self):
        a = parse_scheme(SUM_SCHEME)
        b = parse_scheme("(scheme (init 0) (update (y1) x (tuple (+ y1 1))))")
        self.assertFalse(schemes_agree(a, b))

    def test_argument_lists_must_match(self):
        a = parse_scheme(SUM_SCHEME)
        b = parse_scheme("(scheme (init 0) (args t) (update (y1) x (tuple (+ y1 x))))")
        self.assertFalse(schemes_agree(a, b))


class TestBench(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        Path(self.tmp, "sum.off").write_text(SUM, encoding="utf-8")
        Path(self.tmp, "sum.expected").write_text(SUM_SCHEME, encoding="utf-8")
        Path(self.tmp, "broken.off").write_text("(program (xs) (foldl + 0", encoding="utf-8")

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def test_table(self):
        df = run_benchmarks(self.tmp, quick_config())
        self.assertEqual(list(df.columns), REPORT_COLUMNS)
        self.assertEqual(list(df["benchmark"]), ["broken", "sum"])
        broken, solved = df.iloc[0], df.iloc[1]
        self.assertFalse(broken["solved"])
        self.assertTrue(broken["error"].startswith("ParseError"))
        self.assertTrue(solved["solved"])
        self.assertTrue(solved["expected_match"])
        self.assertEqual(solved["accumulators"], 1)

        summary = summarize(df)
        self.assertEqual(summary["benchmarks"], 2)
        self.assertEqual(summary["solved_pct"], 50.0)

    def test_reports(self):
        df = run_benchmarks(self.tmp, quick_config())
        csv = write_report(df, "csv")
        self.assertEqual(csv.splitlines()[0], ",".join(REPORT_COLUMNS))
        out = os.path.join(self.tmp, "report.json")
        data = json.loads(write_report(df, "json", out))
        self.assertEqual(len(data["rows"]), 2)
        self.assertEqual(json.loads(Path(out).read_text(encoding="utf-8")), data)
        with self.assertRaises(ValueError):
            write_report(df, "xml")

    def test_empty_directory(self):
        empty = tempfile.mkdtemp(dir=self.tmp)
        df = run_benchmarks(empty, quick_config())
        self.assertTrue(df.empty)
        self.assertEqual(summarize(df)["benchmarks"], 0)

    @unittest.skipUnless(os.getenv("STREAMFORGE_SLOW"), "set STREAMFORGE_SLOW=1 to run")
    def test_shipped_benchmarks(self):
        df = run_benchmarks(BENCHMARKS, quick_config(max_size=25, timeout_seconds=300.0))
        solved = df[df["solved"]]
        self.assertTrue(solved["expected_match"].dropna().all())
        self.assertGreaterEqual(summarize(df)["solved_pct"], 90.0)

    def test_core_benchmarks(self):
        core = tempfile.mkdtemp(dir=self.tmp)
        for name in CORE_BENCHMARKS:
            for path in BENCHMARKS.glob(f"{name}.*"):
                shutil.copy(path, core)
        df = run_benchmarks(core, quick_config(max_size=25))
        self.assertEqual(len(df), len(CORE_BENCHMARKS))
        self.assertGreaterEqual(summarize(df)["solved_pct"], 90.0)
        solved = df[df["solved"]]
        self.assertTrue(solved["expected_match"].dropna().all())


class TestCli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def write(self, name, text):
        path = os.path.join(self.tmp, name)
        Path(path).write_text(text, encoding="utf-8")
        return path

    def test_run(self):
        out = io.StringIO()
        code = main(["run", self.write("w.scheme", WELFORD), "--stream", "1 2 3"], out=out)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.getvalue().split(), ["0", "1/4", "2/3"])

    def test_run_with_arguments(self):
        out = io.StringIO()
        path = str(BENCHMARKS / "count_above.expected")
        self.assertEqual(main(["run", path, "--stream", "1 5 9/2", "--args", "2"], out=out), EXIT_OK)
        self.assertEqual(out.getvalue().split(), ["0", "1", "2"])

    @mock.patch("sys.stderr", new_callable=io.StringIO)
    def test_usage_errors(self, err):
        scheme = self.write("s.scheme", SUM_SCHEME)
        self.assertEqual(main(["run", scheme, "--stream", "1 x"], out=io.StringIO()), EXIT_USAGE)
        self.assertEqual(main(["run", scheme, "--stream", "1", "--args", "3"], out=io.StringIO()), EXIT_USAGE)
        self.assertEqual(main(["synth", self.write("bad.off", "(program (xs)")], out=io.StringIO()), EXIT_USAGE)
        self.assertEqual(main(["synth", os.path.join(self.tmp, "missing.off")], out=io.StringIO()), EXIT_USAGE)
        self.assertIn("error:", err.getvalue())

    @mock.patch("sys.stderr", new_callable=io.StringIO)
    def test_synth(self, _err):
        out = io.StringIO()
        code = main(["synth", self.write("sum.off", SUM), "--tests", "40", "--seed", "3"], out=out)
        self.assertEqual(code, EXIT_OK)
        lines = out.getvalue().splitlines()
        self.assertTrue(schemes_agree(parse_scheme(lines[0]), parse_scheme(SUM_SCHEME)))
        self.assertTrue(lines[1].startswith("; hole 1:"))

    @mock.patch("sys.stderr", new_callable=io.StringIO)
    def test_synth_json(self, _err):
        out = io.StringIO()
        self.assertEqual(main(["synth", self.write("sum.off", SUM), "--emit", "json"], out=out), EXIT_OK)
        self.assertEqual(json.loads(out.getvalue())["arity"], 1)

    @mock.patch("sys.stderr", new_callable=io.StringIO)
    def test_bench_exit_code(self, _err):
        self.write("sum.off", SUM)
        self.assertEqual(main(["bench", self.tmp], out=io.StringIO()), EXIT_OK)
        self.write("broken.off", "(program")
        self.assertEqual(main(["bench", self.tmp, "--report", "json"], out=io.StringIO()), EXIT_FAILED)

    @mock.patch("sys.stderr", new_callable=io.StringIO)
    def test_bad_flag(self, err):
        self.assertEqual(main(["synth"], out=io.StringIO()), EXIT_USAGE)
        self.assertEqual(main(["bench", self.tmp, "--report", "xml"], out=io.StringIO()), EXIT_USAGE)
        self.assertEqual(main(["frobnicate"], out=io.StringIO()), EXIT_USAGE)
        self.assertIn("usage:", err.getvalue())


if __name__ == "__main__":
    unittest.main()
