# streamforge/bench.py
"""Benchmark harness: synthesize every `.off` program in a directory and tabulate the outcome."""
from __future__ import annotations

import json
import random
import time
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from streamforge.datas.config import SearchConfig
from streamforge.errors import StreamForgeError, SynthesisFailure
from streamforge.evaluation.concrete import run_scheme
from streamforge.ir.parser import parse_program, parse_scheme
from streamforge.ir.syntax import OnlineScheme
from streamforge.synthesizer import synthesize
from streamforge.utils.logger import ensure_logger
from streamforge.utils.util import derive_seed, random_list, random_value

REPORT_COLUMNS = ["benchmark", "solved", "seconds", "methods", "accumulators", "verification",
                  "expected_match", "error"]


def schemes_agree(a: OnlineScheme, b: OnlineScheme, streams: int = 100, seed: int = 0) -> bool:
    """Same output sequence on random streams (extra arguments drawn per stream)."""
    if a.extra_args != b.extra_args:
        return False
    rng = random.Random(seed)
    for _ in range(streams):
        stream = random_list(rng, 0, 12)
        args = [random_value(rng) for _ in a.extra_args]
        if run_scheme(a, stream, args) != run_scheme(b, stream, args):
            return False
    return True


def run_benchmark(path: Path, cfg: SearchConfig, logger=None) -> Dict[str, object]:
    logger = ensure_logger(logger)
    row: Dict[str, object] = {c: None for c in REPORT_COLUMNS}
    row.update(benchmark=path.stem, solved=False)
    started = time.monotonic()
    try:
        program = parse_program(path.read_text(encoding="utf-8"))
        result = synthesize(program, cfg, logger)
    except SynthesisFailure as exc:
        row.update(seconds=round(time.monotonic() - started, 3), error=exc.describe())
        logger.log(f"[Bench] {path.stem}: failed: {exc}", level="ERROR")
        return row
    except StreamForgeError as exc:
        row.update(seconds=round(time.monotonic() - started, 3), error=f"{type(exc).__name__}: {exc}")
        logger.log(f"[Bench] {path.stem}: {type(exc).__name__}: {exc}", level="ERROR")
        return row
    row.update(
        solved=True,
        seconds=round(result.total_elapsed, 3),
        methods=",".join(result.methods),
        accumulators=result.scheme.arity,
        verification=result.verification,
    )
    expected = path.with_suffix(".expected")
    if expected.exists():
        try:
            row["expected_match"] = schemes_agree(result.scheme, parse_scheme(expected.read_text(encoding="utf-8")),
                                                  seed=derive_seed(cfg.seed, "bench", path.stem))
        except StreamForgeError as exc:
            row["error"] = f"expected file: {exc}"
    logger.log(f"[Bench] {path.stem}: solved in {row['seconds']}s via {row['methods']}", level="INFO")
    return row


def run_benchmarks(directory, cfg: SearchConfig, logger=None) -> pd.DataFrame:
    files = sorted(Path(directory).glob("*.off"))
    rows: List[Dict[str, object]] = [run_benchmark(f, cfg, logger) for f in files]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def summarize(df: pd.DataFrame) -> Dict[str, object]:
    if df.empty:
        return {"benchmarks": 0, "solved_pct": 0.0, "mean_seconds": None, "methods": {}}
    methods = df.loc[df["solved"], "methods"].str.split(",").explode().value_counts()
    return {
        "benchmarks": int(len(df)),
        "solved_pct": round(100.0 * float(df["solved"].mean()), 1),
        "mean_seconds": round(float(df.loc[df["solved"], "seconds"].mean()), 3) if df["solved"].any() else None,
        "methods": {k: int(v) for k, v in methods.items()},
    }


def write_report(df: pd.DataFrame, fmt: str, path: Optional[str] = None) -> str:
    if fmt == "csv":
        text = df.to_csv(index=False)
    elif fmt == "json":
        text = json.dumps({"rows": json.loads(df.to_json(orient="records")), "summary": summarize(df)}, indent=2)
    else:
        raise ValueError(f"unknown report format '{fmt}'")
    if path:
        Path(path).write_text(text, encoding="utf-8")
    return text
