"""Benchmark harness: every instance is solved in every requested mode and the
fronts are required to agree across modes."""
from __future__ import annotations

import csv
import io
import json
import logging
import multiprocessing as mp
import os
from dataclasses import dataclass
from typing import Optional

from .dsl import SourceFile, parse_source
from .errors import OpgError
from .generate import GenSpec, generate_random
from .report import Mode, report_json, run_solve

log = logging.getLogger(__name__)

CSV_HEADER = ["instance", "mode", "ms", "queries", "cache_hits", "match"]


class BenchMismatch(OpgError):
    pass


@dataclass
class BenchRow:
    instance: str
    mode: str
    ms: Optional[float]
    queries: Optional[int]
    cache_hits: Optional[int]
    match: str  # yes / no / timeout / error

    def as_list(self) -> list:
        return [self.instance, self.mode, "" if self.ms is None else self.ms,
                "" if self.queries is None else self.queries,
                "" if self.cache_hits is None else self.cache_hits, self.match]


def _load_instance(entry: dict, seed: Optional[int], base: str) -> tuple[SourceFile, str]:
    if "generate" in entry:
        params = dict(entry["generate"])
        if seed is not None:
            params["seed"] = params.get("seed", 0) + seed
        return generate_random(GenSpec.from_dict(params)), "main"
    with open(os.path.join(base, entry["source"]), encoding="utf-8") as fh:
        return parse_source(fh.read()), entry["diagram"]


def _worker(conn, source, diagram, mode, pruning, bound):
    try:
        report = run_solve(source, diagram, mode, pruning=pruning, oracle_bound=bound)
        conn.send(("ok", report.stats, report_json(report)["entrances"]))
    except Exception as exc:  # reported as a row, never fatal
        conn.send(("error", repr(exc), None))
    finally:
        conn.close()


def _run_one(source, diagram, mode, pruning, bound, timeout_ms):
    ctx = mp.get_context("fork")
    parent, child = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_worker, args=(child, source, diagram, mode, pruning, bound))
    proc.start()
    child.close()
    if parent.poll(None if timeout_ms is None else timeout_ms / 1000):
        outcome = parent.recv()
        proc.join()
        return outcome
    proc.terminate()
    proc.join()
    return ("timeout", None, None)


def run_bench(spec: dict, seed: Optional[int] = None, timeout_ms: Optional[int] = None) -> list[BenchRow]:
    """Rows in instance order; the first mode that finishes is the reference for ``match``."""
    default_modes = spec.get("modes", [m.value for m in Mode])
    timeout_ms = timeout_ms if timeout_ms is not None else spec.get("timeout_ms")
    rows: list[BenchRow] = []
    for k, entry in enumerate(spec["instances"]):
        name = entry.get("name", f"instance{k}")
        source, diagram = _load_instance(entry, seed, spec.get("base_dir", "."))
        reference = None
        for mode in entry.get("modes", default_modes):
            status, stats, fronts = _run_one(source, diagram, mode, entry.get("pruning", False),
                                             entry.get("oracle_bound", 10**6), timeout_ms)
            if status == "timeout":
                rows.append(BenchRow(name, mode, timeout_ms, None, None, "timeout"))
                continue
            if status == "error":
                log.warning("%s/%s failed: %s", name, mode, stats)
                rows.append(BenchRow(name, mode, None, None, None, "error"))
                continue
            if reference is None:
                reference = fronts
            match = "yes" if fronts == reference else "no"
            rows.append(BenchRow(name, mode, stats.get("solve_ms"), stats.get("queries"),
                                 stats.get("cache_hits"), match))
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_list())
    return buf.getvalue()


def check_rows(rows: list[BenchRow]) -> None:
    bad = [f"{r.instance}/{r.mode}" for r in rows if r.match == "no"]
    if bad:
        raise BenchMismatch("fronts differ across modes: " + ", ".join(bad))


def load_bench_spec(path: str) -> dict:
    """Relative ``source`` paths are resolved against the spec file's directory."""
    with open(path, encoding="utf-8") as fh:
        spec = json.load(fh)
    spec.setdefault("base_dir", os.path.dirname(os.path.abspath(path)))
    return spec
