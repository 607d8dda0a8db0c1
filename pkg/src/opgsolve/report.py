"""Solve driver plus JSON and DOT output."""
from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field
from typing import Optional

from .diagram import FrontCache, operational_semantics, solve_diagram
from .dsl import SourceFile, parse_source
from .errors import InvalidGameError
from .opg import (
    Classification,
    OpenParityGame,
    ParetoFront,
    SolveStats,
    classify_entrance,
    solve_pareto_fronts,
    validate_opg,
)
from .oracle import DEFAULT_BOUND, brute_force_fronts
from .orders import BOT, TOP, DomainElement, EntranceRef, ResultSet
from .parity import Player


class Mode(enum.Enum):
    COMPOSITIONAL = "compositional"
    MONOLITHIC = "monolithic"
    ORACLE = "oracle"


@dataclass
class EntranceReport:
    entrance: EntranceRef
    classification: Classification
    front: ParetoFront


@dataclass
class SolveReport:
    diagram: str
    mode: Mode
    entrances: list[EntranceReport]
    stats: dict = field(default_factory=dict)

    @property
    def fronts(self) -> dict[EntranceRef, ParetoFront]:
        return {e.entrance: e.front for e in self.entrances}


def run_solve(
    source: SourceFile,
    diagram: str,
    mode: Mode | str = Mode.COMPOSITIONAL,
    pruning: bool = False,
    oracle_bound: int = DEFAULT_BOUND,
    jobs: int = 1,
    cache: Optional[FrontCache] = None,
) -> SolveReport:
    mode = Mode(mode)
    if diagram not in source.diagrams:
        raise KeyError(f"no diagram named {diagram!r}")
    term = source.diagrams[diagram]
    stats = SolveStats()
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    for name, a in source.opgs.items():
        violations = validate_opg(a, atomic=True)
        if violations:
            raise InvalidGameError(f"open game {name!r} is invalid: " + "; ".join(map(str, violations)),
                                   violations)
    if mode is Mode.COMPOSITIONAL:
        fronts = solve_diagram(term, cache, pruning, stats, jobs=jobs)
        timings["solve_ms"] = _ms(t0)
    else:
        game = operational_semantics(term)
        timings["build_ms"] = _ms(t0)
        t1 = time.perf_counter()
        if mode is Mode.MONOLITHIC:
            fronts = solve_pareto_fronts(game, pruning, stats, jobs=jobs)
        else:
            fronts = brute_force_fronts(game, oracle_bound)
        timings["solve_ms"] = _ms(t1)
    timings["total_ms"] = _ms(t0)
    entrances = [EntranceReport(i, classify_entrance(f), f)
                 for i, f in sorted(fronts.items(), key=lambda kv: kv[0].sort_key)]
    return SolveReport(diagram, mode, entrances, {"mode": mode.value, **stats.as_dict(), **timings})


def _ms(since: float) -> float:
    return round((time.perf_counter() - since) * 1000, 3)


def solve_file(path: str, diagram: str, mode: Mode | str = Mode.COMPOSITIONAL, **kw) -> SolveReport:
    with open(path, encoding="utf-8") as fh:
        return run_solve(parse_source(fh.read()), diagram, mode, **kw)


# --------------------------------------------------------------------------
# JSON


def element_json(d: DomainElement) -> dict:
    if d == TOP:
        return {"top": True}
    if d == BOT:
        return {"bot": True}
    return {"exit": str(d.exit), "priority": d.priority}


def result_json(r: ResultSet) -> list[dict]:
    return [element_json(d) for d in r.canonical()]


def report_json(report: SolveReport) -> dict:
    return {
        "diagram": report.diagram,
        "mode": report.mode.value,
        "entrances": [
            {
                "id": str(e.entrance),
                "class": e.classification.value,
                "front": [result_json(r) for r in e.front.canonical()],
            }
            for e in report.entrances
        ],
        "stats": report.stats,
    }


def emit_json(report: SolveReport) -> bytes:
    return (json.dumps(report_json(report), indent=2) + "\n").encode("utf-8")


REPORT_SCHEMA = {
    "type": "object",
    "required": ["diagram", "mode", "entrances", "stats"],
    "properties": {
        "diagram": {"type": "string"},
        "mode": {"enum": [m.value for m in Mode]},
        "entrances": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "class", "front"],
                "properties": {
                    "id": {"type": "string", "pattern": r"^in\.[rl][0-9]+$"},
                    "class": {"enum": ["winning", "losing", "pending"]},
                    "front": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "array",
                            "minItems": 1,
                            "items": {
                                "oneOf": [
                                    {"type": "object", "required": ["top"], "additionalProperties": False,
                                     "properties": {"top": {"const": True}}},
                                    {"type": "object", "required": ["bot"], "additionalProperties": False,
                                     "properties": {"bot": {"const": True}}},
                                    {"type": "object", "required": ["exit", "priority"],
                                     "additionalProperties": False,
                                     "properties": {"exit": {"type": "string", "pattern": r"^out\.[rl][0-9]+$"},
                                                    "priority": {"type": "integer", "minimum": 0}}},
                                ]
                            },
                        },
                    },
                },
            },
        },
        "stats": {"type": "object"},
    },
}


# --------------------------------------------------------------------------
# DOT


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(a: OpenParityGame, name: str = "G") -> bytes:
    """Graphviz rendering: circles for exists-nodes, diamonds for forall-nodes,
    boxes for interface nodes, priorities as edge labels."""
    g = a.game
    interface = set(a.in_r + a.in_l + a.out_r + a.out_l)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;"]
    for v, owner in enumerate(g.owners):
        if v in interface:
            shape = "box"
        else:
            shape = "circle" if owner is Player.EXISTS else "diamond"
        lines.append(f"  n{v} [label={_quote(g.names[v])}, shape={shape}];")
    for u, v, p in g.edges:
        lines.append(f"  n{u} -> n{v} [label=\"{p}\"];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")
