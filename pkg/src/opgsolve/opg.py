"""Open parity games and their Pareto fronts via the loop construction."""
from __future__ import annotations

import enum
import itertools
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional

from .errors import InvalidGameError, OrderError, SolverInconsistency
from .orders import (
    BOT,
    TOP,
    Direction,
    EntranceRef,
    ExitAt,
    ExitRef,
    PrioritySpace,
    Query,
    ResultSet,
    dual_query,
    leq_query,
    leq_upper,
    maximal_results,
)
from .parity import (
    BaseSolver,
    NodeGame,
    ParityGame,
    Player,
    is_winning,
    solve_zielonka,
    split_edges,
)


@dataclass(frozen=True)
class InterfaceType:
    """``dom -> cod``. ``dom`` counts (rightward entrances, leftward exits) on the left
    boundary; ``cod`` counts (rightward exits, leftward entrances) on the right."""

    dom: tuple[int, int]
    cod: tuple[int, int]

    def __str__(self) -> str:
        return f"({self.dom[0]}, {self.dom[1]}) -> ({self.cod[0]}, {self.cod[1]})"

    @property
    def entrances(self) -> int:
        return self.dom[0] + self.cod[1]

    @property
    def exits(self) -> int:
        return self.cod[0] + self.dom[1]

    def entrance_refs(self) -> list[EntranceRef]:
        return ([EntranceRef(Direction.RIGHT, k) for k in range(1, self.dom[0] + 1)]
                + [EntranceRef(Direction.LEFT, k) for k in range(1, self.cod[1] + 1)])

    def exit_refs(self) -> list[ExitRef]:
        return ([ExitRef(Direction.RIGHT, k) for k in range(1, self.cod[0] + 1)]
                + [ExitRef(Direction.LEFT, k) for k in range(1, self.dom[1] + 1)])


@dataclass(frozen=True)
class OpenParityGame:
    game: ParityGame
    in_r: tuple[int, ...] = ()
    in_l: tuple[int, ...] = ()
    out_r: tuple[int, ...] = ()
    out_l: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for name in ("in_r", "in_l", "out_r", "out_l"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def max_priority(self) -> int:
        return self.game.max_priority

    @property
    def type(self) -> InterfaceType:
        return InterfaceType((len(self.in_r), len(self.out_l)), (len(self.out_r), len(self.in_l)))

    @cached_property
    def entrances(self) -> dict[EntranceRef, int]:
        refs = {EntranceRef(Direction.RIGHT, k + 1): v for k, v in enumerate(self.in_r)}
        refs.update({EntranceRef(Direction.LEFT, k + 1): v for k, v in enumerate(self.in_l)})
        return refs

    @cached_property
    def exits(self) -> dict[ExitRef, int]:
        refs = {ExitRef(Direction.RIGHT, k + 1): v for k, v in enumerate(self.out_r)}
        refs.update({ExitRef(Direction.LEFT, k + 1): v for k, v in enumerate(self.out_l)})
        return refs

    @cached_property
    def exit_of(self) -> dict[int, ExitRef]:
        return {v: o for o, v in self.exits.items()}

    @property
    def exit_refs(self) -> tuple[ExitRef, ...]:
        return tuple(self.exits)

    def node(self, name: str) -> int:
        try:
            return self.game.names.index(name)
        except ValueError:
            raise InvalidGameError(f"unknown node {name!r}") from None

    def with_max_priority(self, m: int) -> "OpenParityGame":
        if m == self.max_priority:
            return self
        return OpenParityGame(self.game.with_max_priority(m), self.in_r, self.in_l, self.out_r, self.out_l)

    @cached_property
    def structural_key(self) -> tuple:
        """Name-independent description used for hashing and cache keys."""
        g = self.game
        return (
            g.max_priority,
            tuple(o.value for o in g.owners),
            tuple(sorted(g.edges)),
            self.in_r, self.in_l, self.out_r, self.out_l,
        )


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def validate_opg(a: OpenParityGame, atomic: bool = True) -> list[Violation]:
    """Check the open-game invariants; an empty list means the game is well formed.

    ``atomic`` additionally requires entrances to have no incoming edges.
    """
    g = a.game
    names = g.names
    n = len(g.owners)
    out: list[Violation] = []
    groups = {"in.r": a.in_r, "in.l": a.in_l, "out.r": a.out_r, "out.l": a.out_l}
    seen: dict[int, str] = {}
    for label, nodes in groups.items():
        for k, v in enumerate(nodes, 1):
            if not 0 <= v < n:
                out.append(Violation("unknown interface node", f"{label}{k} -> {v}"))
                continue
            if v in seen:
                out.append(Violation("interface overlap", f"{names[v]} is both {seen[v]} and {label}{k}"))
            seen[v] = f"{label}{k}"
            if g.owners[v] is not Player.EXISTS:
                out.append(Violation("interface not exists-owned", f"{label}{k} ({names[v]})"))
    exit_nodes = {v for v in a.out_r + a.out_l if 0 <= v < n}
    for u, v, p in g.edges:
        if u in exit_nodes:
            if v != u:
                out.append(Violation("exit not sink", f"edge {names[u]} -> {names[v]}"))
            elif p != 0:
                out.append(Violation("exit loop priority", f"self-loop on {names[u]} has priority {p}, not 0"))
    for v in exit_nodes:
        if (v, v) not in g.priority:
            out.append(Violation("exit not sink", f"exit {names[v]} lacks its self-loop"))
    if atomic:
        entrance_nodes = {v for v in a.in_r + a.in_l if 0 <= v < n}
        for u, v, _ in g.edges:
            if v in entrance_nodes:
                out.append(Violation("entrance reachable", f"edge {names[u]} -> {names[v]}"))
    return out


def check_opg(a: OpenParityGame, atomic: bool = False) -> None:
    violations = validate_opg(a, atomic)
    if violations:
        raise InvalidGameError("invalid open parity game: " + "; ".join(map(str, violations)), violations)


# --------------------------------------------------------------------------
# queries and the loop construction


def query_values(space: PrioritySpace) -> list[Optional[int]]:
    """Per-exit query values in ascending order: bottom, M-1, M-3, ..., 1, 0, 2, ..., M."""
    return [None] + space.ascending()


def enumerate_queries(a: OpenParityGame) -> Iterator[Query]:
    exits = a.exit_refs
    values = query_values(PrioritySpace(a.max_priority))
    for combo in itertools.product(values, repeat=len(exits)):
        yield Query(exits, combo)


def loop_construction(a: OpenParityGame, i: EntranceRef, q: Query) -> ParityGame:
    if q.exits != a.exit_refs:
        raise OrderError("query is not defined on exactly the exits of the game")
    entry = a.entrances[i]
    exit_nodes = set(a.exit_of)
    edges = [e for e in a.game.edges if e[0] not in exit_nodes]
    for o, m in q.items():
        v = a.exits[o]
        edges.append((v, entry, m) if m is not None else (v, v, 1))
    g = a.game
    return ParityGame(g.owners, tuple(edges), g.max_priority, g.names)


class LoopSolver:
    """Decides ``is_winning(loop_construction(a, i, q), i)`` for many queries.

    The exit-free part of the game is edge-split once; each query only appends
    one fresh node per exit.
    """

    def __init__(self, a: OpenParityGame, solver: BaseSolver = solve_zielonka):
        self.a = a
        self.solver = solver
        exit_nodes = set(a.exit_of)
        stripped = [e for e in a.game.edges if e[0] not in exit_nodes]
        n = len(a.game.owners)
        owners = [0 if o is Player.EXISTS else 1 for o in a.game.owners]
        priorities = [0] * n
        successors: list[list[int]] = [[] for _ in range(n)]
        for u, v, p in stripped:
            e = len(owners)
            owners.append(0)
            priorities.append(p)
            successors.append([v])
            successors[u].append(e)
        self._owners = owners
        self._priorities = priorities
        self._successors = successors
        self._exit_nodes = [a.exits[o] for o in a.exit_refs]

    def wins(self, i: EntranceRef, q: Query) -> bool:
        entry = self.a.entrances[i]
        owners = self._owners + [0] * len(self._exit_nodes)
        priorities = list(self._priorities)
        successors = [list(s) for s in self._successors]
        for v, m in zip(self._exit_nodes, q.values):
            e = len(priorities)
            priorities.append(1 if m is None else m)
            successors.append([v if m is None else entry])
            successors[v] = [e]
        game = NodeGame(owners, priorities, successors)
        return entry in self.solver(game).exists_region


# --------------------------------------------------------------------------
# Pareto fronts


class Classification(enum.Enum):
    WINNING = "winning"
    LOSING = "losing"
    PENDING = "pending"


@dataclass(frozen=True)
class ParetoFront:
    entrance: EntranceRef
    results: frozenset[ResultSet]

    def __post_init__(self) -> None:
        object.__setattr__(self, "results", frozenset(self.results))
        if not self.results:
            raise OrderError("a Pareto front is never empty")
        for r in self.results:
            for s in self.results:
                if r != s and leq_upper(r, s):
                    raise OrderError(f"Pareto front is not an antichain: {r!r} <= {s!r}")

    def canonical(self) -> list[ResultSet]:
        return sorted(self.results, key=lambda r: r.sort_key)

    def __repr__(self) -> str:
        return f"ParetoFront({self.entrance}: {{{', '.join(map(repr, self.canonical()))}}})"


@dataclass
class SolveStats:
    queries: int = 0
    pruned: int = 0
    cache_hits: int = 0
    cache_misses: int = 0
    atoms_solved: int = 0
    max_front: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add(self, **counts: int) -> None:
        with self._lock:
            for k, v in counts.items():
                setattr(self, k, getattr(self, k) + v)

    def note_front(self, front: ParetoFront) -> None:
        with self._lock:
            self.max_front = max(self.max_front, len(front.results))

    def as_dict(self) -> dict[str, int]:
        return {k: getattr(self, k) for k in
                ("queries", "pruned", "cache_hits", "cache_misses", "atoms_solved", "max_front")}


def solve_pareto_front(
    a: OpenParityGame,
    i: EntranceRef,
    pruning: bool = False,
    stats: Optional[SolveStats] = None,
    solver: BaseSolver = solve_zielonka,
    loop: Optional[LoopSolver] = None,
) -> ParetoFront:
    if i not in a.entrances:
        raise InvalidGameError(f"{i} is not an entrance")
    if loop is None:
        check_opg(a)
        loop = LoopSolver(a, solver)
    found: set[ResultSet] = {ResultSet([BOT])}
    winners: list[Query] = []
    solved = skipped = 0
    for q in enumerate_queries(a):
        # any q' above a winning query wins too, and its dual is dominated
        if pruning and any(leq_query(w, q) for w in winners):
            skipped += 1
            continue
        solved += 1
        if loop.wins(i, q):
            winners.append(q)
            found.add(dual_query(q))
    front = ParetoFront(i, maximal_results(found))
    if stats is not None:
        stats.add(queries=solved, pruned=skipped)
        stats.note_front(front)
    return front


def _solve_one(args):
    a, i, pruning = args
    stats = SolveStats()
    front = solve_pareto_front(a, i, pruning, stats)
    return front, stats.queries, stats.pruned


def solve_pareto_fronts(
    a: OpenParityGame,
    pruning: bool = False,
    stats: Optional[SolveStats] = None,
    solver: BaseSolver = solve_zielonka,
    jobs: int = 1,
) -> dict[EntranceRef, ParetoFront]:
    """Pareto front of every entrance, keyed in interface order."""
    check_opg(a)
    refs = list(a.entrances)
    if jobs > 1 and len(refs) > 1 and solver is solve_zielonka:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_solve_one, [(a, i, pruning) for i in refs]))
        fronts = {}
        for i, (front, queries, pruned) in zip(refs, done):
            fronts[i] = front
            if stats is not None:
                stats.add(queries=queries, pruned=pruned)
                stats.note_front(front)
        return fronts
    loop = LoopSolver(a, solver)
    return {i: solve_pareto_front(a, i, pruning, stats, solver, loop) for i in refs}


def classify_entrance(front: ParetoFront) -> Classification:
    results = front.results
    if len(results) == 1:
        (only,) = results
        if only.is_top:
            return Classification.WINNING
        if only.is_bot:
            return Classification.LOSING
    for r in results:
        if TOP in r or BOT in r:
            raise SolverInconsistency(f"pending front for {front.entrance} contains top or bottom: {r!r}")
        exits = [d.exit for d in r if isinstance(d, ExitAt)]
        if len(exits) != len(set(exits)):
            raise SolverInconsistency(f"result with two priorities on one exit: {r!r}")
    return Classification.PENDING


def fronts_equal(f1: dict[EntranceRef, ParetoFront], f2: dict[EntranceRef, ParetoFront]) -> bool:
    return f1.keys() == f2.keys() and all(f1[i].results == f2[i].results for i in f1)


__all__ = [
    "Classification", "InterfaceType", "LoopSolver", "OpenParityGame", "ParetoFront",
    "SolveStats", "Violation", "check_opg", "classify_entrance", "enumerate_queries",
    "fronts_equal", "is_winning", "loop_construction", "query_values", "solve_pareto_front",
    "solve_pareto_fronts", "split_edges", "validate_opg",
]
