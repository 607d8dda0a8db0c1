"""String diagrams of open parity games and their compositional solution."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional, Union

from .errors import ArityError, InvalidGameError
from .opg import (
    InterfaceType,
    OpenParityGame,
    ParetoFront,
    SolveStats,
    check_opg,
    solve_pareto_fronts,
)
from .orders import BOT, TOP, EntranceRef, ExitAt
from .parity import ParityGame, Player


@dataclass(frozen=True)
class Atom:
    name: str
    game: OpenParityGame


@dataclass(frozen=True)
class Seq:
    left: "DiagramTerm"
    right: "DiagramTerm"


@dataclass(frozen=True)
class Sum:
    left: "DiagramTerm"
    right: "DiagramTerm"


DiagramTerm = Union[Atom, Seq, Sum]


def type_of(d: DiagramTerm) -> InterfaceType:
    if isinstance(d, Atom):
        return d.game.type
    left, right = type_of(d.left), type_of(d.right)
    if isinstance(d, Seq):
        if left.cod != right.dom:
            raise ArityError(f"cannot compose {left} with {right}: middle arities differ")
        return InterfaceType(left.dom, right.cod)
    return InterfaceType(
        (left.dom[0] + right.dom[0], left.dom[1] + right.dom[1]),
        (left.cod[0] + right.cod[0], left.cod[1] + right.cod[1]),
    )


def atoms(d: DiagramTerm) -> list[Atom]:
    if isinstance(d, Atom):
        return [d]
    return atoms(d.left) + atoms(d.right)


def max_priority_of(d: DiagramTerm) -> int:
    return max(a.game.max_priority for a in atoms(d))


# --------------------------------------------------------------------------
# composition


def _merge_names(a: ParityGame, b: ParityGame) -> tuple[str, ...]:
    if set(a.names).isdisjoint(b.names):
        return a.names + b.names
    return tuple("a." + n for n in a.names) + tuple("b." + n for n in b.names)


def _shift(nodes, k):
    return tuple(v + k for v in nodes)


def seq_compose(a: OpenParityGame, b: OpenParityGame) -> OpenParityGame:
    if a.type.cod != b.type.dom:
        raise ArityError(f"cannot compose {a.type} with {b.type}: middle arities differ")
    k = len(a.game.owners)
    wired_a = set(a.out_r)
    wired_b = set(b.out_l)
    edges = [e for e in a.game.edges if e[0] not in wired_a]
    edges += [(u + k, v + k, p) for u, v, p in b.game.edges if u not in wired_b]
    edges += [(o, i + k, 0) for o, i in zip(a.out_r, b.in_r)]
    edges += [(o + k, i, 0) for o, i in zip(b.out_l, a.in_l)]
    m = max(a.max_priority, b.max_priority)
    game = ParityGame(a.game.owners + b.game.owners, tuple(edges), m, _merge_names(a.game, b.game))
    return OpenParityGame(game, a.in_r, _shift(b.in_l, k), _shift(b.out_r, k), a.out_l)


def sum_compose(a: OpenParityGame, b: OpenParityGame) -> OpenParityGame:
    k = len(a.game.owners)
    edges = a.game.edges + tuple((u + k, v + k, p) for u, v, p in b.game.edges)
    m = max(a.max_priority, b.max_priority)
    game = ParityGame(a.game.owners + b.game.owners, edges, m, _merge_names(a.game, b.game))
    return OpenParityGame(
        game,
        a.in_r + _shift(b.in_r, k),
        a.in_l + _shift(b.in_l, k),
        a.out_r + _shift(b.out_r, k),
        a.out_l + _shift(b.out_l, k),
    )


def _instance(atom: Atom, occurrence: int, m: int) -> OpenParityGame:
    g = atom.game.with_max_priority(m).game
    names = tuple(f"{atom.name}#{occurrence}.{n}" for n in g.names)
    return OpenParityGame(ParityGame(g.owners, g.edges, m, names),
                          atom.game.in_r, atom.game.in_l, atom.game.out_r, atom.game.out_l)


def operational_semantics(d: DiagramTerm) -> OpenParityGame:
    """The composite game a diagram denotes; every atom occurrence gets its own nodes."""
    type_of(d)
    m = max_priority_of(d)
    counter = {}

    def build(t: DiagramTerm) -> OpenParityGame:
        if isinstance(t, Atom):
            counter[t.name] = counter.get(t.name, 0) + 1
            return _instance(t, counter[t.name], m)
        left, right = build(t.left), build(t.right)
        return seq_compose(left, right) if isinstance(t, Seq) else sum_compose(left, right)

    return build(d)


# --------------------------------------------------------------------------
# shortcuts


def shortcut_from_fronts(
    itype: InterfaceType, fronts: dict[EntranceRef, ParetoFront], max_priority: int
) -> OpenParityGame:
    """Summary game: interface nodes plus one forall-node per Pareto-optimal result."""
    entrance_refs = itype.entrance_refs()
    if set(fronts) != set(entrance_refs):
        raise InvalidGameError("fronts must cover exactly the entrances of the game")
    names: list[str] = []
    owners: list[Player] = []

    def add(name: str, owner: Player) -> int:
        names.append(name)
        owners.append(owner)
        return len(names) - 1

    in_r = tuple(add(f"in.r{k}", Player.EXISTS) for k in range(1, itype.dom[0] + 1))
    in_l = tuple(add(f"in.l{k}", Player.EXISTS) for k in range(1, itype.cod[1] + 1))
    out_r = tuple(add(f"out.r{k}", Player.EXISTS) for k in range(1, itype.cod[0] + 1))
    out_l = tuple(add(f"out.l{k}", Player.EXISTS) for k in range(1, itype.dom[1] + 1))
    entrance_node = dict(zip(entrance_refs, in_r + in_l))
    exit_node = dict(zip(itype.exit_refs(), out_r + out_l))

    edges: list[tuple[int, int, int]] = []
    for i in entrance_refs:
        for k, r in enumerate(fronts[i].canonical(), 1):
            rn = add(f"{i}/r{k}", Player.FORALL)
            edges.append((entrance_node[i], rn, 0))
            for d in r.canonical():
                if d == TOP:
                    edges.append((rn, rn, 0))
                elif d == BOT:
                    edges.append((rn, rn, 1))
                else:
                    assert isinstance(d, ExitAt)
                    edges.append((rn, exit_node[d.exit], d.priority))
    edges += [(v, v, 0) for v in out_r + out_l]
    game = ParityGame(tuple(owners), tuple(edges), max_priority, tuple(names))
    return OpenParityGame(game, in_r, in_l, out_r, out_l)


def shortcut(a: OpenParityGame, fronts: dict[EntranceRef, ParetoFront]) -> OpenParityGame:
    return shortcut_from_fronts(a.type, fronts, a.max_priority)


# --------------------------------------------------------------------------
# compositional solving


class FrontCache:
    """Solved fronts keyed by (name, structure); safe to share between threads."""

    def __init__(self) -> None:
        self._store: dict[tuple, dict[EntranceRef, ParetoFront]] = {}
        self._lock = threading.Lock()

    def get(self, key: tuple) -> Optional[dict[EntranceRef, ParetoFront]]:
        with self._lock:
            return self._store.get(key)

    def put(self, key: tuple, fronts: dict[EntranceRef, ParetoFront]) -> None:
        with self._lock:
            self._store[key] = fronts

    def __len__(self) -> int:
        return len(self._store)


def term_key(d: DiagramTerm, m: int) -> tuple:
    if isinstance(d, Atom):
        return ("atom", d.name, hash(d.game.with_max_priority(m).structural_key))
    op = "seq" if isinstance(d, Seq) else "sum"
    return (op, term_key(d.left, m), term_key(d.right, m))


def solve_diagram(
    d: DiagramTerm,
    cache: Optional[FrontCache] = None,
    pruning: bool = False,
    stats: Optional[SolveStats] = None,
    jobs: int = 1,
) -> dict[EntranceRef, ParetoFront]:
    """Pareto fronts of every entrance of the diagram, solved bottom-up through shortcuts.

    Repeated atoms and repeated subterms are looked up in ``cache``.
    """
    type_of(d)
    m = max_priority_of(d)
    cache = cache if cache is not None else FrontCache()
    stats = stats if stats is not None else SolveStats()

    def solve(t: DiagramTerm) -> tuple[InterfaceType, dict[EntranceRef, ParetoFront]]:
        itype = type_of(t)
        key = term_key(t, m)
        hit = cache.get(key)
        if hit is not None:
            stats.add(cache_hits=1)
            return itype, hit
        stats.add(cache_misses=1)
        if isinstance(t, Atom):
            game = t.game.with_max_priority(m)
            check_opg(game, atomic=True)
            fronts = solve_pareto_fronts(game, pruning, stats, jobs=jobs)
            stats.add(atoms_solved=1)
        else:
            lt, lf = solve(t.left)
            rt, rf = solve(t.right)
            left = shortcut_from_fronts(lt, lf, m)
            right = shortcut_from_fronts(rt, rf, m)
            combined = seq_compose(left, right) if isinstance(t, Seq) else sum_compose(left, right)
            fronts = solve_pareto_fronts(combined, pruning, stats, jobs=jobs)
        cache.put(key, fronts)
        return itype, fronts

    return solve(d)[1]
