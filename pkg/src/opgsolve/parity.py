"""Closed parity games with edge priorities and a recursive (Zielonka) solver.

The solver works on node-priority games; :func:`split_edges` bridges the
edge-priority games used everywhere else by putting a fresh node on every
edge.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Callable, Mapping, Union

from .errors import InvalidGameError
from .orders import BOT, TOP, DomainElement, ExitAt, PrioritySpace

if TYPE_CHECKING:
    from .opg import OpenParityGame


class Player(enum.Enum):
    EXISTS = "E"
    FORALL = "A"

    @property
    def opponent(self) -> "Player":
        return Player.FORALL if self is Player.EXISTS else Player.EXISTS


Edge = tuple[int, int, int]  # (source, target, priority)


@dataclass(frozen=True)
class ParityGame:
    """Parity game with priorities on edges. Nodes are ``0 .. len(owners) - 1``."""

    owners: tuple[Player, ...]
    edges: tuple[Edge, ...]
    max_priority: int = 2
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "owners", tuple(self.owners))
        object.__setattr__(self, "edges", tuple((int(u), int(v), int(p)) for u, v, p in self.edges))
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(len(self.owners))))
        else:
            object.__setattr__(self, "names", tuple(self.names))
        self._check()

    def _check(self) -> None:
        space = PrioritySpace(self.max_priority)
        n = len(self.owners)
        if len(self.names) != n:
            raise InvalidGameError("one name per node required")
        seen = set()
        for u, v, p in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGameError(f"edge ({u}, {v}) mentions an unknown node")
            if p not in space:
                raise InvalidGameError(
                    f"priority {p} on edge {self.names[u]} -> {self.names[v]} exceeds {self.max_priority}")
            if (u, v) in seen:
                raise InvalidGameError(f"duplicate edge {self.names[u]} -> {self.names[v]}")
            seen.add((u, v))
        for u in range(n):
            if u not in self._sources:
                raise InvalidGameError(f"node {self.names[u]} has no successor")

    @cached_property
    def _sources(self) -> frozenset[int]:
        return frozenset(u for u, _, _ in self.edges)

    def __len__(self) -> int:
        return len(self.owners)

    @cached_property
    def successors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node, ``(target, priority)`` pairs sorted by target."""
        out: list[list[tuple[int, int]]] = [[] for _ in self.owners]
        for u, v, p in self.edges:
            out[u].append((v, p))
        return tuple(tuple(sorted(s)) for s in out)

    @cached_property
    def priority(self) -> dict[tuple[int, int], int]:
        return {(u, v): p for u, v, p in self.edges}

    def nodes_of(self, player: Player) -> list[int]:
        return [v for v, o in enumerate(self.owners) if o is player]

    def with_max_priority(self, m: int) -> "ParityGame":
        return ParityGame(self.owners, self.edges, m, self.names)


@dataclass(frozen=True)
class PositionalStrategy:
    player: Player
    choice: Mapping[int, int] = field(default_factory=dict)

    def __call__(self, v: int) -> int:
        return self.choice[v]


# --------------------------------------------------------------------------
# node-priority games and the recursive solver


@dataclass
class NodeGame:
    owners: list[int]  # 0 = exists, 1 = forall
    priorities: list[int]
    successors: list[list[int]]

    @cached_property
    def predecessors(self) -> list[list[int]]:
        pred: list[list[int]] = [[] for _ in self.owners]
        for u, succ in enumerate(self.successors):
            for v in succ:
                pred[v].append(u)
        return pred


@dataclass
class WinningRegions:
    exists_region: frozenset[int]
    forall_region: frozenset[int]
    exists_strategy: dict[int, int]
    forall_strategy: dict[int, int]

    def winner(self, v: int) -> Player:
        return Player.EXISTS if v in self.exists_region else Player.FORALL


def _attractor(game: NodeGame, nodes: set[int], target: set[int], player: int):
    attr = set(target)
    strategy: dict[int, int] = {}
    remaining: dict[int, int] = {}
    owners, succ, pred = game.owners, game.successors, game.predecessors
    queue = deque(target)
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if u in attr or u not in nodes:
                continue
            if owners[u] == player:
                attr.add(u)
                strategy[u] = v
                queue.append(u)
            else:
                left = remaining.get(u)
                if left is None:
                    left = sum(1 for w in succ[u] if w in nodes)
                left -= 1
                remaining[u] = left
                if left == 0:
                    attr.add(u)
                    queue.append(u)
    return attr, strategy


def _zielonka(game: NodeGame, nodes: set[int]):
    """Returns (regions, strategy): regions[p] is won by player p; strategy covers
    every node owned by the player winning it."""
    if not nodes:
        return (set(), set()), {}
    prio = game.priorities
    top = max(prio[v] for v in nodes)
    p = top % 2
    q = 1 - p
    heads = {v for v in nodes if prio[v] == top}
    attr, attr_strategy = _attractor(game, nodes, heads, p)
    sub_regions, sub_strategy = _zielonka(game, nodes - attr)
    if not sub_regions[q]:
        strategy = dict(sub_strategy)
        strategy.update(attr_strategy)
        for v in heads:
            if game.owners[v] == p:
                strategy[v] = next(w for w in game.successors[v] if w in nodes)
        regions = [set(), set()]
        regions[p] = set(nodes)
        return tuple(regions), strategy
    trap, trap_strategy = _attractor(game, nodes, sub_regions[q], q)
    rest_regions, rest_strategy = _zielonka(game, nodes - trap)
    strategy = dict(rest_strategy)
    strategy.update(trap_strategy)
    for v in sub_regions[q]:
        if game.owners[v] == q:
            strategy[v] = sub_strategy[v]
    regions = [None, None]
    regions[p] = rest_regions[p]
    regions[q] = rest_regions[q] | trap
    return tuple(regions), strategy


def solve_zielonka(game: NodeGame) -> WinningRegions:
    (w_exists, w_forall), strategy = _zielonka(game, set(range(len(game.owners))))
    return WinningRegions(
        frozenset(w_exists),
        frozenset(w_forall),
        {v: strategy[v] for v in w_exists if game.owners[v] == 0},
        {v: strategy[v] for v in w_forall if game.owners[v] == 1},
    )


# the pluggable base solver: any function NodeGame -> WinningRegions
BaseSolver = Callable[[NodeGame], WinningRegions]


@dataclass
class SplitGame:
    """Node-priority game produced by :func:`split_edges`.

    Original node ``v`` keeps id ``v``; ``edge_node[(u, v)]`` is the fresh node on edge ``(u, v)``.
    """

    node_game: NodeGame
    original_count: int
    edge_node: dict[tuple[int, int], int]

    def lift_strategy(self, strategy: Mapping[int, int]) -> dict[int, int]:
        """Map a strategy on the split game back to original successors."""
        target = self.node_game.successors
        return {u: target[e][0] for u, e in strategy.items() if u < self.original_count}


def split_edges(g: ParityGame) -> SplitGame:
    n = len(g.owners)
    owners = [0 if o is Player.EXISTS else 1 for o in g.owners]
    priorities = [0] * n
    successors: list[list[int]] = [[] for _ in range(n)]
    edge_node: dict[tuple[int, int], int] = {}
    for u, v, p in g.edges:
        e = len(owners)
        owners.append(0)
        priorities.append(p)
        successors.append([v])
        successors[u].append(e)
        edge_node[(u, v)] = e
    return SplitGame(NodeGame(owners, priorities, successors), n, edge_node)


def solve_game(g: ParityGame, solver: BaseSolver = solve_zielonka) -> WinningRegions:
    """Winning regions of an edge-priority game, with strategies in original coordinates."""
    split = split_edges(g)
    regions = solver(split.node_game)
    n = split.original_count
    return WinningRegions(
        frozenset(v for v in regions.exists_region if v < n),
        frozenset(v for v in regions.forall_region if v < n),
        split.lift_strategy(regions.exists_strategy),
        split.lift_strategy(regions.forall_strategy),
    )


def is_winning(g: ParityGame, v: int, solver: BaseSolver = solve_zielonka) -> bool:
    if not 0 <= v < len(g.owners):
        raise InvalidGameError(f"unknown node {v}")
    split = split_edges(g)
    return v in solver(split.node_game).exists_region


# --------------------------------------------------------------------------
# plays


def evaluate_play(
    game: Union[ParityGame, "OpenParityGame"],
    s_exists: Union[PositionalStrategy, Mapping[int, int]],
    s_forall: Union[PositionalStrategy, Mapping[int, int]],
    start: int,
) -> DomainElement:
    """Value of the unique play from ``start`` induced by two positional strategies.

    On an open game the play stops at the first exit it enters.
    """
    from .opg import OpenParityGame

    exits: dict[int, object] = {}
    if isinstance(game, OpenParityGame):
        exits = game.exit_of
        game = game.game
    choice_e = s_exists.choice if isinstance(s_exists, PositionalStrategy) else s_exists
    choice_a = s_forall.choice if isinstance(s_forall, PositionalStrategy) else s_forall
    prio = game.priority
    owners = game.owners

    def step(v: int) -> int:
        choice = choice_e if owners[v] is Player.EXISTS else choice_a
        if v in choice:
            return choice[v]
        succ = game.successors[v]
        if len(succ) == 1:
            return succ[0][0]
        raise InvalidGameError(f"strategy does not cover node {game.names[v]}")

    path = [start]
    index = {start: 0}
    seen_max = 0
    v = start
    while True:
        if v in exits:
            return ExitAt(exits[v], seen_max)
        w = step(v)
        p = prio.get((v, w))
        if p is None:
            raise InvalidGameError(f"strategy moves along a non-edge {game.names[v]} -> {game.names[w]}")
        if w in index and w not in exits:
            cycle = path[index[w]:] + [w]
            cyc_max = max(prio[(a, b)] for a, b in zip(cycle, cycle[1:]))
            return TOP if cyc_max % 2 == 0 else BOT
        seen_max = max(seen_max, p)
        index[w] = len(path)
        path.append(w)
        v = w
