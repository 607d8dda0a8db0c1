"""Ground-truth Pareto fronts by enumerating positional strategies.

Positional strategies suffice for Pareto fronts, so a literal
best-of-worst over every pair of positional strategies is exact. It is
exponential in the number of choice nodes and meant for small games only.
"""
from __future__ import annotations

import math
from typing import Iterator

from .errors import InvalidGameError, OracleBoundError
from .opg import OpenParityGame, ParetoFront, check_opg
from .orders import EntranceRef, ResultSet, leq_domain, maximal_results
from .parity import ParityGame, Player, PositionalStrategy, evaluate_play

DEFAULT_BOUND = 10**6


def _game(a) -> ParityGame:
    return a.game if isinstance(a, OpenParityGame) else a


def strategy_count(a, player: Player) -> int:
    g = _game(a)
    return math.prod(len(g.successors[v]) for v in g.nodes_of(player))


def enumerate_positional_strategies(a, player: Player) -> Iterator[PositionalStrategy]:
    """All positional strategies of ``player``, as a mixed-radix counter.

    The last node (by id) varies fastest; successors are tried in target order.
    """
    g = _game(a)
    nodes = g.nodes_of(player)
    options = [[w for w, _ in g.successors[v]] for v in nodes]
    digits = [0] * len(nodes)
    while True:
        yield PositionalStrategy(player, {v: options[k][digits[k]] for k, v in enumerate(nodes)})
        k = len(nodes) - 1
        while k >= 0:
            digits[k] += 1
            if digits[k] < len(options[k]):
                break
            digits[k] = 0
            k -= 1
        if k < 0:
            return


def _fold_minimal(antichain: list, d) -> list:
    if any(leq_domain(e, d) for e in antichain):
        return antichain
    return [e for e in antichain if not leq_domain(d, e)] + [d]


def worst_outcome(a: OpenParityGame, s_exists: PositionalStrategy, start: int) -> ResultSet:
    """Minimal play values over all positional counter-strategies."""
    antichain: list = []
    for s_forall in enumerate_positional_strategies(a, Player.FORALL):
        antichain = _fold_minimal(antichain, evaluate_play(a, s_exists, s_forall, start))
    return ResultSet(antichain)


def brute_force_pareto(a: OpenParityGame, i: EntranceRef, bound: int = DEFAULT_BOUND) -> ParetoFront:
    check_opg(a)
    if i not in a.entrances:
        raise InvalidGameError(f"{i} is not an entrance")
    pairs = strategy_count(a, Player.EXISTS) * strategy_count(a, Player.FORALL)
    if pairs > bound:
        raise OracleBoundError(f"{pairs} strategy pairs exceed the oracle bound {bound}")
    start = a.entrances[i]
    worsts = {worst_outcome(a, s, start) for s in enumerate_positional_strategies(a, Player.EXISTS)}
    return ParetoFront(i, maximal_results(worsts))


def brute_force_fronts(a: OpenParityGame, bound: int = DEFAULT_BOUND) -> dict[EntranceRef, ParetoFront]:
    return {i: brute_force_pareto(a, i, bound) for i in a.entrances}
