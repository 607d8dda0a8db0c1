"""Shared builders: small hand-made games, a closed-game oracle and random corpora."""
from __future__ import annotations

import random

from opgsolve.diagram import Atom
from opgsolve.generate import GenSpec, generate_random, random_opg
from opgsolve.opg import InterfaceType, OpenParityGame
from opgsolve.orders import TOP
from opgsolve.parity import ParityGame, Player, evaluate_play
from opgsolve.oracle import enumerate_positional_strategies

E, A = Player.EXISTS, Player.FORALL


def build(nodes, edges, in_r=(), in_l=(), out_r=(), out_l=(), max_priority=4, exit_loops=True):
    """``nodes`` maps name -> owner; interface names listed in in_r/... default to exists."""
    names = list(nodes)
    for group in (in_r, in_l, out_r, out_l):
        names += [n for n in group if n not in nodes]
    owners = [nodes.get(n, E) for n in names]
    ix = {n: k for k, n in enumerate(names)}
    es = [(ix[u], ix[v], p) for u, v, p in edges]
    if exit_loops:
        es += [(ix[o], ix[o], 0) for o in list(out_r) + list(out_l)]
    game = ParityGame(tuple(owners), tuple(es), max_priority, tuple(names))
    return OpenParityGame(game, [ix[n] for n in in_r], [ix[n] for n in in_l],
                          [ix[n] for n in out_r], [ix[n] for n in out_l])


def game_C() -> OpenParityGame:
    """The running example, typed (1, 1) -> (1, 0)."""
    return build(
        {"in.r1": E, "a": E, "b": A, "c": E, "d": A},
        [("in.r1", "a", 0), ("a", "c", 1), ("c", "d", 0), ("c", "out.r1", 0),
         ("d", "b", 1), ("d", "out.r1", 2), ("b", "a", 3), ("b", "out.l1", 0)],
        in_r=["in.r1"], out_r=["out.r1"], out_l=["out.l1"],
    )


def toy_A() -> OpenParityGame:
    """Entrance -> exists-node a -> two rightward exits with priorities 3 and 2."""
    return build({"in.r1": E, "a": E},
                 [("in.r1", "a", 0), ("a", "out.r1", 3), ("a", "out.r2", 2)],
                 in_r=["in.r1"], out_r=["out.r1", "out.r2"])


def toy_B(m1: int, m2: int) -> OpenParityGame:
    return build({"in.r1": E, "in.r2": E, "b": E, "c": E},
                 [("in.r1", "b", 0), ("in.r2", "c", 0), ("b", "b", m1), ("c", "c", m2)],
                 in_r=["in.r1", "in.r2"])


def two_exit_game() -> OpenParityGame:
    """Two entrances i1, i2 and two exits o1, o2 with some internal structure."""
    return build(
        {"i1": E, "i2": E, "x": A, "y": E},
        [("i1", "x", 0), ("i2", "y", 1), ("x", "o1", 2), ("x", "y", 1),
         ("y", "o2", 0), ("y", "x", 2)],
        in_r=["i1", "i2"], out_r=["o1", "o2"],
    )


# --------------------------------------------------------------------------
# independent closed-game oracle


def brute_force_winners(g: ParityGame) -> set[int]:
    """Nodes from which some positional exists-strategy beats every positional forall-strategy."""
    exists = list(enumerate_positional_strategies(g, E))
    forall = list(enumerate_positional_strategies(g, A))
    return {
        v for v in range(len(g.owners))
        if any(all(evaluate_play(g, se, sa, v) == TOP for sa in forall) for se in exists)
    }


def random_closed_game(rng: random.Random, max_nodes=7, max_out=3, max_priority=4) -> ParityGame:
    n = rng.randint(1, max_nodes)
    owners = tuple(rng.choice([E, A]) for _ in range(n))
    edges = []
    for u in range(n):
        for v in sorted(rng.sample(range(n), rng.randint(1, min(max_out, n)))):
            edges.append((u, v, rng.randint(0, max_priority)))
    return ParityGame(owners, tuple(edges), max_priority)


# --------------------------------------------------------------------------
# random open-game corpora


def random_type(rng: random.Random, entrances: int, exits: int) -> InterfaceType:
    in_l = rng.randint(0, entrances)
    out_r = rng.randint(0, exits)
    return InterfaceType((entrances - in_l, exits - out_r), (out_r, in_l))


def oracle_corpus(n=300, seed=2024, max_nodes=8, max_exits=3, outdegree=3, max_priority=4):
    rng = random.Random(seed)
    games = []
    while len(games) < n:
        entrances = rng.randint(1, 2)
        exits = rng.randint(0, max_exits)
        room = max_nodes - entrances - exits
        if room < 1:
            continue
        itype = random_type(rng, entrances, exits)
        games.append(random_opg(rng, itype, rng.randint(1, room), outdegree, max_priority))
    return games


def _small_type(rng):
    return (rng.randint(0, 1), rng.randint(0, 1))


def pair_corpus(n=200, seed=7, max_internal=4, max_priority=4):
    """Pairs (op, A, B) with matching interfaces, alternating sequential and sum composition."""
    rng = random.Random(seed)
    pairs = []
    for k in range(n):
        op = "seq" if k % 2 == 0 else "sum"
        dom, mid, cod = _small_type(rng), _small_type(rng), _small_type(rng)
        if op == "seq":
            ta, tb = InterfaceType(dom, mid), InterfaceType(mid, cod)
        else:
            ta, tb = InterfaceType(dom, mid), InterfaceType(_small_type(rng), cod)
        a = random_opg(rng, ta, rng.randint(1, max_internal), 3, max_priority)
        b = random_opg(rng, tb, rng.randint(1, max_internal), 3, max_priority)
        pairs.append((op, a, b))
    return pairs


DIAGRAM_ARITIES = [((1, 0), (1, 0)), ((1, 1), (1, 1)), ((1, 0), (0, 1)), ((2, 0), (1, 0)), ((1, 1), (0, 0))]
CLOSED_ARITIES = [((1, 0), (0, 0)), ((1, 0), (0, 1)), ((2, 0), (0, 0)), ((1, 0), (0, 2))]


def diagram_corpus(n=100, seed=11, arities=DIAGRAM_ARITIES, max_priority=2, atom_nodes=4):
    out = []
    for k in range(n):
        spec = GenSpec(atom_nodes=atom_nodes, outdegree=2, arity=arities[k % len(arities)],
                       max_priority=max_priority, depth=1 + k % 3, duplicate_rate=0.3, seed=seed * 1000 + k)
        out.append(generate_random(spec).diagrams["main"])
    return out


def term_depth(d) -> int:
    if isinstance(d, Atom):
        return 0
    return 1 + max(term_depth(d.left), term_depth(d.right))


def simple_cycles_through(g: ParityGame, start: int):
    """Every simple cycle through ``start``, as a list of edge priorities."""
    out = []

    def walk(v, visited, prios):
        for w, p in g.successors[v]:
            if w == start:
                out.append(prios + [p])
            elif w not in visited:
                walk(w, visited | {w}, prios + [p])

    walk(start, {start}, [])
    return out
