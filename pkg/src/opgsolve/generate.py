"""Seeded random open games and diagrams."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .diagram import Atom, DiagramTerm, Seq, Sum
from .dsl import SourceFile
from .errors import OpgError
from .opg import InterfaceType, OpenParityGame
from .parity import ParityGame, Player


class GenerationError(OpgError, ValueError):
    pass


def random_opg(
    rng: random.Random,
    itype: InterfaceType,
    internal: int,
    outdegree: int = 3,
    max_priority: int = 4,
    forall_rate: float = 0.5,
) -> OpenParityGame:
    """A valid atomic open game of the given type.

    Entrances never receive edges; exits get their priority-0 self-loop; every
    other node gets between 1 and ``outdegree`` successors.
    """
    n_in_r, n_out_l = itype.dom
    n_out_r, n_in_l = itype.cod
    if internal < 0 or outdegree < 1:
        raise GenerationError("need a non-negative node count and outdegree >= 1")
    n_in = n_in_r + n_in_l
    n_out = n_out_r + n_out_l
    if n_in and not internal and not n_out:
        raise GenerationError("entrances need an internal node or an exit to move to")
    if max_priority < 2 or max_priority % 2:
        raise GenerationError("max priority must be even and >= 2")

    names = ([f"in.r{k}" for k in range(1, n_in_r + 1)] + [f"in.l{k}" for k in range(1, n_in_l + 1)]
             + [f"v{k}" for k in range(internal)]
             + [f"out.r{k}" for k in range(1, n_out_r + 1)] + [f"out.l{k}" for k in range(1, n_out_l + 1)])
    owners = [Player.EXISTS] * n_in
    owners += [Player.FORALL if rng.random() < forall_rate else Player.EXISTS for _ in range(internal)]
    owners += [Player.EXISTS] * n_out
    targets = list(range(n_in, len(names)))
    edges: list[tuple[int, int, int]] = []
    for u in range(n_in + internal):
        if targets:
            k = rng.randint(1, min(outdegree, len(targets)))
            for v in sorted(rng.sample(targets, k)):
                edges.append((u, v, rng.randint(0, max_priority)))
    sources = {u for u, _, _ in edges}
    for u in range(n_in, n_in + internal):
        if u not in sources:
            edges.append((u, u, 1))
    exits = list(range(n_in + internal, len(names)))
    edges += [(o, o, 0) for o in exits]
    game = ParityGame(tuple(owners), tuple(edges), max_priority, tuple(names))
    return OpenParityGame(
        game,
        tuple(range(n_in_r)),
        tuple(range(n_in_r, n_in)),
        tuple(exits[:n_out_r]),
        tuple(exits[n_out_r:]),
    )


@dataclass
class GenSpec:
    """Parameters for :func:`generate_random`.

    ``arity`` is the type of the whole diagram, as ``[[m_r, m_l], [n_r, n_l]]``.
    ``middle_arities`` lists the candidate types at the seam of a sequential
    composition. ``ops`` is ``"seq"``, ``"sum"`` or ``"both"``.
    """

    atom_nodes: int = 3
    outdegree: int = 2
    arity: tuple = ((1, 0), (1, 0))
    max_priority: int = 4
    depth: int = 2
    duplicate_rate: float = 0.0
    seed: int = 0
    ops: str = "both"
    middle_arities: tuple = ((0, 0), (1, 0), (0, 1), (1, 1))
    composite_rate: float = 0.8

    @classmethod
    def from_dict(cls, d: dict) -> "GenSpec":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        spec = cls(**known)
        spec.arity = tuple(tuple(x) for x in spec.arity)
        spec.middle_arities = tuple(tuple(x) for x in spec.middle_arities)
        return spec


def _split(n: int, rng: random.Random) -> tuple[int, int]:
    k = rng.randint(0, n)
    return k, n - k


def generate_random(spec: GenSpec | dict, diagram_name: str = "main") -> SourceFile:
    """Random atoms plus one diagram ``diagram_name`` of the requested type.

    Deterministic for a fixed seed.
    """
    if isinstance(spec, dict):
        spec = GenSpec.from_dict(spec)
    if spec.max_priority < 2 or spec.max_priority % 2:
        raise GenerationError("max priority must be even and >= 2")
    if spec.atom_nodes < 1:
        raise GenerationError("atoms need at least one internal node")
    if not 0.0 <= spec.duplicate_rate <= 1.0:
        raise GenerationError("duplicate rate must lie in [0, 1]")
    if spec.ops not in ("seq", "sum", "both"):
        raise GenerationError(f"unknown ops {spec.ops!r}")
    if spec.depth < 0 or spec.outdegree < 1:
        raise GenerationError("depth must be >= 0 and outdegree >= 1")
    rng = random.Random(spec.seed)
    src = SourceFile()
    pool: dict[InterfaceType, list[str]] = {}

    def atom(itype: InterfaceType) -> Atom:
        same = pool.get(itype, [])
        if same and rng.random() < spec.duplicate_rate:
            name = rng.choice(same)
            return Atom(name, src.opgs[name])
        name = f"A{len(src.opgs)}"
        game = random_opg(rng, itype, rng.randint(1, spec.atom_nodes), spec.outdegree, spec.max_priority)
        src.opgs[name] = game
        pool.setdefault(itype, []).append(name)
        return Atom(name, game)

    def term(depth: int, itype: InterfaceType) -> DiagramTerm:
        if depth == 0 or rng.random() >= spec.composite_rate:
            return atom(itype)
        op = spec.ops if spec.ops != "both" else rng.choice(["seq", "sum"])
        if op == "seq":
            mid = tuple(rng.choice(spec.middle_arities))
            return Seq(term(depth - 1, InterfaceType(itype.dom, mid)),
                       term(depth - 1, InterfaceType(mid, itype.cod)))
        (a0, b0), (a1, b1), (c0, d0), (c1, d1) = (_split(x, rng) for x in (*itype.dom, *itype.cod))
        return Sum(term(depth - 1, InterfaceType((a0, a1), (c0, c1))),
                   term(depth - 1, InterfaceType((b0, b1), (d0, d1))))

    top = InterfaceType(tuple(spec.arity[0]), tuple(spec.arity[1]))
    src.diagrams[diagram_name] = term(spec.depth, top)
    return src
