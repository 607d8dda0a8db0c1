"""Priorities, domain elements, results and queries, with the orders between them.

Everything here is immutable and pure. Priorities are plain ``int`` values;
``None`` plays the role of the bottom value inside a query.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import OrderError


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _ordering(a: int, b: int) -> Ordering:
    return Ordering.LESS if a < b else Ordering.GREATER if a > b else Ordering.EQUAL


@dataclass(frozen=True)
class PrioritySpace:
    """The priorities ``{0, ..., max_priority}``; ``max_priority`` is even and at least 2."""

    max_priority: int = 2

    def __post_init__(self) -> None:
        if self.max_priority < 2 or self.max_priority % 2:
            raise OrderError(f"max priority must be even and >= 2, got {self.max_priority}")

    def __contains__(self, m: object) -> bool:
        return isinstance(m, int) and 0 <= m <= self.max_priority

    def ascending(self) -> list[int]:
        """All priorities, least first under the sub-priority order."""
        return sorted(range(self.max_priority + 1), key=subpriority_key)

    @classmethod
    def covering(cls, m: int) -> "PrioritySpace":
        """Smallest space containing priority ``m``."""
        top = max(2, m)
        return cls(top + top % 2)


def subpriority_key(m: int) -> int:
    # odd priorities are bad for the existential player, and worse the larger they are
    return -m if m % 2 else m


def cmp_subpriority(m1: int, m2: int) -> Ordering:
    return _ordering(subpriority_key(m1), subpriority_key(m2))


def max_priority(m1: int, m2: int) -> int:
    return m1 if m1 >= m2 else m2


def dual_priority(m: int) -> int:
    """Lowest priority ``d`` such that ``max(m, m')`` is even exactly when ``d <= m'``."""
    if m < 0:
        raise OrderError(f"priorities are natural numbers, got {m}")
    if m % 2:
        return m + 1
    return 0 if m == 0 else m - 1


# --------------------------------------------------------------------------
# interface references


class Direction(enum.Enum):
    RIGHT = "r"
    LEFT = "l"

    @property
    def rank(self) -> int:
        return 0 if self is Direction.RIGHT else 1


@dataclass(frozen=True, slots=True)
class ExitRef:
    direction: Direction
    index: int  # 1-based

    def __str__(self) -> str:
        return f"out.{self.direction.value}{self.index}"

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.direction.rank, self.index)


@dataclass(frozen=True, slots=True)
class EntranceRef:
    direction: Direction
    index: int  # 1-based

    def __str__(self) -> str:
        return f"in.{self.direction.value}{self.index}"

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.direction.rank, self.index)


def R(k: int) -> ExitRef:
    return ExitRef(Direction.RIGHT, k)


def L(k: int) -> ExitRef:
    return ExitRef(Direction.LEFT, k)


# --------------------------------------------------------------------------
# domain


@dataclass(frozen=True, slots=True)
class Bot:
    def __repr__(self) -> str:
        return "BOT"


@dataclass(frozen=True, slots=True)
class Top:
    def __repr__(self) -> str:
        return "TOP"


@dataclass(frozen=True, slots=True)
class ExitAt:
    exit: ExitRef
    priority: int

    def __repr__(self) -> str:
        return f"({self.exit}, {self.priority})"


BOT = Bot()
TOP = Top()

DomainElement = Union[Bot, Top, ExitAt]


def element_key(d: DomainElement) -> tuple:
    """Canonical sort key: bottom, then exit elements by (direction, index, priority), then top."""
    if isinstance(d, Bot):
        return (0,)
    if isinstance(d, Top):
        return (2,)
    return (1, d.exit.direction.rank, d.exit.index, d.priority)


def leq_domain(d1: DomainElement, d2: DomainElement) -> bool:
    if isinstance(d1, Bot) or isinstance(d2, Top):
        return True
    if isinstance(d1, ExitAt) and isinstance(d2, ExitAt):
        return d1.exit == d2.exit and subpriority_key(d1.priority) <= subpriority_key(d2.priority)
    return False


def cmp_domain(d1: DomainElement, d2: DomainElement) -> Optional[Ordering]:
    """Domain order; ``None`` when the two elements are incomparable."""
    le, ge = leq_domain(d1, d2), leq_domain(d2, d1)
    if le and ge:
        return Ordering.EQUAL
    if le:
        return Ordering.LESS
    if ge:
        return Ordering.GREATER
    return None


class ResultSet:
    """A non-empty antichain of domain elements.

    Equality and hashing go through the underlying frozenset; ``canonical``
    gives the deterministic element order used for output.
    """

    __slots__ = ("elements", "_hash")

    def __init__(self, elements: Iterable[DomainElement]):
        elems = frozenset(elements)
        if not elems:
            raise OrderError("a result must be non-empty")
        for a in elems:
            for b in elems:
                if a != b and leq_domain(a, b):
                    raise OrderError(f"not an antichain: {a!r} <= {b!r}")
        self.elements = elems
        self._hash = hash(elems)

    def __iter__(self) -> Iterator[DomainElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, d: object) -> bool:
        return d in self.elements

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ResultSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "{" + ", ".join(map(repr, self.canonical())) + "}"

    def canonical(self) -> list[DomainElement]:
        return sorted(self.elements, key=element_key)

    @property
    def sort_key(self) -> tuple:
        return tuple(element_key(d) for d in self.canonical())

    @property
    def is_top(self) -> bool:
        return self.elements == {TOP}

    @property
    def is_bot(self) -> bool:
        return self.elements == {BOT}


def minimal_elements(ds: Iterable[DomainElement]) -> ResultSet:
    items = set(ds)
    if not items:
        raise OrderError("minimal_elements of an empty set")
    return ResultSet(
        d for d in items if not any(e != d and leq_domain(e, d) for e in items)
    )


def leq_upper(t1: Iterable[DomainElement], t2: Iterable[DomainElement]) -> bool:
    """Upper preorder: every element of ``t2`` lies above some element of ``t1``."""
    t1 = list(t1)
    return all(any(leq_domain(d1, d2) for d1 in t1) for d2 in t2)


def maximal_results(results: Iterable[ResultSet]) -> frozenset[ResultSet]:
    items = set(results)
    if not items:
        raise OrderError("maximal_results of an empty set")
    return frozenset(
        r for r in items if not any(s != r and leq_upper(r, s) for s in items)
    )


def leq_lower(s1: Iterable[ResultSet], s2: Iterable[ResultSet]) -> bool:
    s2 = list(s2)
    return all(any(leq_upper(r1, r2) for r2 in s2) for r1 in s1)


# --------------------------------------------------------------------------
# queries

_BELOW_ALL = -(1 << 30)


def query_value_key(v: Optional[int]) -> int:
    """Key for the extended order on priorities where ``None`` (bottom) is least."""
    return _BELOW_ALL if v is None else subpriority_key(v)


@dataclass(frozen=True)
class Query:
    """Assignment of a priority or ``None`` (bottom) to each exit, stored densely."""

    exits: tuple[ExitRef, ...]
    values: tuple[Optional[int], ...]

    def __post_init__(self) -> None:
        if len(self.exits) != len(self.values):
            raise OrderError("query values do not match its exits")

    def __getitem__(self, o: ExitRef) -> Optional[int]:
        return self.values[self.exits.index(o)]

    def items(self) -> Iterator[tuple[ExitRef, Optional[int]]]:
        return zip(self.exits, self.values)

    def __repr__(self) -> str:
        body = ", ".join(f"{o}->{'BOT' if v is None else v}" for o, v in self.items())
        return "{" + body + "}"

    @classmethod
    def from_mapping(cls, exits: Sequence[ExitRef], mapping: dict) -> "Query":
        if set(mapping) != set(exits):
            raise OrderError("query must assign every exit exactly once")
        return cls(tuple(exits), tuple(mapping[o] for o in exits))


def leq_query(q1: Query, q2: Query) -> bool:
    if q1.exits != q2.exits:
        raise OrderError("queries over different exit sets")
    return all(query_value_key(a) <= query_value_key(b) for a, b in zip(q1.values, q2.values))


def cmp_query(q1: Query, q2: Query) -> Optional[Ordering]:
    le, ge = leq_query(q1, q2), leq_query(q2, q1)
    if le and ge:
        return Ordering.EQUAL
    if le:
        return Ordering.LESS
    if ge:
        return Ordering.GREATER
    return None


def dual_query(q: Query) -> ResultSet:
    if all(v is None for v in q.values):
        return ResultSet([TOP])
    return ResultSet(ExitAt(o, dual_priority(v)) for o, v in q.items() if v is not None)


def query_from_result(r: ResultSet, exits: Sequence[ExitRef]) -> Query:
    """The unique query whose dual is ``r``."""
    if BOT in r:
        raise OrderError("a result containing bottom is not the dual of any query")
    if r.is_top:
        return Query(tuple(exits), (None,) * len(exits))
    chosen: dict[ExitRef, int] = {}
    for d in r:
        assert isinstance(d, ExitAt)
        if d.exit not in exits:
            raise OrderError(f"result mentions unknown exit {d.exit}")
        # the dual is an involution on priorities
        chosen[d.exit] = dual_priority(d.priority)
    return Query(tuple(exits), tuple(chosen.get(o) for o in exits))
