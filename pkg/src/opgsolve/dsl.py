"""Text format for open parity games and diagram terms.

::

    # comments run to end of line
    opg C : (1, 1) -> (1, 0) {
      maxprio 4;
      node a E;
      node b A;
      in.r1 -> a @ 0;
      ...
    }
    diagram d = A ; (B + C);

Interface nodes (``in.r<k>``, ``in.l<k>``, ``out.r<k>``, ``out.l<k>``) are
implicit, as are the priority-0 self-loops on exits. In a header
``(a, b) -> (c, d)``, ``a``/``b`` count rightward entrances and leftward
exits, ``c``/``d`` rightward exits and leftward entrances. ``+`` binds
tighter than ``;``; both associate to the left.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .diagram import Atom, DiagramTerm, Seq, Sum, type_of
from .errors import ArityError, InvalidGameError, ParseError
from .opg import OpenParityGame
from .orders import PrioritySpace
from .parity import ParityGame, Player

KEYWORDS = {"opg", "diagram", "maxprio", "node"}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<port>(?:in|out)\.[rl][0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<nat>[0-9]+)
  | (?P<arrow>->)
  | (?P<sym>[:(),{};@=+])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            value = m.group()
            if kind == "sym" or kind == "arrow":
                kind = value
            elif kind == "name" and value in KEYWORDS:
                kind = value
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class SourceFile:
    opgs: dict[str, OpenParityGame] = field(default_factory=dict)
    diagrams: dict[str, DiagramTerm] = field(default_factory=dict)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.definition: Optional[str] = None

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col, self.definition)

    def expect(self, kind: str) -> Token:
        tok = self.tok
        if tok.kind != kind:
            shown = tok.text or "end of file"
            raise self.error(f"expected {kind!r}, found {shown!r}")
        self.pos += 1
        return tok

    def accept(self, kind: str) -> Optional[Token]:
        if self.tok.kind == kind:
            self.pos += 1
            return self.tokens[self.pos - 1]
        return None

    def nat(self) -> int:
        return int(self.expect("nat").text)

    def pair(self) -> tuple[int, int]:
        self.expect("(")
        a = self.nat()
        self.expect(",")
        b = self.nat()
        self.expect(")")
        return a, b

    # ---- top level

    def parse(self) -> SourceFile:
        src = SourceFile()
        while self.tok.kind != "eof":
            if self.tok.kind == "opg":
                name, game = self.opg()
                if name in src.opgs or name in src.diagrams:
                    raise ParseError(f"duplicate definition {name!r}", definition=name)
                src.opgs[name] = game
            elif self.tok.kind == "diagram":
                name, term = self.diagram(src)
                if name in src.opgs or name in src.diagrams:
                    raise ParseError(f"duplicate definition {name!r}", definition=name)
                src.diagrams[name] = term
            else:
                raise self.error(f"expected 'opg' or 'diagram', found {self.tok.text!r}")
            self.definition = None
        return src

    # ---- open games

    def opg(self) -> tuple[str, OpenParityGame]:
        self.expect("opg")
        name = self.expect("name").text
        self.definition = name
        self.expect(":")
        dom = self.pair()
        self.expect("->")
        cod = self.pair()
        self.expect("{")
        maxprio: Optional[int] = None
        if self.accept("maxprio"):
            tok = self.tok
            maxprio = self.nat()
            if maxprio < 2 or maxprio % 2:
                raise self.error(f"maxprio must be even and >= 2, got {maxprio}", tok)
            self.expect(";")

        n_in_r, n_out_l = dom
        n_out_r, n_in_l = cod
        ports = {
            "in.r": [f"in.r{k}" for k in range(1, n_in_r + 1)],
            "in.l": [f"in.l{k}" for k in range(1, n_in_l + 1)],
            "out.r": [f"out.r{k}" for k in range(1, n_out_r + 1)],
            "out.l": [f"out.l{k}" for k in range(1, n_out_l + 1)],
        }
        internal: list[tuple[str, Player]] = []
        declared: set[str] = set()
        raw_edges: list[tuple[Token, str, str, int]] = []
        while not self.accept("}"):
            if self.accept("node"):
                tok = self.expect("name")
                if tok.text in declared:
                    raise self.error(f"node {tok.text!r} declared twice", tok)
                owner_tok = self.expect("name")
                if owner_tok.text not in ("E", "A"):
                    raise self.error(f"owner must be E or A, found {owner_tok.text!r}", owner_tok)
                self.expect(";")
                declared.add(tok.text)
                internal.append((tok.text, Player(owner_tok.text)))
            elif self.tok.kind in ("name", "port"):
                start = self.tok
                src = self.endpoint()
                self.expect("->")
                dst = self.endpoint()
                self.expect("@")
                prio = self.nat()
                self.expect(";")
                raw_edges.append((start, src, dst, prio))
            else:
                raise self.error(f"expected node or edge declaration, found {self.tok.text or 'end of file'!r}")

        names = ports["in.r"] + ports["in.l"] + [n for n, _ in internal] + ports["out.r"] + ports["out.l"]
        owners = ([Player.EXISTS] * (n_in_r + n_in_l) + [o for _, o in internal]
                  + [Player.EXISTS] * (n_out_r + n_out_l))
        index = {n: k for k, n in enumerate(names)}
        exits = set(ports["out.r"] + ports["out.l"])
        if maxprio is None:
            maxprio = PrioritySpace.covering(max((p for *_, p in raw_edges), default=0)).max_priority
        edges = []
        seen = set()
        for tok, u, v, p in raw_edges:
            for end in (u, v):
                if end not in index:
                    raise self.error(f"unknown node {end!r}", tok)
            if u in exits:
                raise self.error(f"edge out of {u}: exit must be a sink", tok)
            if p > maxprio:
                raise self.error(f"priority {p} exceeds maxprio {maxprio}", tok)
            if (u, v) in seen:
                raise self.error(f"duplicate edge {u} -> {v}", tok)
            seen.add((u, v))
            edges.append((index[u], index[v], p))
        edges += [(index[o], index[o], 0) for o in ports["out.r"] + ports["out.l"]]
        try:
            game = ParityGame(tuple(owners), tuple(edges), maxprio, tuple(names))
        except InvalidGameError as exc:
            raise ParseError(str(exc), definition=name) from exc
        opg = OpenParityGame(
            game,
            tuple(index[n] for n in ports["in.r"]),
            tuple(index[n] for n in ports["in.l"]),
            tuple(index[n] for n in ports["out.r"]),
            tuple(index[n] for n in ports["out.l"]),
        )
        return name, opg

    def endpoint(self) -> str:
        if self.tok.kind in ("name", "port"):
            return self.expect(self.tok.kind).text
        raise self.error(f"expected a node, found {self.tok.text!r}")

    # ---- diagrams

    def diagram(self, src: SourceFile) -> tuple[str, DiagramTerm]:
        self.expect("diagram")
        name = self.expect("name").text
        self.definition = name
        self.expect("=")
        term = self.seq_term(src)
        self.accept(";")
        try:
            type_of(term)
        except ArityError as exc:
            raise ParseError(str(exc), definition=name) from exc
        return name, term

    def seq_term(self, src: SourceFile) -> DiagramTerm:
        term = self.sum_term(src)
        # a ';' followed by a term continues the sequence; otherwise it ends the definition
        while self.tok.kind == ";" and self.tokens[self.pos + 1].kind in ("name", "("):
            self.pos += 1
            term = Seq(term, self.sum_term(src))
        return term

    def sum_term(self, src: SourceFile) -> DiagramTerm:
        term = self.primary(src)
        while self.accept("+"):
            term = Sum(term, self.primary(src))
        return term

    def primary(self, src: SourceFile) -> DiagramTerm:
        if self.accept("("):
            term = self.seq_term(src)
            self.expect(")")
            return term
        tok = self.expect("name")
        if tok.text not in src.opgs:
            raise self.error(f"unknown open game {tok.text!r}", tok)
        return Atom(tok.text, src.opgs[tok.text])


def parse_source(text: str) -> SourceFile:
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# printing


def format_opg(name: str, a: OpenParityGame) -> str:
    g = a.game
    t = a.type
    interface = set(a.in_r + a.in_l + a.out_r + a.out_l)
    lines = [f"opg {name} : ({t.dom[0]}, {t.dom[1]}) -> ({t.cod[0]}, {t.cod[1]}) {{",
             f"  maxprio {g.max_priority};"]
    for v, owner in enumerate(g.owners):
        if v not in interface:
            lines.append(f"  node {g.names[v]} {owner.value};")
    exits = set(a.out_r + a.out_l)
    for u, v, p in g.edges:
        if u not in exits:
            lines.append(f"  {g.names[u]} -> {g.names[v]} @ {p};")
    lines.append("}")
    return "\n".join(lines)


def format_term(d: DiagramTerm) -> str:
    if isinstance(d, Atom):
        return d.name
    if isinstance(d, Sum):
        left = format_term(d.left)
        right = format_term(d.right)
        if isinstance(d.left, Seq):
            left = f"({left})"
        if not isinstance(d.right, Atom):
            right = f"({right})"
        return f"{left} + {right}"
    right = format_term(d.right)
    if isinstance(d.right, Seq):
        right = f"({right})"
    return f"{format_term(d.left)} ; {right}"


def format_source(src: SourceFile) -> str:
    parts = [format_opg(name, a) for name, a in src.opgs.items()]
    parts += [f"diagram {name} = {format_term(t)};" for name, t in src.diagrams.items()]
    return "\n\n".join(parts) + "\n"
