"""First-order and monadic second-order sentences over graphs and rooted trees.

Concrete syntax (see ``docs/formula_grammar.md`` for the EBNF)::

    exists x. forall y. !(x ~ y)
    forall X. ((exists x. X(x)) -> exists y. exists z. (X(y) & !X(z) & y ~ z))
    exists x. P(R, x)

Lower-case identifiers are element variables, capitalised identifiers are
set variables.  ``R`` (the root) and ``P`` (parent-child) are reserved for
the rooted-tree vocabulary; ``~`` is only allowed over graphs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .graphs import Graph, RootedTree

__all__ = [
    "Formula",
    "Adj",
    "Eq",
    "Parent",
    "Member",
    "Const",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "Quant",
    "FormulaError",
    "ParseError",
    "ScopeError",
    "VocabularyError",
    "GRAPH",
    "ROOTED_TREE",
    "parse",
    "to_text",
    "quantifier_depth",
    "free_variables",
    "uses_set_quantifiers",
    "evaluate",
    "formula_library",
    "CONNECTIVITY",
    "MSO_EVAL_LIMIT",
]

GRAPH = "graph"
ROOTED_TREE = "rooted_tree"
VOCABULARIES = (GRAPH, ROOTED_TREE)

#: Default vertex limit when set quantifiers have to enumerate subsets.
MSO_EVAL_LIMIT = 16

ROOT = "R"


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ScopeError(FormulaError):
    pass


class VocabularyError(FormulaError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Adj:
    left: str
    right: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Parent:
    parent: str
    child: str


@dataclass(frozen=True)
class Member:
    set_var: str
    term: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    """``kind`` is ``"exists"`` or ``"forall"``; set variables are capitalised."""

    kind: str
    var: str
    body: "Formula"

    @property
    def is_set(self) -> bool:
        return is_set_var(self.var)


Formula = Union[Adj, Eq, Parent, Member, Const, Not, And, Or, Implies, Iff, Quant]
_BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def is_set_var(name: str) -> bool:
    return name[:1].isupper()


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[~=!&|().,])|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<bad>\S))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group("bad"):
            raise ParseError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        kind = "op" if m.group("op") else "ident"
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str | None = None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.implication()
        while self.peek()[1] == "<->":
            self.take()
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[1] == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek()[1] == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "!":
            self.take()
            return Not(self.unary())
        if value in ("exists", "forall"):
            self.take()
            var_kind, var, var_pos = self.take()
            if var_kind != "ident" or var in _KEYWORDS:
                raise ParseError(f"expected a variable after {value!r}", var_pos)
            self.take(".")
            return Quant(value, var, self.formula())
        if value == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        return self.atom()

    def term(self) -> str:
        kind, value, pos = self.take()
        if kind != "ident" or value in _KEYWORDS - {ROOT} or (is_set_var(value) and value != ROOT):
            raise ParseError(f"expected an element variable or R, found {value or 'end of input'!r}", pos)
        return value

    def atom(self) -> Formula:
        kind, value, pos = self.peek()
        if value in ("true", "false"):
            self.take()
            return Const(value == "true")
        if value == "P" and self.tokens[self.i + 1][1] == "(":
            self.take()
            self.take("(")
            a = self.term()
            self.take(",")
            b = self.term()
            self.take(")")
            return Parent(a, b)
        if kind == "ident" and is_set_var(value) and value not in (ROOT, "P") and self.tokens[self.i + 1][1] == "(":
            self.take()
            self.take("(")
            t = self.term()
            self.take(")")
            return Member(value, t)
        if kind != "ident":
            raise ParseError(f"unexpected {value or 'end of input'!r}", pos)
        a = self.term()
        op = self.take()
        if op[1] not in ("~", "="):
            raise ParseError(f"expected '~' or '=', found {op[1] or 'end of input'!r}", op[2])
        b = self.term()
        return Adj(a, b) if op[1] == "~" else Eq(a, b)


_KEYWORDS = frozenset({"exists", "forall", "true", "false", "P", ROOT})


def parse(text: str, vocab: str = GRAPH, sentence: bool = True) -> Formula:
    """Parse ``text`` and check scoping and vocabulary.

    Raises :class:`ParseError` (with a character position),
    :class:`ScopeError` for free variables when ``sentence`` is true, and
    :class:`VocabularyError` for atoms foreign to ``vocab``.
    """
    if vocab not in VOCABULARIES:
        raise VocabularyError(f"unknown vocabulary {vocab!r}")
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "end":
        raise ParseError(f"unexpected {p.peek()[1]!r}", p.peek()[2])
    check_vocabulary(f, vocab)
    if sentence:
        free = free_variables(f)
        if free:
            raise ScopeError(f"unbound variables: {', '.join(sorted(free))}")
    return f


def check_vocabulary(f: Formula, vocab: str) -> None:
    for node in _walk(f):
        if vocab == GRAPH:
            if isinstance(node, Parent):
                raise VocabularyError("P(.,.) belongs to the rooted-tree vocabulary")
            if any(t == ROOT for t in _terms(node)):
                raise VocabularyError("the root constant R belongs to the rooted-tree vocabulary")
        elif isinstance(node, Adj):
            raise VocabularyError("'~' belongs to the graph vocabulary")


def _walk(f: Formula):
    yield f
    if isinstance(f, Not):
        yield from _walk(f.body)
    elif isinstance(f, Quant):
        yield from _walk(f.body)
    elif type(f) in _BINARY:
        yield from _walk(f.left)
        yield from _walk(f.right)


def _terms(node) -> tuple[str, ...]:
    if isinstance(node, (Adj, Eq)):
        return (node.left, node.right)
    if isinstance(node, Parent):
        return (node.parent, node.child)
    if isinstance(node, Member):
        return (node.term,)
    return ()


def free_variables(f: Formula) -> set[str]:
    if isinstance(f, Const):
        return set()
    if isinstance(f, Member):
        return {f.set_var} | ({f.term} - {ROOT})
    if isinstance(f, (Adj, Eq, Parent)):
        return set(_terms(f)) - {ROOT}
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, Quant):
        return free_variables(f.body) - {f.var}
    return free_variables(f.left) | free_variables(f.right)


def uses_set_quantifiers(f: Formula) -> bool:
    return any(isinstance(n, Quant) and n.is_set for n in _walk(f))


def quantifier_depth(f: Formula) -> int:
    """Longest chain of nested quantifiers, element and set alike."""
    if isinstance(f, Quant):
        return 1 + quantifier_depth(f.body)
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if type(f) in _BINARY:
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 0


# ---------------------------------------------------------------------------
# printing


def to_text(f: Formula) -> str:
    """Fully parenthesised text; ``parse(to_text(f)) == f``."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Adj):
        return f"{f.left} ~ {f.right}"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Parent):
        return f"P({f.parent}, {f.child})"
    if isinstance(f, Member):
        return f"{f.set_var}({f.term})"
    if isinstance(f, Not):
        return f"!({to_text(f.body)})"
    if isinstance(f, Quant):
        return f"({f.kind} {f.var}. {to_text(f.body)})"
    return f"({to_text(f.left)} {_BINARY[type(f)]} {to_text(f.right)})"


# ---------------------------------------------------------------------------
# evaluation


def _subsets_by_popcount(n: int) -> list[int]:
    return sorted(range(1 << n), key=lambda m: (bin(m).count("1"), m))


class _Model:
    def __init__(self, structure: Graph | RootedTree):
        self.n = structure.vertex_count
        if isinstance(structure, RootedTree):
            self.root = structure.root
            self.parent = structure.parent
            self.adj = None
        else:
            self.root = None
            self.parent = None
            self.adj = [set(a) for a in structure.adjacency]
        self._subsets = None

    @property
    def subsets(self):
        if self._subsets is None:
            self._subsets = _subsets_by_popcount(self.n)
        return self._subsets


def _holds(f: Formula, m: _Model, env: dict) -> bool:
    if isinstance(f, Adj):
        return env[f.right] in m.adj[env[f.left]]
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Parent):
        return m.parent[env[f.child]] == env[f.parent]
    if isinstance(f, Member):
        return bool(env[f.set_var] >> env[f.term] & 1)
    if isinstance(f, Not):
        return not _holds(f.body, m, env)
    if isinstance(f, And):
        return _holds(f.left, m, env) and _holds(f.right, m, env)
    if isinstance(f, Or):
        return _holds(f.left, m, env) or _holds(f.right, m, env)
    if isinstance(f, Implies):
        return not _holds(f.left, m, env) or _holds(f.right, m, env)
    if isinstance(f, Iff):
        return _holds(f.left, m, env) == _holds(f.right, m, env)
    if isinstance(f, Const):
        return f.value
    # quantifier
    domain = m.subsets if f.is_set else range(m.n)
    saved = env.get(f.var, _MISSING)
    want = f.kind == "exists"
    result = not want
    for value in domain:
        env[f.var] = value
        if _holds(f.body, m, env) == want:
            result = want
            break
    if saved is _MISSING:
        env.pop(f.var, None)
    else:
        env[f.var] = saved
    return result


_MISSING = object()


def evaluate(f: Formula, structure: Graph | RootedTree, limit: int = MSO_EVAL_LIMIT) -> bool:
    """Truth value of the sentence ``f`` on ``structure``.

    Set quantifiers range over all ``2**n`` vertex subsets, smallest first,
    and stop at the first witness; ``limit`` bounds ``n`` when they occur.
    """
    free = free_variables(f)
    if free:
        raise ScopeError(f"not a sentence; free variables: {', '.join(sorted(free))}")
    check_vocabulary(f, ROOTED_TREE if isinstance(structure, RootedTree) else GRAPH)
    if uses_set_quantifiers(f) and structure.vertex_count > limit:
        raise FormulaError(f"MSO evaluation limited to {limit} vertices")
    m = _Model(structure)
    env = {ROOT: m.root} if m.root is not None else {}
    return _holds(f, m, env)


# ---------------------------------------------------------------------------
# curated sentences

CONNECTIVITY = (
    "forall X. ((exists x1. exists x2. (X(x1) & !(X(x2)))) -> "
    "(exists y. exists z. (X(y) & !(X(z)) & y ~ z)))"
)

_GRAPH_FO = [
    "exists x. x = x",
    "forall x. !(x ~ x)",
    "exists x. exists y. x ~ y",
    "exists x. exists y. !(x = y)",
    "exists x. forall y. !(x ~ y)",
    "forall x. exists y. x ~ y",
    "exists x. forall y. (x = y | x ~ y)",
    "exists x. exists y. (!(x = y) & !(x ~ y))",
    "forall x. forall y. (x = y | x ~ y)",
    "forall x. exists y. (!(x = y) & !(x ~ y))",
    "exists x. exists y. exists z. (!(x = y) & !(x = z) & !(y = z))",
    "exists x. exists y. exists z. (x ~ y & y ~ z & z ~ x)",
    "exists x. exists y. exists z. (x ~ y & y ~ z & !(x = z))",
    "exists x. exists y. (x ~ y & forall z. (z ~ x -> z = y))",
    "forall x. forall y. forall z. ((x ~ y & x ~ z) -> y = z)",
    "forall x. forall y. (x = y | x ~ y | exists z. (x ~ z & z ~ y))",
    "exists x. exists y. (x ~ y & !exists z. (z ~ x & z ~ y))",
    "exists x. exists y. exists z. (x ~ y & x ~ z & !(y = z) & !(y ~ z))",
    "forall x. exists y. exists z. (x ~ y & x ~ z & !(y = z))",
    "exists x. forall y. (x ~ y <-> !(x = y))",
]

_GRAPH_MSO = [
    "exists X. exists x. X(x)",
    "forall X. exists x. X(x)",
    "exists X. forall x. X(x)",
    "exists X. exists x. !X(x)",
    "exists X. exists x. exists y. (X(x) & !X(y))",
    "exists X. forall x. forall y. (x ~ y -> (X(x) <-> !X(y)))",
    "exists X. exists x. (X(x) & forall y. (x ~ y -> !X(y)))",
    "forall X. forall x. forall y. ((X(x) & x ~ y) -> X(y))",
    "exists X. forall x. (X(x) <-> exists y. x ~ y)",
    CONNECTIVITY,
]

_TREE_FO = [
    "exists x. P(R, x)",
    "forall x. !P(x, R)",
    "exists x. (x = R)",
    "exists x. !(x = R)",
    "exists x. exists y. (P(R, x) & P(x, y))",
    "exists x. exists y. (P(R, x) & P(R, y) & !(x = y))",
    "forall x. (x = R | P(R, x))",
    "exists x. forall y. !P(x, y)",
    "exists x. exists y. (P(x, y) & !(x = R))",
    "exists x. exists y. exists z. (P(x, y) & P(x, z) & !(y = z))",
    "exists x. exists y. exists z. (P(R, x) & P(x, y) & P(y, z))",
    "forall x. forall y. (P(R, x) -> (P(x, y) | !exists z. P(x, z)))",
    "exists x. exists y. exists z. (P(R, x) & P(x, y) & P(x, z) & !(y = z))",
]

_TREE_MSO = [
    "exists X. X(R)",
    "forall X. X(R)",
    "exists X. exists x. (X(x) & !X(R))",
    "exists X. (X(R) & exists x. (P(R, x) & !X(x)))",
    "forall X. (X(R) -> exists x. X(x))",
    "exists X. forall x. (X(x) <-> P(R, x))",
    "exists X. forall x. forall y. (P(x, y) -> (X(x) <-> !X(y)))",
]


def formula_library(k: int, vocab: str = GRAPH, logic: str = "fo") -> list[tuple[str, Formula, int]]:
    """Curated sentences of quantifier depth at most ``k``.

    Returns ``(text, formula, depth)`` triples.  MSO libraries include the
    FO sentences as well.
    """
    if vocab not in VOCABULARIES:
        raise VocabularyError(f"unknown vocabulary {vocab!r}")
    logic = logic.lower()
    if vocab == GRAPH:
        texts = _GRAPH_FO + (_GRAPH_MSO if logic == "mso" else [])
    else:
        texts = _TREE_FO + (_TREE_MSO if logic == "mso" else [])
    out = []
    for text in texts:
        f = parse(text, vocab)
        d = quantifier_depth(f)
        if d <= k:
            out.append((text, f, d))
    return out
