"""Tower arithmetic, class-count bounds and zero-one law regions.

:class:`TowerExpr` keeps an expression tree.  Values up to ``2**20`` bits
are evaluated exactly; beyond that a value is carried as a level-index
magnitude ``(h, x)`` meaning ``E^h(x)`` with ``E(y) = 2**y``, normalised so
that ``10 < x <= 1024`` whenever ``h > 0``.  Comparison uses exact integers
when both sides are evaluable and is height-major otherwise.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "CUTOFF_BITS",
    "TowerExpr",
    "lit",
    "pow2",
    "tower",
    "tower_int",
    "log_star",
    "binom",
    "factorial",
    "ehr_bound",
    "class_count_bound",
    "ChainAudit",
    "min_representative_bound",
    "representative_composite",
    "z_budget",
    "count_small_structures",
    "PRINTED_CONSTANTS",
    "verify_constants",
    "LawVerdict",
    "law_region",
    "Irrational",
]

CUTOFF_BITS = 1 << 20
_LOW, _HIGH = 10.0, 1024.0


def _log2_int(n: int) -> float:
    if n <= 0:
        raise ValueError("log of nonpositive value")
    b = n.bit_length()
    if b <= 1000:
        return math.log2(n)
    return (b - 64) + math.log2(n >> (b - 64))


def _normalise(h: int, x: float) -> tuple[int, float]:
    while x > _HIGH:
        x = math.log2(x)
        h += 1
    while h > 0 and x <= _LOW:
        x = 2.0**x
        h -= 1
    return h, x


def _mag_of_int(n: int) -> tuple[int, float]:
    if n <= 2**1000:
        return _normalise(0, float(n))
    return _normalise(1, _log2_int(n))


def _mag_log2(m: tuple[int, float]) -> tuple[int, float]:
    h, x = m
    if h == 0:
        return (0, math.log2(x)) if x > 0 else (0, -math.inf)
    return _normalise(h - 1, x)


def _mag_add(a: tuple[int, float], b: tuple[int, float]) -> tuple[int, float]:
    big, small = (a, b) if a >= b else (b, a)
    if big[0] == 0:
        return _normalise(0, big[1] + small[1])
    if big[0] == 1:
        # 2^x + 2^y = 2^(x + log2(1 + 2^(y - x)))
        x = big[1]
        y = _mag_log2(small)
        y = y[1] if y[0] == 0 else math.inf
        return _normalise(1, x + math.log2(1.0 + 2.0 ** (y - x)) if y > -math.inf else x)
    # relative change below float resolution at this height
    return big


class TowerExpr:
    """Symbolic nonnegative integer with exact evaluation under a bit cutoff."""

    __slots__ = ("op", "args", "_value", "_mag")

    def __init__(self, op: str, args: tuple):
        self.op = op
        self.args = args
        self._value = _UNSET
        self._mag = None

    # -- construction helpers -------------------------------------------
    @staticmethod
    def wrap(x) -> "TowerExpr":
        return x if isinstance(x, TowerExpr) else lit(x)

    def __add__(self, other):
        return TowerExpr("add", (self, TowerExpr.wrap(other)))

    __radd__ = __add__

    def __mul__(self, other):
        return TowerExpr("mul", (self, TowerExpr.wrap(other)))

    __rmul__ = __mul__

    # -- evaluation ----------------------------------------------------------
    def value(self) -> int | None:
        """Exact value, or ``None`` above the cutoff."""
        if self._value is _UNSET:
            self._value = self._eval()
        return self._value

    @property
    def evaluable(self) -> bool:
        return self.value() is not None

    def _eval(self) -> int | None:
        op, a = self.op, self.args
        if op == "lit":
            return a[0]
        if op == "tower":
            s = a[0]
            return tower_int(s) if s <= 5 else None
        vals = [x.value() for x in a if isinstance(x, TowerExpr)]
        if op == "mul" and 0 in vals:
            return 0
        if any(v is None for v in vals):
            return None
        if op == "pow2":
            e = vals[0]
            return 1 << e if e + 1 <= CUTOFF_BITS else None
        if op == "add":
            return vals[0] + vals[1]
        if op == "mul":
            if vals[0].bit_length() + vals[1].bit_length() > CUTOFF_BITS + 1:
                return None
            return vals[0] * vals[1]
        if op == "binom":
            return math.comb(vals[0], vals[1]) if vals[0] < 10**6 else None
        if op == "fact":
            return math.factorial(vals[0]) if vals[0] < 10**5 else None
        raise ValueError(op)

    def magnitude(self) -> tuple[int, float]:
        """Level-index magnitude ``(h, x)``."""
        if self._mag is None:
            self._mag = self._magnitude()
        return self._mag

    def _magnitude(self) -> tuple[int, float]:
        v = self.value()
        if v is not None:
            return _mag_of_int(v)
        op, a = self.op, self.args
        if op == "tower":
            # T(5) = 2^65536 = E^3(4); each further level adds one height
            return _normalise(a[0] - 2, 4.0)
        if op == "pow2":
            h, x = a[0].magnitude()
            return _normalise(h + 1, x)
        if op == "add":
            return _mag_add(a[0].magnitude(), a[1].magnitude())
        if op == "mul":
            la, lb = _mag_log2(a[0].magnitude()), _mag_log2(a[1].magnitude())
            h, x = _mag_add(la, lb)
            return _normalise(h + 1, x)
        if op in ("binom", "fact"):
            n = a[0].value()
            k = a[1].value() if op == "binom" else None
            if n is None:
                raise ValueError("binomials and factorials need evaluable arguments")
            if op == "fact":
                lg = math.lgamma(n + 1) / math.log(2)
            else:
                lg = (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)
            return _normalise(1, lg)
        raise ValueError(op)

    def log2(self) -> float | tuple[int, float]:
        """``log2`` as a float when representable, else as a magnitude."""
        v = self.value()
        if v is not None:
            if v & (v - 1) == 0:
                return float(v.bit_length() - 1)
            return _log2_int(v)
        m = _mag_log2(self.magnitude())
        return m[1] if m[0] == 0 else m

    def bit_length(self) -> int | None:
        v = self.value()
        return v.bit_length() if v is not None else None

    # -- comparison ----------------------------------------------------
    def _cmp(self, other) -> int:
        other = TowerExpr.wrap(other)
        a, b = self.value(), other.value()
        if a is not None and b is not None:
            return (a > b) - (a < b)
        ma, mb = self.magnitude(), other.magnitude()
        return (ma > mb) - (ma < mb)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (TowerExpr, int)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        v = self.value()
        return hash(v) if v is not None else hash(self.magnitude())

    # -- display ---------------------------------------------------------
    def __str__(self):
        op, a = self.op, self.args
        if op == "lit":
            return str(a[0])
        if op == "tower":
            return f"T({a[0]})"
        if op == "pow2":
            inner = str(a[0])
            return f"2^{inner}" if a[0].op in ("lit", "tower") else f"2^({inner})"
        if op == "add":
            return f"{a[0]} + {a[1]}"
        if op == "mul":
            return f"{_paren(a[0])}*{_paren(a[1])}"
        if op == "binom":
            return f"C({a[0]}, {a[1]})"
        if op == "fact":
            return f"{_paren(a[0])}!"
        return op

    def __repr__(self):
        return f"TowerExpr({self})"

    def to_json(self) -> dict:
        v = self.value()
        out = {"expr": str(self), "evaluable": v is not None}
        if v is not None:
            out["bit_length"] = v.bit_length()
            out["value"] = str(v) if v.bit_length() <= 256 else None
        lg = self.log2()
        out["log2"] = lg if isinstance(lg, float) else None
        out["magnitude"] = list(self.magnitude())
        return out


_UNSET = object()


def _paren(e: TowerExpr) -> str:
    s = str(e)
    return f"({s})" if e.op == "add" else s


def lit(n: int) -> TowerExpr:
    if not isinstance(n, int) or n < 0:
        raise ValueError("literals must be nonnegative integers")
    return TowerExpr("lit", (n,))


def pow2(e) -> TowerExpr:
    return TowerExpr("pow2", (TowerExpr.wrap(e),))


def binom(n, k) -> TowerExpr:
    return TowerExpr("binom", (TowerExpr.wrap(n), TowerExpr.wrap(k)))


def factorial(n) -> TowerExpr:
    return TowerExpr("fact", (TowerExpr.wrap(n),))


@functools.lru_cache(maxsize=None)
def tower_int(s: int) -> int:
    """``T(s)`` as an integer (``s <= 5``)."""
    if s < 1:
        raise ValueError("tower height must be at least 1")
    if s > 5:
        raise ValueError("T(s) for s > 5 is not representable")
    v = 2
    for _ in range(s - 1):
        v = 1 << v
    return v


def tower(s: int) -> TowerExpr:
    """``T(1) = 2``, ``T(s) = 2^T(s-1)``."""
    if s < 1:
        raise ValueError("tower height must be at least 1")
    return TowerExpr("tower", (s,))


def log_star(k: int) -> int:
    """Least ``i`` with ``T(i) >= k``."""
    if k < 1:
        raise ValueError("log* needs k >= 1")
    i = 1
    while i <= 5 and tower_int(i) < k:
        i += 1
    if i > 5:
        raise ValueError("argument too large")
    return i


def _as_expr(x) -> TowerExpr:
    return TowerExpr.wrap(x)


# ---------------------------------------------------------------------------
# class-count bounds

GRAPHS = "graph"
TREES = "rooted_tree"


def _structure(s: str) -> str:
    s = {"graphs": GRAPHS, "graph": GRAPHS, "trees": TREES, "tree": TREES, "rooted_tree": TREES}.get(s)
    if s is None:
        raise ValueError("structure must be graph or rooted_tree")
    return s


def _base_bound(k: int, t: int, l: int, structure: str) -> TowerExpr:
    if structure == GRAPHS:
        return pow2(k * k - k)
    if k >= 5:
        return pow2(2**k - 2)
    if k == 4:
        return lit(3) * pow2(13)
    # generic bound for the vocabulary {P, =} with one constant
    atoms = 2 * math.factorial(2) * math.comb(1 + t, 2)
    return pow2(atoms + (1 + t) * l)


def ehr_bound(k: int, t: int, l: int, structure: str = GRAPHS) -> TowerExpr:
    """Upper bound on the number of values with ``t`` marked elements and
    ``l`` marked subsets: the sharpened base once ``t + l = k``, and
    ``2^(b(t+1, l) + b(t, l+1))`` before that."""
    structure = _structure(structure)
    if k < 1 or t < 0 or l < 0 or t + l > k:
        raise ValueError("need k >= 1 and 0 <= t, l with t + l <= k")
    return _ehr_cached(k, t, l, structure)


@functools.lru_cache(maxsize=None)
def _ehr_cached(k, t, l, structure):
    if t + l == k:
        return _base_bound(k, t, l, structure)
    return pow2(_ehr_cached(k, t + 1, l, structure) + _ehr_cached(k, t, l + 1, structure))


@dataclass
class ChainAudit:
    k: int
    structure: str
    tilde: list
    hat: list
    checks: list  # (i, holds or None when not evaluable)

    @property
    def all_evaluable_hold(self) -> bool:
        return all(ok for _, ok in self.checks if ok is not None)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "structure": self.structure,
            "tilde": [t.to_json() for t in self.tilde],
            "hat": [h.to_json() for h in self.hat],
            "checks": [{"i": i, "holds": ok} for i, ok in self.checks],
        }


def _chains(k: int, structure: str) -> tuple[list, list]:
    if structure == GRAPHS:
        t1, h1 = pow2(k * k - k), pow2(2**k)
    else:
        t1, h1 = pow2(2**k - 2), lit(k - 1) + pow2(2**k - 1)
    tilde, hat = [t1], [h1]
    for _ in range(k):
        tilde.append(pow2(lit(2) * tilde[-1]))
        hat.append(pow2(hat[-1]))
    return tilde, hat


def class_count_bound(k: int, logic: str = "mso", structure: str = GRAPHS) -> tuple[TowerExpr, ChainAudit | None]:
    """``T(k + 2 + log*(k))`` together with the audit of the intermediate
    chains (``tilde(i) <= hat(i)`` for ``i = 1..k+1``; evaluable entries are
    compared exactly, others are reported as ``None``)."""
    structure = _structure(structure)
    if logic.lower() != "mso":
        raise ValueError("the class-count bound is stated for MSO")
    if structure == GRAPHS and k < 2:
        raise ValueError("graph bound needs k >= 2")
    if structure == TREES and k < 4:
        raise ValueError("rooted-tree bound needs k >= 4")
    bound = tower(k + 2 + log_star(k))
    if structure == TREES and k == 4:
        return bound, None
    tilde, hat = _chains(k, structure)
    checks = []
    for i, (a, b) in enumerate(zip(tilde, hat), start=1):
        checks.append((i, a <= b if a.evaluable and b.evaluable else None))
    return bound, ChainAudit(k, structure, tilde, hat, checks)


def min_representative_bound(k: int) -> TowerExpr:
    """``T(k + 3 + log*(k + 1))``."""
    if k < 4:
        raise ValueError("the representative bound needs k >= 4")
    return tower(k + 3 + log_star(k + 1))


def representative_composite(z, f0) -> TowerExpr:
    """``(z * f0)^(f0 + 1)`` computed as repeated products for audit."""
    z, f0 = _as_expr(z), _as_expr(f0)
    base = z * f0
    n = f0.value()
    if n is None or n > 64:
        # (z f0)^(f0+1) = 2^((f0 + 1) log2(z f0)) bounded above by 2^((f0+1)*(z f0))
        return pow2((f0 + 1) * base)
    out = base
    for _ in range(n):
        out = out * base
    return out


def z_budget(k: int, f_values) -> tuple[TowerExpr, dict]:
    """``z = 2^k f(1)...f(k)`` and the table ``z(i, m)`` with ``z(k, m) = 1``
    and ``z(i-1, m) = z(i, m) + z(i, m+1) f(m+1)``.

    Returns ``(z, table)`` where ``table[(i, m)]`` carries the entry, and
    ``table['audit']`` lists ``(i, m, holds)`` for the inequality
    ``z(i, m) <= 2^(k-i) f(m+1)...f(k)`` (``None`` when not evaluable).
    """
    f = [_as_expr(x) for x in f_values]
    if len(f) != k + 1:
        raise ValueError("need f(k, 0..k)")
    table: dict = {(k, m): lit(1) for m in range(k + 1)}
    for i in range(k, 0, -1):
        for m in range(i):
            table[(i - 1, m)] = table[(i, m)] + table[(i, m + 1)] * f[m + 1]
    z = pow2(k)
    for j in range(1, k + 1):
        z = z * f[j]
    audit = []
    for (i, m), v in sorted(table.items()):
        rhs = pow2(k - i)
        for j in range(m + 1, k + 1):
            rhs = rhs * f[j]
        ok = v <= rhs if v.evaluable and rhs.evaluable else None
        audit.append((i, m, ok))
    out = {key: v for key, v in table.items()}
    out["audit"] = audit
    return z, out


# ---------------------------------------------------------------------------
# small structures


def _acyclic(t: int, edges) -> bool:
    parent = list(range(t))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        a, b = find(u), find(v)
        if a == b:
            return False
        parent[a] = b
    return True


def _set_partitions(items: list):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]
        yield [[head]] + part


def count_small_structures(t: int, kind: str) -> int:
    """Exhaustive counts on ``t`` labelled points.

    ``directed_forests``: each pair is absent or oriented one of two ways,
    and the underlying graph is a forest.  ``equality_patterns``:
    partitions of ``t + 1`` points other than the one into singletons.
    ``membership_patterns``: the largest number of ways to place the
    distinct points of a non-trivial equality pattern into ``4 - t`` sets.
    """
    if not 1 <= t <= 4:
        raise ValueError("t must be in 1..4")
    if kind == "directed_forests":
        pairs = list(itertools.combinations(range(t), 2))
        total = 0
        for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
            edges = [p for p, c in zip(pairs, choice) if c]
            if _acyclic(t, edges):
                total += 1
        return total
    if kind == "equality_patterns":
        return sum(1 for p in _set_partitions(list(range(t + 1))) if len(p) < t + 1)
    if kind == "membership_patterns":
        best = 0
        for p in _set_partitions(list(range(t + 1))):
            if len(p) < t + 1:
                best = max(best, 2 ** (len(p) * (4 - t)))
        return best
    raise ValueError(f"unknown kind {kind!r}")


PRINTED_CONSTANTS = {
    "directed_forests": (1, 3, 19, 201),
    "equality_patterns": (1, 4, 14, 51),
    "membership_patterns": (8, 16, 8, 1),
}


def verify_constants() -> dict:
    """Enumerated versus printed tables, plus the arithmetic of the k = 4
    rooted-tree bound."""
    rows = []
    for kind, printed in PRINTED_CONSTANTS.items():
        for t, p in enumerate(printed, start=1):
            got = count_small_structures(t, kind)
            rows.append({"kind": kind, "t": t, "printed": p, "enumerated": got, "match": got == p})
    distinct = 3**4 * 5**3
    identified = PRINTED_CONSTANTS["directed_forests"][3] * PRINTED_CONSTANTS["equality_patterns"][3]
    arithmetic = {
        "distinct_points_term": distinct,
        "identified_points_term": identified,
        "sum": distinct + identified,
        "limit": 3 * 2**13,
        "holds": distinct + identified < 3 * 2**13,
    }
    mismatches = [r for r in rows if not r["match"]]
    return {"rows": rows, "mismatches": mismatches, "arithmetic": arithmetic}


# ---------------------------------------------------------------------------
# law regions


@dataclass(frozen=True)
class Irrational:
    """An irrational exponent, known through an approximation."""

    approx: float

    def __str__(self):
        return f"irrational~{self.approx}"


@dataclass(frozen=True)
class LawVerdict:
    law: str  # "FO" or "MSO"
    kind: str  # "zero-one law" or "zero-one k-law"
    status: str  # "holds", "fails" or "open"
    citation: str | None
    k: int | None = None

    def __post_init__(self):
        if self.status == "open" and self.citation is not None:
            raise ValueError("open verdicts carry no citation")
        if self.status != "open" and self.citation is None:
            raise ValueError("decided verdicts need a citation")

    def describe(self) -> str:
        name = f"{self.law} zero-one {self.k}-law" if self.k is not None else f"{self.law} zero-one law"
        return f"{name} {self.status}"

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "kind": self.kind,
            "k": self.k,
            "status": self.status,
            "citation": self.citation,
            "verdict": self.describe(),
        }


FO_LAW = "fo-law: fails iff alpha is rational in (0,1] or alpha = 1+1/l"
MSO_LAW = "mso-law: fails iff alpha in (0,1] or alpha = 1+1/l"
DENSE_LOW = "dense fo k-law: holds for alpha < 1/(k-2), k >= 3"
DENSE_LOW_EDGE = "dense fo k-law: fails at alpha = 1/(k-2), k >= 3"
DENSE_HIGH = "dense fo k-law: holds for alpha in (1-1/(2^k-2), 1), k >= 4"
DENSE_HIGH_EDGE = "dense fo k-law: fails at alpha = 1-1/(2^k-2), k >= 4"
SPARSE_MSO = "sparse mso k-law: holds at alpha = 1+1/l for k >= 4, l >= T(k+log*(k+1)+3)"
SPARSE_FO = "sparse fo k-law: fails at alpha = 1+1/l for k >= 7, l <= 2T(k-4)"


def _parse_alpha(alpha):
    if alpha is None or isinstance(alpha, (Irrational, TowerExpr)):
        return alpha
    if isinstance(alpha, str):
        if alpha.startswith("irrational"):
            _, _, approx = alpha.partition(":")
            return Irrational(float(approx) if approx else math.nan)
        return Fraction(alpha)
    if isinstance(alpha, float):
        raise ValueError("give alpha as a Fraction, an integer, a string like '3/2' or Irrational")
    return Fraction(alpha)


def _exceptional_l(alpha) -> int | None:
    """``l`` with ``alpha = 1 + 1/l``, if any."""
    if isinstance(alpha, Fraction) and alpha > 1:
        inv = 1 / (alpha - 1)
        if inv.denominator == 1:
            return int(inv)
    return None


def law_region(alpha=None, k: int | None = None, l=None) -> list[LawVerdict]:
    """Verdicts on the FO and MSO zero-one laws (and ``k``-laws when ``k``
    is given) for ``p = n^(-alpha)``.

    ``alpha`` may be a rational (``Fraction``, int, ``"3/2"``), an
    :class:`Irrational` or omitted when ``l`` is given, in which case
    ``alpha = 1 + 1/l``.  ``l`` may be an int or a :class:`TowerExpr` (for
    astronomically large ``l``).  Only the recorded law clauses and the
    implications "MSO law holds => FO law holds" and "FO law fails => MSO
    law fails" are used; anything else is ``open``.
    """
    alpha = _parse_alpha(alpha)
    if l is not None:
        if isinstance(l, int):
            if l < 1:
                raise ValueError("l must be positive")
            expected = 1 + Fraction(1, l)
            if alpha is None:
                alpha = expected
            elif alpha != expected:
                raise ValueError(f"alpha={alpha} is inconsistent with l={l}")
        elif isinstance(l, TowerExpr):
            if alpha is not None:
                raise ValueError("give alpha or a symbolic l, not both")
        else:
            raise ValueError("l must be an int or TowerExpr")
    elif isinstance(alpha, Fraction):
        l = _exceptional_l(alpha)
    if alpha is None and l is None:
        raise ValueError("give alpha or l")
    if isinstance(alpha, Fraction) and alpha <= 0:
        raise ValueError("alpha must be positive")

    symbolic_l = isinstance(l, TowerExpr)
    exceptional = l is not None

    # full laws
    if exceptional:
        fo_law = mso_law = ("fails", None)
    elif isinstance(alpha, Irrational):
        if math.isnan(alpha.approx):
            raise ValueError("irrational alpha needs an approximation")
        fo_law = ("holds", None)
        mso_law = ("fails", None) if alpha.approx <= 1 else ("holds", None)
    else:
        fo_law = ("fails", None) if alpha <= 1 else ("holds", None)
        mso_law = ("fails", None) if alpha <= 1 else ("holds", None)
    out = [
        LawVerdict("FO", "zero-one law", fo_law[0], FO_LAW),
        LawVerdict("MSO", "zero-one law", mso_law[0], MSO_LAW),
    ]
    if k is None:
        return out
    if k < 1:
        raise ValueError("k must be positive")

    fo_k: tuple[str, str | None] = ("open", None)
    mso_k: tuple[str, str | None] = ("open", None)
    # a full law that holds gives every k-law
    if fo_law[0] == "holds":
        fo_k = ("holds", FO_LAW)
    if mso_law[0] == "holds":
        mso_k = ("holds", MSO_LAW)
    # dense clauses (alpha < 1 only; rational thresholds)
    if isinstance(alpha, (Fraction, Irrational)) and not exceptional:
        a = alpha if isinstance(alpha, Fraction) else None
        approx = float(alpha) if a is not None else alpha.approx
        if k >= 3:
            edge = Fraction(1, k - 2)
            if a is not None and a == edge:
                fo_k = ("fails", DENSE_LOW_EDGE)
            elif (a is not None and a < edge) or (a is None and approx < float(edge)):
                fo_k = ("holds", DENSE_LOW)
        if k >= 4:
            edge = 1 - Fraction(1, 2**k - 2)
            if a is not None and a == edge:
                fo_k = ("fails", DENSE_HIGH_EDGE)
            elif (a is not None and edge < a < 1) or (a is None and float(edge) < approx < 1):
                fo_k = ("holds", DENSE_HIGH)
    # sparse clauses at alpha = 1 + 1/l
    if exceptional:
        if k >= 4:
            need = tower(k + log_star(k + 1) + 3)
            if (lit(l) if not symbolic_l else l) >= need:
                mso_k = ("holds", SPARSE_MSO)
        if k >= 7:
            cap = lit(2) * tower(k - 4)
            if (lit(l) if not symbolic_l else l) <= cap:
                fo_k = ("fails", SPARSE_FO)
    # implications between the logics
    if mso_k[0] == "holds" and fo_k[0] == "open":
        fo_k = ("holds", mso_k[1])
    if fo_k[0] == "fails" and mso_k[0] == "open":
        mso_k = ("fails", fo_k[1])
    out.append(LawVerdict("FO", "zero-one k-law", fo_k[0], fo_k[1], k))
    out.append(LawVerdict("MSO", "zero-one k-law", mso_k[0], mso_k[1], k))
    return out
