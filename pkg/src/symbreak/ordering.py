"""Orderings on fixed-length words and propagators that enforce them.

The reflected radix-``r`` Gray code lists words so that consecutive words
differ in one digit by one.  Ranking scans left to right keeping a polarity:
under negative polarity the digit is read reflected (``r - 1 - g``), and the
polarity flips after every odd digit ``g``.  Lexicographic order is the
special case with no reflection.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .engine import Inconsistent, ModelError, Propagator


class OrderingKind(enum.Enum):
    LEX = "lex"
    ANTI_LEX = "anti-lex"
    GRAY = "gray"
    ANTI_GRAY = "anti-gray"

    @property
    def is_anti(self) -> bool:
        return self in (OrderingKind.ANTI_LEX, OrderingKind.ANTI_GRAY)

    @property
    def is_gray(self) -> bool:
        return self in (OrderingKind.GRAY, OrderingKind.ANTI_GRAY)

    @property
    def base(self) -> "OrderingKind":
        return OrderingKind.GRAY if self.is_gray else OrderingKind.LEX

    @classmethod
    def parse(cls, text: str) -> "OrderingKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown ordering {text!r}") from None


def _check_word(w: Sequence[int], radix: int) -> None:
    if radix < 2:
        raise ValueError(f"radix must be at least 2, got {radix}")
    if len(w) < 1:
        raise ValueError("word must have at least one digit")
    for g in w:
        if not 0 <= g < radix:
            raise ValueError(f"digit {g} out of range for radix {radix}")


def gray_rank(w: Sequence[int], radix: int = 2) -> int:
    """0-based position of ``w`` in the reflected Gray ordering."""
    _check_word(w, radix)
    pos, flipped = 0, False
    for g in w:
        pos = pos * radix + (radix - 1 - g if flipped else g)
        if g & 1:
            flipped = not flipped
    return pos


def gray_unrank(position: int, length: int, radix: int = 2) -> tuple[int, ...]:
    """Word of ``length`` digits at ``position`` in the reflected Gray ordering."""
    if radix < 2 or length < 1:
        raise ValueError("need radix >= 2 and length >= 1")
    if not 0 <= position < radix**length:
        raise ValueError(f"position {position} out of range for {radix}^{length}")
    digits = []
    for _ in range(length):
        digits.append(position % radix)
        position //= radix
    digits.reverse()
    word, flipped = [], False
    for d in digits:
        g = radix - 1 - d if flipped else d
        word.append(g)
        if g & 1:
            flipped = not flipped
    return tuple(word)


def lex_rank(w: Sequence[int], radix: int = 2) -> int:
    _check_word(w, radix)
    pos = 0
    for g in w:
        pos = pos * radix + g
    return pos


def compare(kind: OrderingKind, x: Sequence[int], y: Sequence[int], radix: int = 2) -> int:
    """Return -1, 0 or +1 as ``x`` is before, equal to, or after ``y``."""
    if len(x) != len(y):
        raise ValueError("words have different lengths")
    rank = gray_rank if kind.is_gray else lex_rank
    rx, ry = rank(x, radix), rank(y, radix)
    c = (rx > ry) - (rx < ry)
    return -c if kind.is_anti else c


# ---------------------------------------------------------------------------
# propagators


@dataclass(frozen=True)
class View:
    """A variable read through an optional value bijection.

    ``vmap[v]`` is the value seen when the variable takes ``v``.
    """

    var: int
    vmap: tuple[int, ...] | None = None

    def image(self, v: int) -> int:
        return v if self.vmap is None else self.vmap[v]


def _as_view(x) -> View:
    return x if isinstance(x, View) else View(int(x))


# automaton states, as bits of a state set
_DONE, _POS, _NEG = 1, 2, 4


class OrderingLeq(Propagator):
    """``X <= Y`` in lexicographic (``reflect=False``) or Gray order.

    Domain consistency comes from a forward/backward sweep over the layered
    automaton that reads one ``(x_i, y_i)`` pair per layer.  States: the
    vectors are already strictly ordered, or equal so far with positive or
    negative polarity.  When ``X_i`` and ``Y_i`` are the same variable only
    diagonal pairs are considered; other repeated variables are treated as
    independent occurrences.
    """

    def __init__(self, xs, ys, radix: int = 2, reflect: bool = False, strict: bool = False):
        xs = [_as_view(x) for x in xs]
        ys = [_as_view(y) for y in ys]
        if len(xs) != len(ys):
            raise ModelError(f"vectors have different lengths {len(xs)} and {len(ys)}")
        self.xs, self.ys = xs, ys
        self.radix = radix
        self.reflect = reflect
        self.strict = strict
        self.vars = tuple(dict.fromkeys([v.var for v in xs] + [v.var for v in ys]))

    def __repr__(self) -> str:
        name = "Gray" if self.reflect else "Lex"
        op = "<" if self.strict else "<="
        return f"{name}({[v.var for v in self.xs]} {op} {[v.var for v in self.ys]})"

    def _step(self, states: int, a: int, b: int) -> int:
        out = states & _DONE
        if a == b:
            odd = self.reflect and a & 1
            if states & _POS:
                out |= _NEG if odd else _POS
            if states & _NEG:
                out |= _POS if odd else _NEG
        elif a < b:
            if states & _POS:
                out |= _DONE
        elif states & _NEG:
            out |= _DONE
        return out

    def _pairs(self, doms: list[int], i: int) -> list[tuple[int, int, int, int]]:
        xv, yv = self.xs[i], self.ys[i]
        dx = doms[xv.var]
        out = []
        if xv.var == yv.var:
            v = 0
            while dx >> v:
                if dx >> v & 1:
                    out.append((v, v, xv.image(v), yv.image(v)))
                v += 1
            return out
        dy = doms[yv.var]
        xs = [(v, xv.image(v)) for v in range(dx.bit_length()) if dx >> v & 1]
        ys = [(w, yv.image(w)) for w in range(dy.bit_length()) if dy >> w & 1]
        for v, a in xs:
            for w, b in ys:
                out.append((v, w, a, b))
        return out

    def propagate(self, doms: list[int]) -> list[int]:
        n = len(self.xs)
        fwd = [_POS]
        layers = []
        k = n
        for i in range(n):
            pairs = self._pairs(doms, i)
            layers.append(pairs)
            s = fwd[-1]
            nxt = 0
            for _, _, a, b in pairs:
                nxt |= self._step(s, a, b)
            if not nxt:
                raise Inconsistent
            fwd.append(nxt)
            if nxt == _DONE:
                k = i + 1
                break
        accept = _DONE if self.strict else (_DONE | _POS | _NEG)
        if k == n and not fwd[n] & accept:
            raise Inconsistent
        # backward sweep restricted to layers before the prefix is settled
        back = _DONE if k < n else accept
        keep_x: dict[int, int] = {}
        keep_y: dict[int, int] = {}
        for i in range(k - 1, -1, -1):
            s = fwd[i]
            prev = 0
            kx = ky = 0
            for v, w, a, b in layers[i]:
                for q in (_DONE, _POS, _NEG):
                    if s & q and self._step(q, a, b) & back:
                        prev |= q
                        kx |= 1 << v
                        ky |= 1 << w
            if not prev:
                raise Inconsistent
            back = prev
            xvar, yvar = self.xs[i].var, self.ys[i].var
            keep_x[xvar] = keep_x.get(xvar, -1) & kx
            keep_y[yvar] = keep_y.get(yvar, -1) & ky
        changed = []
        for var, m in list(keep_x.items()) + list(keep_y.items()):
            d = doms[var] & m
            if d != doms[var]:
                if not d:
                    raise Inconsistent
                doms[var] = d
                changed.append(var)
        return list(dict.fromkeys(changed))

    def is_satisfied(self, values: Sequence[int]) -> bool:
        a = [v.image(values[v.var]) for v in self.xs]
        b = [v.image(values[v.var]) for v in self.ys]
        rank = gray_rank if self.reflect else lex_rank
        ra, rb = rank(a, self.radix), rank(b, self.radix)
        return ra < rb if self.strict else ra <= rb


def lex_leq_propagator(xs, ys, radix: int = 2, strict: bool = False) -> OrderingLeq:
    return OrderingLeq(xs, ys, radix=radix, reflect=False, strict=strict)


def gray_leq_propagator(xs, ys, radix: int = 2, strict: bool = False) -> OrderingLeq:
    return OrderingLeq(xs, ys, radix=radix, reflect=True, strict=strict)


def ordering_leq_propagator(
    kind: OrderingKind, xs, ys, radix: int = 2, strict: bool = False
) -> OrderingLeq:
    """``X`` before-or-equal ``Y`` under ``kind``; anti kinds swap the vectors."""
    if kind.is_anti:
        xs, ys = ys, xs
    return OrderingLeq(xs, ys, radix=radix, reflect=kind.is_gray, strict=strict)


def check_domains_within_radix(doms: Sequence[int], prop: OrderingLeq) -> None:
    limit = 1 << prop.radix
    for v in prop.xs + prop.ys:
        if doms[v.var] >= limit:
            raise ModelError(f"domain of variable {v.var} exceeds radix {prop.radix}")


# ---------------------------------------------------------------------------
# clause-level decomposition for SAT solvers


@dataclass(frozen=True)
class Literal:
    """``left op right`` where ``right`` is an int, a variable name, or
    ``"-name"`` for the negation of a {-1, 0, 1} variable."""

    left: str
    op: str
    right: int | str

    def holds(self, env: dict[str, int]) -> bool:
        lv = env[self.left]
        if isinstance(self.right, int):
            rv = self.right
        elif self.right.startswith("-"):
            rv = -env[self.right[1:]]
        else:
            rv = env[self.right]
        if self.op == "=":
            return lv == rv
        if self.op == "!=":
            return lv != rv
        if self.op == "<=":
            return lv <= rv
        if self.op == ">=":
            return lv >= rv
        raise ValueError(self.op)

    def __str__(self) -> str:
        return f"{self.left}{self.op}{self.right}"


Clause = tuple[Literal, ...]


def gray_decomposition_clauses(n: int) -> list[Clause]:
    """Clauses over X1..Xn, Y1..Yn (0/1) and Q1..Q(n+1) (-1/0/1) whose models
    are exactly the pairs with X before-or-equal Y in binary Gray order."""
    if n < 1:
        raise ValueError("n must be positive")
    out: list[Clause] = [(Literal("Q1", "=", 1),)]
    for i in range(1, n + 1):
        x, y, q, q1 = f"X{i}", f"Y{i}", f"Q{i}", f"Q{i + 1}"
        out.append((Literal(q, "!=", 1), Literal(x, "<=", y)))
        out.append((Literal(q, "!=", -1), Literal(x, ">=", y)))
        out.append((Literal(x, "=", y), Literal(q1, "=", 0)))
        out.append((Literal(x, "=", 0), Literal(y, "=", 0), Literal(q1, "=", "-" + q)))
        # equal zeros keep the state
        out.append((Literal(x, "!=", 0), Literal(y, "!=", 0), Literal(q1, "=", q)))
    return out


def gray_decomposition_cnf(n: int) -> tuple[dict[str, int], list[list[int]]]:
    """Boolean CNF of the decomposition with one-hot state variables.

    Returns the variable numbering (``"X3"``, ``"Q2=-1"``, ...) and the
    clauses as lists of signed DIMACS literals.
    """
    num: dict[str, int] = {}

    def var(name: str) -> int:
        if name not in num:
            num[name] = len(num) + 1
        return num[name]

    for i in range(1, n + 1):
        var(f"X{i}")
        var(f"Y{i}")
    states = (1, 0, -1)
    for i in range(1, n + 2):
        for s in states:
            var(f"Q{i}={s}")

    def q(i: int, s: int) -> int:
        return num[f"Q{i}={s}"]

    cnf: list[list[int]] = []
    for i in range(1, n + 2):
        cnf.append([q(i, s) for s in states])
        for a in range(3):
            for b in range(a + 1, 3):
                cnf.append([-q(i, states[a]), -q(i, states[b])])
    cnf.append([q(1, 1)])
    for i in range(1, n + 1):
        x, y = num[f"X{i}"], num[f"Y{i}"]
        cnf.append([-q(i, 1), -x, y])
        cnf.append([-q(i, -1), x, -y])
        cnf.append([-x, y, q(i + 1, 0)])
        cnf.append([x, -y, q(i + 1, 0)])
        for s in states:
            cnf.append([-x, -y, -q(i, s), q(i + 1, -s)])
            cnf.append([x, y, -q(i, s), q(i + 1, s)])
    return num, cnf


def to_dimacs(n: int) -> str:
    num, cnf = gray_decomposition_cnf(n)
    lines = [
        f"c Gray-code ordering X <= Y on {n} bits",
        "c state Qi in {1,0,-1} is one-hot: variables 'Qi=1', 'Qi=0', 'Qi=-1',",
        "c exactly one true per i",
    ]
    for name, k in num.items():
        lines.append(f"c {k} {name}")
    lines.append(f"p cnf {len(num)} {len(cnf)}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in cnf)
    return "\n".join(lines) + "\n"
