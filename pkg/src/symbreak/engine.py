"""Backtracking finite-domain solver.

Domains are stored as Python ints used as bitsets: bit ``v`` is set iff
value ``v`` is still in the domain.  Values are non-negative integers.

Search is depth-first with chronological backtracking and d-way branching
(one child per value, in value order).  A *node* is a child created by a
decision; a *backtrack* is a node whose propagation fails, so the decision
is retracted.  Both counts are deterministic for a fixed model, heuristic,
value order and constraint registration order.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class Inconsistent(Exception):
    """Raised by a propagator when some domain would become empty."""


class ModelError(ValueError):
    """Raised when a model is built with invalid references."""


class BudgetExceeded(RuntimeError):
    """Raised when a search exceeds its node or time budget."""


class GuardExceeded(RuntimeError):
    """An instance is too large for exhaustive (oracle-scale) treatment."""


# ---------------------------------------------------------------------------
# bitset helpers


def mask_of(values: Iterable[int]) -> int:
    m = 0
    for v in values:
        if v < 0:
            raise ModelError(f"negative domain value {v}")
        m |= 1 << v
    return m


def values_of(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def dom_min(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def dom_max(mask: int) -> int:
    return mask.bit_length() - 1


def dom_size(mask: int) -> int:
    return bin(mask).count("1")


def is_fixed(mask: int) -> bool:
    return mask != 0 and mask & (mask - 1) == 0


# ---------------------------------------------------------------------------
# propagators


class Propagator:
    """Base class for constraint pruning procedures.

    Subclasses set ``vars`` (the variables they read and prune) and implement
    :meth:`propagate`, which narrows ``doms`` in place, returns the list of
    variables whose domain changed, and raises :class:`Inconsistent` on
    failure.  Every propagator here runs to its own fixpoint in one call.
    """

    vars: tuple[int, ...] = ()
    consistency = "DC"

    def propagate(self, doms: list[int]) -> list[int]:
        raise NotImplementedError

    def is_satisfied(self, values: Sequence[int]) -> bool:
        """Check the constraint on a complete assignment (indexed by var)."""
        raise NotImplementedError


class Linear(Propagator):
    """``sum(coef * var) <op> rhs`` with bounds consistency."""

    consistency = "bounds"

    def __init__(self, terms: Sequence[tuple[int, int]], op: str, rhs: int):
        if op not in ("<=", ">=", "=="):
            raise ModelError(f"unknown linear operator {op!r}")
        self.terms = [(int(a), int(x)) for a, x in terms if a != 0]
        self.op = op
        self.rhs = int(rhs)
        self.vars = tuple(x for _, x in self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{a}*x{x}" for a, x in self.terms)
        return f"Linear({body} {self.op} {self.rhs})"

    def _leq(self, doms: list[int], terms, rhs: int, changed: set[int]) -> bool:
        # sum(a*x) <= rhs
        minsum = 0
        for a, x in terms:
            d = doms[x]
            minsum += a * (dom_min(d) if a > 0 else dom_max(d))
        slack = rhs - minsum
        if slack < 0:
            raise Inconsistent
        progress = False
        for a, x in terms:
            d = doms[x]
            if a > 0:
                lo = dom_min(d)
                hi = lo + slack // a
                if hi < dom_max(d):
                    d &= (1 << (hi + 1)) - 1
            else:
                hi = dom_max(d)
                lo = hi - slack // (-a)
                if lo > dom_min(d):
                    d = (d >> lo) << lo
            if d != doms[x]:
                if not d:
                    raise Inconsistent
                doms[x] = d
                changed.add(x)
                progress = True
        return progress

    def propagate(self, doms: list[int]) -> list[int]:
        changed: set[int] = set()
        neg = [(-a, x) for a, x in self.terms]
        if self.op == "<=":
            self._leq(doms, self.terms, self.rhs, changed)
        elif self.op == ">=":
            self._leq(doms, neg, -self.rhs, changed)
        else:
            while True:
                p1 = self._leq(doms, self.terms, self.rhs, changed)
                p2 = self._leq(doms, neg, -self.rhs, changed)
                if not (p1 or p2):
                    break
        return sorted(changed)

    def is_satisfied(self, values: Sequence[int]) -> bool:
        s = sum(a * values[x] for a, x in self.terms)
        if self.op == "<=":
            return s <= self.rhs
        if self.op == ">=":
            return s >= self.rhs
        return s == self.rhs


class Table(Propagator):
    """Extensional constraint over allowed tuples, enforcing DC.

    Supports are kept as bitsets over tuple indices; the set of valid tuples
    is the intersection over positions of the union of supports of the
    values still in each domain.
    """

    def __init__(self, vars: Sequence[int], tuples: Iterable[Sequence[int]]):
        self.vars = tuple(vars)
        rows = sorted({tuple(t) for t in tuples})
        for t in rows:
            if len(t) != len(self.vars):
                raise ModelError("tuple arity does not match scope")
        self.tuples = rows
        self._allowed = frozenset(rows)
        self.supports: list[list[tuple[int, int]]] = []
        for p in range(len(self.vars)):
            sup: dict[int, int] = {}
            for k, t in enumerate(rows):
                sup[t[p]] = sup.get(t[p], 0) | (1 << k)
            self.supports.append(sorted(sup.items()))

    def __repr__(self) -> str:
        return f"Table(vars={self.vars}, {len(self.tuples)} tuples)"

    def propagate(self, doms: list[int]) -> list[int]:
        valid = (1 << len(self.tuples)) - 1
        for p, x in enumerate(self.vars):
            d = doms[x]
            acc = 0
            for v, s in self.supports[p]:
                if d >> v & 1:
                    acc |= s
            valid &= acc
            if not valid:
                raise Inconsistent
        changed = []
        for p, x in enumerate(self.vars):
            d = doms[x]
            new = 0
            for v, s in self.supports[p]:
                if d >> v & 1 and valid & s:
                    new |= 1 << v
            if new != d:
                doms[x] = new
                changed.append(x)
        return changed

    def is_satisfied(self, values: Sequence[int]) -> bool:
        return tuple(values[x] for x in self.vars) in self._allowed


class Indicator(Propagator):
    """Reified channeling ``flag == 1  <=>  var == value``."""

    def __init__(self, flag: int, var: int, value: int):
        self.flag, self.var, self.value = flag, var, value
        self.vars = (flag, var)

    def __repr__(self) -> str:
        return f"Indicator(x{self.flag} <=> x{self.var} == {self.value})"

    def propagate(self, doms: list[int]) -> list[int]:
        b, x, bit = self.flag, self.var, 1 << self.value
        db, dx = doms[b] & 0b11, doms[x]
        if not dx & bit:
            db &= 0b01
        elif dx == bit:
            db &= 0b10
        if db == 0b10:
            dx &= bit
        elif db == 0b01:
            dx &= ~bit
        if not db or not dx:
            raise Inconsistent
        changed = []
        if db != doms[b]:
            doms[b] = db
            changed.append(b)
        if dx != doms[x]:
            doms[x] = dx
            changed.append(x)
        return changed

    def is_satisfied(self, values: Sequence[int]) -> bool:
        return values[self.flag] == int(values[self.var] == self.value)


# ---------------------------------------------------------------------------
# model


@dataclass
class Model:
    """Variables with initial domains, constraints, and an optional objective.

    ``decision`` is the ordered list of decision variables (the vector that
    symmetries act on and that linearizations permute); ``shape`` gives its
    dimensions, ``(rows, cols)`` for a matrix or ``(n,)`` for a sequence.
    """

    domains: list[int] = field(default_factory=list)
    names: list[str] = field(default_factory=list)
    constraints: list[Propagator] = field(default_factory=list)
    objective: tuple[int, str] | None = None
    decision: list[int] = field(default_factory=list)
    shape: tuple[int, ...] | None = None
    radix: int = 2
    name: str = ""

    @property
    def num_vars(self) -> int:
        return len(self.domains)

    def new_var(self, values: Iterable[int], name: str | None = None) -> int:
        m = mask_of(values)
        if not m:
            raise ModelError("empty initial domain")
        self.domains.append(m)
        self.names.append(name if name is not None else f"x{len(self.domains) - 1}")
        return len(self.domains) - 1

    def post(self, constraint: Propagator) -> "Model":
        for x in constraint.vars:
            if not 0 <= x < len(self.domains):
                raise ModelError(f"constraint references undeclared variable {x}")
        self.constraints.append(constraint)
        return self

    def set_objective(self, var: int, sense: str) -> "Model":
        if sense not in ("max", "min"):
            raise ModelError(f"objective sense must be 'max' or 'min', not {sense!r}")
        if not 0 <= var < len(self.domains):
            raise ModelError(f"objective references undeclared variable {var}")
        self.objective = (var, sense)
        return self

    def copy(self) -> "Model":
        return Model(
            domains=list(self.domains),
            names=list(self.names),
            constraints=list(self.constraints),
            objective=self.objective,
            decision=list(self.decision),
            shape=self.shape,
            radix=self.radix,
            name=self.name,
        )

    def check(self, values: Sequence[int]) -> bool:
        """True iff a complete assignment satisfies domains and constraints."""
        if len(values) != self.num_vars:
            return False
        for d, v in zip(self.domains, values):
            if v < 0 or not d >> v & 1:
                return False
        return all(c.is_satisfied(values) for c in self.constraints)


def post(model: Model, constraint: Propagator) -> Model:
    return model.post(constraint)


# ---------------------------------------------------------------------------
# propagation


def _watchers(num_vars: int, constraints: Sequence[Propagator]) -> list[list[int]]:
    watch: list[list[int]] = [[] for _ in range(num_vars)]
    for ci, c in enumerate(constraints):
        for x in dict.fromkeys(c.vars):
            watch[x].append(ci)
    return watch


def _fixpoint(
    doms: list[int],
    constraints: Sequence[Propagator],
    watch: list[list[int]],
    queue_init: Iterable[int],
) -> None:
    """FIFO propagation over constraint indices; raises Inconsistent."""
    queue = deque()
    queued = [False] * len(constraints)
    for ci in queue_init:
        if not queued[ci]:
            queued[ci] = True
            queue.append(ci)
    while queue:
        ci = queue.popleft()
        queued[ci] = False
        for x in constraints[ci].propagate(doms):
            for cj in watch[x]:
                if cj != ci and not queued[cj]:
                    queued[cj] = True
                    queue.append(cj)


def propagate_fixpoint(
    domains: Sequence[int], constraints: Sequence[Propagator]
) -> list[int] | None:
    """Run all constraints to a common fixpoint.

    Returns the narrowed domains, or ``None`` when some domain empties.
    """
    doms = list(domains)
    if any(d == 0 for d in doms):
        return None
    watch = _watchers(len(doms), constraints)
    try:
        _fixpoint(doms, constraints, watch, range(len(constraints)))
    except Inconsistent:
        return None
    return doms


# ---------------------------------------------------------------------------
# heuristics


@dataclass(frozen=True)
class HeuristicSpec:
    """Variable selection rule.

    ``kind`` is ``"static"``, ``"degree"``, ``"constr"`` or ``"ff"``.  For
    ``static`` the ``order`` gives decision positions in branching order; for
    ``ff`` it breaks ties between equal domain sizes.  ``degree`` and
    ``constr`` break ties by decision (row) order.
    """

    kind: str = "static"
    order: tuple[int, ...] | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("static", "degree", "constr", "ff"):
            raise ValueError(f"unknown heuristic kind {self.kind!r}")


def _static_scores(model: Model, kind: str) -> list[int]:
    """Per-variable score: distinct co-occurring vars, or constraint count."""
    scores = [0] * model.num_vars
    if kind == "constr":
        for c in model.constraints:
            for x in set(c.vars):
                scores[x] += 1
    else:
        neigh: list[set[int]] = [set() for _ in range(model.num_vars)]
        for c in model.constraints:
            scope = set(c.vars)
            for x in scope:
                neigh[x] |= scope
        scores = [len(s - {x}) for x, s in enumerate(neigh)]
    return scores


class _Selector:
    def __init__(self, model: Model, heuristic: HeuristicSpec):
        dec = model.decision or list(range(model.num_vars))
        self.kind = heuristic.kind
        if heuristic.kind in ("static", "ff"):
            order = heuristic.order if heuristic.order is not None else range(len(dec))
            order = list(order)
            if sorted(order) != list(range(len(dec))):
                raise ModelError("linearization must cover all decision variables")
            self.order = [dec[p] for p in order]
        else:
            scores = _static_scores(model, heuristic.kind)
            # stable sort keeps row order among ties
            self.order = sorted(dec, key=lambda x: -scores[x])
        seen = set(self.order)
        self.rest = [x for x in range(model.num_vars) if x not in seen]

    def select(self, doms: Sequence[int]) -> int | None:
        if self.kind == "ff":
            best, best_size = None, None
            for x in self.order:
                d = doms[x]
                if d & (d - 1):
                    s = dom_size(d)
                    if best_size is None or s < best_size:
                        best, best_size = x, s
                        if s == 2:
                            break
            if best is not None:
                return best
        else:
            for x in self.order:
                d = doms[x]
                if d & (d - 1):
                    return x
        for x in self.rest:
            d = doms[x]
            if d & (d - 1):
                return x
        return None


def select_variable(
    heuristic: HeuristicSpec, model: Model, doms: Sequence[int]
) -> int | None:
    """Pick the next branching variable, or None when all are fixed."""
    return _Selector(model, heuristic).select(doms)


# ---------------------------------------------------------------------------
# search


@dataclass
class SearchStats:
    backtracks: int = 0
    nodes: int = 0
    solutions: int = 0
    optimum: int | None = None
    time_ms: float = 0.0


@dataclass
class SearchResult:
    status: str  # "optimal", "infeasible", "budget-exceeded"
    optimum: int | None
    witness: list[int] | None
    stats: SearchStats


class Solver:
    """One search over one model.  Not shareable between threads."""

    def __init__(
        self,
        model: Model,
        heuristic: HeuristicSpec | None = None,
        value_order: str = "ascending",
        node_budget: int | None = None,
        time_budget: float | None = None,
    ):
        if value_order not in ("ascending", "descending"):
            raise ValueError(f"value order must be ascending or descending, not {value_order!r}")
        self.model = model
        self.constraints = list(model.constraints)
        self.watch = _watchers(model.num_vars, self.constraints)
        self.selector = _Selector(model, heuristic or HeuristicSpec())
        self.descending = value_order == "descending"
        self.node_budget = node_budget
        self.time_budget = time_budget
        self.stats = SearchStats()
        self._deadline = None

    def _values(self, d: int) -> list[int]:
        vals = values_of(d)
        return vals[::-1] if self.descending else vals

    def _root(self) -> list[int] | None:
        doms = list(self.model.domains)
        try:
            _fixpoint(doms, self.constraints, self.watch, range(len(self.constraints)))
        except Inconsistent:
            return None
        return doms

    def _tick(self) -> None:
        self.stats.nodes += 1
        if self.node_budget is not None and self.stats.nodes > self.node_budget:
            raise BudgetExceeded(f"node budget {self.node_budget} exceeded")
        if self._deadline is not None and time.perf_counter() > self._deadline:
            raise BudgetExceeded(f"time budget {self.time_budget}s exceeded")

    def _children(self, doms: list[int], cut: list | None) -> Iterator[list[int]]:
        """Yield consistent children of ``doms`` for the selected variable.

        ``cut`` is a one-element list holding the bitmask of objective values
        still allowed (or None); it is re-read per child so that siblings see
        incumbents found in earlier subtrees.
        """
        x = self.selector.select(doms)
        ov = self.model.objective[0] if self.model.objective else None
        for v in self._values(doms[x]):
            self._tick()
            child = list(doms)
            child[x] = 1 << v
            queue = list(self.watch[x])
            try:
                if cut is not None and cut[0] is not None:
                    d = child[ov] & cut[0]
                    if d != child[ov]:
                        if not d:
                            raise Inconsistent
                        child[ov] = d
                        queue.extend(self.watch[ov])
                _fixpoint(child, self.constraints, self.watch, queue)
            except Inconsistent:
                self.stats.backtracks += 1
                continue
            yield child

    def _enumerate(self, doms: list[int]) -> Iterator[list[int]]:
        if self.selector.select(doms) is None:
            yield [dom_min(d) for d in doms]
            return
        for child in self._children(doms, None):
            yield from self._enumerate(child)

    def solve_all(self) -> list[list[int]]:
        start = time.perf_counter()
        if self.time_budget is not None:
            self._deadline = start + self.time_budget
        out = []
        root = self._root()
        if root is not None:
            for sol in self._enumerate(root):
                out.append(sol)
                self.stats.solutions += 1
        self.stats.time_ms = (time.perf_counter() - start) * 1000.0
        return out

    def optimize(self) -> SearchResult:
        if self.model.objective is None:
            raise ModelError("model has no objective")
        ov, sense = self.model.objective
        start = time.perf_counter()
        if self.time_budget is not None:
            self._deadline = start + self.time_budget
        best: int | None = None
        witness: list[int] | None = None
        status = "optimal"
        maximize = sense == "max"
        root = self._root()
        cut: list = [None]
        try:
            stack = []
            if root is not None:
                if self.selector.select(root) is None:
                    best, witness = dom_min(root[ov]), [dom_min(d) for d in root]
                    self.stats.solutions += 1
                else:
                    stack.append(self._children(root, cut))
            while stack:
                child = next(stack[-1], None)
                if child is None:
                    stack.pop()
                elif self.selector.select(child) is None:
                    best, witness = dom_min(child[ov]), [dom_min(d) for d in child]
                    self.stats.solutions += 1
                    if maximize:
                        cut[0] = ~((1 << (best + 1)) - 1)
                    else:
                        cut[0] = (1 << best) - 1
                else:
                    stack.append(self._children(child, cut))
        except BudgetExceeded:
            status = "budget-exceeded"
        self.stats.time_ms = (time.perf_counter() - start) * 1000.0
        if status == "optimal":
            if best is None:
                status = "infeasible"
            self.stats.optimum = best
        return SearchResult(status, best if status == "optimal" else None, witness, self.stats)


def solve_optimize(
    model: Model,
    heuristic: HeuristicSpec | None = None,
    value_order: str = "ascending",
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> SearchResult:
    """Branch-and-bound to a proven optimum."""
    return Solver(model, heuristic, value_order, node_budget, time_budget).optimize()


def solve_all(
    model: Model,
    heuristic: HeuristicSpec | None = None,
    node_budget: int | None = 1_000_000,
) -> tuple[list[list[int]], SearchStats]:
    """Enumerate every solution once.  Raises BudgetExceeded past the budget."""
    solver = Solver(model, heuristic, node_budget=node_budget)
    sols = solver.solve_all()
    return sols, solver.stats
