"""Closed-form resource evaluators.

Two families live here and are never mixed:

* the published model: closed-form formulas and the Toom-2.5 gate-count
  recurrences (adders priced at ``2n`` Toffolis / ``5n`` CNOTs, ``TC_1 = 1``,
  cost doubled for uncomputation);
* a mirror of this package's construction: per-block closed forms (Cuccaro
  ``2w-1`` / ``2w-2``, controlled adder ``4w``, copies, fans) composed along the
  same recursion as :mod:`revmult.multipliers`, plus a live/peak wire tracker
  that follows the builder's allocate/free order. It must equal the measured
  netlist counts exactly.
"""
from __future__ import annotations

import bisect
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .multipliers import MultiplierConfig, step_kind, toom_radix
from .netlist import ResourceReport

LOG6_16 = math.log(16, 6)
LOG2_3 = math.log2(3)
TOOM_CUT_DENOM = 2 - math.log(6, 16)
KARATSUBA_CUT_DENOM = 2 - math.log(2, 3)

PAPER_METHODS = ("naive", "karatsuba", "toom25", "const_mult")


# published model

@dataclass(frozen=True)
class CostFormulaSet:
    """Published model row plus the CNOT bound for one method; all evaluators return floats."""

    method: str
    qc: Callable[[float], float]
    tc: Callable[[float], float]
    td: Callable[[float], float]
    cnot: Callable[[float], float]

    def evaluate(self, n: float) -> dict[str, float]:
        return {"qubits": self.qc(n), "toffoli": self.tc(n), "toffoli_depth": self.td(n), "cnot": self.cnot(n)}


FORMULAS = {
    "naive": CostFormulaSet(
        "naive",
        qc=lambda n: 4 * n + 1,
        tc=lambda n: 4 * n * n - 3 * n,
        td=lambda n: 4 * n * n - 4 * n + 1,
        cnot=lambda n: 2 * n * n - 2 * n,
    ),
    "karatsuba": CostFormulaSet(
        "karatsuba",
        qc=lambda n: n * 1.5 ** (math.log2(n) / KARATSUBA_CUT_DENOM),
        tc=lambda n: 42 * n ** LOG2_3,
        td=lambda n: n * 1.5 ** ((1 - 1 / KARATSUBA_CUT_DENOM) * math.log2(n)),
        cnot=lambda n: 100 * n ** LOG2_3,
    ),
    "toom25": CostFormulaSet(
        "toom25",
        qc=lambda n: n * (8 / 3) ** (math.log(n, 6) / TOOM_CUT_DENOM),
        tc=lambda n: 49 * n ** LOG6_16,
        td=lambda n: n * (8 / 3) ** ((1 - 1 / TOOM_CUT_DENOM) * math.log(n, 6)),
        cnot=lambda n: 116 * n ** LOG6_16,
    ),
    "const_mult": CostFormulaSet(
        "const_mult",
        qc=lambda n: 3 * n + 1,
        tc=lambda n: 4 * n * (n + 1),
        td=lambda n: 8 * n,
        cnot=lambda n: 2 * n,
    ),
}


def paper_formulas(method: str) -> CostFormulaSet:
    try:
        return FORMULAS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {PAPER_METHODS}") from None


def paper_cost(method: str, n: int) -> ResourceReport:
    """Published model row for ``method`` at width ``n``, rounded to the nearest integer.

    The Karatsuba and Toom-2.5 rows are asymptotic forms without additive
    constants; they are evaluated as if exact.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    vals = paper_formulas(method).evaluate(n)
    return ResourceReport.from_counts(
        toffoli=round(vals["toffoli"]),
        cnot=round(vals["cnot"]),
        nots=0,
        qubits=round(vals["qubits"]),
        toffoli_depth=round(vals["toffoli_depth"]),
    )


def _power_of_6(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k, m = 0, n
    while m % 6 == 0:
        m //= 6
        k += 1
    if m != 1:
        raise ValueError(f"exact recurrence needs a power of 6, got {n}")
    return k


def _paper_recurrence(n: int, base: int, adder: Callable[[int], int]) -> int:
    if n == 1:
        return base
    return (16 * _paper_recurrence(n // 6, base, adder)
            + 40 * adder(n // 6) + 22 * adder(n // 3) + 4 * adder(n // 2) + 4 * adder(5 * n // 6))


def paper_toffoli_recurrence(n: int, doubled: bool = True) -> int:
    """``TC_n = 16 TC_{n/6} + 40A_{n/6} + 22A_{n/3} + 4A_{n/2} + 4A_{5n/6}``, ``A_m = 2m``, ``TC_1 = 1``."""
    _power_of_6(n)
    value = _paper_recurrence(n, 1, lambda m: 2 * m)
    return 2 * value if doubled else value


def paper_cnot_recurrence(n: int, doubled: bool = True, copy_out: bool = False) -> int:
    """Same shape with ``Ac_m = 5m`` and ``CC_1 = 0``; ``copy_out`` adds the ``2n``-CNOT product copy."""
    _power_of_6(n)
    value = _paper_recurrence(n, 0, lambda m: 5 * m)
    value = 2 * value if doubled else value
    return value + 2 * n if copy_out else value


PAPER_CENSUS = {"n/6": 40, "n/3": 22, "n/2": 4, "5n/6": 4}


# construction mirror

@dataclass
class _Tally:
    toffoli: int = 0
    cnot: int = 0
    nots: int = 0
    live: int = 0
    peak: int = 0
    blocks: Counter = field(default_factory=Counter)

    def alloc(self, k: int) -> None:
        self.live += k
        self.peak = max(self.peak, self.live)

    def free(self, k: int) -> None:
        self.live -= k

    def transient(self, k: int) -> None:
        self.peak = max(self.peak, self.live + k)


@dataclass(frozen=True)
class NodeCost:
    """Garbage-mode cost of one ``_mul`` call: gate counts, wires it leaves
    live (output plus garbage) and its peak above the caller's live count."""

    toffoli: int
    cnot: int
    nots: int
    net_wires: int
    peak_wires: int


def _adder(t: _Tally, w: int, carry: bool) -> None:
    t.toffoli += 2 * w - 1 if carry else 2 * w - 2
    t.cnot += 4 * w + 1 if carry else 4 * w - 2


def _add_mod(t: _Tally, la: int, w: int, kind: str = "add") -> None:
    t.transient(max(0, w - la) + 1)
    _adder(t, w, False)
    t.blocks[kind] += 1


def _sub_mod(t: _Tally, la: int, w: int) -> None:
    _add_mod(t, la, w, "sub")
    t.nots += 2 * w


def _add_with_carry(t: _Tally, la: int, w: int) -> None:
    t.transient(w - la + 1)
    _adder(t, w, True)
    t.blocks["add"] += 1


def _copy(t: _Tally, k: int) -> None:
    t.cnot += k
    t.blocks["copy"] += 1


def _negate(t: _Tally, w: int) -> None:
    t.cnot += w
    _add_mod(t, 1, w, "negate")


def _sum2(t: _Tally, p: int, q: int) -> int:
    hi, lo = max(p, q), min(p, q)
    t.alloc(hi + 1)
    _copy(t, hi)
    _add_with_carry(t, lo, hi)
    return hi + 1


def _naive(t: _Tally, a: int, b: int) -> int:
    m, k = max(a, b), min(a, b)
    t.alloc(a + b)
    t.toffoli += m
    if k > 1:
        t.transient(1)
        t.toffoli += 4 * m * (k - 1)
        t.cnot += 2 * m * (k - 1)
        t.blocks["controlled_add"] += k - 1
    return a + b


Child = Callable[[_Tally, int, int], int]


def _assemble(t: _Tally, total: int, i: int, lp: int, lc: int, lb: int, ls: int) -> None:
    t.alloc(total)
    _copy(t, lp)
    _copy(t, ls)
    _add_mod(t, lc, total - i)
    _add_mod(t, lb, total - 2 * i)


def _toom_shape(a: int, b: int):
    three, two = (a, b) if a > b else (b, a)
    i = toom_radix(three, two)
    return i, i, two - i, i, i, three - 2 * i


def _toom(t: _Tally, a: int, b: int, child: Child) -> int:
    i, x0, x1, y0, y1, y2 = _toom_shape(a, b)
    lxs = _sum2(t, x0, x1)
    le = _sum2(t, y0, y2)
    t.alloc(le + 1)
    _copy(t, le)
    _add_with_carry(t, y1, le)
    lys = le + 1

    lp = child(t, x0, y0)
    lq = child(t, lxs, lys)
    # signed difference operands and |R|
    mx = max(x0, x1)
    t.alloc(mx + 1)
    _copy(t, x0)
    _sub_mod(t, x1, mx + 1)
    t.alloc(1)
    t.cnot += 1
    _negate(t, mx + 1)
    t.alloc(le + 1)
    _copy(t, le)
    _sub_mod(t, y1, le + 1)
    t.alloc(1)
    t.cnot += 1
    _negate(t, le + 1)
    lm = child(t, mx, le)
    t.alloc(1)
    t.cnot += 2
    ls = child(t, x1, y2)

    w = lq + 1
    for flip in (False, True):
        t.alloc(w)
        _copy(t, lq)
        t.cnot += 2 * w
        if flip:
            t.nots += 2 * w
        _add_mod(t, lm, w, "signed_add")
    t.free(2)                                    # halving drops both LSBs
    t.blocks["halve"] += 2
    _sub_mod(t, lp, w - 1)
    _sub_mod(t, ls, w - 1)
    _assemble(t, a + b, i, lp, w - 1, w - 1, ls)
    return a + b


def _toom_positive(t: _Tally, a: int, b: int, child: Child) -> int:
    i, x0, x1, y0, y1, y2 = _toom_shape(a, b)
    lxs = _sum2(t, x0, x1)
    lx2 = max(x0, x1 + 1) + 1
    t.alloc(lx2)
    _copy(t, x0)
    _add_mod(t, x1, lx2 - 1)
    le = _sum2(t, y0, y2)
    t.alloc(le + 1)
    _copy(t, le)
    _add_with_carry(t, y1, le)
    lys = le + 1
    t.alloc(i + 3)
    _copy(t, y0)
    _add_mod(t, y1, i + 2)
    _add_mod(t, y2, i + 1)

    lp = child(t, x0, y0)
    lq = child(t, lxs, lys)
    lr = child(t, lx2, i + 3)
    ls = child(t, x1, y2)

    w = lr + 1
    t.alloc(w)
    _copy(t, lr)
    _add_mod(t, lp, w)
    _sub_mod(t, lq, w - 1)
    _sub_mod(t, ls, w - 1)
    _sub_mod(t, ls, w - 2)
    t.free(1)
    t.blocks["halve"] += 1
    _sub_mod(t, lp, lq)
    _sub_mod(t, ls, lq)
    _sub_mod(t, w - 1, lq)
    _assemble(t, a + b, i, lp, lq, w - 1, ls)
    return a + b


def _karatsuba(t: _Tally, a: int, b: int, child: Child) -> int:
    i = -(-max(a, b) // 2)
    lxs = _sum2(t, i, a - i)
    lys = _sum2(t, i, b - i)
    lp = child(t, i, i)
    lq = child(t, lxs, lys)
    ls = child(t, a - i, b - i)
    _sub_mod(t, lp, lq)
    _sub_mod(t, ls, lq)
    total = a + b
    t.alloc(total)
    _copy(t, lp)
    _copy(t, ls)
    _add_mod(t, lq, total - i)
    return total


def _step(kind: str, cfg: MultiplierConfig):
    if kind == "karatsuba":
        return _karatsuba
    if kind == "toom25":
        return _toom_positive if cfg.eval_point_set == "zero_one_two_inf" else _toom
    raise ValueError(kind)


class MirrorRecurrence:
    """Memoized ``(len(u), len(v)) -> NodeCost`` evaluator for one configuration."""

    def __init__(self, cfg: MultiplierConfig | None = None):
        self.cfg = cfg or MultiplierConfig()
        self.node = lru_cache(maxsize=None)(self._node)

    def kind(self, a: int, b: int) -> str:
        c = self.cfg
        return step_kind(c.method, a, b, c.base_threshold, c.eval_point_set)

    def _node(self, a: int, b: int) -> NodeCost:
        t = _Tally()
        kind = self.kind(a, b)
        if kind == "naive":
            _naive(t, a, b)
        else:
            _step(kind, self.cfg)(t, a, b, self._apply_child)
        return NodeCost(t.toffoli, t.cnot, t.nots, t.live, t.peak)

    def _apply_child(self, t: _Tally, a: int, b: int) -> int:
        c = self.node(a, b)
        t.toffoli += c.toffoli
        t.cnot += c.cnot
        t.nots += c.nots
        t.peak = max(t.peak, t.live + c.peak_wires)
        t.live += c.net_wires
        return a + b

    def census(self, a: int, b: int) -> tuple[Counter, list[tuple[int, int]]]:
        """Blocks emitted by one step at ``(a, b)`` and the child shapes it calls."""
        t = _Tally()
        calls: list[tuple[int, int]] = []

        def record(_t, ca, cb):
            calls.append((ca, cb))
            return ca + cb

        kind = self.kind(a, b)
        if kind == "naive":
            _naive(t, a, b)
        else:
            _step(kind, self.cfg)(t, a, b, record)
        return t.blocks, calls

    def report(self, n: int) -> ResourceReport:
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        cfg = self.cfg
        t = _Tally()
        t.alloc(2 * n)                           # x, y
        if cfg.method == "naive":
            _naive(t, n, n)
        elif not cfg.uncompute:
            self._apply_child(t, n, n)
        else:
            t.alloc(2 * n)                       # product register
            self._apply_child(t, n, n)
            t.toffoli *= 2
            t.cnot *= 2
            t.nots *= 2
            t.cnot += 2 * n                      # copy-out, not reversed
        return ResourceReport.from_counts(t.toffoli, t.cnot, t.nots, t.peak, toffoli_depth=None)


def mirror_cost(n: int, cfg: MultiplierConfig | None = None) -> ResourceReport:
    """Exact counts of ``build_multiplier(n, cfg)`` without building it; depth is not modelled."""
    return MirrorRecurrence(cfg).report(n)


def two_level_census(n: int, cfg: MultiplierConfig | None = None) -> Counter:
    """Block census of the root step plus its four child steps (one 16-way level)."""
    mirror = MirrorRecurrence(cfg)
    total, calls = mirror.census(n, n)
    total = Counter(total)
    for a, b in calls:
        blocks, _ = mirror.census(a, b)
        total.update(blocks)
    return total


# fitting and comparisons

def fit_exponent(samples: Iterable[tuple[float, float]]) -> float:
    """Least-squares slope of ``log(value)`` against ``log(n)``."""
    pts = list(samples)
    if len(pts) < 3:
        raise ValueError(f"need at least 3 samples, got {len(pts)}")
    if any(n <= 0 or v <= 0 for n, v in pts):
        raise ValueError("samples must be positive")
    xs = [math.log(n) for n, _ in pts]
    ys = [math.log(v) for _, v in pts]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("samples need at least two distinct n")
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def crossover(method: str = "toom25", baseline: str = "naive", lo: int = 2, hi: int = 100_000) -> int | None:
    """Smallest ``n`` in ``[lo, hi]`` where ``method``'s model TC drops below ``baseline``'s.

    The model TC difference changes sign once on this range, so bisection on the
    predicate is exact.
    """
    f, g = paper_formulas(method).tc, paper_formulas(baseline).tc
    grid = range(lo, hi + 1)
    k = bisect.bisect_left(grid, True, key=lambda n: f(n) < g(n))
    return grid[k] if k < len(grid) else None


def bound_ratio(measured: ResourceReport, n: int) -> tuple[float, float]:
    """Measured Toffoli and CNOT counts over the ``49 n^log6(16)`` / ``116 n^log6(16)`` bounds."""
    scale = n ** LOG6_16
    return measured.toffoli_count / (49 * scale), measured.cnot_count / (116 * scale)
