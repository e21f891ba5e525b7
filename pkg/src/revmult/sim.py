"""Exact basis-state simulation and verification harness.

Every gate in scope permutes computational basis states, so simulation is a
bit-array computation. Batches of vectors are bit-sliced: wire ``w`` of the
packed state is a row of uint64 words whose bit ``k`` belongs to vector ``k``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _backend
from .netlist import Circuit, Role

MAX_EXHAUSTIVE_BITS = 24
DEFAULT_SEED = 42


def simulate(c: Circuit, state):
    """Apply ``c`` to one basis state.

    ``state`` is either a sequence of 0/1 per wire (returns a tuple) or an int
    whose bit ``w`` is wire ``w`` (returns an int).
    """
    if isinstance(state, (int, np.integer)):
        value = int(state)
        if value < 0 or value >> c.width:
            raise ValueError(f"state {value} does not fit {c.width} wires")
        bits = [(value >> w) & 1 for w in range(c.width)]
        out = _run_single(c, bits)
        return sum(b << w for w, b in enumerate(out))
    bits = [int(b) for b in state]
    if len(bits) != c.width:
        raise ValueError(f"state has {len(bits)} bits, circuit width is {c.width}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("basis state entries must be 0 or 1")
    return tuple(_run_single(c, bits))


def _run_single(c: Circuit, bits: list[int]) -> list[int]:
    state = np.zeros((c.width, 1), dtype=np.uint64)
    state[:, 0] = bits
    _backend.simulate(c.table, state)
    return [int(v) & 1 for v in state[:, 0]]


def simulate_batch(c: Circuit, states: Sequence[int]) -> list[int]:
    """Apply ``c`` to many integer-encoded basis states at once."""
    packed = pack({tuple(range(c.width)): list(states)}, c.width, len(states))
    _backend.simulate(c.table, packed)
    return unpack(packed, range(c.width), len(states))


# bit-slice packing

def _nwords(count: int) -> int:
    return max(1, -(-count // 64))


def pack(assign: Mapping[Sequence[int], Sequence[int]], width: int, count: int) -> np.ndarray:
    """Build a packed state; ``assign`` maps a wire list to one value per vector."""
    nwords = _nwords(count)
    state = np.zeros((width, nwords), dtype=np.uint64)
    for wires, values in assign.items():
        wires = list(wires)
        if not wires:
            continue
        nbytes = -(-len(wires) // 8)
        raw = np.frombuffer(b"".join(int(v).to_bytes(nbytes, "little") for v in values), dtype=np.uint8)
        bits = np.unpackbits(raw.reshape(count, nbytes), axis=1, bitorder="little")[:, : len(wires)]
        rows = np.packbits(bits.T, axis=1, bitorder="little")
        buf = np.zeros((len(wires), nwords * 8), dtype=np.uint8)
        buf[:, : rows.shape[1]] = rows
        state[wires] = buf.view(np.uint64)
    return state


def unpack(state: np.ndarray, wires: Iterable[int], count: int) -> list[int]:
    wires = list(wires)
    if not wires:
        return [0] * count
    bits = np.unpackbits(state[wires].view(np.uint8), axis=1, bitorder="little")[:, :count]
    cols = np.packbits(bits.T, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in cols]


def lane_mask(state: np.ndarray, count: int) -> np.ndarray:
    mask = np.zeros(state.shape[1], dtype=np.uint64)
    full, rem = divmod(count, 64)
    mask[:full] = np.uint64(0xFFFFFFFFFFFFFFFF)
    if rem:
        mask[full] = np.uint64((1 << rem) - 1)
    return mask


# test plans and verdicts

@dataclass(frozen=True)
class TestVectorPlan:
    __test__ = False  # not a pytest class

    mode: str = "random"
    samples: int = 100
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown plan mode {self.mode!r}")
        if self.mode == "random" and self.samples < 1:
            raise ValueError("sample count must be >= 1")

    @classmethod
    def exhaustive(cls) -> "TestVectorPlan":
        return cls("exhaustive", 0)

    def vectors(self, *widths: int) -> list[tuple[int, ...]]:
        total = sum(widths)
        if self.mode == "exhaustive":
            if total > MAX_EXHAUSTIVE_BITS:
                raise ValueError(f"exhaustive plan over {total} input bits exceeds {MAX_EXHAUSTIVE_BITS}")
            return list(itertools.product(*(range(1 << w) for w in widths)))
        rng = random.Random(self.seed)
        return [tuple(rng.getrandbits(w) if w else 0 for w in widths) for _ in range(self.samples)]


@dataclass(frozen=True)
class Failure:
    index: int
    n: int
    x: int
    y: int
    got: int
    want: int
    reason: str = "product"

    def line(self) -> str:
        line = f"FAIL n={self.n} x={self.x} y={self.y} got={self.got} want={self.want}"
        return line if self.reason == "product" else f"{line} ({self.reason})"


@dataclass(frozen=True)
class Verdict:
    passed: bool
    count: int
    failures: tuple[Failure, ...] = ()
    checked_sites: int = 0

    @property
    def counterexample(self) -> Failure | None:
        return self.failures[0] if self.failures else None

    def text(self) -> str:
        if self.passed:
            return f"PASS {self.count}"
        return "\n".join(f.line() for f in self.failures)

    def __bool__(self) -> bool:
        return self.passed


def _io_registers(c: Circuit):
    try:
        x, y, out = c.register("x"), c.register("y"), c.register("out")
    except KeyError as exc:
        raise ValueError(f"circuit lacks register {exc.args[0]!r}") from None
    if x.role is not Role.INPUT or y.role is not Role.INPUT or out.role is not Role.OUTPUT:
        raise ValueError("registers x, y must be inputs and out an output")
    return x, y, out


def verify_multiplier(c: Circuit, n: int, plan: TestVectorPlan, *, max_failures: int = 10) -> Verdict:
    """Check ``(x, y, 0...) -> (x, y, 0..., x*y)`` on every vector of ``plan``."""
    x, y, out = _io_registers(c)
    vectors = plan.vectors(len(x), len(y))
    count = len(vectors)
    xs = [v[0] for v in vectors]
    ys = [v[1] for v in vectors]
    state = pack({x.wires: xs, y.wires: ys}, c.width, count)
    _backend.simulate(c.table, state)
    got_x = unpack(state, x.wires, count)
    got_y = unpack(state, y.wires, count)
    got = unpack(state, out.wires, count)
    clean = [r for r in c.registers if r.role in (Role.ANCILLA, Role.SIGN)]
    dirty = {r.name: unpack(state, r.wires, count) for r in clean}
    failures = []
    for k in range(count):
        want = xs[k] * ys[k]
        reasons = []
        if got[k] != want:
            reasons.append("product")
        if got_x[k] != xs[k] or got_y[k] != ys[k]:
            reasons.append("input modified")
        reasons.extend(f"{name} nonzero" for name, vals in dirty.items() if vals[k])
        if reasons:
            failures.append(Failure(k, n, xs[k], ys[k], got[k], want, "; ".join(reasons)))
            if len(failures) >= max_failures:
                break
    return Verdict(not failures, count, tuple(failures))


def check_parity_sites(c: Circuit, plan: TestVectorPlan) -> Verdict:
    """Simulate and assert every recorded halving site's LSB is 0 at its position."""
    x, y, _ = _io_registers(c)
    vectors = plan.vectors(len(x), len(y))
    count = len(vectors)
    xs = [v[0] for v in vectors]
    ys = [v[1] for v in vectors]
    state = pack({x.wires: xs, y.wires: ys}, c.width, count)
    mask = lane_mask(state, count)
    pos = 0
    for site, (stop, wire) in enumerate(sorted(c.zero_checks)):
        _backend.simulate(c.table, state, pos, stop)
        pos = stop
        bad = state[wire] & mask
        if bad.any():
            k = _first_lane(bad)
            f = Failure(k, len(x), xs[k], ys[k], 1, 0, f"odd value at halving site {site} (gate {stop}, wire {wire})")
            return Verdict(False, count, (f,), site)
    return Verdict(True, count, (), len(c.zero_checks))


def _first_lane(words: np.ndarray) -> int:
    for i, w in enumerate(words.tolist()):
        if w:
            return 64 * i + (w & -w).bit_length() - 1
    raise ValueError("no set lane")


def check_product_terms(c: Circuit, plan: TestVectorPlan) -> Verdict:
    """Check every Toom-2.5 node's P, Q, R, S, B, C registers just before assembly.

    B and C are read as unsigned, so equality with the non-negative integer
    formulas also shows they never wrapped below zero.
    """
    x, y, _ = _io_registers(c)
    terms = sorted(c.meta.get("terms", ()), key=lambda t: t.position)
    vectors = plan.vectors(len(x), len(y))
    count = len(vectors)
    xs = [v[0] for v in vectors]
    ys = [v[1] for v in vectors]
    state = pack({x.wires: xs, y.wires: ys}, c.width, count)
    pos = 0
    for term in terms:
        _backend.simulate(c.table, state, pos, term.position)
        pos = term.position
        two = unpack(state, term.two, count)
        three = unpack(state, term.three, count)
        got = {name: unpack(state, getattr(term, name), count) for name in ("p", "q", "s", "b", "c")}
        mag = unpack(state, term.r_mag, count)
        sign = unpack(state, (term.r_sign,), count)
        got["r"] = [-m if sg else m for m, sg in zip(mag, sign)]
        for k in range(count):
            want = term.expected(two[k], three[k])
            for name, value in want.items():
                if got[name][k] != value:
                    f = Failure(k, len(x), xs[k], ys[k], got[name][k], value,
                                f"term {name.upper()} at node {term.node}")
                    return Verdict(False, count, (f,), len(terms))
    return Verdict(True, count, (), len(terms))
