"""Gate-level IR for classical-reversible circuits over X / CX / CCX.

Gates are stored as a flat ``(m, 4)`` int32 table ``[kind, c0, c1, target]``
with ``-1`` in unused control slots. Circuits are immutable once built; the
:class:`CircuitBuilder` is the only mutable piece.
"""
from __future__ import annotations

import enum
import heapq
from array import array
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _backend


class GateKind(enum.IntEnum):
    NOT = 0
    CNOT = 1
    TOFFOLI = 2


class Role(str, enum.Enum):
    INPUT = "input"
    OUTPUT = "output"
    ANCILLA = "ancilla"
    SIGN = "sign"
    GARBAGE = "garbage"


class Interpretation(str, enum.Enum):
    UNSIGNED = "unsigned"
    TWOS_COMPLEMENT = "twos_complement"


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    controls: tuple[int, ...]
    target: int

    def __post_init__(self):
        if len(self.controls) != int(self.kind):
            raise ValueError(f"{self.kind.name} takes {int(self.kind)} controls, got {len(self.controls)}")
        wires = (*self.controls, self.target)
        if len(set(wires)) != len(wires):
            raise ValueError(f"gate wires must be distinct: {wires}")
        if min(wires) < 0:
            raise ValueError(f"negative wire index in {wires}")

    @property
    def wires(self) -> tuple[int, ...]:
        return (*self.controls, self.target)

    def row(self) -> tuple[int, int, int, int]:
        c = list(self.controls) + [-1] * (2 - len(self.controls))
        return (int(self.kind), c[0], c[1], self.target)

    @classmethod
    def from_row(cls, row) -> "Gate":
        kind = GateKind(int(row[0]))
        controls = tuple(int(w) for w in row[1:1 + int(kind)])
        return cls(kind, controls, int(row[3]))


@dataclass(frozen=True)
class Register:
    """Named wire slice, least-significant bit first."""

    name: str
    wires: tuple[int, ...]
    role: Role = Role.ANCILLA
    interpretation: Interpretation = Interpretation.UNSIGNED

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))
        object.__setattr__(self, "role", Role(self.role))
        object.__setattr__(self, "interpretation", Interpretation(self.interpretation))
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"register {self.name!r} repeats a wire")

    def __len__(self) -> int:
        return len(self.wires)

    def remapped(self, wire_map: Sequence[int]) -> "Register":
        return Register(self.name, tuple(wire_map[w] for w in self.wires), self.role, self.interpretation)


@dataclass(frozen=True)
class ResourceReport:
    toffoli_count: int = 0
    cnot_count: int = 0
    not_count: int = 0
    qubit_count: int = 0
    toffoli_depth: int | None = 0
    t_count: int = 0
    t_depth: int | None = 0

    @classmethod
    def from_counts(cls, toffoli: int, cnot: int, nots: int, qubits: int,
                    toffoli_depth: int | None) -> "ResourceReport":
        # Clifford+T mapping: 7 T per Toffoli, 3 T-stages per Toffoli stage.
        t_depth = None if toffoli_depth is None else 3 * toffoli_depth
        return cls(toffoli, cnot, nots, qubits, toffoli_depth, 7 * toffoli, t_depth)

    def counts(self) -> tuple[int, int, int]:
        return (self.toffoli_count, self.cnot_count, self.not_count)


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate table plus wire metadata.

    ``zero_checks`` holds ``(position, wire)`` pairs: the wire must read 0 after
    the first ``position`` gates have run (used for halving sites).
    """

    table: np.ndarray
    width: int
    registers: tuple[Register, ...] = ()
    zero_checks: tuple[tuple[int, int], ...] = ()
    name: str = ""
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        table = np.ascontiguousarray(self.table, dtype=np.int32).reshape(-1, 4)
        table.flags.writeable = False
        object.__setattr__(self, "table", table)
        if len(table) and int(table[:, 1:].max()) >= self.width:
            raise ValueError("gate references a wire outside the circuit width")
        seen: dict[int, str] = {}
        names = set()
        for reg in self.registers:
            if reg.name in names:
                raise ValueError(f"duplicate register name {reg.name!r}")
            names.add(reg.name)
            for w in reg.wires:
                if w >= self.width:
                    raise ValueError(f"register {reg.name!r} wire {w} outside width {self.width}")
                if w in seen:
                    raise ValueError(f"wire {w} owned by both {seen[w]!r} and {reg.name!r}")
                seen[w] = reg.name

    def __len__(self) -> int:
        return len(self.table)

    def __iter__(self) -> Iterator[Gate]:
        for row in self.table.tolist():
            yield Gate.from_row(row)

    @property
    def gates(self) -> list[Gate]:
        return list(self)

    def register(self, name: str) -> Register:
        for reg in self.registers:
            if reg.name == name:
                return reg
        raise KeyError(name)

    def registers_with_role(self, role: Role | str) -> list[Register]:
        role = Role(role)
        return [r for r in self.registers if r.role is role]

    def without_registers(self) -> "Circuit":
        return Circuit(self.table, self.width, (), self.zero_checks, self.name, self.meta)

    def with_registers(self, registers: Iterable[Register]) -> "Circuit":
        return Circuit(self.table, self.width, tuple(registers), self.zero_checks, self.name, self.meta)

    @classmethod
    def from_gates(cls, gates: Iterable[Gate], width: int, registers: Iterable[Register] = ()) -> "Circuit":
        rows = [g.row() for g in gates]
        table = np.array(rows, dtype=np.int32).reshape(-1, 4)
        return cls(table, width, tuple(registers))


def reverse(c: Circuit) -> Circuit:
    """Inverse circuit: every primitive is self-inverse, so just flip the order."""
    m = len(c)
    checks = tuple(sorted((m - pos, w) for pos, w in c.zero_checks))
    return Circuit(c.table[::-1].copy(), c.width, c.registers, checks, c.name, c.meta)


def concat(a: Circuit, b: Circuit, wire_map: Sequence[int] | Mapping[int, int] | None = None) -> Circuit:
    """Gates of ``a`` followed by the gates of ``b`` relabelled through ``wire_map``."""
    if wire_map is None:
        mapping = list(range(b.width))
    elif isinstance(wire_map, Mapping):
        mapping = [wire_map.get(w, w) for w in range(b.width)]
    else:
        mapping = [int(w) for w in wire_map]
        if len(mapping) != b.width:
            raise ValueError(f"wire_map has {len(mapping)} entries for a width-{b.width} circuit")
    if len(set(mapping)) != len(mapping):
        raise ValueError("wire_map is not injective")
    if mapping and min(mapping) < 0:
        raise ValueError("wire_map produces a negative wire index")
    width = max([a.width] + [w + 1 for w in mapping])
    lut = np.array(mapping + [-1], dtype=np.int32)
    tb = b.table.copy()
    if len(tb):
        # -1 entries index the trailing sentinel and stay -1
        tb[:, 1:] = lut[tb[:, 1:]]
    names = {r.name for r in a.registers}
    regs = list(a.registers)
    for reg in b.registers:
        if reg.name in names:
            raise ValueError(f"register name collision: {reg.name!r}")
        regs.append(reg.remapped(mapping))
    checks = a.zero_checks + tuple((len(a) + pos, mapping[w]) for pos, w in b.zero_checks)
    return Circuit(np.concatenate([a.table, tb]), width, tuple(regs), checks)


def schedule_depth(c: Circuit) -> int:
    """Number of ASAP layers that hold at least one Toffoli.

    A gate lands in layer ``1 + max(layer of the last earlier gate on any of its
    wires)``; ties are broken by program order.
    """
    return _backend.toffoli_depth(c.table, c.width)


def count_resources(c: Circuit) -> ResourceReport:
    kinds = np.bincount(c.table[:, 0], minlength=3) if len(c) else np.zeros(3, dtype=np.int64)
    return ResourceReport.from_counts(
        toffoli=int(kinds[GateKind.TOFFOLI]),
        cnot=int(kinds[GateKind.CNOT]),
        nots=int(kinds[GateKind.NOT]),
        qubits=c.width,
        toffoli_depth=schedule_depth(c),
    )


class WireAllocator:
    """Free-list wire allocator; always hands out the lowest free index."""

    def __init__(self):
        self._free: list[int] = []
        self._live: set[int] = set()
        self.high_water = 0

    @property
    def live(self) -> frozenset[int]:
        return frozenset(self._live)

    @property
    def live_count(self) -> int:
        return len(self._live)

    def allocate(self, n: int) -> list[int]:
        out = []
        for _ in range(n):
            if self._free:
                w = heapq.heappop(self._free)
            else:
                w = self.high_water
                self.high_water += 1
            self._live.add(w)
            out.append(w)
        return out

    def free(self, wires: Iterable[int]) -> None:
        for w in wires:
            if w not in self._live:
                raise ValueError(f"double free of wire {w}")
            self._live.remove(w)
            heapq.heappush(self._free, w)


class CircuitBuilder:
    """Mutable gate recorder with a wire allocator and zero-check bookkeeping."""

    def __init__(self, allocator: WireAllocator | None = None):
        self.alloc = allocator or WireAllocator()
        self._ops = array("i")
        self._registers: list[Register] = []
        self._zero_checks: list[tuple[int, int]] = []
        self._even_claims: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._ops) // 4

    # gates
    def x(self, t: int) -> None:
        self._ops.extend((0, -1, -1, t))

    def cx(self, c: int, t: int) -> None:
        if c == t:
            raise ValueError(f"CNOT control equals target ({c})")
        self._ops.extend((1, c, -1, t))

    def ccx(self, c0: int, c1: int, t: int) -> None:
        if c0 == c1 or c0 == t or c1 == t:
            raise ValueError(f"Toffoli wires must be distinct: {(c0, c1, t)}")
        self._ops.extend((2, c0, c1, t))

    # wires
    def allocate(self, n: int) -> list[int]:
        return self.alloc.allocate(n)

    def free(self, wires: Iterable[int]) -> None:
        self.alloc.free(wires)

    def add_register(self, name: str, wires: Sequence[int], role: Role | str = Role.ANCILLA,
                     interpretation: Interpretation | str = Interpretation.UNSIGNED) -> Register:
        reg = Register(name, tuple(wires), Role(role), Interpretation(interpretation))
        self._registers.append(reg)
        return reg

    # halving obligations
    def declare_even(self, wires: Sequence[int]) -> None:
        """Record that ``wires`` (LSB first) holds an even value at this point."""
        self._even_claims[wires[0]] = len(self)

    def claim_zero(self, wire: int) -> None:
        if self._even_claims.get(wire) != len(self):
            raise ValueError(f"no even-value claim registered for wire {wire} at gate {len(self)}")
        del self._even_claims[wire]
        self._zero_checks.append((len(self), wire))

    # sections
    def mark(self) -> int:
        return len(self)

    def append_reversed(self, start: int, stop: int | None = None) -> None:
        """Append the inverse of gates ``[start, stop)``."""
        stop = len(self) if stop is None else stop
        rev = np.frombuffer(self._ops, dtype=np.int32).reshape(-1, 4)[start:stop][::-1].tobytes()
        self._ops.frombytes(rev)

    def build(self, name: str = "", **meta) -> Circuit:
        table = np.frombuffer(self._ops, dtype=np.int32).reshape(-1, 4).copy()
        return Circuit(table, self.alloc.high_water, tuple(self._registers),
                       tuple(self._zero_checks), name, dict(meta))
