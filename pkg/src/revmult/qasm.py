"""QASM-2.0-style netlist text.

Layout: ``OPENQASM 2.0;``, one ``qreg`` per register, a comment table
mapping every global wire to ``register[index]``, then one gate per line.
Wires owned by no register are gathered into a trailing ``qreg q_free``.
The parser accepts exactly this subset and rebuilds an equivalent
:class:`~revmult.netlist.Circuit`, roles included.
"""
from __future__ import annotations

import re
from typing import Iterable, TextIO

import numpy as np

from .netlist import Circuit, GateKind, Interpretation, Register, Role

HEADER = "OPENQASM 2.0;"
FREE = "q_free"

_QREG = re.compile(r"^qreg\s+([A-Za-z_]\w*)\[(\d+)\];$")
_ROLE = re.compile(r"^//\s*register\s+([A-Za-z_]\w*)\s+role=(\w+)\s+interp=(\w+)$")
_WIRE = re.compile(r"^//\s*wire\s+(\d+)\s*=\s*([A-Za-z_]\w*)\[(\d+)\]$")
_ARG = re.compile(r"^([A-Za-z_]\w*)\[(\d+)\]$")
_GATES = {"x": GateKind.NOT, "cx": GateKind.CNOT, "ccx": GateKind.TOFFOLI}


class QasmError(ValueError):
    pass


def _layout(c: Circuit) -> list[Register]:
    regs = list(c.registers)
    owned = {w for r in regs for w in r.wires}
    free = [w for w in range(c.width) if w not in owned]
    if free:
        regs.append(Register(FREE, tuple(free), Role.ANCILLA))
    return regs


def dumps(c: Circuit) -> str:
    regs = _layout(c)
    where: dict[int, str] = {}
    lines = [HEADER]
    if c.name:
        lines.append(f"// circuit {c.name} width={c.width}")
    for reg in regs:
        lines.append(f"qreg {reg.name}[{len(reg)}];")
    for reg in regs:
        lines.append(f"// register {reg.name} role={reg.role.value} interp={reg.interpretation.value}")
        for k, w in enumerate(reg.wires):
            where[w] = f"{reg.name}[{k}]"
    for w in range(c.width):
        lines.append(f"// wire {w} = {where[w]}")
    names = {GateKind.NOT: "x", GateKind.CNOT: "cx", GateKind.TOFFOLI: "ccx"}
    for kind, c0, c1, t in c.table.tolist():
        args = [a for a in (c0, c1) if a >= 0] + [t]
        lines.append(f"{names[GateKind(kind)]} {','.join(where[a] for a in args)};")
    return "\n".join(lines) + "\n"


def dump(c: Circuit, fh: TextIO) -> None:
    fh.write(dumps(c))


def loads(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != HEADER:
        raise QasmError(f"missing {HEADER!r} header")
    sizes: dict[str, int] = {}
    meta: dict[str, tuple[Role, Interpretation]] = {}
    slots: dict[tuple[str, int], int] = {}
    rows: list[tuple[int, int, int, int]] = []
    for lineno, ln in enumerate(lines[1:], start=2):
        if ln.startswith("//"):
            if m := _ROLE.match(ln):
                meta[m[1]] = (Role(m[2]), Interpretation(m[3]))
            elif m := _WIRE.match(ln):
                key = (m[2], int(m[3]))
                if key in slots:
                    raise QasmError(f"line {lineno}: {m[2]}[{m[3]}] mapped twice")
                slots[key] = int(m[1])
            continue
        if m := _QREG.match(ln):
            if m[1] in sizes:
                raise QasmError(f"line {lineno}: register {m[1]!r} declared twice")
            sizes[m[1]] = int(m[2])
            continue
        op, _, rest = ln.partition(" ")
        if op not in _GATES or not rest.endswith(";"):
            raise QasmError(f"line {lineno}: unsupported statement {ln!r}")
        args = []
        for tok in rest[:-1].split(","):
            a = _ARG.match(tok.strip())
            if not a or a[1] not in sizes or int(a[2]) >= sizes[a[1]]:
                raise QasmError(f"line {lineno}: bad operand {tok.strip()!r}")
            args.append((a[1], int(a[2])))
        kind = _GATES[op]
        if len(args) != int(kind) + 1:
            raise QasmError(f"line {lineno}: {op} takes {int(kind) + 1} operands")
        rows.append((kind, *args))                      # resolved below
    wire_of = _wire_table(sizes, slots)
    width = len(wire_of)
    table = np.full((len(rows), 4), -1, dtype=np.int32)
    for k, (kind, *args) in enumerate(rows):
        wires = [wire_of[a] for a in args]
        table[k, 0] = kind
        table[k, 3] = wires[-1]
        table[k, 1:1 + len(wires) - 1] = wires[:-1]
    registers = []
    for name, size in sizes.items():
        if name == FREE:
            continue
        role, interp = meta.get(name, (Role.ANCILLA, Interpretation.UNSIGNED))
        registers.append(Register(name, tuple(wire_of[(name, k)] for k in range(size)), role, interp))
    return Circuit(table, width, tuple(registers))


def _wire_table(sizes: dict[str, int], slots: dict[tuple[str, int], int]) -> dict[tuple[str, int], int]:
    """Global wire per ``(register, index)``: the comment map if complete, else declaration order."""
    every = [(name, k) for name, size in sizes.items() for k in range(size)]
    if slots:
        if set(slots) != set(every):
            raise QasmError("wire map comments do not cover the declared registers")
        if sorted(slots.values()) != list(range(len(every))):
            raise QasmError("wire map is not a permutation of 0..width-1")
        return dict(slots)
    return {key: w for w, key in enumerate(every)}


def load(fh: TextIO) -> Circuit:
    return loads(fh.read())


def gate_lines(text: str) -> Iterable[str]:
    return (ln for ln in text.splitlines() if ln.split(" ", 1)[0] in _GATES)
