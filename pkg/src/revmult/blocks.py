"""Reversible arithmetic blocks built on a :class:`CircuitBuilder`.

The ``*_into`` helpers emit gates into an existing builder and are what the
multipliers use. The ``build_*`` functions wrap one helper in a standalone
circuit with named registers, for testing and inspection.

Register conventions: every wire list is LSB first. The ripple adders use one
carry-in ancilla taken from the builder's allocator and returned clean.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .netlist import Circuit, CircuitBuilder, Register, Role

Wires = Sequence[int]


def _maj(bld: CircuitBuilder, c: int, b: int, a: int) -> None:
    bld.cx(a, b)
    bld.cx(a, c)
    bld.ccx(c, b, a)


def _uma(bld: CircuitBuilder, c: int, b: int, a: int) -> None:
    bld.ccx(c, b, a)
    bld.cx(a, c)
    bld.cx(c, b)


def add_into(bld: CircuitBuilder, a: Wires, b: Wires, carry_out: int | None = None) -> None:
    """Cuccaro ripple adder, ``b += a``; ``len(a) == len(b)``.

    With ``carry_out`` the overflow bit is XORed onto that wire and the block
    costs ``2n-1`` Toffolis and ``4n+1`` CNOTs. Without it the sum wraps mod
    ``2**n`` and the top MAJ/UMA pair collapses to two CNOTs (``2n-2`` Toffolis,
    ``4n-2`` CNOTs).
    """
    n = len(a)
    if n != len(b) or n == 0:
        raise ValueError(f"adder operands must have equal nonzero width, got {len(a)} and {len(b)}")
    (c,) = bld.allocate(1)
    carry = [c, *a[:-1]]
    for j in range(n - 1):
        _maj(bld, carry[j], b[j], a[j])
    top_c, top_b, top_a = carry[n - 1], b[n - 1], a[n - 1]
    if carry_out is None:
        bld.cx(top_a, top_b)
        bld.cx(top_c, top_b)
    else:
        bld.cx(top_a, top_b)
        bld.cx(top_a, top_c)
        bld.ccx(top_c, top_b, carry_out)
        bld.cx(top_a, carry_out)
        bld.cx(top_a, top_c)
        bld.cx(top_c, top_b)
    for j in reversed(range(n - 1)):
        _uma(bld, carry[j], b[j], a[j])
    bld.free([c])


def sub_into(bld: CircuitBuilder, a: Wires, b: Wires, borrow_out: int | None = None) -> None:
    """``b -= a`` as complement, add, complement. ``borrow_out`` receives ``[a > b]``."""
    for w in b:
        bld.x(w)
    add_into(bld, a, b, borrow_out)
    for w in b:
        bld.x(w)


def _fit(bld: CircuitBuilder, a: Wires, width: int) -> tuple[list[int], list[int]]:
    """Truncate or zero-extend ``a`` to ``width`` wires; returns (wires, borrowed ancillas)."""
    if len(a) >= width:
        return list(a[:width]), []
    ext = bld.allocate(width - len(a))
    return [*a, *ext], ext


def add_mod(bld: CircuitBuilder, a: Wires, b: Wires) -> None:
    """``b += a mod 2**len(b)``; ``a`` is truncated or zero-extended to fit."""
    wires, ext = _fit(bld, a, len(b))
    add_into(bld, wires, b)
    bld.free(ext)


def sub_mod(bld: CircuitBuilder, a: Wires, b: Wires) -> None:
    wires, ext = _fit(bld, a, len(b))
    sub_into(bld, wires, b)
    bld.free(ext)


def add_with_carry(bld: CircuitBuilder, a: Wires, b: Wires, carry_out: int) -> None:
    """``b += a`` with overflow into ``carry_out``; ``len(a) <= len(b)``."""
    if len(a) > len(b):
        raise ValueError("addend wider than accumulator")
    wires, ext = _fit(bld, a, len(b))
    add_into(bld, wires, b, carry_out)
    bld.free(ext)


def controlled_add_into(bld: CircuitBuilder, ctl: int, a: Wires, b: Wires, carry_out: int) -> None:
    """``(b, z) += ctl * a`` with exactly ``4n`` Toffolis and ``2n`` CNOTs.

    The CNOTs of the Cuccaro MAJ/UMA that write into ``b`` become Toffolis on
    ``ctl``; with ``ctl = 0`` the remaining gates cancel pairwise. The last UMA
    Toffoli is dropped because its carry-in control is the clean ancilla.
    """
    n = len(a)
    if n != len(b) or n == 0:
        raise ValueError(f"controlled adder operands must have equal nonzero width, got {len(a)} and {len(b)}")
    (c,) = bld.allocate(1)
    carry = [c, *a[:-1]]
    for j in range(n):
        bld.ccx(ctl, a[j], b[j])
        bld.cx(a[j], carry[j])
        bld.ccx(carry[j], b[j], a[j])
    bld.ccx(ctl, a[n - 1], carry_out)
    for j in reversed(range(n)):
        bld.ccx(carry[j], b[j], a[j])
        bld.cx(a[j], carry[j])
        if j:
            bld.ccx(ctl, carry[j], b[j])
    bld.free([c])


def copy_into(bld: CircuitBuilder, src: Wires, dst: Wires) -> None:
    """``dst ^= src`` bitwise; a copy when ``dst`` starts at 0."""
    if len(dst) < len(src):
        raise ValueError("copy target narrower than source")
    for s, d in zip(src, dst):
        bld.cx(s, d)


def conditional_negate(bld: CircuitBuilder, sign: int, v: Wires) -> None:
    """``v -> -v mod 2**len(v)`` when ``sign`` is 1: controlled complement, then ``+sign``."""
    for w in v:
        bld.cx(sign, w)
    add_mod(bld, [sign], v)


def shift_halve(bld: CircuitBuilder, wires: Wires) -> list[int]:
    """Divide an even register by two by dropping its LSB wire.

    The caller must have declared the value even via
    :meth:`CircuitBuilder.declare_even` at this exact point; the LSB is logged
    as a zero check and handed back to the allocator.
    """
    lsb = wires[0]
    bld.claim_zero(lsb)
    bld.free([lsb])
    return list(wires[1:])


# standalone blocks

@dataclass(frozen=True)
class BlockHandle:
    circuit: Circuit
    registers: dict[str, Register]

    def __getitem__(self, name: str) -> Register:
        return self.registers[name]


def _handle(bld: CircuitBuilder, name: str) -> BlockHandle:
    circ = bld.build(name)
    return BlockHandle(circ, {r.name: r for r in circ.registers})


def _check_width(width: int) -> None:
    if width < 1:
        raise ValueError(f"width must be >= 1, got {width}")


def build_cuccaro_adder(width: int) -> BlockHandle:
    """``(a, b, 0) -> (a, a+b mod 2**w, overflow)``; 2w-1 Toffolis."""
    _check_width(width)
    bld = CircuitBuilder()
    a, b, (z,) = bld.allocate(width), bld.allocate(width), bld.allocate(1)
    add_into(bld, a, b, z)
    bld.add_register("a", a, Role.INPUT)
    bld.add_register("b", b, Role.OUTPUT)
    bld.add_register("overflow", [z], Role.OUTPUT)
    bld.add_register("carry", [bld.alloc.high_water - 1], Role.ANCILLA)
    return _handle(bld, f"cuccaro_adder_{width}")


def build_subtractor(width: int) -> BlockHandle:
    """``(a, b, 0) -> (a, b-a mod 2**w, [a > b])``."""
    _check_width(width)
    bld = CircuitBuilder()
    a, b, (z,) = bld.allocate(width), bld.allocate(width), bld.allocate(1)
    sub_into(bld, a, b, z)
    bld.add_register("a", a, Role.INPUT)
    bld.add_register("b", b, Role.OUTPUT, "twos_complement")
    bld.add_register("borrow", [z], Role.OUTPUT)
    bld.add_register("carry", [bld.alloc.high_water - 1], Role.ANCILLA)
    return _handle(bld, f"subtractor_{width}")


def build_controlled_adder(width: int) -> BlockHandle:
    """``(ctl, a, b, 0) -> (ctl, a, b + ctl*a mod 2**w, overflow)``."""
    _check_width(width)
    bld = CircuitBuilder()
    (ctl,), a, b, (z,) = bld.allocate(1), bld.allocate(width), bld.allocate(width), bld.allocate(1)
    controlled_add_into(bld, ctl, a, b, z)
    bld.add_register("ctl", [ctl], Role.INPUT)
    bld.add_register("a", a, Role.INPUT)
    bld.add_register("b", b, Role.OUTPUT)
    bld.add_register("overflow", [z], Role.OUTPUT)
    bld.add_register("carry", [bld.alloc.high_water - 1], Role.ANCILLA)
    return _handle(bld, f"controlled_adder_{width}")


def build_copy(width: int) -> BlockHandle:
    _check_width(width)
    bld = CircuitBuilder()
    src, dst = bld.allocate(width), bld.allocate(width)
    copy_into(bld, src, dst)
    bld.add_register("src", src, Role.INPUT)
    bld.add_register("dst", dst, Role.OUTPUT)
    return _handle(bld, f"copy_{width}")


def build_conditional_negate(width: int) -> BlockHandle:
    """``(sign, v) -> (sign, -v mod 2**w if sign else v)``."""
    _check_width(width)
    bld = CircuitBuilder()
    (sign,), v = bld.allocate(1), bld.allocate(width)
    conditional_negate(bld, sign, v)
    bld.add_register("sign", [sign], Role.INPUT)
    bld.add_register("v", v, Role.OUTPUT, "twos_complement")
    spare = sorted(set(range(bld.alloc.high_water)) - {sign, *v})
    bld.add_register("anc", spare, Role.ANCILLA)
    return _handle(bld, f"conditional_negate_{width}")
