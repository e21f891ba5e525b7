"""Recursive reversible multipliers: Toom-2.5, Karatsuba and shift-add.

Every recursive builder works in *garbage mode*: ``_mul`` returns a fresh
register holding ``u*v`` and leaves its intermediates dirty. The top level
then copies the product out and runs the whole compute section backwards, so
uncomputation doubles the compute cost exactly once.

Toom-2.5 step on operands ``u`` (wider, split in three) and ``v`` (split in
two) with a common radix ``t = 2**i`` (see :func:`toom_radix`); the top limb of
each operand takes whatever bits remain::

    v = x1*t + x0            u = y2*t**2 + y1*t + y0
    P = x0*y0                S = x1*y2
    Q = (x0+x1)(y0+y1+y2)    R = (x0-x1)(y0-y1+y2)
    xy = S*t**3 + ((Q+R)/2 - P)*t**2 + ((Q-R)/2 - S)*t + P

``R`` is computed sign-magnitude: both differences are formed in two's
complement, their sign bits copied out, magnitudes restored by conditional
negation, and the unsigned product added or subtracted under the XOR of the
signs.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .blocks import (add_mod, add_with_carry, conditional_negate, controlled_add_into, copy_into,
                     shift_halve, sub_mod)
from .netlist import Circuit, CircuitBuilder, Role

METHODS = ("toom25", "karatsuba", "naive")
EVAL_POINT_SETS = ("zero_one_minusone_inf", "zero_one_two_inf")


@dataclass(frozen=True)
class MultiplierConfig:
    method: str = "toom25"
    base_threshold: int = 4
    eval_point_set: str = "zero_one_minusone_inf"
    uncompute: bool = True

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.base_threshold < 1:
            raise ValueError("base_threshold must be >= 1")
        if self.eval_point_set not in EVAL_POINT_SETS:
            raise ValueError(f"unknown eval_point_set {self.eval_point_set!r}")


@dataclass(frozen=True)
class LimbSplit:
    """Radix-``2**i`` split of an ``n``-bit operand into ``parts`` limbs.

    The low ``parts-1`` limbs hold ``i`` bits each (fewer, or none, if ``n``
    runs out); the top limb holds the remaining bits, which may exceed ``i``.
    ``padded_widths`` gives every limb at least ``i`` bits.
    """

    n: int
    parts: int
    i: int

    @property
    def widths(self) -> tuple[int, ...]:
        out, left = [], self.n
        for _ in range(self.parts - 1):
            w = min(self.i, left)
            out.append(w)
            left -= w
        out.append(left)
        return tuple(out)

    @property
    def padded_widths(self) -> tuple[int, ...]:
        return tuple(max(w, self.i) for w in self.widths)

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(k * self.i for k in range(self.parts))

    def slices(self, wires):
        return [list(wires[o:o + w]) for o, w in zip(self.offsets, self.widths)]

    def limbs(self, value: int) -> tuple[int, ...]:
        return tuple((value >> o) & ((1 << w) - 1) for o, w in zip(self.offsets, self.widths))

    def reassemble(self, limbs) -> int:
        return sum(l << o for l, o in zip(limbs, self.offsets))


def decompose(n: int, parts: int) -> LimbSplit:
    if n < 1:
        raise ValueError("operand width must be >= 1")
    if parts not in (2, 3):
        raise ValueError("parts must be 2 or 3")
    return LimbSplit(n, parts, -(-n // parts))


@dataclass
class RecursionLog:
    """One entry per ``_mul`` call: (depth, len(u), len(v), kind, parent index)."""

    nodes: list[tuple[int, int, int, str, int]] = field(default_factory=list)

    def add(self, depth, a, b, kind, parent) -> int:
        self.nodes.append((depth, a, b, kind, parent))
        return len(self.nodes) - 1

    def children(self, index: int) -> list[int]:
        return [k for k, node in enumerate(self.nodes) if node[4] == index]

    def calls_at_depth(self, depth: int) -> int:
        return sum(1 for node in self.nodes if node[0] == depth)


@dataclass(frozen=True)
class ProductTerms:
    """Wires of one Toom-2.5 node, valid just before its assembly (gate ``position``).

    ``two`` is the 2-split operand (limbs x0, x1), ``three`` the 3-split one
    (y0, y1, y2). ``r_mag`` and ``r_sign`` encode R sign-magnitude.
    """

    node: int
    position: int
    i: int
    two: tuple[int, ...]
    three: tuple[int, ...]
    p: tuple[int, ...]
    q: tuple[int, ...]
    r_mag: tuple[int, ...]
    r_sign: int
    s: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]

    def expected(self, two: int, three: int) -> dict[str, int]:
        """Integer values each register must hold for operand values ``two``, ``three``."""
        t = 1 << self.i
        x0, x1 = two % t, two >> self.i
        y0, y1, y2 = three % t, (three >> self.i) % t, three >> (2 * self.i)
        return {
            "p": x0 * y0,
            "q": (x0 + x1) * (y0 + y1 + y2),
            "r": (x0 - x1) * (y0 - y1 + y2),
            "s": x1 * y2,
            "b": x1 * y1 + x0 * y2,
            "c": x0 * y1 + x1 * y0,
        }


class _Ctx:
    def __init__(self, bld: CircuitBuilder, cfg: MultiplierConfig):
        self.bld = bld
        self.cfg = cfg
        self.log = RecursionLog()
        self.sign_wires: list[int] = []
        self.terms: list[ProductTerms] = []


# applicability of the split steps

def _limbs_fit(a: int, b: int, i: int) -> bool:
    return a >= 2 * i + 1 and b >= i + 1


def toom_radix(a: int, b: int) -> int:
    """Radix exponent for a Toom-2.5 step; ``a`` is the 3-split operand.

    Both operands share one radix. ``ceil(a/3)`` alone leaves the 2-split top
    limb twice the radix on square nodes; nudging the radix toward ``b/2``
    (up to ``9b/25``) cuts the Toffoli count while square nodes still get
    four recursive children whose own splits recurse, so the 16-way
    two-level shape holds at n = 36 and 216.
    """
    base = -(-a // 3)
    i = max(base, -(-9 * b // 25))
    return i if _limbs_fit(a, b, i) else base


def toom_applies(a: int, b: int, threshold: int, slack: int = 3) -> bool:
    """``slack`` bounds the width growth of the widest child (Q, or R2 for the
    {0, 1, 2, inf} points) so the recursion always shrinks."""
    i = toom_radix(a, b)
    mx = max(i, b - i)
    return min(a, b) > threshold and _limbs_fit(a, b, i) and mx + i + slack < a + b


def karatsuba_applies(a: int, b: int, threshold: int) -> bool:
    i = -(-max(a, b) // 2)
    return min(a, b) > threshold and a > i and b > i and 2 * i + 2 < a + b


def step_kind(method: str, a: int, b: int, threshold: int,
              eval_point_set: str = "zero_one_minusone_inf") -> str:
    """Which construction ``_mul`` uses for a ``(len(u), len(v)) = (a, b)`` node."""
    if method == "toom25":
        three, two = (a, b) if a > b else (b, a)
        slack = 5 if eval_point_set == "zero_one_two_inf" else 3
        return "toom25" if toom_applies(three, two, threshold, slack) else "naive"
    if method == "karatsuba":
        return "karatsuba" if karatsuba_applies(a, b, threshold) else "naive"
    return "naive"


# construction

def naive_into(bld: CircuitBuilder, u, v, out) -> None:
    """Shift-add product into the all-zero ``out`` (``len(u)+len(v)`` wires).

    Control bits come from the narrower operand (``v`` on ties); the first
    partial product is written with plain Toffolis, the rest with controlled
    adders whose overflow lands in the next, still-zero, output bit.
    """
    add, ctl = (u, v) if len(u) >= len(v) else (v, u)
    m = len(add)
    for j in range(m):
        bld.ccx(ctl[0], add[j], out[j])
    for k in range(1, len(ctl)):
        controlled_add_into(bld, ctl[k], add, out[k:k + m], out[k + m])


def _mul(ctx: _Ctx, u, v, depth: int = 0, parent: int = -1) -> list[int]:
    cfg = ctx.cfg
    kind = step_kind(cfg.method, len(u), len(v), cfg.base_threshold, cfg.eval_point_set)
    node = ctx.log.add(depth, len(u), len(v), kind, parent)
    if kind == "naive":
        out = ctx.bld.allocate(len(u) + len(v))
        naive_into(ctx.bld, u, v, out)
        return out
    if kind == "karatsuba":
        return _karatsuba_step(ctx, u, v, depth, node)
    if cfg.eval_point_set == "zero_one_two_inf":
        return _toom_step_positive(ctx, u, v, depth, node)
    return _toom_step(ctx, u, v, depth, node)


def _toom_operands(u, v):
    three, two = (u, v) if len(u) > len(v) else (v, u)
    i = toom_radix(len(three), len(two))
    x0, x1 = LimbSplit(len(two), 2, i).slices(two)
    y0, y1, y2 = LimbSplit(len(three), 3, i).slices(three)
    return i, x0, x1, y0, y1, y2


def _sum2(bld, p, q) -> list[int]:
    """Fresh register ``p + q`` one bit wider than the wider operand."""
    hi, lo = (p, q) if len(p) >= len(q) else (q, p)
    reg = bld.allocate(len(hi) + 1)
    copy_into(bld, hi, reg)
    add_with_carry(bld, lo, reg[:-1], reg[-1])
    return reg


def _signed_magnitude(ctx: _Ctx, reg) -> tuple[list[int], int]:
    """Split a two's complement register into (magnitude wires, sign wire)."""
    bld = ctx.bld
    (sign,) = bld.allocate(1)
    ctx.sign_wires.append(sign)
    bld.cx(reg[-1], sign)
    conditional_negate(bld, sign, reg)
    return reg[:-1], sign


def build_signed_sub_multiply(ctx: _Ctx, x0, x1, e, y1, depth: int, parent: int):
    """``R = (x0 - x1) * (e - y1)`` as a two's complement register.

    Returns ``(|R| wires, sign wire)``; the caller applies the sign while
    accumulating ``Q + R`` and ``Q - R``.
    """
    bld = ctx.bld
    mx = max(len(x0), len(x1))
    xd = bld.allocate(mx + 1)
    copy_into(bld, x0, xd)
    sub_mod(bld, x1, xd)
    xm, sx = _signed_magnitude(ctx, xd)
    yd = bld.allocate(len(e) + 1)
    copy_into(bld, e, yd)
    sub_mod(bld, y1, yd)
    ym, sy = _signed_magnitude(ctx, yd)
    mag = _mul(ctx, xm, ym, depth + 1, parent)
    (r,) = bld.allocate(1)
    ctx.sign_wires.append(r)
    bld.cx(sx, r)
    bld.cx(sy, r)
    return mag, r


def _signed_add(bld: CircuitBuilder, r: int, mag, acc, flip: bool) -> None:
    """``acc += (-1)**(r ^ flip) * mag mod 2**len(acc)``.

    Subtraction is ``~(~acc + mag)``, so the sign only steers two CNOT fans
    around a plain adder and no negated copy of ``mag`` is ever formed.
    """
    for w in acc:
        bld.cx(r, w)
        if flip:
            bld.x(w)
    add_mod(bld, mag, acc)
    for w in acc:
        bld.cx(r, w)
        if flip:
            bld.x(w)


def _toom_step(ctx: _Ctx, u, v, depth: int, node: int) -> list[int]:
    bld = ctx.bld
    i, x0, x1, y0, y1, y2 = _toom_operands(u, v)
    total = len(u) + len(v)

    xs = _sum2(bld, x0, x1)
    e = _sum2(bld, y0, y2)                      # y0 + y2, shared by both evaluations
    ys = bld.allocate(len(e) + 1)
    copy_into(bld, e, ys)
    add_with_carry(bld, y1, ys[:-1], ys[-1])

    p = _mul(ctx, x0, y0, depth + 1, node)
    q = _mul(ctx, xs, ys, depth + 1, node)
    mag, r = build_signed_sub_multiply(ctx, x0, x1, e, y1, depth, node)
    s = _mul(ctx, x1, y2, depth + 1, node)

    # R = (-1)**r * mag; Q+R and Q-R are in [0, 2Q], so one guard bit suffices
    width = len(q) + 1
    up = bld.allocate(width)
    copy_into(bld, q, up)
    _signed_add(bld, r, mag, up, flip=False)
    vp = bld.allocate(width)
    copy_into(bld, q, vp)
    _signed_add(bld, r, mag, vp, flip=True)
    bld.declare_even(up)
    bld.declare_even(vp)
    b_coef = shift_halve(bld, up)
    c_coef = shift_halve(bld, vp)
    sub_mod(bld, p, b_coef)                     # B = (Q+R)/2 - P
    sub_mod(bld, s, c_coef)                     # C = (Q-R)/2 - S

    three, two = (u, v) if len(u) > len(v) else (v, u)
    ctx.terms.append(ProductTerms(node, bld.mark(), i, tuple(two), tuple(three), tuple(p), tuple(q),
                                  tuple(mag), r, tuple(s), tuple(b_coef), tuple(c_coef)))
    return _assemble(bld, total, i, p, c_coef, b_coef, s)


def _toom_step_positive(ctx: _Ctx, u, v, depth: int, node: int) -> list[int]:
    """Toom-2.5 evaluated at {0, 1, 2, inf}: no signed values, one extra shift."""
    bld = ctx.bld
    i, x0, x1, y0, y1, y2 = _toom_operands(u, v)
    total = len(u) + len(v)

    xs = _sum2(bld, x0, x1)
    x2 = bld.allocate(max(len(x0), len(x1) + 1) + 1)      # x0 + 2*x1
    copy_into(bld, x0, x2)
    add_mod(bld, x1, x2[1:])
    e = _sum2(bld, y0, y2)
    ys = bld.allocate(len(e) + 1)
    copy_into(bld, e, ys)
    add_with_carry(bld, y1, ys[:-1], ys[-1])
    y2p = bld.allocate(i + 3)                              # y0 + 2*y1 + 4*y2
    copy_into(bld, y0, y2p)
    add_mod(bld, y1, y2p[1:])
    add_mod(bld, y2, y2p[2:])

    p = _mul(ctx, x0, y0, depth + 1, node)
    q = _mul(ctx, xs, ys, depth + 1, node)
    r2 = _mul(ctx, x2, y2p, depth + 1, node)
    s = _mul(ctx, x1, y2, depth + 1, node)

    # 2B = R2 + P - 2Q - 6S
    width = len(r2) + 1
    ev = bld.allocate(width)
    copy_into(bld, r2, ev)
    add_mod(bld, p, ev)
    sub_mod(bld, q, ev[1:])
    sub_mod(bld, s, ev[1:])
    sub_mod(bld, s, ev[2:])
    bld.declare_even(ev)
    b_coef = shift_halve(bld, ev)
    # C = Q - P - S - B, in place on Q
    sub_mod(bld, p, q)
    sub_mod(bld, s, q)
    sub_mod(bld, b_coef, q)
    return _assemble(bld, total, i, p, q, b_coef, s)


def _assemble(bld: CircuitBuilder, total: int, i: int, p, c_coef, b_coef, s) -> list[int]:
    """``out = S*t**3 + B*t**2 + C*t + P``: place P and S by copy, add C and B in place."""
    out = bld.allocate(total)
    copy_into(bld, p, out)
    copy_into(bld, s, out[3 * i:])
    add_mod(bld, c_coef, out[i:])
    add_mod(bld, b_coef, out[2 * i:])
    return out


def _karatsuba_step(ctx: _Ctx, u, v, depth: int, node: int) -> list[int]:
    bld = ctx.bld
    i = -(-max(len(u), len(v)) // 2)
    x0, x1 = list(u[:i]), list(u[i:])
    y0, y1 = list(v[:i]), list(v[i:])
    total = len(u) + len(v)

    xs = _sum2(bld, x0, x1)
    ys = _sum2(bld, y0, y1)
    p = _mul(ctx, x0, y0, depth + 1, node)
    q = _mul(ctx, xs, ys, depth + 1, node)
    s = _mul(ctx, x1, y1, depth + 1, node)
    sub_mod(bld, p, q)                           # middle = Q - P - S >= 0
    sub_mod(bld, s, q)

    out = bld.allocate(total)
    copy_into(bld, p, out)
    copy_into(bld, s, out[2 * i:])
    add_mod(bld, q, out[i:])
    return out


def _finish(ctx: _Ctx, x, y, prod, out, name: str, **meta) -> Circuit:
    bld = ctx.bld
    named = set(x) | set(y) | set(out)
    bld.add_register("x", x, Role.INPUT)
    bld.add_register("y", y, Role.INPUT)
    bld.add_register("out", out, Role.OUTPUT)
    rest_role = Role.ANCILLA if ctx.cfg.uncompute else Role.GARBAGE
    signs = sorted(set(ctx.sign_wires)) if ctx.cfg.uncompute else []
    if signs:
        bld.add_register("sign", signs, Role.SIGN)
    rest = sorted(set(range(bld.alloc.high_water)) - named - set(signs))
    if rest:
        bld.add_register("anc" if ctx.cfg.uncompute else "garbage", rest, rest_role)
    return bld.build(name, recursion=ctx.log, terms=tuple(ctx.terms), **meta)


def build_multiplier(n: int, cfg: MultiplierConfig | None = None) -> Circuit:
    """``(x, y, 0...) -> (x, y, 0..., x*y)`` on ``n``-bit operands and a ``2n``-bit output.

    With ``cfg.uncompute`` false the intermediates stay dirty:
    ``(x, y, 0, 0) -> (x, y, g, x*y)``.
    """
    cfg = cfg or MultiplierConfig()
    if n < 1:
        raise ValueError(f"operand width must be >= 1, got {n}")
    bld = CircuitBuilder()
    ctx = _Ctx(bld, cfg)
    x, y = bld.allocate(n), bld.allocate(n)
    name = f"{cfg.method}_{n}"
    if cfg.method == "naive":
        out = bld.allocate(2 * n)
        ctx.log.add(0, n, n, "naive", -1)
        naive_into(bld, x, y, out)
        return _finish(ctx, x, y, out, out, name, method=cfg.method, n=n)
    if not cfg.uncompute:
        prod = _mul(ctx, x, y)
        return _finish(ctx, x, y, prod, prod, name, method=cfg.method, n=n)
    out = bld.allocate(2 * n)
    start = bld.mark()
    prod = _mul(ctx, x, y)
    stop = bld.mark()
    copy_into(bld, prod, out)
    bld.append_reversed(start, stop)
    return _finish(ctx, x, y, prod, out, name, method=cfg.method, n=n)


def build_toom25(n: int, cfg: MultiplierConfig | None = None) -> Circuit:
    return build_multiplier(n, dataclasses.replace(cfg or MultiplierConfig(), method="toom25"))


def build_karatsuba(n: int, cfg: MultiplierConfig | None = None) -> Circuit:
    return build_multiplier(n, dataclasses.replace(cfg or MultiplierConfig(), method="karatsuba"))


def build_naive(n: int, cfg: MultiplierConfig | None = None) -> Circuit:
    return build_multiplier(n, dataclasses.replace(cfg or MultiplierConfig(), method="naive"))


BUILDERS = {"toom25": build_toom25, "karatsuba": build_karatsuba, "naive": build_naive}
