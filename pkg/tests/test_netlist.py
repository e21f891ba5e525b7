import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revmult.blocks import build_cuccaro_adder
from revmult.netlist import (Circuit, CircuitBuilder, Gate, GateKind, Register, ResourceReport, Role, WireAllocator,
                             concat, count_resources, reverse, schedule_depth)
from revmult.sim import simulate


def gates_circuit(gates, width):
    return Circuit.from_gates([Gate(*g) for g in gates], width)


def random_circuit(rng, width, m):
    gates = []
    for _ in range(m):
        k = rng.randrange(3)
        w = rng.sample(range(width), k + 1)
        gates.append(Gate(GateKind(k), tuple(w[:-1]), w[-1]))
    return Circuit.from_gates(gates, width)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate(GateKind.TOFFOLI, (1, 1), 2)
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (3,), 3)
    with pytest.raises(ValueError):
        Gate(GateKind.CNOT, (0, 1), 2)


def test_register_rejects_repeats_and_collisions():
    with pytest.raises(ValueError):
        Register("a", (0, 0))
    with pytest.raises(ValueError):
        Circuit(np.zeros((0, 4)), 2, (Register("a", (0,)), Register("b", (0,))))
    with pytest.raises(ValueError):
        Circuit(np.zeros((0, 4)), 2, (Register("a", (0,)), Register("a", (1,))))


def test_reverse_trivial_cases():
    empty = Circuit(np.zeros((0, 4)), 3)
    assert len(reverse(empty)) == 0
    one = gates_circuit([(GateKind.TOFFOLI, (0, 1), 2)], 3)
    assert reverse(one).gates == one.gates


def test_reverse_round_trip_random_states():
    rng = random.Random(1)
    c = random_circuit(rng, 16, 200)
    r = reverse(c)
    for _ in range(1000):
        s = rng.getrandbits(16)
        assert simulate(r, simulate(c, s)) == s


def test_count_resources_examples():
    empty = count_resources(Circuit(np.zeros((0, 4)), 0))
    assert empty.counts() == (0, 0, 0) and empty.t_count == 0 and empty.toffoli_depth == 0
    c = gates_circuit([(GateKind.CNOT, (0,), 1), (GateKind.TOFFOLI, (0, 1), 2)], 3)
    rep = count_resources(c)
    assert (rep.cnot_count, rep.toffoli_count, rep.t_count) == (1, 1, 7)
    assert count_resources(build_cuccaro_adder(4).circuit).toffoli_count == 7


def test_schedule_depth_examples():
    chain = gates_circuit([(GateKind.TOFFOLI, (0, 1), 2), (GateKind.TOFFOLI, (2, 3), 4),
                           (GateKind.TOFFOLI, (4, 5), 6)], 7)
    assert schedule_depth(chain) == 3
    disjoint = gates_circuit([(GateKind.TOFFOLI, (0, 1), 2), (GateKind.TOFFOLI, (3, 4), 5),
                              (GateKind.TOFFOLI, (6, 7), 8)], 9)
    assert schedule_depth(disjoint) == 1
    cnots = gates_circuit([(GateKind.CNOT, (0,), 1)] * 5, 2)
    assert schedule_depth(cnots) == 0


def test_depth_counts_only_toffoli_layers():
    # layers: ccx(1), cx(2), ccx(3) -> two Toffoli layers
    c = gates_circuit([(GateKind.TOFFOLI, (0, 1), 2), (GateKind.CNOT, (2,), 3), (GateKind.TOFFOLI, (3, 4), 5)], 6)
    assert schedule_depth(c) == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 60))
def test_depth_bounded_by_count(seed, m):
    c = random_circuit(random.Random(seed), 8, m)
    rep = count_resources(c)
    assert rep.toffoli_depth <= rep.toffoli_count
    assert rep.t_count == 7 * rep.toffoli_count and rep.t_depth == 3 * rep.toffoli_depth


def test_concat_identities_and_composition():
    rng = random.Random(2)
    c = random_circuit(rng, 8, 30)
    empty = Circuit(np.zeros((0, 4)), 8)
    assert np.array_equal(concat(c, empty).table, c.table)
    assert np.array_equal(concat(empty, c, list(range(8))).table, c.table)
    a = build_cuccaro_adder(4).circuit
    b = build_cuccaro_adder(4).circuit.without_registers()
    ab = concat(a.without_registers(), b)
    for _ in range(100):
        s = rng.getrandbits(a.width)
        assert simulate(ab, s) == simulate(b, simulate(a, s))


def test_concat_errors():
    a = build_cuccaro_adder(2).circuit
    with pytest.raises(ValueError, match="injective"):
        concat(a, a.without_registers(), [0] * a.width)
    with pytest.raises(ValueError, match="collision"):
        concat(a, a)


def toffoli_only(rng, width, m):
    return Circuit.from_gates([Gate(GateKind.TOFFOLI, tuple(w[:2]), w[2])
                               for w in (rng.sample(range(width), 3) for _ in range(m))], width)


@pytest.mark.parametrize("seed", range(5))
def test_concat_disjoint_depth_is_max_and_counts_add(seed):
    rng = random.Random(seed)
    a, b = toffoli_only(rng, 6, 40), toffoli_only(rng, 6, 25)
    ab = concat(a, b, [w + 6 for w in range(6)])
    ra, rb, rab = count_resources(a), count_resources(b), count_resources(ab)
    assert rab.toffoli_depth == max(ra.toffoli_depth, rb.toffoli_depth)
    assert rab.counts() == tuple(x + y for x, y in zip(ra.counts(), rb.counts()))


def test_concat_disjoint_depth_with_cnot_layers_can_exceed_max():
    # Toffoli stages are counted on the shared ASAP layering, so CNOT layers on
    # one side can shift its Toffolis off the other side's Toffoli layers.
    a = gates_circuit([(GateKind.TOFFOLI, (0, 1), 2)], 3)
    b = gates_circuit([(GateKind.CNOT, (0,), 1), (GateKind.TOFFOLI, (0, 1), 2)], 3)
    ab = concat(a, b, [3, 4, 5])
    assert schedule_depth(a) == schedule_depth(b) == 1
    assert schedule_depth(ab) == 2
    rng = random.Random(3)
    a, b = random_circuit(rng, 6, 40), random_circuit(rng, 6, 25)
    ra, rb = count_resources(a), count_resources(b)
    rab = count_resources(concat(a, b, [w + 6 for w in range(6)]))
    assert max(ra.toffoli_depth, rb.toffoli_depth) <= rab.toffoli_depth <= ra.toffoli_depth + rb.toffoli_depth
    assert rab.counts() == tuple(x + y for x, y in zip(ra.counts(), rb.counts()))


def test_allocator_lowest_free_and_double_free():
    alloc = WireAllocator()
    assert alloc.allocate(3) == [0, 1, 2]
    alloc.free([1])
    assert alloc.allocate(2) == [1, 3]
    with pytest.raises(ValueError, match="double free"):
        alloc.free([0, 0])
    assert alloc.high_water == 4


def test_builder_halving_needs_claim():
    bld = CircuitBuilder()
    w = bld.allocate(2)
    with pytest.raises(ValueError):
        bld.claim_zero(w[0])


def test_builder_append_reversed():
    bld = CircuitBuilder()
    a = bld.allocate(3)
    bld.x(a[0])
    bld.cx(a[0], a[1])
    bld.ccx(a[0], a[1], a[2])
    bld.append_reversed(0)
    c = bld.build()
    for s in range(8):
        assert simulate(c, s) == s


def test_report_mapping():
    rep = ResourceReport.from_counts(5, 2, 1, 9, 3)
    assert (rep.t_count, rep.t_depth) == (35, 9)
    assert ResourceReport.from_counts(5, 2, 1, 9, None).t_depth is None


def test_roles_lookup():
    c = build_cuccaro_adder(3).circuit
    assert [r.name for r in c.registers_with_role(Role.INPUT)] == ["a"]
    with pytest.raises(KeyError):
        c.register("missing")
