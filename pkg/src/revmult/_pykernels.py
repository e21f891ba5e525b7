"""Pure-Python kernels; used when the compiled extension is unavailable.

The simulator is bit-sliced: each wire becomes one Python int whose bit ``j``
is that wire's value in test vector ``j``.
"""
import numpy as np


def simulate(table, state, start=0, stop=None):
    width, nwords = state.shape
    nbytes = nwords * 8
    rows = [int.from_bytes(state[w].tobytes(), "little") for w in range(width)]
    ones = (1 << (nbytes * 8)) - 1
    for k, c0, c1, t in table[start:stop].tolist():
        if k == 2:
            rows[t] ^= rows[c0] & rows[c1]
        elif k == 1:
            rows[t] ^= rows[c0]
        else:
            rows[t] ^= ones
    for w in range(width):
        state[w] = np.frombuffer(rows[w].to_bytes(nbytes, "little"), dtype=np.uint64)


def toffoli_depth(table, width):
    last = [0] * width
    stages = set()
    for k, c0, c1, t in table.tolist():
        if k == 2:
            layer = max(last[c0], last[c1], last[t]) + 1
            last[c0] = last[c1] = last[t] = layer
            stages.add(layer)
        elif k == 1:
            layer = max(last[c0], last[t]) + 1
            last[c0] = last[t] = layer
        else:
            last[t] += 1
    return len(stages)
