#!/usr/bin/env python3
"""Reference vectors for the Philox4x64-10 block cipher used by the RNG module.

NumPy's Philox bit generator wraps the same 4x64-10 network but advances the
counter before producing a block, so numpy's first block for counter c equals
the raw bijection applied to c+1 (increment carried into higher words). The
values printed here are frozen into tests/test_rng.cpp.
"""
import numpy as np

MASK = (1 << 64) - 1


def raw_block(counter, key):
    """philox4x64_10(counter, key) via numpy, compensating the pre-increment."""
    c = list(counter)
    # subtract 1 with borrow so numpy's internal pre-increment lands on `counter`
    for i in range(4):
        if c[i] == 0:
            c[i] = MASK
        else:
            c[i] = c[i] - 1
            break
    bg = np.random.Philox(counter=np.array(c, dtype=np.uint64),
                          key=np.array(key, dtype=np.uint64))
    return [int(v) for v in bg.random_raw(4)]


CASES = [
    ((0, 0, 0, 0), (0, 0)),
    ((1, 0, 0, 0), (0, 0)),
    ((0, 0, 0, 0), (0xDEADBEEF, 0x12345678)),
    ((42, 7, 3, 1), (0x9E3779B97F4A7C15, 0)),
    ((MASK, MASK, MASK, MASK), (MASK, MASK)),
]

for ctr, key in CASES:
    out = raw_block(ctr, key)
    print("ctr={" + ", ".join(f"0x{v:016x}" for v in ctr) + "}",
          "key={" + ", ".join(f"0x{v:016x}" for v in key) + "}")
    print("  -> {" + ", ".join(f"0x{v:016x}ull" for v in out) + "}")
