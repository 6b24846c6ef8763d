"""Pure-NumPy stepping kernel, used when the compiled extension is absent.

Mirrors _kernels.run_steps operation for operation (same multiply/add order),
so both backends produce bit-identical fields.
"""

import numpy as np


def run_steps(v, r, left_in, right_in, record_ks, out, scratch):
    """Advance the interleaved state m steps, writing u rows at recorded steps."""
    n = len(r)
    m = len(left_in)
    rp = 1.0 + r
    rm = 1.0 - r
    cur, nxt = v, scratch
    idx = 0

    if idx < len(record_ks) and record_ks[idx] == 0:
        np.add(cur[0::2], cur[1::2], out=out[idx])
        idx += 1

    for k in range(m):
        a = cur[0 : 2 * n : 2]
        b = cur[3::2]
        nxt[1 : 2 * n + 1 : 2] = r * a + rm * b
        nxt[2 : 2 * n + 2 : 2] = rp * a - r * b
        nxt[0] = left_in[k]
        nxt[2 * n + 1] = right_in[k]
        cur, nxt = nxt, cur
        if idx < len(record_ks) and record_ks[idx] == k + 1:
            np.add(cur[0::2], cur[1::2], out=out[idx])
            idx += 1
