# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled stepping kernel.

One iterative step writes, for each interface j (0-based weights), the new
left amplitude at node j and the new right amplitude at node j+1 from the same
two reads of the previous state, then overwrites the two prescribed boundary
slots.  The whole time loop lives here so per-step Python overhead never
touches the O(n*m) work, and it runs without the GIL so independent runs can
proceed concurrently.
"""


def run_steps(double[::1] v,
              const double[::1] r,
              const double[::1] left_in,
              const double[::1] right_in,
              const Py_ssize_t[::1] record_ks,
              double[:, ::1] out,
              double[::1] scratch):
    """Advance the interleaved state m steps, writing u rows at recorded steps.

    v is consumed as working storage (pass a copy); scratch must have the same
    length.  out has one row of n+1 field values per entry of record_ks, which
    must be sorted ascending within [0, m].
    """
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t m = left_in.shape[0]
    cdef Py_ssize_t nrec = record_ks.shape[0]
    cdef Py_ssize_t k, j, idx = 0
    cdef double a, b, rj
    cdef double* cur = &v[0]
    cdef double* nxt = &scratch[0]
    cdef double* tmp

    with nogil:
        if idx < nrec and record_ks[idx] == 0:
            for j in range(n + 1):
                out[idx, j] = cur[2 * j] + cur[2 * j + 1]
            idx += 1

        for k in range(m):
            for j in range(n):
                rj = r[j]
                a = cur[2 * j]
                b = cur[2 * j + 3]
                nxt[2 * j + 1] = rj * a + (1.0 - rj) * b
                nxt[2 * j + 2] = (1.0 + rj) * a - rj * b
            nxt[0] = left_in[k]
            nxt[2 * n + 1] = right_in[k]
            tmp = cur
            cur = nxt
            nxt = tmp
            if idx < nrec and record_ks[idx] == k + 1:
                for j in range(n + 1):
                    out[idx, j] = cur[2 * j] + cur[2 * j + 1]
                idx += 1
