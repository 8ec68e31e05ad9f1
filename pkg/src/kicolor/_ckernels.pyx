# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same surface as ``_pykernels``.

Decision work runs without the GIL.  Counting uses 64-bit accumulators with
overflow detection and raises ``OverflowError`` on overflow.  Passing a
nonzero ``modulus`` (below 2^62) to ``count_prefix`` instead returns the count
reduced modulo it, which never overflows; the caller rebuilds the exact value
from several such residues.
"""

from libc.stdint cimport uint8_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset

import numpy as np

from .errors import ResourceExceeded

NAME = "cython"

ctypedef unsigned long long u64

cdef extern from *:
    """
    static inline int kc_mul_ovf(unsigned long long a, unsigned long long b, unsigned long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int kc_add_ovf(unsigned long long a, unsigned long long b, unsigned long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static inline unsigned long long kc_mulmod(unsigned long long a, unsigned long long b, unsigned long long m) {
        return (unsigned long long)(((unsigned __int128)a * b) % m);
    }
    """
    int kc_mul_ovf(u64 a, u64 b, u64 *r) noexcept nogil
    u64 kc_mulmod(u64 a, u64 b, u64 m) noexcept nogil
    int kc_add_ovf(u64 a, u64 b, u64 *r) noexcept nogil


cdef int* _ints(seq) except NULL:
    cdef Py_ssize_t n = len(seq), j
    cdef int* out = <int*>malloc((n if n > 0 else 1) * sizeof(int))
    if out == NULL:
        raise MemoryError()
    for j in range(n):
        out[j] = seq[j]
    return out


cdef uint8_t* _legal_copy(legal, int P) except NULL:
    cdef const uint8_t[:, ::1] view
    cdef uint8_t* out = <uint8_t*>malloc((<size_t>P * P if P > 0 else 1))
    if out == NULL:
        raise MemoryError()
    if P > 0:
        view = np.ascontiguousarray(legal, dtype=np.uint8)
        memcpy(out, &view[0, 0], <size_t>P * P)
    return out


cdef class ForestKernel:
    cdef readonly int m, P, s
    cdef int ntrees
    cdef int* child_ptr
    cdef int* child_idx
    cdef int* snbr_ptr
    cdef int* snbr_idx
    cdef int* sprev_ptr
    cdef int* sprev_idx
    cdef int* roots
    cdef int* part_ptr
    cdef int* part_idx
    cdef uint8_t* legal

    backend = NAME

    def __cinit__(self, plan, legal):
        cdef int c, c2
        self.P = len(legal)
        self.m = plan.m
        self.s = plan.s
        self.ntrees = len(plan.roots)
        self.child_ptr = _ints(plan.child_ptr)
        self.child_idx = _ints(plan.child_idx)
        self.snbr_ptr = _ints(plan.snbr_ptr)
        self.snbr_idx = _ints(plan.snbr_idx)
        self.sprev_ptr = _ints(plan.sprev_ptr)
        self.sprev_idx = _ints(plan.sprev_idx)
        self.roots = _ints(plan.roots)
        self.legal = _legal_copy(legal, self.P)
        ptr = [0]
        idx = []
        for c in range(self.P):
            for c2 in range(self.P):
                if self.legal[<size_t>c * self.P + c2]:
                    idx.append(c2)
            ptr.append(len(idx))
        self.part_ptr = _ints(ptr)
        self.part_idx = _ints(idx)

    def __dealloc__(self):
        free(self.child_ptr)
        free(self.child_idx)
        free(self.snbr_ptr)
        free(self.snbr_idx)
        free(self.sprev_ptr)
        free(self.sprev_idx)
        free(self.roots)
        free(self.part_ptr)
        free(self.part_idx)
        free(self.legal)

    # -- helpers -------------------------------------------------------------

    cdef bint _fits(self, const int* h, int j) noexcept nogil:
        cdef int t
        cdef size_t base = <size_t>h[j] * self.P
        for t in range(self.sprev_ptr[j], self.sprev_ptr[j + 1]):
            if not self.legal[base + h[self.sprev_idx[t]]]:
                return False
        return True

    cdef int* _load(self, prefix, int* plen) except NULL:
        cdef int j
        cdef int* h = <int*>malloc((self.s if self.s > 0 else 1) * sizeof(int))
        if h == NULL:
            raise MemoryError()
        plen[0] = len(prefix)
        for j in range(plen[0]):
            h[j] = prefix[j]
        return h

    cdef bint _prefix_ok(self, const int* h, int plen) noexcept nogil:
        cdef int j
        if plen > self.s:
            return False
        for j in range(plen):
            if h[j] < 0 or h[j] >= self.P or not self._fits(h, j):
                return False
        return True

    cdef void _compat(self, const int* h, int p, uint8_t* row) noexcept nogil:
        cdef int t, c, P = self.P
        cdef const uint8_t* lrow
        memset(row, 1, P)
        for t in range(self.snbr_ptr[p], self.snbr_ptr[p + 1]):
            lrow = self.legal + <size_t>h[self.snbr_idx[t]] * P
            for c in range(P):
                row[c] &= lrow[c]

    # -- decide --------------------------------------------------------------

    cdef bint _tables_h(self, const int* h, uint8_t* M, int* buf, bint stop_on_empty) noexcept nogil:
        cdef int p, t, c, c2, j, ch, alive, P = self.P
        cdef uint8_t* row
        cdef const uint8_t* crow
        cdef const uint8_t* lrow
        cdef bint ok, nonempty
        for p in range(self.m):
            row = M + <size_t>p * P
            self._compat(h, p, row)
            for t in range(self.child_ptr[p], self.child_ptr[p + 1]):
                ch = self.child_idx[t]
                crow = M + <size_t>ch * P
                alive = 0
                for c2 in range(P):
                    if crow[c2]:
                        buf[alive] = c2
                        alive += 1
                for c in range(P):
                    if row[c]:
                        lrow = self.legal + <size_t>c * P
                        ok = False
                        for j in range(alive):
                            if lrow[buf[j]]:
                                ok = True
                                break
                        if not ok:
                            row[c] = 0
            if stop_on_empty:
                nonempty = False
                for c in range(P):
                    if row[c]:
                        nonempty = True
                        break
                if not nonempty:
                    return False
        return True

    cdef bint _decide_from(self, int* h, int plen, uint8_t* M, int* buf) noexcept nogil:
        cdef int depth, s = self.s
        if plen == s:
            return self._tables_h(h, M, buf, True)
        depth = plen
        h[depth] = -1
        while depth >= plen:
            h[depth] += 1
            if h[depth] >= self.P:
                depth -= 1
                continue
            if not self._fits(h, depth):
                continue
            if depth == s - 1:
                if self._tables_h(h, M, buf, True):
                    return True
            else:
                depth += 1
                h[depth] = -1
        return False

    def decide_prefix(self, prefix=()):
        cdef int plen
        cdef bint result = False
        cdef int* h = self._load(prefix, &plen)
        cdef uint8_t* M = <uint8_t*>malloc(<size_t>(self.m if self.m > 0 else 1) * (self.P if self.P > 0 else 1))
        cdef int* buf = <int*>malloc((self.P if self.P > 0 else 1) * sizeof(int))
        try:
            if M == NULL or buf == NULL:
                raise MemoryError()
            with nogil:
                if self._prefix_ok(h, plen):
                    result = self._decide_from(h, plen, M, buf)
            return bool(result)
        finally:
            free(h)
            free(M)
            free(buf)

    def decide_table(self, h_seq):
        cdef int plen
        cdef int* h = self._load(h_seq, &plen)
        cdef int* buf = <int*>malloc((self.P if self.P > 0 else 1) * sizeof(int))
        out = np.zeros((self.m, self.P), dtype=np.uint8)
        cdef uint8_t[:, ::1] view = out
        try:
            if buf == NULL:
                raise MemoryError()
            if self.m > 0 and self.P > 0:
                self._tables_h(h, &view[0, 0], buf, False)
            return out.tolist()
        finally:
            free(h)
            free(buf)

    # -- count ---------------------------------------------------------------

    cdef int _weights_h(self, const int* h, u64* W, uint8_t* crow_buf, u64 mod) noexcept nogil:
        """Fill W; return 1 on 64-bit overflow (never happens when ``mod`` is nonzero)."""
        cdef int p, t, c, j, ch, P = self.P
        cdef u64* row
        cdef const u64* crow
        cdef u64 acc
        for p in range(self.m):
            row = W + <size_t>p * P
            self._compat(h, p, crow_buf)
            for c in range(P):
                row[c] = crow_buf[c]
            for t in range(self.child_ptr[p], self.child_ptr[p + 1]):
                ch = self.child_idx[t]
                crow = W + <size_t>ch * P
                for c in range(P):
                    if not row[c]:
                        continue
                    acc = 0
                    if mod:
                        for j in range(self.part_ptr[c], self.part_ptr[c + 1]):
                            acc += crow[self.part_idx[j]]
                            if acc >= mod:
                                acc -= mod
                        row[c] = kc_mulmod(row[c], acc, mod)
                        continue
                    for j in range(self.part_ptr[c], self.part_ptr[c + 1]):
                        if kc_add_ovf(acc, crow[self.part_idx[j]], &acc):
                            return 1
                    if kc_mul_ovf(row[c], acc, &row[c]):
                        return 1
        return 0

    cdef int _count_h(self, const int* h, u64* W, uint8_t* crow_buf, u64 mod, u64* out) noexcept nogil:
        cdef int r, c, P = self.P
        cdef u64 prod = 1, tree
        cdef const u64* row
        if self._weights_h(h, W, crow_buf, mod):
            return 1
        for r in range(self.ntrees):
            row = W + <size_t>self.roots[r] * P
            tree = 0
            if mod:
                for c in range(P):
                    tree += row[c]
                    if tree >= mod:
                        tree -= mod
                prod = kc_mulmod(prod, tree, mod)
            else:
                for c in range(P):
                    if kc_add_ovf(tree, row[c], &tree):
                        return 1
                if kc_mul_ovf(prod, tree, &prod):
                    return 1
            if prod == 0:
                break
        out[0] = prod
        return 0

    cdef int _count_from(self, int* h, int plen, u64* W, uint8_t* crow_buf, u64 mod, u64* total) noexcept nogil:
        cdef int depth, s = self.s
        cdef u64 one
        total[0] = 0
        if plen == s:
            return self._count_h(h, W, crow_buf, mod, total)
        depth = plen
        h[depth] = -1
        while depth >= plen:
            h[depth] += 1
            if h[depth] >= self.P:
                depth -= 1
                continue
            if not self._fits(h, depth):
                continue
            if depth == s - 1:
                if self._count_h(h, W, crow_buf, mod, &one):
                    return 1
                if mod:
                    total[0] += one
                    if total[0] >= mod:
                        total[0] -= mod
                elif kc_add_ovf(total[0], one, total):
                    return 1
            else:
                depth += 1
                h[depth] = -1
        return 0

    def count_prefix(self, prefix=(), modulus=0):
        cdef int plen, status = 0
        cdef u64 total = 0
        cdef u64 mod = modulus
        if mod >= (<u64>1 << 62):
            raise ValueError("modulus must be below 2**62")
        cdef int* h = self._load(prefix, &plen)
        cdef u64* W = <u64*>malloc(<size_t>(self.m if self.m > 0 else 1) * (self.P if self.P > 0 else 1) * sizeof(u64))
        cdef uint8_t* crow_buf = <uint8_t*>malloc(self.P if self.P > 0 else 1)
        try:
            if W == NULL or crow_buf == NULL:
                raise MemoryError()
            with nogil:
                if self._prefix_ok(h, plen):
                    status = self._count_from(h, plen, W, crow_buf, mod, &total)
            if status:
                raise OverflowError("count exceeds 64 bits")
            return int(total)
        finally:
            free(h)
            free(W)
            free(crow_buf)

    def count_table(self, h_seq):
        cdef int plen, p, c, status
        cdef int* h = self._load(h_seq, &plen)
        cdef u64* W = <u64*>malloc(<size_t>(self.m if self.m > 0 else 1) * (self.P if self.P > 0 else 1) * sizeof(u64))
        cdef uint8_t* crow_buf = <uint8_t*>malloc(self.P if self.P > 0 else 1)
        try:
            if W == NULL or crow_buf == NULL:
                raise MemoryError()
            status = self._weights_h(h, W, crow_buf, 0)
            if status:
                raise OverflowError("count exceeds 64 bits")
            return [[int(W[<size_t>p * self.P + c]) for c in range(self.P)] for p in range(self.m)]
        finally:
            free(h)
            free(W)
            free(crow_buf)


cdef int _brute(int n, int P, const int* prev_ptr, const int* prev_idx, const uint8_t* legal,
                bint count_mode, long long budget, long long* nodes, u64* total, bint* found,
                int* assign) noexcept nogil:
    """Return 1 when the node budget is exceeded."""
    cdef int depth = 0, c, t, cnt
    cdef bint ok
    assign[0] = -1
    while depth >= 0:
        if depth == n - 1:
            cnt = 0
            for c in range(P):
                ok = True
                for t in range(prev_ptr[depth], prev_ptr[depth + 1]):
                    if not legal[<size_t>c * P + assign[prev_idx[t]]]:
                        ok = False
                        break
                if ok:
                    cnt += 1
                    if not count_mode:
                        break
            nodes[0] += cnt
            if nodes[0] > budget:
                return 1
            if count_mode:
                total[0] += cnt
            elif cnt:
                found[0] = True
                return 0
            depth -= 1
            continue
        assign[depth] += 1
        if assign[depth] >= P:
            depth -= 1
            continue
        ok = True
        for t in range(prev_ptr[depth], prev_ptr[depth + 1]):
            if not legal[<size_t>assign[depth] * P + assign[prev_idx[t]]]:
                ok = False
                break
        if not ok:
            continue
        nodes[0] += 1
        if nodes[0] > budget:
            return 1
        depth += 1
        assign[depth] = -1
    return 0


def brute_search(prev_ptr, prev_idx, legal, count_mode, budget):
    cdef int n = len(prev_ptr) - 1
    cdef int P = len(legal)
    cdef long long nodes = 0, cap = budget
    cdef u64 total = 0
    cdef bint found = False, cm = bool(count_mode)
    cdef int status
    if n == 0:
        return (1 if count_mode else True), 0
    if P == 0:
        return (0 if count_mode else False), 0
    cdef int* pp = _ints(prev_ptr)
    cdef int* pi = _ints(prev_idx)
    cdef uint8_t* lg = _legal_copy(legal, P)
    cdef int* assign = <int*>malloc(n * sizeof(int))
    try:
        if assign == NULL:
            raise MemoryError()
        with nogil:
            status = _brute(n, P, pp, pi, lg, cm, cap, &nodes, &total, &found, assign)
        if status:
            raise ResourceExceeded(f"oracle exceeded its budget of {budget} nodes")
        if count_mode:
            return int(total), int(nodes)
        return bool(found), int(nodes)
    finally:
        free(pp)
        free(pi)
        free(lg)
        free(assign)
