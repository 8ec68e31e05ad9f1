"""Pure-Python kernels: the reference fallback when the compiled module is absent.

Sets of Psi indices are Python ints used as bitsets.  The public surface
(``ForestKernel``, ``brute_search``) matches ``_ckernels`` exactly, including
node accounting in ``brute_search`` so that budget errors are deterministic
across backends.
"""

from .errors import ResourceExceeded

NAME = "python"

_SUPPORT_CACHE_LIMIT = 1 << 16


def _row_masks(legal):
    masks = []
    for row in legal:
        m = 0
        for c, ok in enumerate(row):
            if ok:
                m |= 1 << c
        masks.append(m)
    return masks


def _split(ptr, idx):
    return [tuple(idx[ptr[j]:ptr[j + 1]]) for j in range(len(ptr) - 1)]


class ForestKernel:
    """Tree DP over a fixed forest plan and a fixed legal-pair matrix.

    ``plan`` provides CSR arrays over forest positions (post-order) and over
    the sorted FVS; see ``solver.ForestPlan``.
    """

    backend = NAME

    def __init__(self, plan, legal):
        self.P = len(legal)
        self.m = plan.m
        self.s = plan.s
        self.children = _split(plan.child_ptr, plan.child_idx)
        self.snbrs = _split(plan.snbr_ptr, plan.snbr_idx)
        self.sprev = _split(plan.sprev_ptr, plan.sprev_idx)
        self.roots = tuple(plan.roots)
        self.masks = _row_masks(legal)
        self.partners = [tuple(c2 for c2, ok in enumerate(row) if ok) for row in legal]
        self.full = (1 << self.P) - 1
        self._support = {}

    # -- h enumeration -----------------------------------------------------

    def _prefix_ok(self, prefix):
        masks = self.masks
        for j, c in enumerate(prefix):
            if not 0 <= c < self.P:
                return False
            for e in self.sprev[j]:
                if not masks[c] >> prefix[e] & 1:
                    return False
        return True

    def _colorings(self, prefix):
        """Proper colorings of the FVS extending ``prefix``, odometer order."""
        s = self.s
        if len(prefix) > s or not self._prefix_ok(prefix):
            return
        h = list(prefix) + [0] * (s - len(prefix))
        masks, full, sprev = self.masks, self.full, self.sprev

        def walk(j):
            if j == s:
                yield h
                return
            cand = full
            for e in sprev[j]:
                cand &= masks[h[e]]
            while cand:
                low = cand & -cand
                h[j] = low.bit_length() - 1
                cand ^= low
                yield from walk(j + 1)

        yield from walk(len(prefix))

    # -- decide ------------------------------------------------------------

    def _support_of(self, mask):
        sup = self._support.get(mask)
        if sup is None:
            sup = 0
            masks = self.masks
            rest = mask
            while rest:
                low = rest & -rest
                sup |= masks[low.bit_length() - 1]
                rest ^= low
            if len(self._support) > _SUPPORT_CACHE_LIMIT:
                self._support.clear()
            self._support[mask] = sup
        return sup

    def _tables_h(self, h, stop_on_empty):
        masks, full = self.masks, self.full
        rows = [0] * self.m
        for p in range(self.m):
            mask = full
            for t in self.snbrs[p]:
                mask &= masks[h[t]]
            for ch in self.children[p]:
                if not mask:
                    break
                mask &= self._support_of(rows[ch])
            if not mask and stop_on_empty:
                return None
            rows[p] = mask
        return rows

    def decide_prefix(self, prefix=()):
        for h in self._colorings(tuple(prefix)):
            if self._tables_h(h, True) is not None:
                return True
        return False

    def decide_table(self, h):
        """Rows of 0/1 per forest position, Psi order."""
        rows = self._tables_h(list(h), False)
        return [[r >> c & 1 for c in range(self.P)] for r in rows]

    # -- count -------------------------------------------------------------

    def _weights_h(self, h):
        P, masks, partners = self.P, self.masks, self.partners
        rows = [None] * self.m
        for p in range(self.m):
            mask = self.full
            for t in self.snbrs[p]:
                mask &= masks[h[t]]
            row = [mask >> c & 1 for c in range(P)]
            for ch in self.children[p]:
                crow = rows[ch]
                for c in range(P):
                    if row[c]:
                        row[c] *= sum(crow[c2] for c2 in partners[c])
            rows[p] = row
        return rows

    def count_prefix(self, prefix=(), modulus=0):
        """Colorings extending ``prefix``; reduced mod ``modulus`` when it is nonzero."""
        total = 0
        for h in self._colorings(tuple(prefix)):
            rows = self._weights_h(h)
            prod = 1
            for r in self.roots:
                prod *= sum(rows[r])
                if not prod:
                    break
            total += prod
        return total % modulus if modulus else total

    def count_table(self, h):
        return self._weights_h(list(h))


def brute_search(prev_ptr, prev_idx, legal, count_mode, budget):
    """Exhaustive backtracking over vertex -> Psi-index assignments.

    Vertex ``j`` of the search order must form a legal pair with every earlier
    neighbour listed in ``prev_idx[prev_ptr[j]:prev_ptr[j+1]]``.  The last
    vertex is counted without branching.  Returns ``(answer, nodes)`` where
    nodes counts successful placements.
    """
    n = len(prev_ptr) - 1
    P = len(legal)
    if n == 0:
        return (1 if count_mode else True), 0
    if P == 0:
        return (0 if count_mode else False), 0
    masks = _row_masks(legal)
    prev = _split(prev_ptr, prev_idx)
    full = (1 << P) - 1
    assign = [0] * n
    state = {"nodes": 0, "total": 0}

    def charge(amount):
        state["nodes"] += amount
        if state["nodes"] > budget:
            raise ResourceExceeded(f"oracle exceeded its budget of {budget} nodes")

    def walk(j):
        cand = full
        for e in prev[j]:
            cand &= masks[assign[e]]
        if j == n - 1:
            if count_mode:
                cnt = cand.bit_count()
                charge(cnt)
                state["total"] += cnt
                return False
            if cand:
                charge(1)
                return True
            return False
        while cand:
            low = cand & -cand
            assign[j] = low.bit_length() - 1
            cand ^= low
            charge(1)
            if walk(j + 1):
                return True
        return False

    found = walk(0)
    if count_mode:
        return state["total"], state["nodes"]
    return found, state["nodes"]
