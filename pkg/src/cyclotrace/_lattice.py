"""Integer matrix diagonalization over Z, for lattice-level exactness checks.

Matrices are sparse: a list of ``{column: value}`` row dicts.  Only a
diagonal form ``U A W`` with unimodular ``U``, ``W`` is produced, which is
enough to read off the rank and whether every elementary divisor is 1
(the product of the |diagonal entries| equals the product of the
elementary divisors).
"""


def diagonalize(rows: list, ncols: int) -> list:
    """Return the nonzero diagonal entries of a unimodular diagonalization."""
    rows = [dict(r) for r in rows if r]
    diag = []
    while True:
        rows = [r for r in rows if r]
        if not rows:
            return diag
        # smallest |entry| as pivot keeps the Euclidean reduction short
        pi, pc = min(
            ((i, c) for i, r in enumerate(rows) for c in r),
            key=lambda ic: (abs(rows[ic[0]][ic[1]]), ic),
        )
        while True:
            pv = rows[pi][pc]
            changed = False
            # clear the pivot column with row operations
            for i, r in enumerate(rows):
                if i == pi or pc not in r:
                    continue
                q = r[pc] // pv
                if q:
                    for c, v in rows[pi].items():
                        nv = r.get(c, 0) - q * v
                        if nv:
                            r[c] = nv
                        else:
                            r.pop(c, None)
                if pc in r:  # remainder smaller than pivot: swap roles
                    pi, changed = i, True
                    break
            if changed:
                continue
            # clear the pivot row with column operations
            prow = rows[pi]
            for c in [c for c in prow if c != pc]:
                q = prow[c] // pv
                if q:
                    for r in rows:
                        if pc in r:
                            nv = r.get(c, 0) - q * r[pc]
                            if nv:
                                r[c] = nv
                            else:
                                r.pop(c, None)
                if c in prow:
                    pc, changed = c, True
                    break
            if not changed:
                break
        diag.append(rows[pi][pc])
        del rows[pi]


def rank_and_unimodular(rows: list, ncols: int) -> tuple:
    """``(rank, all elementary divisors are 1)``."""
    d = diagonalize(rows, ncols)
    return len(d), all(abs(x) == 1 for x in d)


def mat_mul(a: list, b: list) -> list:
    """Sparse product of row-dict matrices ``a @ b``."""
    out = []
    for r in a:
        acc = {}
        for k, v in r.items():
            for c, w in b[k].items():
                acc[c] = acc.get(c, 0) + v * w
        out.append({c: v for c, v in acc.items() if v})
    return out
