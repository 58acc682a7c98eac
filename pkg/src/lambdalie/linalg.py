"""Echelon-form linear algebra over ParamScalar dict-vectors.

Vectors are dicts {key: ParamScalar} over an arbitrary hashable key space;
an Echelon accumulates vectors and maintains reduced row-echelon form with
a deterministic pivot choice (smallest key under the supplied ordering).
Solving returns coordinates of a vector over previously inserted rows.
"""

from __future__ import annotations

from .scalars import ParamScalar


def vec_add(u, v, c=None):
    out = dict(u)
    for k, x in v.items():
        x = x if c is None else c * x
        s = out.get(k)
        s = s + x if s is not None else x
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_scale(u, c):
    if c.is_zero():
        return {}
    return {k: c * x for k, x in u.items()}


class Echelon:
    """Reduced echelon basis of dict-vectors.

    key_order: callable mapping a key to a sortable value; the pivot of a
    row is its minimal key under this order.
    """

    def __init__(self, key_order=None):
        self.key_order = key_order or (lambda k: k)
        self.rows = {}  # pivot key -> vector (normalized: pivot coeff 1)
        self.pivot_numerators = []  # for alpha-exclusion reporting

    def reduce(self, vec):
        """Fully reduce vec against the basis; returns the remainder.

        Rows are kept mutually reduced, so subtracting a pivot row never
        reintroduces another pivot key; one pass over the pivots present
        in vec suffices.
        """
        vec = dict(vec)
        for k in sorted(set(vec) & set(self.rows), key=self.key_order):
            if k in vec:
                vec = vec_add(vec, self.rows[k], -vec[k])
        return vec

    def insert(self, vec):
        """Reduce and insert; returns the pivot key or None if dependent."""
        vec = self.reduce(vec)
        if not vec:
            return None
        piv = min(vec, key=self.key_order)
        c = vec[piv]
        self.pivot_numerators.append(c)
        inv = ParamScalar.one() / c
        vec = vec_scale(vec, inv)
        # back-substitute into existing rows
        for p, row in list(self.rows.items()):
            if piv in row:
                self.rows[p] = vec_add(row, vec, -row[piv])
        self.rows[piv] = vec
        return piv

    def rank(self):
        return len(self.rows)

    def coordinates(self, vec, tags):
        """Express vec over rows tagged by `tags` (a dict pivot->tag filled
        by the caller at insert time).  Returns (coords, remainder)."""
        coords = {}
        vec = dict(vec)
        for k in sorted(set(vec) & set(self.rows), key=self.key_order):
            if k in vec:
                c = vec[k]
                coords[tags[k]] = c
                vec = vec_add(vec, self.rows[k], -c)
        return coords, vec


def solve_square(matrix, rhs):
    """Solve M x = rhs for a list-of-lists ParamScalar matrix; returns the
    solution list or None if singular."""
    n = len(matrix)
    m = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if not m[i][col].is_zero():
                piv = i
                break
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = ParamScalar.one() / m[col][col]
        m[col] = [c * inv for c in m[col]]
        for i in range(n):
            if i != col and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return [m[i][n] for i in range(n)]
