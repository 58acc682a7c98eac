"""Format-aware supermatrices over ParamScalar.

A format is the ordered tuple of row/column parities (0 even, 1 odd).
Standard format: all evens then all odds; alternating: 0,1,0,1,...
Matrix units E_ij carry parity p_i + p_j; the bracket of supermatrices is
the supercommutator with the Sign Rule.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import ParamScalar, scalar_from_json, scalar_to_json

EVEN, ODD, MIXED = "even", "odd", "mixed"


class Format:
    __slots__ = ("parities",)

    def __init__(self, parities):
        parities = tuple(int(p) % 2 for p in parities)
        if not parities:
            raise ValueError("empty format")
        self.parities = parities

    @staticmethod
    def purely_even(n: int) -> "Format":
        return Format((0,) * n)

    @staticmethod
    def standard(n_even: int, n_odd: int) -> "Format":
        return Format((0,) * n_even + (1,) * n_odd)

    @staticmethod
    def alternating(size: int, start=0) -> "Format":
        return Format(tuple((start + i) % 2 for i in range(size)))

    def __len__(self):
        return len(self.parities)

    def __eq__(self, other):
        return isinstance(other, Format) and self.parities == other.parities

    def __hash__(self):
        return hash(self.parities)

    def superdim(self):
        n1 = sum(self.parities)
        return (len(self.parities) - n1, n1)

    def __repr__(self):
        return "Format(%s)" % (self.parities,)


def _zero():
    return ParamScalar.zero()


class SuperMatrix:
    """Dense square-or-rectangular matrix of ParamScalar with a format."""

    __slots__ = ("format", "rows")

    def __init__(self, fmt: Format, rows):
        self.format = fmt
        n = len(fmt)
        self.rows = [
            [c if isinstance(c, ParamScalar) else ParamScalar(c) for c in row]
            for row in rows
        ]
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError("matrix shape does not match format size %d" % n)

    # -- constructors ----------------------------------------------------
    @staticmethod
    def zeros(fmt: Format) -> "SuperMatrix":
        n = len(fmt)
        return SuperMatrix(fmt, [[_zero()] * n for _ in range(n)])

    @staticmethod
    def identity(fmt: Format) -> "SuperMatrix":
        m = SuperMatrix.zeros(fmt)
        for i in range(len(fmt)):
            m.rows[i][i] = ParamScalar.one()
        return m

    @staticmethod
    def unit(fmt: Format, i: int, j: int, coeff=1) -> "SuperMatrix":
        """Matrix unit E_ij, 1-based indices as in the tables."""
        m = SuperMatrix.zeros(fmt)
        m.rows[i - 1][j - 1] = ParamScalar(coeff)
        return m

    def copy(self) -> "SuperMatrix":
        return SuperMatrix(self.format, [list(r) for r in self.rows])

    # -- linear structure --------------------------------------------------
    def _check(self, other):
        if self.format != other.format:
            raise ValueError("format mismatch")

    def __add__(self, other):
        self._check(other)
        return SuperMatrix(
            self.format,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __neg__(self):
        return SuperMatrix(self.format, [[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SuperMatrix":
        c = c if isinstance(c, ParamScalar) else ParamScalar(c)
        return SuperMatrix(self.format, [[c * a for a in r] for r in self.rows])

    def __mul__(self, other):
        self._check(other)
        n = len(self.format)
        out = [[_zero() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            row = self.rows[i]
            for k in range(n):
                c = row[k]
                if c.is_zero():
                    continue
                orow = other.rows[k]
                trow = out[i]
                for j in range(n):
                    if not orow[j].is_zero():
                        trow[j] = trow[j] + c * orow[j]
        return SuperMatrix(self.format, out)

    def __eq__(self, other):
        return (
            isinstance(other, SuperMatrix)
            and self.format == other.format
            and self.rows == other.rows
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for r in self.rows for c in r)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(c) for c in r) + "]" for r in self.rows)

    __repr__ = __str__

    # -- parity ------------------------------------------------------------
    def parity(self) -> str:
        ps = set()
        p = self.format.parities
        for i, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if not c.is_zero():
                    ps.add((p[i] + p[j]) % 2)
        if len(ps) == 2:
            return MIXED
        if not ps or ps == {0}:
            return EVEN
        return ODD

    def parity_part(self, parity: int) -> "SuperMatrix":
        p = self.format.parities
        out = SuperMatrix.zeros(self.format)
        for i, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if (p[i] + p[j]) % 2 == parity:
                    out.rows[i][j] = c
        return out


def supertranspose(m: SuperMatrix) -> SuperMatrix:
    """(A^st)_ij = (-1)^((p_i+p_j)(p_i+p(A))) A_ji; parity-homogeneous input."""
    pm = m.parity()
    if pm == MIXED:
        raise ValueError("supertranspose of a mixed-parity matrix; split first")
    pa = 0 if pm == EVEN else 1
    p = m.format.parities
    out = SuperMatrix.zeros(m.format)
    for i in range(len(p)):
        for j in range(len(p)):
            sign = -1 if ((p[i] + p[j]) * (p[i] + pa)) % 2 else 1
            c = m.rows[j][i]
            out.rows[i][j] = c if sign == 1 else -c
    return out


def supertrace(m: SuperMatrix) -> ParamScalar:
    acc = ParamScalar.zero()
    for i, p in enumerate(m.format.parities):
        acc = acc + (-m.rows[i][i] if p else m.rows[i][i])
    return acc


def matrix_bracket(a: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    """[A, B] = AB - (-1)^(p(A)p(B)) BA, bilinear over parity parts."""
    pa, pb = a.parity(), b.parity()
    if pa == MIXED or pb == MIXED:
        out = SuperMatrix.zeros(a.format)
        for ac in (a.parity_part(0), a.parity_part(1)):
            for bc in (b.parity_part(0), b.parity_part(1)):
                if ac.is_zero() or bc.is_zero():
                    continue
                out = out + matrix_bracket(ac, bc)
        return out
    if pa == ODD and pb == ODD:
        return a * b + b * a
    return a * b - b * a


# ---------------------------------------------------------------------------
# Determinant (fraction-free Bareiss over the polynomial numerators) and
# Berezinian.

def _det(rows) -> ParamScalar:
    """Determinant of a list-of-lists of ParamScalar (Bareiss after clearing
    denominators column-wise would be overkill; we run Bareiss directly over
    the fraction field, which stays exact and keeps intermediate entries
    reduced)."""
    n = len(rows)
    if n == 0:
        return ParamScalar.one()
    m = [list(r) for r in rows]
    sign = 1
    prev = ParamScalar.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ParamScalar.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev
            m[i][k] = ParamScalar.zero()
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign == 1 else -d


def _inverse(rows):
    """Inverse via Gauss-Jordan; returns None if singular."""
    n = len(rows)
    m = [list(r) + [ParamScalar.one() if i == j else ParamScalar.zero() for j in range(n)]
         for i, r in enumerate(rows)]
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
    return [r[n:] for r in m]


def berezinian(m: SuperMatrix) -> ParamScalar:
    """Ber(A B; D E) = det(A - B E^-1 D) det(E)^-1 in block form.

    The matrix must be even; any format is accepted (rows and columns are
    regrouped into the even and odd blocks first).
    """
    if m.parity() == ODD or m.parity() == MIXED:
        raise ValueError("Berezinian requires an even matrix")
    p = m.format.parities
    ev = [i for i, q in enumerate(p) if q == 0]
    od = [i for i, q in enumerate(p) if q == 1]
    A = [[m.rows[i][j] for j in ev] for i in ev]
    B = [[m.rows[i][j] for j in od] for i in ev]
    D = [[m.rows[i][j] for j in ev] for i in od]
    E = [[m.rows[i][j] for j in od] for i in od]
    if od:
        det_e = _det(E)
        if det_e.is_zero():
            raise ValueError("odd-odd block is singular")
        e_inv = _inverse(E)
        # A - B E^-1 D
        k, n = len(od), len(ev)
        BEinv = [[sum((B[i][s] * e_inv[s][j] for s in range(k)), ParamScalar.zero())
                  for j in range(k)] for i in range(n)]
        S = [[A[i][j] - sum((BEinv[i][s] * D[s][j] for s in range(k)), ParamScalar.zero())
              for j in range(n)] for i in range(n)]
        return _det(S) / det_e
    return _det(A)


def form_preservation_residual(x: SuperMatrix, b: SuperMatrix) -> SuperMatrix:
    """X^st B + (-1)^(p(X)p(B)) B X; zero iff X lies in aut(B)."""
    if len(x.format) != len(b.format):
        raise ValueError("shape mismatch")
    px = x.parity()
    pb = b.parity()
    if px == MIXED:
        raise ValueError("X must be parity-homogeneous")
    nx = 0 if px == EVEN else 1
    nb = 0 if pb == EVEN else 1
    sign = -1 if (nx * nb) % 2 else 1
    bx = b * x
    return supertranspose(x) * b + (bx if sign == 1 else -bx)


# ---------------------------------------------------------------------------
# JSON

def matrix_to_json(m: SuperMatrix):
    return {
        "format": list(m.format.parities),
        "entries": [[scalar_to_json(c) for c in row] for row in m.rows],
    }


def matrix_from_json(obj) -> SuperMatrix:
    fmt = Format(obj["format"])
    rows = [[scalar_from_json(c) for c in row] for row in obj["entries"]]
    return SuperMatrix(fmt, rows)
