"""Free Lie (super)algebra tools: Lyndon-basis utilities, a filtered
nilpotent-quotient engine for finite presentations, and construction of a
finite-dimensional Lie (super)algebra from an invertible Cartan matrix.

Presentation engine: works degree by degree in the generator-count
filtration.  The degree-d layer is presented by bracket symbols [b_i, b_j]
of lower basis elements, subject to graded Jacobi rows and to single
bracket instances [c, g] of the presentation relations with deg c +
deg g = d (single brackets span the ideal).  A row that reduces to a
combination of existing basis elements signals a retroactive collapse;
the build restarts with that combination appended as an extra relation,
which then gets imposed at its own (strictly smaller) degree.

Cartan-matrix builder: realizes the positive and negative halves as
bracket trees of simple generators, pairs them through the contravariant
form on a generic-weight Verma model over the free half, and quotients by
the radical of that pairing.  Structure constants come out of linear
solves against the per-root Gram matrices.  The construction is
self-checked: the output table must satisfy the graded Jacobi identity.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .linalg import Echelon, solve_square, vec_add, vec_scale
from .scalars import ParamScalar

ONE = ParamScalar.one()
ZERO = ParamScalar.zero()


# ---------------------------------------------------------------------------
# Lyndon words (plain free Lie algebra; used for bases and cross-checks)

def lyndon_words(k: int, max_deg: int):
    """Lyndon words over 0..k-1 of length <= max_deg (Duval), sorted by
    (length, lex)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m <= max_deg:
            out.append(tuple(w))
        while len(w) < max_deg:
            w.append(w[-m])
        while w and w[-1] == k - 1:
            w.pop()
    return sorted(out, key=lambda t: (len(t), t))


def _is_lyndon(w):
    return all(w < w[i:] for i in range(1, len(w)))


def standard_bracketing(word):
    """Standard bracketing of a Lyndon word: split at the longest proper
    Lyndon suffix."""
    if len(word) == 1:
        return word[0]
    best = None
    for i in range(1, len(word)):
        if _is_lyndon(word[i:]):
            best = i
            break
    return (standard_bracketing(word[:best]), standard_bracketing(word[best:]))


def tree_leaves(tree):
    if isinstance(tree, int):
        yield tree
    else:
        yield from tree_leaves(tree[0])
        yield from tree_leaves(tree[1])


def tree_parity(tree, parities):
    return sum(parities[i] for i in tree_leaves(tree)) % 2


def tree_expand(tree, parities=None):
    """Associative expansion of a bracket tree; returns ({word: coeff},
    parity).  Koszul sign from [u, v] = uv - (-1)^(p(u)p(v)) vu."""
    if isinstance(tree, int):
        return {(tree,): ONE}, (parities[tree] if parities else 0)
    u, pu = tree_expand(tree[0], parities)
    v, pv = tree_expand(tree[1], parities)
    sgn = -1 if (pu * pv) % 2 else 1
    out = {}
    for w1, c1 in u.items():
        for w2, c2 in v.items():
            c = c1 * c2
            w = w1 + w2
            s = out.get(w, ZERO) + c
            out[w] = s
            w = w2 + w1
            s = out.get(w, ZERO) - (c if sgn == 1 else -c)
            out[w] = s
    return {w: c for w, c in out.items() if not c.is_zero()}, (pu + pv) % 2


def lyndon_coordinates(assoc):
    """Coordinates of an (even) Lie element, given by its associative
    expansion, in the Lyndon basis; triangular greedy extraction."""
    coords = {}
    rem = dict(assoc)
    while rem:
        w = min(rem)
        if not _is_lyndon(w):
            raise ValueError("not a Lie element: leading word %r" % (w,))
        c = rem[w]
        coords[w] = c
        exp, _ = tree_expand(standard_bracketing(w))
        for ww, cc in exp.items():
            s = rem.get(ww, ZERO) - c * cc
            if s.is_zero():
                rem.pop(ww, None)
            else:
                rem[ww] = s
    return coords


def free_lie_dimension(k: int, deg: int) -> int:
    """Witt formula (necklace count) for the plain free Lie algebra."""
    from math import gcd

    def mobius(n):
        out, p, nn = 1, 2, n
        while p * p <= nn:
            if nn % p == 0:
                nn //= p
                if nn % p == 0:
                    return 0
                out = -out
            p += 1
        if nn > 1:
            out = -out
        return out

    total = 0
    for d in range(1, deg + 1):
        if deg % d == 0:
            total += mobius(deg // d) * k ** d
    return total // deg


# ---------------------------------------------------------------------------
# Structure-constant Lie superalgebras

class StructAlgebra:
    """Finite-dimensional Lie superalgebra with explicit structure constants.

    table[(i, j)] for i <= j holds [b_i, b_j] as a coordinate dict; (j, i)
    follows from super-antisymmetry.  Diagonal entries are stored only for
    odd basis elements.
    """

    def __init__(self, labels, parities, table):
        self.labels = list(labels)
        self.parities = list(parities)
        self.table = table

    @property
    def dim(self):
        return len(self.labels)

    def superdim(self):
        odd = sum(self.parities)
        return (self.dim - odd, odd)

    def element(self, coords) -> "StructElement":
        clean = {}
        for i, c in coords.items():
            c = c if isinstance(c, ParamScalar) else ParamScalar(c)
            if not c.is_zero():
                clean[i] = c
        return StructElement(self, clean)

    def basis_element(self, i) -> "StructElement":
        return StructElement(self, {i: ONE})

    def zero(self) -> "StructElement":
        return StructElement(self, {})

    def pair_bracket(self, i, j):
        if i < j or (i == j and self.parities[i]):
            return self.table.get((i, j), {})
        if i == j:
            return {}
        sign = -1 if (self.parities[i] * self.parities[j]) % 2 else 1
        base = self.table.get((j, i), {})
        return {k: (c if sign == -1 else -c) for k, c in base.items()}

    def check_jacobi(self, triples=None):
        """Graded Jacobi over the table; returns failing triples."""
        n = self.dim
        bad = []
        rng = triples if triples is not None else itertools.product(range(n), repeat=3)
        for i, j, k in rng:
            bi, bj, bk = (self.basis_element(x) for x in (i, j, k))
            lhs = bi.bracket(bj.bracket(bk))
            m1 = bi.bracket(bj).bracket(bk)
            sgn = -1 if (self.parities[i] * self.parities[j]) % 2 else 1
            m2 = bj.bracket(bi.bracket(bk))
            rhs = m1 + (m2 if sgn == 1 else m2.scale(ParamScalar(-1)))
            if not (lhs - rhs).is_zero():
                bad.append((i, j, k))
        return bad


class StructElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        self.algebra = algebra
        self.coords = coords

    def __add__(self, other):
        return StructElement(self.algebra, vec_add(self.coords, other.coords))

    def __sub__(self, other):
        return StructElement(self.algebra, vec_add(self.coords, other.coords, ParamScalar(-1)))

    def scale(self, c):
        c = c if isinstance(c, ParamScalar) else ParamScalar(c)
        return StructElement(self.algebra, vec_scale(self.coords, c))

    def is_zero(self):
        return not self.coords

    def __eq__(self, other):
        return isinstance(other, StructElement) and self.coords == other.coords

    def parity(self):
        ps = {self.algebra.parities[i] for i in self.coords}
        if len(ps) == 2:
            return "mixed"
        return "odd" if ps == {1} else "even"

    def bracket(self, other) -> "StructElement":
        out = {}
        alg = self.algebra
        for i, ci in self.coords.items():
            for j, cj in other.coords.items():
                c = ci * cj
                for k, f in alg.pair_bracket(i, j).items():
                    s = out.get(k, ZERO) + c * f
                    if s.is_zero():
                        out.pop(k, None)
                    else:
                        out[k] = s
        return StructElement(alg, out)

    def __str__(self):
        if not self.coords:
            return "0"
        return " + ".join(
            "(%s)*%s" % (c, self.algebra.labels[i]) for i, c in sorted(self.coords.items())
        )

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Finite presentations: filtered nilpotent-quotient engine

class PresentationReport:
    def __init__(self, dims_even, dims_odd, stabilized, cutoff, n_relations,
                 max_rel_degree, restarts=0):
        self.dims_even = dims_even
        self.dims_odd = dims_odd
        self.stabilized = stabilized
        self.cutoff = cutoff
        self.n_relations = n_relations
        self.max_rel_degree = max_rel_degree
        self.restarts = restarts

    @property
    def total(self):
        return sum(self.dims_even.values()) + sum(self.dims_odd.values())

    def superdim(self):
        return (sum(self.dims_even.values()), sum(self.dims_odd.values()))

    def as_dict(self):
        degs = sorted(set(self.dims_even) | set(self.dims_odd))
        return {
            "dims_by_degree": {
                str(d): [self.dims_even.get(d, 0), self.dims_odd.get(d, 0)] for d in degs
            },
            "superdim": list(self.superdim()),
            "total": self.total,
            "stabilized": self.stabilized,
            "cutoff": self.cutoff,
            "relations": self.n_relations,
            "max_relation_degree": self.max_rel_degree,
            "restarts": self.restarts,
        }


def word_degree(w):
    if isinstance(w, str):
        return 1
    return word_degree(w[0]) + word_degree(w[1])


class _Retro(Exception):
    def __init__(self, relation):
        self.relation = relation


class _QuotientBuild:
    def __init__(self, generators, parities, relations, cutoff):
        self.gen_names = list(generators)
        self.gen_parities = list(parities)
        self.relations = relations
        self.cutoff = cutoff
        self.deg = []
        self.par = []
        self.word = []
        self.gen_index = {}
        self.table = {}

    # -- element algebra on the completed part ------------------------------
    def _pair_lookup(self, i, j):
        if i < j or (i == j and self.par[i]):
            return self.table[(i, j)]
        if i == j:
            return {}
        sign = -1 if (self.par[i] * self.par[j]) % 2 else 1
        return {k: (c if sign == -1 else -c) for k, c in self.table[(j, i)].items()}

    def _bracket(self, e1, e2, live_d, cand_rows):
        """Bracket of coordinate dicts.  Pairs with degree sum live_d are
        emitted as candidate keys ("C", i, j); lower pairs use the table."""
        out = {}

        def add(key, c):
            s = out.get(key, ZERO) + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s

        for i, ci in e1.items():
            for j, cj in e2.items():
                c = ci * cj
                dd = self.deg[i] + self.deg[j]
                if dd > live_d:
                    raise AssertionError("degree overflow in staged bracket")
                if dd == live_d:
                    if i == j and self.par[i] == 0:
                        continue
                    if i <= j:
                        add(("C", i, j), c)
                    else:
                        sign = -1 if (self.par[i] * self.par[j]) % 2 else 1
                        add(("C", j, i), -c if sign == 1 else c)
                else:
                    for k, f in self._pair_lookup(i, j).items():
                        add(k, c * f)
        return out

    def _eval_word(self, w, live_d):
        if isinstance(w, str):
            if w not in self.gen_index:
                raise KeyError("unresolved generator %r" % w)
            return {self.gen_index[w]: ONE}
        e1 = self._eval_word(w[0], live_d)
        e2 = self._eval_word(w[1], live_d)
        return self._bracket(e1, e2, live_d, None)

    # -- staged build --------------------------------------------------------
    def run(self):
        for name, p in zip(self.gen_names, self.gen_parities):
            self.gen_index[name] = len(self.deg)
            self.deg.append(1)
            self.par.append(p)
            self.word.append(name)
        dims_even = {1: sum(1 for p in self.par if p == 0)}
        dims_odd = {1: sum(1 for p in self.par if p == 1)}
        for d in range(2, self.cutoff + 1):
            ne, no = self._stage(d)
            dims_even[d] = ne
            dims_odd[d] = no
        return dims_even, dims_odd

    def _stage(self, d):
        n = len(self.deg)
        candidates = [
            (i, j)
            for i in range(n)
            for j in range(i, n)
            if self.deg[i] + self.deg[j] == d and not (i == j and self.par[i] == 0)
        ]
        rows = []
        # graded Jacobi
        for i in range(n):
            for j in range(i, n):
                dij = self.deg[i] + self.deg[j]
                for k in range(n):
                    if dij + self.deg[k] != d:
                        continue
                    rows.append(self._jacobi_row(i, j, k, d))
        # relation instances [c, g] with deg c + maxdeg g = d (c empty ok)
        for rel in self.relations:
            mdeg = max(word_degree(w) for _, w in rel)
            if mdeg == d:
                rows.append(self._relation_row(rel, None, d))
            elif mdeg < d:
                for c in range(n):
                    if self.deg[c] + mdeg == d:
                        rows.append(self._relation_row(rel, c, d))

        def key_order(k):
            if isinstance(k, tuple) and k[0] == "C":
                return (0, k[1], k[2])
            return (1, -self.deg[k], -k)

        ech = Echelon(key_order)
        for row in rows:
            piv = ech.insert(row)
            if piv is not None and not (isinstance(piv, tuple) and piv[0] == "C"):
                fullrow = ech.rows[piv]
                retro = [(c, self.word[k]) for k, c in fullrow.items()]
                raise _Retro(retro)

        new_even = new_odd = 0
        resolved = {}
        for (i, j) in candidates:
            key = ("C", i, j)
            parity = (self.par[i] + self.par[j]) % 2
            if key in ech.rows:
                resolved[(i, j)] = {kk: -c for kk, c in ech.rows[key].items() if kk != key}
            else:
                idx = len(self.deg)
                self.deg.append(d)
                self.par.append(parity)
                self.word.append((self.word[i], self.word[j]))
                resolved[(i, j)] = {idx: ONE}
                if parity == 0:
                    new_even += 1
                else:
                    new_odd += 1

        def flatten(expr):
            out = {}
            for kk, c in expr.items():
                if isinstance(kk, tuple) and kk[0] == "C":
                    for k2, c2 in resolved[(kk[1], kk[2])].items():
                        if isinstance(k2, tuple):
                            raise AssertionError("unflattened candidate chain")
                        s = out.get(k2, ZERO) + c * c2
                        if s.is_zero():
                            out.pop(k2, None)
                        else:
                            out[k2] = s
                else:
                    s = out.get(kk, ZERO) + c
                    if s.is_zero():
                        out.pop(kk, None)
                    else:
                        out[kk] = s
            return out

        # resolve pivot candidates first (their rows may reference free ones)
        for (i, j) in candidates:
            self.table[(i, j)] = flatten(resolved[(i, j)])
        return new_even, new_odd

    def _jacobi_row(self, i, j, k, d):
        bi, bj, bk = {i: ONE}, {j: ONE}, {k: ONE}
        jk = self._bracket(bj, bk, d, None)
        lhs = self._bracket(bi, jk, d, None)
        ij = self._bracket(bi, bj, d, None)
        m1 = self._bracket(ij, bk, d, None)
        ik = self._bracket(bi, bk, d, None)
        m2 = self._bracket(bj, ik, d, None)
        sgn = -1 if (self.par[i] * self.par[j]) % 2 else 1
        row = dict(lhs)
        row = vec_add(row, m1, ParamScalar(-1))
        row = vec_add(row, m2, ParamScalar(-sgn))
        return row

    def _relation_row(self, rel, c_idx, d):
        row = {}
        for coeff, w in rel:
            term = self._eval_word(w, d)
            if c_idx is not None:
                term = self._bracket({c_idx: ONE}, term, d, None)
            row = vec_add(row, term, coeff)
        return row


def presentation_quotient(generators, parities, relations, cutoff):
    """Degree-truncated quotient of the free Lie superalgebra on the named
    generators by inhomogeneous relations.

    relations: list of [(coeff, word)] combinations equal to zero; words
    are name strings or nested pairs.  Returns (report, algebra, words)
    where algebra is the StructAlgebra of the quotient restricted to the
    cutoff and words are the construction words of its basis.
    """
    rels = []
    for rel in relations:
        rels.append([(c if isinstance(c, ParamScalar) else ParamScalar(c), w)
                     for c, w in rel])
    max_rel_degree = max((max(word_degree(w) for _, w in rel) for rel in rels), default=0)
    if cutoff < max_rel_degree:
        raise ValueError("cutoff %d below max relation degree %d" % (cutoff, max_rel_degree))
    restarts = 0
    while True:
        build = _QuotientBuild(generators, parities, rels, cutoff)
        try:
            dims_even, dims_odd = build.run()
        except _Retro as r:
            restarts += 1
            if restarts > 60:
                raise RuntimeError("presentation quotient failed to converge")
            rels = rels + [r.relation]
            continue
        stabilized = (dims_even.get(cutoff, 0) + dims_odd.get(cutoff, 0)) == 0 and any(
            dims_even.get(dd, 0) + dims_odd.get(dd, 0) == 0 for dd in range(2, cutoff + 1)
        )
        report = PresentationReport(dims_even, dims_odd, stabilized, cutoff,
                                    len(rels), max_rel_degree, restarts)
        algebra = StructAlgebra([str(w) for w in build.word], build.par, build.table)
        return report, algebra, build.word


# ---------------------------------------------------------------------------
# Chevalley presentations from a Cartan matrix

def serre_relations(cartan, parities):
    """Chevalley-Serre relation set over generators Xp_i / Xn_i, hiding the
    Cartan elements behind h_i := [Xp_i, Xn_i].

    For an even simple root i: (ad Xp_i)^(1-a_ij) Xp_j = 0 (j != i), same
    for negatives.  For an isotropic odd root (a_ii = 0): [Xp_i, Xp_i] = 0.
    The weight rows [h_i, Xp_j] = a_ij Xp_j are always included.
    """
    n = len(cartan)
    A = [[c if isinstance(c, ParamScalar) else ParamScalar(c) for c in row] for row in cartan]
    rels = []

    def xp(i):
        return "Xp%d" % i

    def xn(i):
        return "Xn%d" % i

    def h(i):
        return (xp(i), xn(i))

    for i in range(n):
        for j in range(n):
            if i != j:
                rels.append([(ONE, (xp(i), xn(j)))])
            # [h_i, Xp_j] = a_ij Xp_j ; [h_i, Xn_j] = -a_ij Xn_j
            rels.append([(ONE, (h(i), xp(j))), (-A[i][j], xp(j))])
            rels.append([(ONE, (h(i), xn(j))), (A[i][j], xn(j))])
    for i in range(n):
        if parities[i] == 0:
            for j in range(n):
                if i == j:
                    continue
                try:
                    m = 1 - int(A[i][j].as_fraction())
                except ValueError:
                    raise ValueError("even-row Cartan entries must be integers")
                wp, wn = xp(j), xn(j)
                for _ in range(m):
                    wp = (xp(i), wp)
                    wn = (xn(i), wn)
                rels.append([(ONE, wp)])
                rels.append([(ONE, wn)])
        else:
            if A[i][i].is_zero():
                rels.append([(ONE, (xp(i), xp(i)))])
                rels.append([(ONE, (xn(i), xn(i)))])
    return rels


def serre_build(cartan, parities, cutoff=8, mu=None):
    """Finite-dimensional Lie (super)algebra from an invertible Cartan
    matrix, via the radical of the contravariant pairing on a Verma model
    with generic weight.

    Returns a dict with the StructAlgebra, the Chevalley generator indices,
    the per-root basis data, and the principal-embedding coefficients.
    """
    n = len(cartan)
    A = [[c if isinstance(c, ParamScalar) else ParamScalar(c) for c in row] for row in cartan]
    pars = [int(p) for p in parities]
    if mu is None:
        mu = [Fraction(100003 + 37 * i, 1) for i in range(n)]
    mu = [ParamScalar(m) for m in mu]

    # --- Verma model over the free negative half -------------------------
    def word_weight_h(i, word):
        # h_i eigenvalue on the Verma vector X^-_{word} v_mu
        acc = mu[i]
        for j in word:
            acc = acc - A[i][j]
        return acc

    def act_pos(i, elem):
        """X^+_i on {neg-word: coeff}."""
        out = {}
        for word, c in elem.items():
            for key, cc in _act_pos_word(i, word):
                s = out.get(key, ZERO) + c * cc
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return out

    pos_cache = {}

    def _act_pos_word(i, word):
        if not word:
            return []
        key = (i, word)
        hit = pos_cache.get(key)
        if hit is not None:
            return hit
        j, rest = word[0], word[1:]
        out = {}
        if i == j:
            # [X+_i, X-_i] = h_i acting on the rest
            hval = word_weight_h(i, rest)
            if not hval.is_zero():
                out[rest] = out.get(rest, ZERO) + hval
        sgn = -1 if (pars[i] * pars[j]) % 2 else 1
        for w2, c2 in _act_pos_word(i, rest):
            w = (j,) + w2
            s = out.get(w, ZERO) + (c2 if sgn == 1 else -c2)
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        res = [(w, c) for w, c in out.items() if not c.is_zero()]
        pos_cache[key] = res
        return res

    def pair(pos_expansion, neg_elem):
        """Contravariant pairing: coefficient of the highest vector after
        applying the positive associative expansion to the Verma element."""
        acc = ZERO
        for word, c in pos_expansion.items():
            cur = neg_elem
            for i in reversed(word):
                cur = act_pos(i, cur)
                if not cur:
                    break
            if cur:
                v = cur.get((), ZERO)
                acc = acc + c * v
        return acc

    def neg_expand(tree):
        exp, _ = tree_expand(tree, pars)
        return exp

    # --- root spaces -------------------------------------------------------
    roots = {}  # multidegree tuple -> dict with basis trees and Gram data
    simple = [tuple(1 if t == i else 0 for t in range(n)) for i in range(n)]
    for i in range(n):
        roots[simple[i]] = {"trees": [i], "gram": [[pair({(i,): ONE}, {(i,): ONE})]]}
        # normalize: pair(e_i, f_i) = mu_i generically nonzero
    prev_level = list(simple)
    height = 1
    while prev_level and height < cutoff:
        height += 1
        level = []
        seen = set()
        for beta in prev_level:
            for i in range(n):
                gamma = tuple(b + s for b, s in zip(beta, simple[i]))
                if gamma in seen or gamma in roots:
                    continue
                seen.add(gamma)
                # candidate spanning trees: [basis(gamma - alpha_j), e_j]
                cand = []
                for j in range(n):
                    sub = tuple(g - s for g, s in zip(gamma, simple[j]))
                    if min(sub) < 0 or sub not in roots:
                        continue
                    for tr in roots[sub]["trees"]:
                        cand.append((tr, j))
                if not cand:
                    continue
                # Gram against the mirrored candidates
                expansions = [tree_expand(t, pars)[0] for t in cand]
                negs = [neg_expand(t) for t in cand]
                G = [[pair(e, v) for v in negs] for e in expansions]
                ech = Echelon()
                chosen = []
                for r, rowvec in enumerate(G):
                    vec = {c: val for c, val in enumerate(rowvec) if not val.is_zero()}
                    if ech.insert(vec) is not None:
                        chosen.append(r)
                if chosen:
                    basis_trees = [cand[r] for r in chosen]
                    bg = [[G[r][s] for s in chosen] for r in chosen]
                    roots[gamma] = {"trees": basis_trees, "gram": bg}
                    level.append(gamma)
        prev_level = level

    # Gram for simple roots needs the same shape
    for i in range(n):
        roots[simple[i]]["gram"] = [[pair({(i,): ONE}, {(i,): ONE})]]

    # --- reduction to basis coordinates -------------------------------------
    def reduce_pos(tree, gamma):
        """Coordinates of a positive tree at root gamma; None if gamma is
        not a root (the element must then vanish in the quotient)."""
        info = roots.get(gamma)
        exp = tree_expand(tree, pars)[0]
        if info is None:
            return None
        rhs = [pair(exp, neg_expand(t)) for t in info["trees"]]
        # solve G^T x = rhs
        GT = [list(col) for col in zip(*info["gram"])]
        x = solve_square(GT, rhs)
        if x is None:
            raise RuntimeError("degenerate Gram matrix at root %s" % (gamma,))
        return x

    def reduce_neg(tree, gamma):
        info = roots.get(gamma)
        if info is None:
            return None
        vexp = neg_expand(tree)
        rhs = [pair(tree_expand(t, pars)[0], vexp) for t in info["trees"]]
        x = solve_square([list(r) for r in info["gram"]], rhs)
        if x is None:
            raise RuntimeError("degenerate Gram matrix at root %s" % (gamma,))
        return x

    # --- assemble the basis --------------------------------------------------
    root_list = sorted(roots, key=lambda g: (sum(g), g))
    labels = []
    parities_out = []
    index = {}
    for i in range(n):
        index[("h", i)] = len(labels)
        labels.append("h%d" % i)
        parities_out.append(0)
    for g in root_list:
        for s, t in enumerate(roots[g]["trees"]):
            index[(1, g, s)] = len(labels)
            labels.append("e[%s]#%d" % (",".join(map(str, g)), s))
            parities_out.append(tree_parity(t, pars))
    for g in root_list:
        for s, t in enumerate(roots[g]["trees"]):
            index[(-1, g, s)] = len(labels)
            labels.append("f[%s]#%d" % (",".join(map(str, g)), s))
            parities_out.append(tree_parity(t, pars))

    def coords_from(sign, gamma, xs):
        out = {}
        for s, c in enumerate(xs):
            if not c.is_zero():
                out[index[(sign, gamma, s)]] = c
        return out

    def root_eval(i, gamma):
        # gamma(h_i) = sum_j gamma_j A_ij
        acc = ZERO
        for j, m in enumerate(gamma):
            if m:
                acc = acc + A[i][j] * ParamScalar(m)
        return acc

    # mixed brackets [pos-tree, neg-tree] -> coordinate dict, memoized
    mixed_cache = {}

    def elem_scale(e, c):
        return {k: c * v for k, v in e.items()} if not c.is_zero() else {}

    def elem_add(e1, e2, c=None):
        return vec_add(e1, e2, c)

    def tree_mdeg(tree):
        out = [0] * n
        for i in tree_leaves(tree):
            out[i] += 1
        return tuple(out)

    def pos_tree_elem(tree):
        gamma = tree_mdeg(tree)
        xs = reduce_pos(tree, gamma)
        if xs is None:
            return {}
        return coords_from(1, gamma, xs)

    def neg_tree_elem(tree):
        gamma = tree_mdeg(tree)
        xs = reduce_neg(tree, gamma)
        if xs is None:
            return {}
        return coords_from(-1, gamma, xs)

    def mixed(u, v):
        """[positive tree u, negative tree v] as a coordinate dict."""
        key = (u, v)
        hit = mixed_cache.get(key)
        if hit is not None:
            return hit
        pu = tree_parity(u, pars)
        if isinstance(u, int) and isinstance(v, int):
            out = {index[("h", u)]: ONE} if u == v else {}
        elif not isinstance(v, int):
            l, r = v
            pl = tree_parity(l, pars)
            t1 = elem_bracket(mixed(u, l), neg_tree_elem(r))
            t2 = elem_bracket(neg_tree_elem(l), mixed(u, r))
            sgn = -1 if (pu * pl) % 2 else 1
            out = elem_add(t1, t2, ParamScalar(sgn))
        else:
            a, b = u
            pa = tree_parity(a, pars)
            pb = tree_parity(b, pars)
            t1 = elem_bracket(pos_tree_elem(a), mixed(b, v))
            t2 = elem_bracket(pos_tree_elem(b), mixed(a, v))
            sgn = -1 if (pa * pb) % 2 else 1
            out = elem_add(t1, t2, ParamScalar(-sgn))
        mixed_cache[key] = out
        return out

    def key_bracket(k1, k2):
        """Bracket of two basis keys as a coordinate dict."""
        t1, t2 = key_info[k1], key_info[k2]
        kind1, kind2 = t1[0], t2[0]
        if kind1 == "h" and kind2 == "h":
            return {}
        if kind1 == "h":
            sign, gamma, s = t2
            w = root_eval(t1[1], gamma)
            w = w if sign == 1 else -w
            return {} if w.is_zero() else {k2: w}
        if kind2 == "h":
            sign, gamma, s = t1
            w = root_eval(t2[1], gamma)
            w = w if sign == 1 else -w
            return {} if w.is_zero() else {k1: -w}
        s1, g1, i1 = t1
        s2, g2, i2 = t2
        tr1 = roots[g1]["trees"][i1]
        tr2 = roots[g2]["trees"][i2]
        if s1 == 1 and s2 == 1:
            return pos_tree_elem((tr1, tr2))
        if s1 == -1 and s2 == -1:
            return neg_tree_elem((tr1, tr2))
        if s1 == 1 and s2 == -1:
            return mixed(tr1, tr2)
        # [neg, pos] = -(-1)^(p p') [pos, neg]
        p1 = parities_out[index[t1]]
        p2 = parities_out[index[t2]]
        sgn = -1 if (p1 * p2) % 2 else 1
        return elem_scale(mixed(tr2, tr1), ParamScalar(-sgn))

    key_info = {v: k for k, v in index.items()}

    def elem_bracket(e1, e2):
        out = {}
        for i, ci in e1.items():
            for j, cj in e2.items():
                c = ci * cj
                for k, f in key_bracket(i, j).items():
                    s = out.get(k, ZERO) + c * f
                    if s.is_zero():
                        out.pop(k, None)
                    else:
                        out[k] = s
        return out

    # structure-constant table over all basis pairs
    dim = len(labels)
    table = {}
    for i in range(dim):
        for j in range(i, dim):
            if i == j and parities_out[i] == 0:
                continue
            val = key_bracket(i, j)
            if i == j:
                # [b, b] for odd b: key_bracket already gives the full
                # supercommutator value
                pass
            if val:
                table[(i, j)] = val
    algebra = StructAlgebra(labels, parities_out, table)

    # principal embedding coefficients: sum_i a_i A_ij = 2 (even col) or 1
    targets = [ParamScalar(2 if pars[j] == 0 else 1) for j in range(n)]
    AT = [[A[i][j] for i in range(n)] for j in range(n)]
    coeffs = solve_square(AT, targets)
    principal = None
    if coeffs is not None:
        principal = coeffs

    chevalley = {
        "h": [index[("h", i)] for i in range(n)],
        "pos": [index[(1, simple[i], 0)] for i in range(n)],
        "neg": [index[(-1, simple[i], 0)] for i in range(n)],
    }
    return {
        "algebra": algebra,
        "chevalley": chevalley,
        "roots": {g: len(roots[g]["trees"]) for g in root_list},
        "principal": principal,
        "cartan": A,
        "parities": pars,
    }


# ---------------------------------------------------------------------------
# Decomposition of a structure-constant algebra under a principal triple

def principal_triple(built):
    """(X, Y, H) of the (super)principal embedding inside a serre_build
    result: X = sum a_i Xp_i, Y = sum Xn_i, H = [X, Y]."""
    alg = built["algebra"]
    coeffs = built["principal"]
    if coeffs is None:
        raise ValueError("Cartan matrix is not invertible; no principal embedding")
    chev = built["chevalley"]
    X = alg.zero()
    for i, idx in enumerate(chev["pos"]):
        X = X + alg.basis_element(idx).scale(coeffs[i])
    Y = alg.zero()
    for idx in chev["neg"]:
        Y = Y + alg.basis_element(idx)
    H = X.bracket(Y)
    return X, Y, H


def ad_eigen_decomposition(built):
    """Split a serre_build algebra into principal-sl(2) components: returns
    the multiset of top weights of even components (L^w) and odd ones."""
    alg = built["algebra"]
    X, Y, H = principal_triple(built)
    # ad H in the basis
    n = alg.dim
    cols = []
    for j in range(n):
        cols.append(H.bracket(alg.basis_element(j)).coords)
    # eigen-decomposition: H is diagonal in a root basis, so each basis
    # vector is an eigenvector up to mixing within equal weights; here ad H
    # is already diagonal because basis vectors are root vectors.
    weights = {}
    for j in range(n):
        col = cols[j]
        if not col:
            w = Fraction(0)
        else:
            if set(col) != {j}:
                raise RuntimeError("ad H is not diagonal on the built basis")
            w = col[j].as_fraction()
        weights.setdefault(w, []).append(j)
    # lowest vectors: kernel of ad Y within each weight space
    components = []
    for w, idxs in sorted(weights.items()):
        vecs = []
        for j in idxs:
            vecs.append((j, Y.bracket(alg.basis_element(j)).coords))
        # kernel of the map restricted to span(idxs)
        ech = Echelon()
        tags = {}
        kernel = 0
        rows = []
        for j, img in vecs:
            rows.append((j, img))
        # solve: find combinations with zero image; dimension of kernel =
        # len(idxs) - rank(images)
        rank_ech = Echelon()
        rank = 0
        for j, img in rows:
            if rank_ech.insert(img) is not None:
                rank += 1
        kernel = len(idxs) - rank
        for _ in range(kernel):
            components.append(w)
    # components: multiset of lowest weights; top weight = -lowest
    out = {}
    for w in components:
        out[-w] = out.get(-w, 0) + 1
    return out
