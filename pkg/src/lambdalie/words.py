"""Formal bracket words in named generators, relation rows, and the
lambda->infinity rescaling of relation families.

A word is either a generator name (string) or a pair of words (a bracket).
Derived names like ``z3`` resolve through iterated ad: z_i = (ad x)^i z,
Z_i = (ad X)^i Z, Y_i = (ad X)^i Y.  A relation stores lhs and rhs as
linear combinations [(coeff, word), ...] with ParamScalar coefficients.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import ParamScalar, parse_scalar, poly_degree

# -- words -------------------------------------------------------------------

def is_leaf(w) -> bool:
    return isinstance(w, str)


def word_from_json(w):
    if isinstance(w, str):
        return w
    if isinstance(w, (list, tuple)):
        if len(w) == 2:
            return (word_from_json(w[0]), word_from_json(w[1]))
        if len(w) == 3 and w[0] == "ad^":
            # ["ad^", k, [base, arg]] -> k-fold bracket
            k = int(w[1])
            base, arg = word_from_json(w[2][0]), word_from_json(w[2][1])
            out = arg
            for _ in range(k):
                out = (base, out)
            return out
    raise ValueError("bad word literal %r" % (w,))


def word_to_json(w):
    if is_leaf(w):
        return w
    return [word_to_json(w[0]), word_to_json(w[1])]


def word_str(w) -> str:
    if is_leaf(w):
        return w
    return "[%s, %s]" % (word_str(w[0]), word_str(w[1]))


def word_z_count(w, scaled_names) -> int:
    """Number of leaves carrying the scale t (i.e. z/Z leaves and their
    derived z_i forms)."""
    if is_leaf(w):
        base = w.rstrip("0123456789")
        return 1 if base in scaled_names else 0
    return word_z_count(w[0], scaled_names) + word_z_count(w[1], scaled_names)


def word_leaves(w):
    if is_leaf(w):
        yield w
    else:
        yield from word_leaves(w[0])
        yield from word_leaves(w[1])


class Relation:
    """One relation row: label, lhs = rhs, applicability tag.

    applicability: "generic" (symbolic and integer), "integer" (shearing
    rows, matrix realizations only) or "dequantized" (rows of the limit
    algebras sl(*), o/sp(*), osp(*|*+1); data for comparison only).
    """

    def __init__(self, label, lhs, rhs, applicability="generic", rel_type=None,
                 note=None):
        self.label = label
        self.lhs = [(parse_scalar(c), word_from_json(w)) for c, w in lhs]
        self.rhs = [(parse_scalar(c), word_from_json(w)) for c, w in rhs]
        self.applicability = applicability
        self.rel_type = rel_type if rel_type is not None else label.split(".")[0]
        self.note = note

    def combination(self):
        """lhs - rhs as one [(coeff, word)] list."""
        return list(self.lhs) + [(-c, w) for c, w in self.rhs]

    def __str__(self):
        def side(terms):
            if not terms:
                return "0"
            parts = []
            for c, w in terms:
                cs = str(c)
                ws = word_str(w)
                parts.append(ws if cs == "1" else "%s %s" % (
                    "(%s)" % cs if any(ch in cs for ch in "+-/") and cs != "-1" else cs, ws))
            return " + ".join(parts)

        return "%s: %s = %s" % (self.label, side(self.lhs), side(self.rhs))

    __repr__ = __str__


# -- dequantization -----------------------------------------------------------

SCALED = {"z", "Z"}


def _lambda_degree(c: ParamScalar) -> int:
    """Degree in lambda of a scalar that must be polynomial in lambda."""
    if poly_degree(c.den, 0) > 0:
        raise ValueError("coefficient not polynomial in lambda: %s" % c)
    return poly_degree(c.num, 0)


def _lambda_leading(c: ParamScalar, deg: int) -> ParamScalar:
    """Coefficient of lambda^deg in c (a scalar free of lambda)."""
    out = {}
    for e, v in c.num.items():
        if e[0] == deg:
            out[(0,) + e[1:]] = v
    return ParamScalar(out, c.den)


def dequantize_relation(rel: Relation, family: str) -> Relation:
    """Apply t -> t/lambda^e and the lambda -> infinity limit to a verified
    relation row; e = 1 for sl and the super families, 2 for o/sp.

    Equivalent formulation used here: the scaled generator z carries one
    power of t, so each word gains lambda^(e * z-count); the limit keeps,
    per term, only the coefficient of the maximal total lambda-degree.
    """
    e = {"sl": 1, "o_sp": 2, "osp_super": 1, "sl_super": 1}.get(family)
    if e is None:
        raise ValueError("no dequantization rule for family %r" % family)

    def degree_of(c, w):
        return _lambda_degree(c) + e * word_z_count(w, SCALED)

    terms = rel.combination()
    nonzero = [(c, w) for c, w in terms if not c.is_zero()]
    if not nonzero:
        return Relation(rel.label, [], [], "dequantized", rel.rel_type)
    m = max(degree_of(c, w) for c, w in nonzero)
    new_lhs = []
    new_rhs = []
    for c, w in rel.lhs:
        d = degree_of(c, w)
        gap = m - d + _lambda_degree(c)  # lambda-degree to extract from c
        lead = _lambda_leading(c, gap)
        if not lead.is_zero():
            new_lhs.append((lead, w))
    for c, w in rel.rhs:
        d = degree_of(c, w)
        gap = m - d + _lambda_degree(c)
        lead = _lambda_leading(c, gap)
        if not lead.is_zero():
            new_rhs.append((lead, w))
    out = Relation.__new__(Relation)
    out.label = rel.label
    out.lhs = new_lhs
    out.rhs = new_rhs
    out.applicability = "dequantized"
    out.rel_type = rel.rel_type
    out.note = None
    return out


# -- formal comparison via the free associative expansion ---------------------

def _assoc_mul(u, v, sign):
    out = {}
    for w1, c1 in u.items():
        for w2, c2 in v.items():
            w = w1 + w2
            out[w] = out.get(w, ParamScalar.zero()) + sign * c1 * c2
    return {w: c for w, c in out.items() if not c.is_zero()}


def word_assoc_expansion(w, parities):
    """Expand a bracket word into the free associative superalgebra:
    {word-tuple: coeff}.  parities maps generator name -> 0/1."""
    if is_leaf(w):
        return {(w,): ParamScalar.one()}, parities[_base_name(w)]
    u, pu = word_assoc_expansion(w[0], parities)
    v, pv = word_assoc_expansion(w[1], parities)
    sign = ParamScalar.from_fraction((-1) ** (pu * pv))
    out = _assoc_mul(u, v, ParamScalar.one())
    for ww, cc in _assoc_mul(v, u, sign).items():
        out[ww] = out.get(ww, ParamScalar.zero()) - cc
    return {ww: cc for ww, cc in out.items() if not cc.is_zero()}, (pu + pv) % 2


def _base_name(name: str) -> str:
    base = name.rstrip("0123456789")
    return base


def combination_assoc(terms, parities):
    """Associative expansion of a [(coeff, word)] combination, with derived
    names z_i expanded as iterated brackets first."""
    out = {}
    for c, w in terms:
        w = _expand_derived(w)
        exp, _ = word_assoc_expansion(w, parities)
        for ww, cc in exp.items():
            s = out.get(ww, ParamScalar.zero()) + c * cc
            if s.is_zero():
                out.pop(ww, None)
            else:
                out[ww] = s
    return out


_AD_BASE = {"z": "x", "Z": "X", "Y": "X", "y": "x"}


def _expand_derived(w):
    """Rewrite leaves like z3 into [x,[x,[x,z]]]."""
    if not is_leaf(w):
        return (_expand_derived(w[0]), _expand_derived(w[1]))
    base = _base_name(w)
    digits = w[len(base):]
    if not digits:
        return w
    k = int(digits)
    if base not in _AD_BASE:
        raise ValueError("cannot expand derived name %r" % w)
    out = base
    ad = _AD_BASE[base]
    for _ in range(k):
        out = (ad, out)
    return out


def relations_formally_equal(r1: Relation, r2: Relation, parities) -> bool:
    """Equality of lhs - rhs as elements of the free Lie superalgebra,
    decided in the free associative expansion."""
    c1 = combination_assoc(r1.combination(), parities)
    c2 = combination_assoc(r2.combination(), parities)
    return c1 == c2
