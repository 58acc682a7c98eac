"""Normal-ordered differential operators in one even variable u (alias x)
and one odd variable theta, with exact ParamScalar coefficients.

Monomials are kept in the fixed normal order u^a theta^c du^b dtheta^d.
The defining relations are

    du u = u du + 1          (Weyl)
    dtheta theta + theta dtheta = 1,  theta^2 = dtheta^2 = 0   (Clifford)

and all other generator pairs commute without signs.  Parity of a monomial
is (c + d) mod 2; the bracket is the supercommutator
[A, B] = AB - (-1)^(p(A)p(B)) BA, extended bilinearly to mixed-parity
operands.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .scalars import ParamScalar, parse_scalar, scalar_from_json, scalar_to_json

# monomial = (a, c, b, d): u-exp, theta-exp, du-exp, dtheta-exp
Mono = tuple

EVEN, ODD, MIXED = "even", "odd", "mixed"


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def mono_parity(m: Mono) -> int:
    return (m[1] + m[3]) % 2


class SuperOp:
    """A finite ParamScalar-combination of normal-ordered monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for m, c in (terms.items() if isinstance(terms, dict) else terms):
                c = c if isinstance(c, ParamScalar) else ParamScalar(c)
                if c.is_zero():
                    continue
                acc = t.get(m)
                c = acc + c if acc is not None else c
                if c.is_zero():
                    t.pop(m, None)
                else:
                    t[m] = c
        self.terms = t

    # -- constructors --------------------------------------------------
    @staticmethod
    def zero() -> "SuperOp":
        return SuperOp()

    @staticmethod
    def monomial(a=0, c=0, b=0, d=0, coeff=1) -> "SuperOp":
        if c not in (0, 1) or d not in (0, 1):
            return SuperOp.zero()
        return SuperOp({(a, c, b, d): ParamScalar(coeff)})

    @staticmethod
    def const(coeff) -> "SuperOp":
        return SuperOp.monomial(coeff=coeff)

    @staticmethod
    def u(power=1) -> "SuperOp":
        return SuperOp.monomial(a=power)

    @staticmethod
    def du(power=1) -> "SuperOp":
        return SuperOp.monomial(b=power)

    @staticmethod
    def theta() -> "SuperOp":
        return SuperOp.monomial(c=1)

    @staticmethod
    def dtheta() -> "SuperOp":
        return SuperOp.monomial(d=1)

    # -- linear structure ----------------------------------------------
    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ParamScalar.zero()) + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        r = SuperOp.__new__(SuperOp)
        r.terms = out
        return r

    def __neg__(self):
        r = SuperOp.__new__(SuperOp)
        r.terms = {m: -c for m, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SuperOp":
        c = c if isinstance(c, ParamScalar) else ParamScalar(c)
        if c.is_zero():
            return SuperOp.zero()
        r = SuperOp.__new__(SuperOp)
        r.terms = {m: c * v for m, v in self.terms.items()}
        return r

    def __eq__(self, other):
        return isinstance(other, SuperOp) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    # -- structure -------------------------------------------------------
    def parity(self) -> str:
        ps = {mono_parity(m) for m in self.terms}
        if len(ps) == 2:
            return MIXED
        if not ps or ps == {0}:
            return EVEN
        return ODD

    def even_part(self) -> "SuperOp":
        return SuperOp({m: c for m, c in self.terms.items() if mono_parity(m) == 0})

    def odd_part(self) -> "SuperOp":
        return SuperOp({m: c for m, c in self.terms.items() if mono_parity(m) == 1})

    def __mul__(self, other):
        if not isinstance(other, SuperOp):
            return self.scale(other)
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                for m, f in _mono_mul(m1, m2):
                    s = acc.get(m)
                    v = c * f if f != 1 else c
                    s = s + v if s is not None else v
                    if s.is_zero():
                        acc.pop(m, None)
                    else:
                        acc[m] = s
        r = SuperOp.__new__(SuperOp)
        r.terms = {m: c for m, c in acc.items() if not c.is_zero()}
        return r

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            a, cth, b, d = m
            body = "".join(
                [
                    "u^%d" % a if a > 1 else "u" if a else "",
                    "th" if cth else "",
                    "du^%d" % b if b > 1 else "du" if b else "",
                    "dth" if d else "",
                ]
            )
            cs = str(c)
            if any(ch in cs for ch in "+-") and not cs.lstrip("-").isdigit():
                cs = "(%s)" % cs
            parts.append(cs if not body else "%s*%s" % (cs, body))
        return " + ".join(parts)

    __repr__ = __str__

    def apply(self, poly_terms):
        """Act on a function sum c_k,eps u^k theta^eps, given as a dict
        {(k, eps): ParamScalar}; returns the same representation."""
        out = {}
        for (k, eps), fc in poly_terms.items():
            for (a, c, b, d), oc in self.terms.items():
                # dtheta then du act first
                if d and not eps:
                    continue
                e2 = eps - d
                if b > k:
                    continue
                coeff = oc * fc * _falling(k, b)
                k2 = k - b + a
                if c and e2:
                    continue
                e3 = e2 + c
                key = (k2, e3)
                s = out.get(key, ParamScalar.zero()) + coeff
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return out


def _mono_mul(m1: Mono, m2: Mono):
    """Product of two normal monomials as [(monomial, integer factor)].

    Only du^b1 against u^a2 (Weyl reordering) and dtheta^d1 against
    theta^c2 (Clifford) produce new terms; no Koszul signs arise because
    the two odd letters of the left factor never cross an odd letter of
    the right factor except through the Clifford relation itself.
    """
    a1, c1, b1, d1 = m1
    a2, c2, b2, d2 = m2
    out = []
    # dtheta^d1 theta^c2 -> list of (theta', dtheta', factor)
    if d1 and c2:
        theta_cases = [(0, 0, 1), (1, 1, -1)]  # dth th = 1 - th dth
    else:
        theta_cases = [(c2, d1, 1)]
    for th, dth, tf in theta_cases:
        cc = c1 + th
        dd = dth + d2
        if cc > 1 or dd > 1:
            continue
        for j in range(0, min(b1, a2) + 1):
            f = comb(b1, j) * _falling(a2, j) * tf
            if not f:
                continue
            out.append(((a1 + a2 - j, cc, b1 + b2 - j, dd), f))
    return out


# ---------------------------------------------------------------------------
# Lie structure

def multiply(a: SuperOp, b: SuperOp) -> SuperOp:
    return a * b


def bracket(a: SuperOp, b: SuperOp) -> SuperOp:
    """Supercommutator, extended bilinearly over parity components."""
    pa, pb = a.parity(), b.parity()
    if pa != MIXED and pb != MIXED:
        sign = -1 if (pa == ODD and pb == ODD) else 1
        return a * b + (b * a).scale(-sign) if sign == -1 else a * b - b * a
    total = SuperOp.zero()
    for ac in (a.even_part(), a.odd_part()):
        for bc in (b.even_part(), b.odd_part()):
            if ac.is_zero() or bc.is_zero():
                continue
            total = total + bracket(ac, bc)
    return total


def ad_power(a: SuperOp, b: SuperOp, k: int) -> SuperOp:
    if k < 0:
        raise ValueError("ad power must be nonnegative")
    out = b
    for _ in range(k):
        out = bracket(a, out)
    return out


def adjoint(a: SuperOp) -> SuperOp:
    """Formal adjoint: u*=u, du*=-du, theta*=dtheta, dtheta*=-theta, and
    (AB)* = (-1)^(p(A)p(B)) B* A*.

    On the even sector this is the classical involution
    a(u) d^k/du^k -> (-1)^k d^k/du^k a(u); on odd letters it has order 4,
    like the supertranspose.
    """
    out = SuperOp.zero()
    for (a_, c, b, d), coeff in a.terms.items():
        # reversed word: dtheta* du* theta* u* with the sign rule sign
        # for reversing the odd letters among themselves.
        term = SuperOp.const(coeff)
        # (u^a th^c du^b dth^d)* = (-1)^(p_th p_dth sign) dth*^d du*^b th*^c u*^a
        factors = []
        if d:
            factors.append(SuperOp.theta().scale(-1))  # dtheta* = -theta
        if b:
            factors.append(SuperOp.du(b).scale((-1) ** b))
        if c:
            factors.append(SuperOp.dtheta())  # theta* = dtheta
        if a_:
            factors.append(SuperOp.u(a_))
        # reversal sign: only one odd pair (theta, dtheta) can swap
        sign = -1 if (c and d) else 1
        term = term.scale(sign)
        for f in factors:
            term = term * f
        out = out + term
    return out


H_EVEN = None  # set below; weight grading reference


def mono_weight(m: Mono) -> int:
    a, c, b, d = m
    return 2 * (a - b) + (c - d)


def weight_and_parity(a: SuperOp):
    """(weight, parity), weight is "inhomogeneous" when mixed.

    weight w means [H, A] = w A for H of grading type; equal to
    2(a-b)+(c-d) monomial-wise.
    """
    if a.is_zero():
        return 0, EVEN
    ws = {mono_weight(m) for m in a.terms}
    w = ws.pop() if len(ws) == 1 else "inhomogeneous"
    return w, a.parity()


# ---------------------------------------------------------------------------
# JSON round trip

def op_to_json(op: SuperOp):
    rows = []
    for (a, c, b, d), coeff in sorted(op.terms.items()):
        rows.append({"u": a, "theta": c, "du": b, "dtheta": d, "coeff": scalar_to_json(coeff)})
    return {"terms": rows}


def op_from_json(obj) -> SuperOp:
    terms = {}
    for row in obj["terms"]:
        m = (row["u"], row["theta"], row["du"], row["dtheta"])
        terms[m] = scalar_from_json(row["coeff"])
    return SuperOp(terms)


def op_from_expr(entries) -> SuperOp:
    """Build an operator from [(coeff-expression, a, c, b, d), ...] rows."""
    terms = {}
    for coeff, a, c, b, d in entries:
        terms[(a, c, b, d)] = parse_scalar(coeff)
    return SuperOp(terms)
