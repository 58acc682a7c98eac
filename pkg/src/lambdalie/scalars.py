"""Exact scalar arithmetic: rationals, sparse multivariate polynomials, and
rational functions in the parameters (lambda, t, alpha).

A polynomial is a dict mapping exponent tuples to Fraction; the zero
polynomial is the empty dict.  The public scalar type is ParamScalar, a
reduced fraction num/den of polynomials in exactly the three parameters
``l`` (lambda), ``t`` (scale) and ``a`` (alpha).  The polynomial core is
generic in the number of variables because a few internal computations
(Shapovalov forms with generic weights) need auxiliary variables; only the
3-variable instance is part of the public API.

Canonical monomial order: graded lexicographic with l > t > a.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

Poly = dict  # exponent tuple -> Fraction, no zero values stored


def poly_const(c, nvars=3) -> Poly:
    c = Fraction(c)
    if c == 0:
        return {}
    return {(0,) * nvars: c}


def poly_var(i, nvars=3) -> Poly:
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): Fraction(1)}


def poly_add(p: Poly, q: Poly) -> Poly:
    r = dict(p)
    for e, c in q.items():
        s = r.get(e, Fraction(0)) + c
        if s:
            r[e] = s
        else:
            r.pop(e, None)
    return r


def poly_neg(p: Poly) -> Poly:
    return {e: -c for e, c in p.items()}


def poly_sub(p: Poly, q: Poly) -> Poly:
    return poly_add(p, poly_neg(q))


def poly_mul(p: Poly, q: Poly) -> Poly:
    r: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = r.get(e, Fraction(0)) + c1 * c2
            if s:
                r[e] = s
            else:
                r.pop(e, None)
    return r


def poly_scale(p: Poly, c) -> Poly:
    c = Fraction(c)
    if c == 0:
        return {}
    return {e: c * v for e, v in p.items()}


def poly_pow(p: Poly, n: int) -> Poly:
    if n < 0:
        raise ValueError("negative polynomial power")
    nv = _nvars(p)
    r = poly_const(1, nv)
    for _ in range(n):
        r = poly_mul(r, p)
    return r


def _nvars(p: Poly, default=3) -> int:
    for e in p:
        return len(e)
    return default


def monomial_key(e):
    """Graded lexicographic key, first variable largest."""
    return (sum(e),) + tuple(e)


def poly_leading(p: Poly):
    """(exponent, coefficient) of the graded-lex leading term."""
    e = max(p, key=monomial_key)
    return e, p[e]


def poly_degree(p: Poly, var=None) -> int:
    """Total degree, or degree in one variable.  Zero polynomial: -1."""
    if not p:
        return -1
    if var is None:
        return max(sum(e) for e in p)
    return max(e[var] for e in p)


def poly_is_const(p: Poly) -> bool:
    return all(sum(e) == 0 for e in p)


def poly_eval(p: Poly, values) -> Fraction:
    """Evaluate at a full vector of Fraction values."""
    acc = Fraction(0)
    for e, c in p.items():
        term = c
        for x, k in zip(values, e):
            term *= Fraction(x) ** k
        acc += term
    return acc


def poly_subst_var(p: Poly, var: int, q: Poly) -> Poly:
    """Substitute polynomial q for variable `var`."""
    nv = _nvars(p)
    out: Poly = {}
    for e, c in p.items():
        rest = list(e)
        k = rest[var]
        rest[var] = 0
        term = poly_mul({tuple(rest): c}, poly_pow(q, k) if k else poly_const(1, nv))
        out = poly_add(out, term)
    return out


def poly_divmod_exact(p: Poly, d: Poly):
    """Exact division p/d; returns quotient or None if not divisible."""
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    nv = _nvars(p, _nvars(d))
    q: Poly = {}
    r = dict(p)
    de, dc = poly_leading(d)
    while r:
        re, rc = poly_leading(r)
        qe = tuple(x - y for x, y in zip(re, de))
        if any(x < 0 for x in qe):
            return None
        qc = rc / dc
        q[qe] = qc
        r = poly_sub(r, poly_mul({qe: qc}, d))
    return q


# ---------------------------------------------------------------------------
# gcd: content extraction + recursive univariate gcd (primitive PRS)

def _active_vars(p: Poly):
    nv = _nvars(p)
    act = [False] * nv
    for e in p:
        for i, k in enumerate(e):
            if k:
                act[i] = True
    return [i for i, f in enumerate(act) if f]


def _to_univariate(p: Poly, var: int):
    """View p as a list {deg_var: Poly-in-remaining-vars} coefficients."""
    coeffs = {}
    for e, c in p.items():
        k = e[var]
        rest = list(e)
        rest[var] = 0
        rest = tuple(rest)
        coeffs.setdefault(k, {})
        s = coeffs[k].get(rest, Fraction(0)) + c
        if s:
            coeffs[k][rest] = s
        else:
            coeffs[k].pop(rest, None)
    return {k: v for k, v in coeffs.items() if v}


def _from_univariate(coeffs, var: int) -> Poly:
    out: Poly = {}
    for k, poly in coeffs.items():
        for e, c in poly.items():
            ee = list(e)
            ee[var] += k
            out[tuple(ee)] = out.get(tuple(ee), Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def _rat_content(p: Poly) -> Fraction:
    """Positive rational content (gcd of coefficients), sign of leading term."""
    from math import gcd

    num = 0
    den = 1
    for c in p.values():
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    cont = Fraction(num, den)
    _, lc = poly_leading(p)
    return cont if lc > 0 else -cont


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """gcd of multivariate polynomials, monic-normalized by positive leading
    coefficient under graded lex."""
    if not p:
        return _make_positive(q)
    if not q:
        return _make_positive(p)
    pv = set(_active_vars(p)) | set(_active_vars(q))
    if not pv:
        return poly_const(1, _nvars(p))
    var = min(pv)
    pu = _to_univariate(p, var)
    qu = _to_univariate(q, var)
    g = _uni_gcd(pu, qu, var)
    return _make_positive(_from_univariate(g, var))


def _make_positive(p: Poly) -> Poly:
    if not p:
        return p
    cont = _rat_content(p)
    return poly_scale(p, 1 / cont) if cont != 1 else dict(p)


def _uni_content(pu):
    """Polynomial content of a univariate-over-polys representation."""
    g: Poly = {}
    for coeff in pu.values():
        g = poly_gcd(g, coeff)
        if poly_is_const(g):
            break
    return g if g else poly_const(1)


def _uni_primitive(pu, var):
    cont = _uni_content(pu)
    if poly_is_const(cont):
        c = next(iter(cont.values()))
        if c == 1:
            return pu, cont
    out = {}
    for k, coeff in pu.items():
        out[k] = poly_divmod_exact(coeff, cont)
    return out, cont


def _uni_pseudo_rem(pu, qu, var):
    """Pseudo-remainder of pu by qu in the main variable."""
    n = max(pu)
    m = max(qu)
    lcq = qu[m]
    r = {k: dict(v) for k, v in pu.items()}
    while r:
        d = max(r)
        if d < m:
            break
        lcr = r[d]
        # r = lcq * r - lcr * x^(d-m) * q
        new = {}
        for k, v in r.items():
            new[k] = poly_mul(v, lcq)
        for k, v in qu.items():
            kk = k + d - m
            new[kk] = poly_sub(new.get(kk, {}), poly_mul(v, lcr))
        r = {k: v for k, v in new.items() if v}
    return r


def _uni_gcd(pu, qu, var):
    ppu, cp = _uni_primitive(pu, var)
    pqu, cq = _uni_primitive(qu, var)
    cont_gcd = poly_gcd(cp, cq)
    a, b = ppu, pqu
    while b:
        r = _uni_pseudo_rem(a, b, var)
        a = b
        b, _ = _uni_primitive(r, var) if r else ({}, None)
    out = {}
    for k, v in a.items():
        out[k] = poly_mul(v, cont_gcd)
    return out


# ---------------------------------------------------------------------------
# ParamScalar: reduced fractions of 3-variable polynomials

VAR_NAMES = ("l", "t", "a")
NVARS = 3


class ParamScalar:
    """A rational function in (lambda, t, alpha) over Q, kept reduced.

    Invariants: den != 0, gcd(num, den) constant, den has positive leading
    coefficient under graded lex with l > t > a.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if isinstance(num, ParamScalar):
            self.num, self.den = num.num, num.den
            return
        if not isinstance(num, dict):
            num = poly_const(num, NVARS)
        if den is None:
            den = poly_const(1, NVARS)
        elif not isinstance(den, dict):
            den = poly_const(den, NVARS)
        if not den:
            raise ZeroDivisionError("ParamScalar with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------
    @staticmethod
    def zero():
        return _ZERO

    @staticmethod
    def one():
        return _ONE

    @staticmethod
    def var(name: str) -> "ParamScalar":
        return ParamScalar(poly_var(VAR_NAMES.index(name), NVARS))

    @staticmethod
    def from_fraction(c) -> "ParamScalar":
        return ParamScalar(poly_const(c, NVARS))

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        num = poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den))
        return ParamScalar(num, poly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar(poly_neg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        return ParamScalar(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if not other.num:
            raise ZeroDivisionError("division by zero ParamScalar")
        return ParamScalar(poly_mul(self.num, other.den), poly_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return _ONE / (self ** (-n))
        return ParamScalar(poly_pow(self.num, n), poly_pow(self.den, n))

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        # reduced canonical forms are unique
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def is_constant(self):
        return poly_is_const(self.num) and poly_is_const(self.den)

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant: %s" % self)
        if not self.num:
            return Fraction(0)
        return next(iter(self.num.values())) / next(iter(self.den.values()))

    def subst(self, **values) -> "ParamScalar":
        """Substitute rationals or ParamScalars for parameters by name."""
        num = ParamScalar(self.num, _reduced=True)
        den = ParamScalar(self.den, _reduced=True)

        def sub_poly(p: Poly) -> ParamScalar:
            acc = _ZERO
            for e, c in p.items():
                term = ParamScalar.from_fraction(c)
                for name, k in zip(VAR_NAMES, e):
                    if not k:
                        continue
                    if name in values:
                        term = term * (_coerce(values[name]) ** k)
                    else:
                        term = term * (ParamScalar.var(name) ** k)
                acc = acc + term
            return acc

        return sub_poly(self.num) / sub_poly(self.den)

    def __repr__(self):
        return "ParamScalar(%s)" % format_scalar(self)

    def __str__(self):
        return format_scalar(self)


def _coerce(x) -> ParamScalar:
    if isinstance(x, ParamScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return ParamScalar.from_fraction(x)
    raise TypeError("cannot coerce %r to ParamScalar" % (x,))


def _reduce(num: Poly, den: Poly):
    if not num:
        return {}, poly_const(1, NVARS)
    g = poly_gcd(num, den)
    if not poly_is_const(g):
        num = poly_divmod_exact(num, g)
        den = poly_divmod_exact(den, g)
    # normalize: den positive leading coefficient and content 1
    cont = _rat_content(den)
    if cont != 1:
        den = poly_scale(den, 1 / cont)
        num = poly_scale(num, 1 / cont)
    return num, den


_ZERO = ParamScalar.__new__(ParamScalar)
_ZERO.num = {}
_ZERO.den = poly_const(1, NVARS)
_ONE = ParamScalar.__new__(ParamScalar)
_ONE.num = poly_const(1, NVARS)
_ONE.den = poly_const(1, NVARS)


def ratfun_normalize(num, den) -> ParamScalar:
    """Canonical rational function num/den.  Errors on a zero denominator."""
    return ParamScalar(num, den)


# ---------------------------------------------------------------------------
# Printing and parsing

def _format_monomial(e, c: Fraction, names=VAR_NAMES):
    vars_part = "*".join(
        name if k == 1 else "%s^%d" % (name, k) for name, k in zip(names, e) if k
    )
    if not vars_part:
        return str(c)
    if c == 1:
        return vars_part
    if c == -1:
        return "-" + vars_part
    return "%s*%s" % (c, vars_part)


def format_poly(p: Poly, names=VAR_NAMES) -> str:
    if not p:
        return "0"
    terms = sorted(p.items(), key=lambda kv: monomial_key(kv[0]), reverse=True)
    out = _format_monomial(*terms[0], names=names)
    for e, c in terms[1:]:
        s = _format_monomial(e, c, names=names)
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out


def format_scalar(s: ParamScalar) -> str:
    num = format_poly(s.num)
    if s.den == poly_const(1, NVARS):
        return num
    den = format_poly(s.den)
    if len(s.num) > 1:
        num = "(%s)" % num
    return "%s/(%s)" % (num, den)


class _Parser:
    """Recursive-descent parser for scalar expressions in l, t, a.

    Grammar: expr := term (("+"|"-") term)*; term := factor (("*"|"/") factor)*;
    factor := base ("^" uint)?; base := number | name | "(" expr ")" | "-" factor.
    Implicit multiplication is not supported; write 2*l, not 2l.
    """

    def __init__(self, text: str):
        self.toks = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text):
        toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                toks.append(("num", int(text[i:j])))
                i = j
            elif ch.isalpha():
                j = i
                while j < len(text) and text[j].isalnum():
                    j += 1
                toks.append(("name", text[i:j]))
                i = j
            elif ch in "+-*/^()":
                toks.append((ch, ch))
                i += 1
            else:
                raise ValueError("bad character %r in scalar expression" % ch)
        toks.append(("end", None))
        return toks

    def peek(self):
        return self.toks[self.pos][0]

    def next(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> ParamScalar:
        v = self.expr()
        if self.peek() != "end":
            raise ValueError("trailing input in scalar expression")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in "+-":
            op, _ = self.next()
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek() in "*/":
            op, _ = self.next()
            w = self.factor()
            v = v * w if op == "*" else v / w
        return v

    def factor(self):
        if self.peek() == "-":
            self.next()
            return -self.factor()
        v = self.base()
        if self.peek() == "^":
            self.next()
            kind, n = self.next()
            if kind != "num":
                raise ValueError("exponent must be a literal integer")
            v = v ** n
        return v

    def base(self):
        kind, val = self.next()
        if kind == "num":
            return ParamScalar.from_fraction(val)
        if kind == "name":
            aliases = {"l": "l", "lambda": "l", "t": "t", "a": "a", "alpha": "a", "n": "l"}
            if val not in aliases:
                raise ValueError("unknown symbol %r (expected l, t, or a)" % val)
            return ParamScalar.var(aliases[val])
        if kind == "(":
            v = self.expr()
            if self.next()[0] != ")":
                raise ValueError("unbalanced parenthesis")
            return v
        raise ValueError("unexpected token %r" % kind)


def parse_scalar(text) -> ParamScalar:
    """Parse "24*t^2*(l^2-4)" style expressions; `n` is an alias for l."""
    if isinstance(text, ParamScalar):
        return text
    if isinstance(text, (int, Fraction)):
        return ParamScalar.from_fraction(text)
    if isinstance(text, str) and "/" in text and text.replace("-", "").replace("/", "").isdigit():
        return ParamScalar.from_fraction(Fraction(text))
    return _Parser(str(text)).parse()


# ---------------------------------------------------------------------------
# JSON serialization (schema from the operator file format)

def scalar_to_json(s: ParamScalar):
    def poly_json(p: Poly):
        return [
            [e[0], e[1], e[2], "%d/%d" % (c.numerator, c.denominator)]
            for e, c in sorted(p.items(), key=lambda kv: monomial_key(kv[0]), reverse=True)
        ]

    return {"num": poly_json(s.num), "den": poly_json(s.den)}


def scalar_from_json(obj) -> ParamScalar:
    def poly_from(rows) -> Poly:
        p: Poly = {}
        for el, et, ea, c in rows:
            p[(el, et, ea)] = Fraction(c)
        return p

    return ParamScalar(poly_from(obj["num"]), poly_from(obj["den"]))


# ---------------------------------------------------------------------------
# Exact summation: closed form of sum_{k=0}^{D-1} p(k)

class DPoly:
    """Polynomial in the formal summation bound D with ParamScalar coefficients.

    Stored densely as a coefficient list, index = power of D.
    """

    def __init__(self, coeffs):
        coeffs = [c if isinstance(c, ParamScalar) else _coerce(c) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coeffs = coeffs

    def __eq__(self, other):
        return isinstance(other, DPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            c = ParamScalar.zero()
            if i < len(self.coeffs):
                c = c + self.coeffs[i]
            if i < len(other.coeffs):
                c = c + other.coeffs[i]
            out.append(c)
        return DPoly(out)

    def __neg__(self):
        return DPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DPoly":
        c = _coerce(c)
        return DPoly([c * x for x in self.coeffs])

    def is_zero(self):
        return not self.coeffs

    def eval(self, value) -> ParamScalar:
        value = _coerce(value)
        acc = ParamScalar.zero()
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def eval_at_lambda(self) -> ParamScalar:
        """Evaluate at D = lambda."""
        return self.eval(ParamScalar.var("l"))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mon = "D" if i == 1 else "D^%d" % i
                parts.append("(%s)*%s" % (c, mon))
        return " + ".join(parts)

    __repr__ = __str__


def _power_sum(m: int) -> DPoly:
    """Closed form of sum_{k=0}^{D-1} k^m as a polynomial in D.

    Pascal recursion: D^(m+1) = sum_{j<=m} C(m+1, j) S_j(D).
    """
    sums = []
    for mm in range(m + 1):
        # (mm+1) S_mm = D^(mm+1) - sum_{j<mm} C(mm+1, j) S_j
        acc = DPoly([ParamScalar.zero()] * (mm + 1) + [ParamScalar.one()])
        for j in range(mm):
            acc = acc - sums[j].scale(comb(mm + 1, j))
        sums.append(acc.scale(Fraction(1, mm + 1)))
    return sums[m]


def poly_sum_closed_form(p_coeffs) -> DPoly:
    """Given p(k) = sum_i c_i k^i (c_i ParamScalar, list indexed by power),
    return q(D) with q(D) = sum_{k=0}^{D-1} p(k) for all integers D >= 0.
    """
    out = DPoly([])
    for i, c in enumerate(p_coeffs):
        c = c if isinstance(c, ParamScalar) else _coerce(c)
        if c.is_zero():
            continue
        out = out + _power_sum(i).scale(c)
    return out


# Convenience singletons
LAM = ParamScalar.var("l")
T = ParamScalar.var("t")
ALPHA = ParamScalar.var("a")
ZERO = ParamScalar.zero()
ONE = ParamScalar.one()
