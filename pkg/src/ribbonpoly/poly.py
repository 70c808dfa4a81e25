"""Exact sparse Laurent polynomials and rational functions over the integers.

A :class:`MultiPoly` is a finite map from monomials to nonzero Python ints.
Monomials are tuples of ``(variable, exponent)`` pairs sorted by variable
name with no zero exponents, so negative exponents (Laurent monomials) are
first-class.  :class:`RationalFn` is a numerator/denominator pair normalized
only by integer content and sign; equality is decided by cross-multiplication.

>>> a, b = MultiPoly.var("a"), MultiPoly.var("b")
>>> str((a + b) * (a - b))
'a^2 - b^2'
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Monomial = Tuple[Tuple[str, int], ...]

ONE_MONO: Monomial = ()

#: Variables treated as idempotent (``d^2 = d``) by :func:`d_reduce`.
IDEMPOTENT_VARS = ("d", "δ")


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            e = e1 + e2
            if e:
                out.append((v1, e))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    if i < n1:
        out.extend(m1[i:])
    if j < n2:
        out.extend(m2[j:])
    return tuple(out)


def mono_pow(m: Monomial, k: int) -> Monomial:
    if k == 0:
        return ONE_MONO
    return tuple((v, e * k) for v, e in m)


def mono_from_dict(exps: Mapping[str, int]) -> Monomial:
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_cmp(m1: Monomial, m2: Monomial) -> int:
    """Graded lexicographic comparison; negative means ``m1`` prints first."""
    d1, d2 = mono_degree(m1), mono_degree(m2)
    if d1 != d2:
        return -1 if d1 > d2 else 1
    e1, e2 = dict(m1), dict(m2)
    for v in sorted(set(e1) | set(e2)):
        x, y = e1.get(v, 0), e2.get(v, 0)
        if x != y:
            return -1 if x > y else 1
    return 0


def _mono_str(m: Monomial) -> str:
    parts = []
    for v, e in m:
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


Scalar = Union[int, Fraction]


class MultiPoly:
    """Immutable sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean: Dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = int(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, int]) -> "MultiPoly":
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # construction -------------------------------------------------------

    @classmethod
    def var(cls, name: str, exponent: int = 1) -> "MultiPoly":
        return cls._raw({((name, exponent),) if exponent else ONE_MONO: 1})

    @classmethod
    def const(cls, c: int) -> "MultiPoly":
        return cls({ONE_MONO: c})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: int = 1) -> "MultiPoly":
        return cls({mono_from_dict(exps): coeff})

    @classmethod
    def coerce(cls, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, int):
            return cls.const(x)
        if isinstance(x, str):
            return parse_poly(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to MultiPoly")

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def items(self) -> Iterator[Tuple[Monomial, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONO in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(ONE_MONO, 0)

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def degree(self, var: str) -> int:
        if not self._terms:
            raise ValueError("degree of the zero polynomial")
        return max(dict(m).get(var, 0) for m in self._terms)

    def min_degree(self, var: str) -> int:
        if not self._terms:
            raise ValueError("degree of the zero polynomial")
        return min(dict(m).get(var, 0) for m in self._terms)

    def content(self) -> int:
        g = 0
        for c in self._terms.values():
            g = math.gcd(g, c)
        return g

    def leading_term(self) -> Tuple[Monomial, int]:
        m = min(self._terms, key=functools.cmp_to_key(_mono_cmp))
        return m, self._terms[m]

    def coefficient(self, var: str, k: int) -> "MultiPoly":
        """Collect the coefficient of ``var**k`` as a polynomial in the other variables."""
        out: Dict[Monomial, int] = {}
        for m, c in self._terms.items():
            d = dict(m)
            if d.get(var, 0) == k:
                d.pop(var, None)
                out[tuple(sorted(d.items()))] = c
        return MultiPoly._raw(out)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            if isinstance(other, int):
                other = MultiPoly.const(other)
            else:
                return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return MultiPoly.coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return MultiPoly._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Monomial, int] = {}
        get = out.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = mono_mul(m1, m2)
                out[m] = get(m, 0) + c1 * c2
        return MultiPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            if not self.is_monomial():
                raise ArithmeticError("negative power of a non-monomial polynomial")
            (m, c), = self._terms.items()
            if abs(c) != 1:
                raise ArithmeticError("negative power with non-unit coefficient")
            return MultiPoly._raw({mono_pow(m, k): c ** (-k)})
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other) -> "RationalFn":
        return RationalFn(self, MultiPoly.coerce(other))

    def __rtruediv__(self, other) -> "RationalFn":
        return RationalFn(MultiPoly.coerce(other), self)

    def shift(self, mono: Monomial) -> "MultiPoly":
        """Multiply by a monomial (possibly with negative exponents)."""
        if not mono:
            return self
        return MultiPoly._raw({mono_mul(m, mono): c for m, c in self._terms.items()})

    def scale_div(self, k: int) -> "MultiPoly":
        """Divide every coefficient by ``k``; raises if any division is inexact."""
        out = {}
        for m, c in self._terms.items():
            q, r = divmod(c, k)
            if r:
                raise ArithmeticError(f"coefficient {c} not divisible by {k}")
            out[m] = q
        return MultiPoly._raw(out)

    def exact_div(self, other) -> "MultiPoly":
        """Exact quotient ``self / other``; raises ``ArithmeticError`` if inexact."""
        return exact_divide(self, MultiPoly.coerce(other))

    # comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if isinstance(other, RationalFn):
            return other == self
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # substitution / evaluation -----------------------------------------

    def subs(self, bindings: Mapping[str, object]) -> "RationalFn":
        return substitute(self, bindings)

    def subs_poly(self, bindings: Mapping[str, object]) -> "MultiPoly":
        """Substitute and require a polynomial (Laurent) result."""
        return substitute(self, bindings).to_poly()

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        return evaluate(self, point)

    # printing -----------------------------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=functools.cmp_to_key(lambda x, y: _mono_cmp(x[0], y[0])))

    def __str__(self) -> str:
        return canonical_string(self)

    def __repr__(self) -> str:
        return f"MultiPoly({canonical_string(self)!r})"


ZERO = MultiPoly._raw({})
ONE = MultiPoly._raw({ONE_MONO: 1})


def canonical_string(p: MultiPoly) -> str:
    """Deterministic rendering in graded lexicographic order.

    >>> canonical_string(parse_poly("a*c*x_e + a^2*c^2"))
    'a^2*c^2 + a*c*x_e'
    """
    if not p.terms:
        return "0"
    chunks = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        c = abs(c)
        body = _mono_str(m)
        if not body:
            text = str(c)
        elif c == 1:
            text = body
        else:
            text = f"{c}*{body}"
        if i == 0:
            chunks.append(text if sign == "+" else "-" + text)
        else:
            chunks.append(f" {sign} {text}")
    return "".join(chunks)


def parse_poly(text: str) -> MultiPoly:
    """Parse the canonical format: ``2*a^2*b^-1 - c + 3``.

    No parentheses; juxtaposition is not multiplication.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    # sign-prefixed chunks; a '-' right after '^' belongs to the exponent
    tokens = re.split(r"(?<!\^)\s*([+-])\s*", s)
    if tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    if len(tokens) % 2:
        raise ValueError(f"malformed polynomial: {text!r}")
    out: Dict[Monomial, int] = {}
    for sign, chunk in zip(tokens[::2], tokens[1::2]):
        if not chunk:
            raise ValueError(f"malformed polynomial: {text!r}")
        coeff = 1
        exps: Dict[str, int] = {}
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed polynomial: {text!r}")
            if re.fullmatch(r"\d+", factor):
                coeff *= int(factor)
                continue
            if "^" in factor:
                name, exp = factor.split("^", 1)
                try:
                    e = int(exp)
                except ValueError:
                    raise ValueError(f"bad exponent in {factor!r}") from None
            else:
                name, e = factor, 1
            if not re.fullmatch(r"[^\s\d*^+\-][^\s*^+\-]*", name):
                raise ValueError(f"bad variable name {name!r}")
            exps[name] = exps.get(name, 0) + e
        if sign == "-":
            coeff = -coeff
        m = mono_from_dict(exps)
        out[m] = out.get(m, 0) + coeff
    return MultiPoly(out)


def d_reduce(p: MultiPoly, names: Iterable[str] = IDEMPOTENT_VARS) -> MultiPoly:
    """Reduce modulo ``d^2 - d``: every positive power of ``d`` collapses to ``d``."""
    names = set(names)
    out: Dict[Monomial, int] = {}
    for m, c in p.items():
        if any(v in names and e != 1 for v, e in m):
            if any(v in names and e < 0 for v, e in m):
                raise ValueError("negative power of an idempotent variable")
            m = tuple((v, 1 if v in names else e) for v, e in m)
        out[m] = out.get(m, 0) + c
    return MultiPoly(out)


# exact division -------------------------------------------------------------


def _split_monomial_content(p: MultiPoly) -> Tuple[Monomial, MultiPoly]:
    """Write ``p = m * q`` with ``q`` an ordinary polynomial free of monomial factors."""
    lows = {v: min(dict(m).get(v, 0) for m in p.terms) for v in p.variables()}
    mono = mono_from_dict(lows)
    return mono, p.shift(mono_pow(mono, -1))


def exact_divide(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """Exact Laurent-polynomial division; ``ArithmeticError`` if ``den`` does not divide ``num``."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return ZERO
    if den.is_monomial():
        (m, c), = den.items()
        return num.scale_div(c).shift(mono_pow(m, -1))
    mn, pn = _split_monomial_content(num)
    md, pd = _split_monomial_content(den)
    q = _divide_ordinary(pn, pd)
    return q.shift(mono_mul(mn, mono_pow(md, -1)))


def _divide_ordinary(num: MultiPoly, den: MultiPoly) -> MultiPoly:
    # lexicographic division on dense exponent vectors over a fixed variable order
    names = sorted(num.variables() | den.variables())
    index = {v: i for i, v in enumerate(names)}

    def vec(m: Monomial) -> tuple:
        out = [0] * len(names)
        for v, e in m:
            out[index[v]] = e
        return tuple(out)

    rem = {vec(m): c for m, c in num.items()}
    dterms = [(vec(m), c) for m, c in den.items()]
    lm_d, lc_d = max(dterms)
    quot: Dict[tuple, int] = {}
    while rem:
        lm = max(rem)
        qm = tuple(x - y for x, y in zip(lm, lm_d))
        if min(qm, default=0) < 0:
            raise ArithmeticError("polynomial division is not exact")
        qc, r = divmod(rem[lm], lc_d)
        if r:
            raise ArithmeticError("polynomial division is not exact over the integers")
        quot[qm] = qc
        for m, c in dterms:
            mm = tuple(x + y for x, y in zip(m, qm))
            v = rem.get(mm, 0) - qc * c
            if v:
                rem[mm] = v
            else:
                rem.pop(mm, None)
    return MultiPoly({tuple((names[i], e) for i, e in enumerate(t) if e): c for t, c in quot.items()})


# rational functions ---------------------------------------------------------


class RationalFn:
    """Quotient of two :class:`MultiPoly` values.

    Normalized by integer content and sign (denominator leading coefficient
    positive), and by moving monomial factors of the denominator into the
    Laurent numerator.  No multivariate gcd is taken, so two equal
    functions may have different representations; ``==`` cross-multiplies.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = MultiPoly.coerce(num)
        den = ONE if den is None else MultiPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        mono, den = _split_monomial_content(den)
        num = num.shift(mono_pow(mono, -1))
        g = math.gcd(num.content(), den.content())
        _, lc = den.leading_term()
        if lc < 0:
            g = -g
        if g != 1:
            num = num.scale_div(g)
            den = den.scale_div(g)
        self.num, self.den = num, den

    @classmethod
    def coerce(cls, x) -> "RationalFn":
        if isinstance(x, RationalFn):
            return x
        if isinstance(x, Fraction):
            return cls(MultiPoly.const(x.numerator), MultiPoly.const(x.denominator))
        return cls(MultiPoly.coerce(x))

    def is_polynomial(self) -> bool:
        return self.reduced().den == ONE

    def to_poly(self) -> MultiPoly:
        """Exact polynomial value; raises ``ArithmeticError`` if not a polynomial."""
        if self.den == ONE:
            return self.num
        return exact_divide(self.num, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def reduced(self) -> "RationalFn":
        """Collapse to a polynomial when the denominator divides exactly."""
        if self.den == ONE:
            return self
        try:
            return RationalFn(exact_divide(self.num, self.den))
        except ArithmeticError:
            return self

    def __add__(self, other) -> "RationalFn":
        other = RationalFn.coerce(other)
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den)

    def __sub__(self, other) -> "RationalFn":
        return self + (-RationalFn.coerce(other))

    def __rsub__(self, other) -> "RationalFn":
        return RationalFn.coerce(other) - self

    def __mul__(self, other) -> "RationalFn":
        other = RationalFn.coerce(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFn(self.den, self.num)

    def __truediv__(self, other) -> "RationalFn":
        return self * RationalFn.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RationalFn":
        return RationalFn.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RationalFn":
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFn(self.num ** k, self.den ** k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, MultiPoly, Fraction)):
            other = RationalFn.coerce(other)
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # equality is not structural

    def subs(self, bindings: Mapping[str, object]) -> "RationalFn":
        return substitute(self.num, bindings) / substitute(self.den, bindings)

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        d = evaluate(self.den, point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return evaluate(self.num, point) / d

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RationalFn({self!s})"


# substitution and evaluation -----------------------------------------------


def _as_rational(x) -> RationalFn:
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, str):
        return RationalFn(MultiPoly.var(x))
    return RationalFn.coerce(x)


def substitute(p: MultiPoly, bindings: Mapping[str, object]) -> RationalFn:
    """Simultaneous exact substitution of rational functions for variables.

    Works over a common denominator: for a variable bound to ``N/D`` and
    appearing with exponents in ``[lo, hi]`` every term is multiplied through
    by ``N^-min(lo,0) * D^max(hi,0)`` so only polynomial arithmetic is used.
    Unbound variables are left alone.
    """
    binds = {v: _as_rational(x) for v, x in bindings.items() if v in p.variables()}
    if not binds:
        return RationalFn(p)
    lo: Dict[str, int] = {v: 0 for v in binds}
    hi: Dict[str, int] = {v: 0 for v in binds}
    for m in p.terms:
        for v, e in m:
            if v in binds:
                lo[v] = min(lo[v], e)
                hi[v] = max(hi[v], e)
    for v in binds:
        if lo[v] < 0 and binds[v].num.is_zero():
            raise ZeroDivisionError(f"substituting zero for {v} with a negative exponent")

    @functools.lru_cache(maxsize=None)
    def npow(v: str, k: int) -> MultiPoly:
        return binds[v].num ** k

    @functools.lru_cache(maxsize=None)
    def dpow(v: str, k: int) -> MultiPoly:
        return binds[v].den ** k

    total = ZERO
    for m, c in p.items():
        rest = []
        factor = MultiPoly.const(c)
        seen = set()
        for v, e in m:
            if v in binds:
                seen.add(v)
                factor = factor * npow(v, e - lo[v]) * dpow(v, hi[v] - e)
            else:
                rest.append((v, e))
        for v in binds:
            if v not in seen:
                factor = factor * npow(v, -lo[v]) * dpow(v, hi[v])
        total = total + factor.shift(tuple(rest))
    den = ONE
    for v in binds:
        den = den * npow(v, -lo[v]) * dpow(v, hi[v])
    return RationalFn(total, den)


def evaluate(p: MultiPoly, point: Mapping[str, Scalar]) -> Fraction:
    total = Fraction(0)
    for m, c in p.items():
        term = Fraction(c)
        for v, e in m:
            if v not in point:
                raise KeyError(f"no value for variable {v!r}")
            x = Fraction(point[v])
            if e < 0 and x == 0:
                raise ZeroDivisionError(f"{v} = 0 with negative exponent")
            term *= x ** e
        total += term
    return total
