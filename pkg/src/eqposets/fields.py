"""Exact arithmetic in a quadratic extension F < G = F(xi).

The base field F is either a prime field GF(p) (elements are ints in
range(p)) or the rationals (elements are ``fractions.Fraction``).  The
generator xi has minimal polynomial t^2 + p t + q, so xi^2 = -p xi - q.

Vectors and matrices over G are stored as numpy arrays with a trailing
axis of length 2 holding (re, im); flattening the last two axes of a
G-vector gives its coordinates in the F-basis e1, xi e1, ..., en, xi en.
"""
from __future__ import annotations

import itertools
import re
from fractions import Fraction

import numpy as np


class FieldError(ValueError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class PrimeField:
    """GF(p) with elements stored as Python/numpy ints in range(p)."""

    finite = True
    dtype = np.int64

    def __init__(self, p: int):
        if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.order = p
        self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def elem(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} has no image in GF({self.p})")
            return x.numerator * self._inv[x.denominator % self.p] % self.p
        return int(x) % self.p

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise DivisionByZero("inverse of zero")
        return self._inv[x]

    def elements(self):
        return list(range(self.p))

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object)
        return np.vectorize(self.elem, otypes=[np.int64])(a) if a.size else a.astype(np.int64)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def norm(self, a):
        return np.mod(a, self.p)

    def fmt(self, x) -> str:
        return str(int(x))


class RationalField:
    """Q with exact ``Fraction`` entries in object arrays."""

    finite = False
    dtype = object
    char = 0
    order = None

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def elem(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, x):
        x = Fraction(x)
        if x == 0:
            raise DivisionByZero("inverse of zero")
        return 1 / x

    def elements(self):
        raise FieldError("the rationals are infinite")

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object)
        if a.size:
            a = np.vectorize(Fraction, otypes=[object])(a)
        return a

    def zeros(self, shape) -> np.ndarray:
        a = np.empty(shape, dtype=object)
        a.fill(Fraction(0))
        return a

    def eye(self, n) -> np.ndarray:
        a = self.zeros((n, n))
        for i in range(n):
            a[i, i] = Fraction(1)
        return a

    def norm(self, a):
        return a

    def fmt(self, x) -> str:
        return str(Fraction(x))


QQ = RationalField()


class Tower:
    """The pair F < G where G = F[t]/(t^2 + p t + q)."""

    def __init__(self, base, p, q, name: str | None = None):
        if isinstance(base, int):
            base = PrimeField(base)
        self.F = base
        self.p = base.elem(p)
        self.q = base.elem(q)
        self.char = base.char
        self.finite = base.finite
        self.name = name or f"{base!r}[t]/(t^2+{self.p}t+{self.q})"
        root = self._find_root()
        if root is not None:
            raise FieldError(
                f"t^2 + ({self.p})t + ({self.q}) is reducible over {base!r}: root {root}")
        # matrix of multiplication by xi on (re, im) columns
        self.xi_mat = base.array([[0, -self.q], [1, -self.p]])
        self.xi_mat = base.norm(self.xi_mat)
        self.duality_enabled = self.p == 0 or self.char == 2

    def _find_root(self):
        F = self.F
        if F.finite:
            for t in F.elements():
                if (t * t + self.p * t + self.q) % F.p == 0:
                    return t
            return None
        disc = self.p * self.p - 4 * self.q
        if disc < 0:
            return None
        num, den = disc.numerator, disc.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            return None
        return (-self.p + Fraction(rn, rd)) / 2

    def __repr__(self):
        return f"Tower({self.name})"

    def __eq__(self, other):
        return isinstance(other, Tower) and (self.F, self.p, self.q) == (other.F, other.p, other.q)

    def __hash__(self):
        return hash((self.F, self.p, self.q))

    def __reduce__(self):
        return (_rebuild_tower, (self.F.char, self.p, self.q, self.name))

    # scalar helpers -----------------------------------------------------
    @property
    def size(self):
        """|G| for finite towers."""
        if not self.finite:
            raise FieldError("infinite tower")
        return self.F.order ** 2

    def g(self, re=0, im=0) -> "GElem":
        return GElem(self, re, im)

    @property
    def xi(self) -> "GElem":
        return GElem(self, 0, 1)

    def g_elements(self):
        """All elements of G ordered by (im, re)."""
        els = self.F.elements()
        return [GElem(self, a, b) for b in els for a in els]

    def parse(self, text: str) -> "GElem":
        return parse_elem(self, text)

    # array helpers ------------------------------------------------------
    def gzeros(self, rows, cols) -> np.ndarray:
        return self.F.zeros((rows, cols, 2))

    def geye(self, n) -> np.ndarray:
        m = self.gzeros(n, n)
        for i in range(n):
            m[i, i, 0] = self.F.elem(1)
        return m

    def garray(self, rows) -> np.ndarray:
        """G-matrix from nested lists of GElem / F-scalars / strings."""
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        m = self.gzeros(len(rows), ncols)
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise FieldError("ragged matrix")
            for j, v in enumerate(r):
                z = self.coerce(v)
                m[i, j, 0], m[i, j, 1] = z.re, z.im
        return m

    def coerce(self, v) -> "GElem":
        if isinstance(v, GElem):
            return v
        if isinstance(v, str):
            return self.parse(v)
        return GElem(self, v, 0)

    def entry(self, m: np.ndarray, i, j) -> "GElem":
        return GElem(self, m[i, j, 0], m[i, j, 1])

    def gmul_mat(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Product of G-matrices in (.., 2) layout."""
        F = self.F
        ar, ai = A[..., 0], A[..., 1]
        br, bi = B[..., 0], B[..., 1]
        rr = ar @ br
        ii = ai @ bi
        ri = ar @ bi + ai @ br
        out = np.empty(rr.shape + (2,), dtype=F.dtype)
        out[..., 0] = F.norm(rr - self.q * ii)
        out[..., 1] = F.norm(ri - self.p * ii)
        return out

    def realize(self, A: np.ndarray) -> np.ndarray:
        """F-matrix (2r x 2c) of a G-matrix acting on realized column vectors."""
        r, c = A.shape[:2]
        R = self.F.zeros((2 * r, 2 * c))
        ar, ai = A[..., 0], A[..., 1]
        # (x + xi y)(a + xi b) = (xa - q y b) + xi (xb + y a - p y b)
        R[0::2, 0::2] = ar
        R[0::2, 1::2] = self.F.norm(-self.q * ai)
        R[1::2, 0::2] = ai
        R[1::2, 1::2] = self.F.norm(ar - self.p * ai)
        return R

    def xi_times(self, vecs: np.ndarray) -> np.ndarray:
        """Multiply realized row vectors (k, 2n) by xi."""
        k, m = vecs.shape
        v = vecs.reshape(k, m // 2, 2)
        out = np.empty_like(v)
        out[..., 0] = self.F.norm(-self.q * v[..., 1])
        out[..., 1] = self.F.norm(v[..., 0] - self.p * v[..., 1])
        return out.reshape(k, m)

    def bar_mat(self, A: np.ndarray) -> np.ndarray:
        out = A.copy()
        out[..., 0] = self.F.norm(A[..., 0] - self.p * A[..., 1])
        out[..., 1] = self.F.norm(-A[..., 1])
        return out


def _rebuild_tower(char, p, q, name):
    return Tower(PrimeField(char) if char else QQ, p, q, name)


def _isqrt_exact(n: int):
    if n < 0:
        return None
    import math
    r = math.isqrt(n)
    return r if r * r == n else None


class GElem:
    """An element re + xi * im of G."""

    __slots__ = ("tower", "re", "im")

    def __init__(self, tower: Tower, re=0, im=0):
        self.tower = tower
        self.re = tower.F.elem(re)
        self.im = tower.F.elem(im)

    def _norm(self, x):
        F = self.tower.F
        return x % F.p if F.finite else x

    def _other(self, w):
        if isinstance(w, GElem):
            if w.tower != self.tower:
                raise FieldError("elements from different towers")
            return w
        return GElem(self.tower, w, 0)

    def __add__(self, w):
        w = self._other(w)
        return GElem(self.tower, self.re + w.re, self.im + w.im)

    __radd__ = __add__

    def __neg__(self):
        return GElem(self.tower, -self.re, -self.im)

    def __sub__(self, w):
        return self + (-self._other(w))

    def __rsub__(self, w):
        return self._other(w) - self

    def __mul__(self, w):
        w = self._other(w)
        t = self.tower
        a, b, c, d = self.re, self.im, w.re, w.im
        # (a + xi b)(c + xi d) = ac - q bd + xi (ad + bc - p bd)
        return GElem(t, a * c - t.q * b * d, a * d + b * c - t.p * b * d)

    __rmul__ = __mul__

    def norm(self):
        """N(z) = z * bar(z) in F."""
        t = self.tower
        a, b = self.re, self.im
        return self._norm(a * a - t.p * a * b + t.q * b * b)

    def inv(self) -> "GElem":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in G")
        n = self.tower.F.inv(self.norm())
        return self.bar() * GElem(self.tower, n, 0)

    def __truediv__(self, w):
        return self * self._other(w).inv()

    def __pow__(self, k: int):
        out, base = GElem(self.tower, 1, 0), self
        if k < 0:
            base, k = self.inv(), -k
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def hat(self) -> "GElem":
        return GElem(self.tower, self.re, -self.im)

    def bar(self) -> "GElem":
        return GElem(self.tower, self.re - self.tower.p * self.im, -self.im)

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def in_base(self):
        return self.im == 0

    def __eq__(self, w):
        if isinstance(w, GElem):
            return self.tower == w.tower and self.re == w.re and self.im == w.im
        try:
            return self.im == 0 and self.re == self.tower.F.elem(w)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return format_elem(self)


def g_arith(op: str, z: GElem, w: GElem | None = None) -> GElem:
    if op == "add":
        return z + w
    if op == "mul":
        return z * w
    if op == "neg":
        return -z
    if op == "inv":
        return z.inv()
    raise FieldError(f"unknown operation {op!r}")


def conjugates(z: GElem):
    """(hat, bar, re, im) of z."""
    return z.hat(), z.bar(), z.re, z.im


# presets ------------------------------------------------------------------

def make_tower(base, p, q, name=None) -> Tower:
    if base in ("Q", "QQ", "rationals", 0):
        base = QQ
    return Tower(base, p, q, name)


def gf2_tower() -> Tower:
    return Tower(PrimeField(2), 1, 1, "gf2")


def qsqrt2_tower() -> Tower:
    return Tower(QQ, 0, -2, "qsqrt2")


def gf3_tower() -> Tower:
    return Tower(PrimeField(3), 0, 1, "gf3")


PRESETS = {"gf2": gf2_tower, "qsqrt2": qsqrt2_tower, "gf3": gf3_tower}


def preset(name: str) -> Tower:
    try:
        return PRESETS[name]()
    except KeyError:
        raise FieldError(f"unknown field preset {name!r} (choose from {', '.join(PRESETS)})")


# element syntax -----------------------------------------------------------

_TERM = re.compile(r"[+-]?[^+-]+")


def parse_elem(tower: Tower, text: str) -> GElem:
    s = text.replace(" ", "")
    if not s:
        raise FieldError("empty element")
    terms = _TERM.findall(s)
    if "".join(terms) != s:
        raise FieldError(f"cannot parse element {text!r}")
    re_part, im_part = Fraction(0), Fraction(0)
    for t in terms:
        sign = -1 if t[0] == "-" else 1
        body = t.lstrip("+-")
        try:
            if body == "x":
                im_part += sign
            elif body.endswith("*x"):
                im_part += sign * Fraction(body[:-2])
            elif body.endswith("x"):
                im_part += sign * Fraction(body[:-1])
            else:
                re_part += sign * Fraction(body)
        except (ValueError, ZeroDivisionError):
            raise FieldError(f"cannot parse element {text!r}") from None
    return GElem(tower, re_part, im_part)


def format_elem(z: GElem) -> str:
    F = z.tower.F
    re_s, im = F.fmt(z.re), z.im
    if im == 0:
        return re_s
    if F.finite:
        coef = "" if im == 1 else f"{F.fmt(im)}*"
        body = f"{coef}x"
        return body if z.re == 0 else f"{re_s}+{body}"
    mag = abs(Fraction(im))
    coef = "" if mag == 1 else f"{mag}*"
    if z.re == 0:
        return f"{'-' if im < 0 else ''}{coef}x"
    return f"{re_s}{'-' if im < 0 else '+'}{coef}x"


# polynomials --------------------------------------------------------------

def frobenius_companion(tower: Tower, coeffs, f_only: bool = False) -> np.ndarray:
    """Companion matrix of t^n + a_{n-1} t^{n-1} + ... + a_0 (coeffs = a_0..a_{n-1})."""
    coeffs = [tower.coerce(c) for c in coeffs]
    n = len(coeffs)
    if n == 0:
        raise FieldError("companion matrix of a degree-0 polynomial")
    if f_only and any(not c.in_base() for c in coeffs):
        raise FieldError("coefficient outside F for an F-Frobenius block")
    m = tower.gzeros(n, n)
    for i in range(n - 1):
        m[i, i + 1, 0] = tower.F.elem(1)
    for j, c in enumerate(coeffs):
        neg = -c
        m[n - 1, j, 0], m[n - 1, j, 1] = neg.re, neg.im
    return m


def enumerate_monic(tower: Tower, deg: int, scalars: str = "F"):
    """All monic polynomials of degree ``deg`` as coefficient tuples (a_0..a_{deg-1})."""
    if not tower.finite:
        raise FieldError("enumerate_monic needs a finite base field")
    if scalars == "F":
        pool = [GElem(tower, a, 0) for a in tower.F.elements()]
    elif scalars == "G":
        pool = tower.g_elements()
    else:
        raise FieldError("scalars must be 'F' or 'G'")
    return [tuple(reversed(c)) for c in itertools.product(pool, repeat=deg)]


def format_poly(coeffs) -> str:
    """Human form of the monic polynomial with low-to-high ``coeffs``."""
    n = len(coeffs)
    parts = ["t" if n == 1 else f"t^{n}"]
    for k in range(n - 1, -1, -1):
        c = coeffs[k]
        if c.is_zero():
            continue
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        cs = format_elem(c)
        if mono and cs == "1":
            parts.append(mono)
        elif mono:
            parts.append(f"({cs}){mono}")
        else:
            parts.append(cs if "+" not in cs and "-" not in cs[1:] else f"({cs})")
    return "+".join(parts)


def parse_poly(tower: Tower, text: str):
    """Parse a monic polynomial in t, e.g. ``t^2+t+1`` or ``t^2+(x)t+1``."""
    s = text.replace(" ", "")
    coeffs: dict[int, GElem] = {}
    depth, start, terms = 0, 0, []
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start:
            terms.append(s[start:i])
            start = i
    terms.append(s[start:])
    for t in terms:
        sign = -1 if t.startswith("-") else 1
        body = t.lstrip("+-")
        m = re.fullmatch(r"(?:\((.+)\)\*?|([0-9/]*\*?x|[0-9/]+)\*?)?(t(?:\^(\d+))?)?", body)
        if not m or not body:
            raise FieldError(f"cannot parse polynomial term {t!r}")
        coef_txt = m.group(1) or m.group(2) or "1"
        deg = 0 if m.group(3) is None else int(m.group(4) or 1)
        c = parse_elem(tower, coef_txt) * sign
        coeffs[deg] = coeffs.get(deg, GElem(tower)) + c
    n = max(coeffs)
    if n == 0 or coeffs[n] != GElem(tower, 1, 0):
        raise FieldError(f"polynomial {text!r} is not monic of positive degree")
    return [coeffs.get(k, GElem(tower)) for k in range(n)]
