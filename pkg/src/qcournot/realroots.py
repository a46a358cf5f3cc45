"""Real roots of univariate polynomials with real coefficients.

Roots are isolated with Sturm sequences on the square-free part, narrowed by
bisection and polished with a few Newton steps.  Degree <= 3 has a
closed-form path (trigonometric / Cardano) used for best responses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

MAX_DEGREE = 16
RES_TOL = 1e-10
# remainder coefficients below this fraction of the cancelled magnitude are noise
TRUNC_TOL = 1e-13
# isolating intervals narrower than this (relative) with >1 root are merged
MERGE_TOL = 1e-7
BISECT_TOL = 1e-12
# relative remainder below which a candidate gcd counts as a true factor
GCD_TOL = 1e-9
NEWTON_STEPS = 5


class ZeroPolynomial(ValueError):
    pass


class DegreeTooHigh(ValueError):
    pass


def _strip(coeffs: Sequence[float]) -> tuple[float, ...]:
    c = [float(v) for v in coeffs]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial, ``coeffs[k]`` multiplies ``x**k``.

    Trailing zeros are stripped; the zero polynomial has empty ``coeffs``
    and degree -1.
    """

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Sequence[float]):
        c = _strip(coeffs)
        if len(c) - 1 > MAX_DEGREE:
            raise DegreeTooHigh(f"degree {len(c) - 1} exceeds {MAX_DEGREE}")
        if not all(math.isfinite(v) for v in c):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_roots(cls, roots: Sequence[float]) -> "Polynomial":
        p = cls([1.0])
        for r in roots:
            p = p * cls([-r, 1.0])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0.0,) * (n - len(self.coeffs))
        b = other.coeffs + (0.0,) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial | float") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return Polynomial([])
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """Return ``self(inner(x))`` (Horner in polynomial arithmetic)."""
        acc = Polynomial([])
        for c in reversed(self.coeffs):
            acc = acc * inner + Polynomial([c])
        return acc

    def shift(self, h: float) -> "Polynomial":
        """Return ``self(x + h)``."""
        return self.compose(Polynomial([h, 1.0]))

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def scale(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def residual_scale(self, x: float) -> float:
        return self.scale() * max(1.0, abs(x)) ** max(self.degree, 0)


@dataclass(frozen=True)
class RootSet:
    roots: tuple[float, ...] = ()
    multiplicity_flags: tuple[bool, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def flagged(self) -> bool:
        return any(self.multiplicity_flags)


# -- polynomial division with noise truncation -------------------------------

def _divmod(num: list[float], den: list[float], truncate: bool = True) -> tuple[list[float], list[float]]:
    """Long division on ascending coefficient lists.

    A leading remainder coefficient is cancellation noise, and dropped, when
    it is below ``TRUNC_TOL`` times the magnitude of the terms that cancelled
    to produce it.
    """
    num = list(num)
    mag = [abs(v) for v in num]
    dn = len(den) - 1
    lead = den[-1]
    if len(num) - 1 < dn:
        return [0.0], num
    quot = [0.0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        f = num[k] / lead
        quot[k - dn] = f
        for i in range(dn + 1):
            num[k - dn + i] -= f * den[i]
            mag[k - dn + i] += abs(f * den[i])
        num[k] = 0.0
    rem = num[:dn]
    tol = TRUNC_TOL if truncate else 0.0
    while rem and abs(rem[-1]) <= tol * mag[len(rem) - 1]:
        rem.pop()
    return quot, rem


def _normalized(c: list[float]) -> list[float]:
    m = max(abs(v) for v in c)
    return [v / m for v in c]


def _unit(p: Polynomial) -> Polynomial:
    # scaled copy whose coefficients match the head of its Sturm chain exactly
    return Polynomial(_normalized(list(p.coeffs)))


def _gcd(p: list[float], q: list[float]) -> list[float]:
    a, b = _normalized(p), _normalized(q)
    while b:
        _, r = _divmod(a, b)
        a, b = b, (_normalized(r) if r else [])
    return a


def square_free(p: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Return ``(p / gcd(p, p'), gcd(p, p'))``."""
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial")
    if p.degree < 2:
        return p, Polynomial([1.0])
    g = _gcd(list(p.coeffs), list(p.derivative().coeffs))
    if len(g) == 1 or not _divides(g, p):
        return p, Polynomial([1.0])
    q, _ = _divmod(list(p.coeffs), g)
    return Polynomial(q), Polynomial(g)


def _divides(g: list[float], p: Polynomial) -> bool:
    """Whether a truncated-Euclid gcd is a genuine common factor of p and p'.

    Truncation can end the remainder sequence early on an ill-conditioned
    but square-free p; a real factor leaves tiny remainders in both.
    """
    reach = max(1.0, cauchy_bound(Polynomial(g)))
    for f in (p, p.derivative()):
        _, r = _divmod(list(f.coeffs), g, truncate=False)
        if r and max(abs(v) for v in r) > GCD_TOL * f.scale() * reach ** f.degree:
            return False
    return True


# -- Sturm chains ------------------------------------------------------------

def _sturm_chain(p: Polynomial, truncate: bool = True) -> list[tuple[float, ...]]:
    """Sturm sequence of ``p``; expects ``p`` square-free.

    If truncation ends the sequence before a constant, ``p`` was only
    numerically close to having a multiple root, so the sequence is rebuilt
    from the raw remainders.
    """
    chain = [_normalized(list(p.coeffs))]
    if p.degree < 1:
        return [tuple(chain[0])]
    chain.append(_normalized(list(p.derivative().coeffs)))
    while len(chain[-1]) > 1:
        _, r = _divmod(chain[-2], chain[-1], truncate)
        if not r:
            if truncate:
                return _sturm_chain(p, truncate=False)
            break
        chain.append([-v for v in _normalized(r)])
    return [tuple(c) for c in chain]


def _variations(chain: list[tuple[float, ...]], x: float) -> int:
    count = 0
    last = 0.0
    for coeffs in chain:
        v = 0.0
        for c in reversed(coeffs):
            v = v * x + c
        if v != 0.0:
            if last != 0.0 and (v > 0.0) != (last > 0.0):
                count += 1
            last = v
    return count


def _avoid_root(p: Polynomial, x: float, direction: float = 1.0) -> float:
    while p(x) == 0.0:
        x += direction * RES_TOL * max(1.0, abs(x))
    return x


def sturm_count(p: Polynomial, lo: float, hi: float) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``."""
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got ({lo}, {hi})")
    sqf = _unit(square_free(p)[0])
    lo, hi = _avoid_root(sqf, lo, 1.0), _avoid_root(sqf, hi, 1.0)
    chain = _sturm_chain(sqf)
    return _variations(chain, lo) - _variations(chain, hi)


def cauchy_bound(p: Polynomial) -> float:
    lead = p.coeffs[-1]
    return 1.0 + max((abs(c / lead) for c in p.coeffs[:-1]), default=0.0)


# -- closed form, degree <= 3 -------------------------------------------------

def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _newton_polish(p: Polynomial, x: float, steps: int = 1) -> float:
    dp = p.derivative()
    for _ in range(steps):
        d = dp(x)
        if d == 0.0:
            break
        nx = x - p(x) / d
        if not math.isfinite(nx) or abs(p(nx)) > abs(p(x)):
            break
        x = nx
    return x


def _dedupe(roots: list[float], flags: list[bool]) -> RootSet:
    pairs = sorted(zip(roots, flags))
    out: list[float] = []
    out_flags: list[bool] = []
    for r, f in pairs:
        if out and abs(r - out[-1]) <= MERGE_TOL * max(1.0, abs(r)):
            out_flags[-1] = True
            continue
        out.append(r)
        out_flags.append(f)
    return RootSet(tuple(out), tuple(out_flags))


def real_roots_cubic(p: Polynomial) -> RootSet:
    """All real roots of a polynomial of degree 1 to 3.

    Closed-form evaluation (trigonometric form for three real roots, a
    cancellation-free Cardano form for one) followed by one Newton step.
    """
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial")
    if p.degree > 3:
        raise DegreeTooHigh(f"degree {p.degree} > 3")
    if p.degree < 1:
        return RootSet()
    c = p.coeffs
    if p.degree == 1:
        return RootSet((-c[0] / c[1],), (False,))
    if p.degree == 2:
        a, b, cc = c[2], c[1], c[0]
        disc = b * b - 4.0 * a * cc
        if disc < 0.0:
            return RootSet()
        if disc == 0.0:
            return RootSet((-b / (2.0 * a),), (True,))
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        roots = [q / a, cc / q] if q != 0.0 else [0.0, 0.0]
        return _dedupe([_newton_polish(p, r) for r in roots], [False, False])

    # monic x^3 + b x^2 + c x + d, depressed with x = t - b/3
    b, cc, d = c[2] / c[3], c[1] / c[3], c[0] / c[3]
    shift = b / 3.0
    pp = cc - b * b / 3.0
    qq = 2.0 * b ** 3 / 27.0 - b * cc / 3.0 + d
    disc = -(4.0 * pp ** 3 + 27.0 * qq ** 2)
    size = 4.0 * abs(pp) ** 3 + 27.0 * qq ** 2
    if size == 0.0:
        # triple root
        ts, flags = [0.0], [True]
    elif abs(disc) <= 1e-14 * size:
        # double root at t = -3q/(2p), simple root at 3q/p
        ts, flags = [3.0 * qq / pp, -1.5 * qq / pp], [False, True]
    elif disc > 0.0:
        m = 2.0 * math.sqrt(-pp / 3.0)
        arg = 3.0 * qq / (pp * m)
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        ts = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
        flags = [False] * 3
    else:
        big = _cbrt(abs(qq) / 2.0 + math.sqrt(-disc / 108.0))
        u = -math.copysign(big, qq) if qq != 0.0 else big
        ts = [u - pp / (3.0 * u)]
        flags = [False]
    roots = [_newton_polish(p, t - shift) for t in ts]
    return _dedupe(roots, flags)


# -- general degree -----------------------------------------------------------

def _bisect(p: Polynomial, lo: float, hi: float) -> float:
    """Narrow a sign-changing bracket of ``p`` on ``(lo, hi]``."""
    flo, fhi = p(lo), p(hi)
    if fhi == 0.0:
        return hi
    if flo == 0.0:
        return lo
    while hi - lo > BISECT_TOL * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = p(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _polish(p: Polynomial, x: float, lo: float, hi: float) -> float:
    dp = p.derivative()
    for _ in range(NEWTON_STEPS):
        fx, d = p(x), dp(x)
        if fx == 0.0 or d == 0.0:
            break
        nx = x - fx / d
        if not (lo <= nx <= hi) or abs(p(nx)) >= abs(fx):
            break
        x = nx
    return x


def real_roots(p: Polynomial) -> RootSet:
    """All distinct real roots of ``p``, ascending.

    Roots of the square-free part are isolated inside the Cauchy bound by
    recursive Sturm counting, bisected and Newton-polished.  Roots that are
    multiple in ``p``, or clusters that cannot be separated at ``MERGE_TOL``,
    are returned once with their multiplicity flag set.
    """
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial")
    if p.degree < 1:
        return RootSet()
    sqf, g = square_free(p)
    sqf = _unit(sqf)
    bound = cauchy_bound(sqf)
    chain = _sturm_chain(sqf)
    lo = _avoid_root(sqf, -bound, -1.0)
    hi = _avoid_root(sqf, bound, 1.0)

    cache: dict[float, int] = {}

    def var(x: float) -> int:
        if x not in cache:
            cache[x] = _variations(chain, x)
        return cache[x]

    roots: list[float] = []
    flags: list[bool] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = var(a) - var(b)
        if n <= 0:
            continue
        if n == 1:
            r = _polish(sqf, _bisect(sqf, a, b), a, b)
            roots.append(r)
            flags.append(False)
            continue
        mid = 0.5 * (a + b)
        if b - a <= MERGE_TOL * max(1.0, abs(mid)):
            roots.append(_polish(sqf, mid, a, b))
            flags.append(True)
            continue
        mid = _avoid_root(sqf, mid)
        if not a < mid < b:
            mid = 0.5 * (a + b)
        stack.append((mid, b))
        stack.append((a, mid))

    if g.degree >= 1:
        gs = Polynomial(_normalized(list(g.coeffs)))
        for i, r in enumerate(roots):
            if abs(gs(r)) <= 1e-6 * gs.residual_scale(r):
                flags[i] = True
    return _dedupe(roots, flags)
