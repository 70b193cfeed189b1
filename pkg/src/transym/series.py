"""Graded formal power series in coordinates t^1..t^r.

Each coordinate carries a parity; odd coordinates square to zero and
anticommute.  Monomials are exponent tuples (odd exponents are 0 or 1),
stored with the implicit ordering t^1 < t^2 < ... < t^r; products carry
the Koszul sign of sorting the concatenated odd letters.  Derivatives
are right derivatives (they strip a coordinate from the right end of
the monomial word).  All coefficients are exact rationals.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

Mono = tuple  # exponent tuple, one entry per coordinate


def mono_order(m: Mono) -> int:
    return sum(m)


def mono_parity(m: Mono, parities) -> int:
    return sum(e * p for e, p in zip(m, parities)) % 2


def _odd_word(m: Mono, parities):
    return [i for i, e in enumerate(m) if e and parities[i]]


def mono_mul(m1: Mono, m2: Mono, parities):
    """(sign, product monomial), or None if an odd coordinate repeats."""
    out = []
    for i, (a, b) in enumerate(zip(m1, m2)):
        e = a + b
        if parities[i] and e > 1:
            return None
        out.append(e)
    # Koszul sign: inversions in the concatenation of the odd words
    w1, w2 = _odd_word(m1, parities), _odd_word(m2, parities)
    inv = sum(1 for a in w1 for b in w2 if a > b)
    return (-1) ** inv, tuple(out)


def monomials_of_order(r: int, order: int, parities) -> list[Mono]:
    """All monomials of the given total order, sorted."""
    out = []

    def rec(i, left, acc):
        if i == r:
            if left == 0:
                out.append(tuple(acc))
            return
        top = min(left, 1 if parities[i] else left)
        for e in range(top + 1):
            rec(i + 1, left - e, acc + [e])

    rec(0, order, [])
    out.sort()
    return out


class TSeries:
    """Truncated formal series with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for m, c in terms.items():
                cf = Fraction(c)
                if cf != 0:
                    self.terms[m] = cf

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, r: int, c) -> "TSeries":
        return cls({(0,) * r: Fraction(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m: Mono) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def max_order(self) -> int:
        return max((mono_order(m) for m in self.terms), default=0)

    def part(self, order: int) -> "TSeries":
        return TSeries({m: c for m, c in self.terms.items()
                        if mono_order(m) == order})

    def truncate(self, order: int) -> "TSeries":
        return TSeries({m: c for m, c in self.terms.items()
                        if mono_order(m) <= order})

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return TSeries(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) - c
        return TSeries(out)

    def scale(self, c) -> "TSeries":
        c = Fraction(c)
        return TSeries({m: x * c for m, x in self.terms.items()})

    def mul(self, other: "TSeries", parities,
            cutoff: int | None = None) -> "TSeries":
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if cutoff is not None and \
                        mono_order(m1) + mono_order(m2) > cutoff:
                    continue
                prod = mono_mul(m1, m2, parities)
                if prod is None:
                    continue
                s, m = prod
                out[m] = out.get(m, Fraction(0)) + s * c1 * c2
        return TSeries(out)

    def __eq__(self, other):
        return isinstance(other, TSeries) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms):
            c = self.terms[m]
            name = "*".join(f"t{i + 1}" + (f"^{e}" if e > 1 else "")
                            for i, e in enumerate(m) if e)
            bits.append(f"{c}*{name}" if name else f"{c}")
        return " + ".join(bits)


def t_derivative(s: TSeries, a: int, parities) -> TSeries:
    """Right derivative with respect to t^{a+1}."""
    out = {}
    for m, c in s.terms.items():
        if m[a] == 0:
            continue
        m2 = list(m)
        m2[a] -= 1
        if parities[a]:
            # move t^a to the right end of the monomial word
            sign = (-1) ** sum(1 for i in _odd_word(m, parities) if i > a)
            coeff = sign * c
        else:
            coeff = m[a] * c
        m2 = tuple(m2)
        out[m2] = out.get(m2, Fraction(0)) + coeff
    return TSeries(out)


def integrate_family(family, r: int, parities, max_order: int) -> TSeries:
    """A series Y with right derivatives d/dt^a Y = family[a] for all a,
    built with the Euler operator and verified by re-differentiation.

    Raises ValueError when the family is not integrable (the verification
    fails), which would indicate a symmetry violation upstream.
    """
    y = TSeries()
    for n in range(1, max_order + 1):
        part = {}
        for a in range(r):
            xa = family[a].part(n - 1)
            for m, c in xa.terms.items():
                if parities[a] and m[a]:
                    continue
                m2 = list(m)
                m2[a] += 1
                if parities[a]:
                    # t^a multiplied in at the right end of the word
                    sign = (-1) ** sum(
                        1 for i in _odd_word(m, parities) if i > a)
                    val = sign * c
                else:
                    val = c
                m2 = tuple(m2)
                part[m2] = part.get(m2, Fraction(0)) + Fraction(val, n)
        y = y + TSeries(part)
    for a in range(r):
        want = family[a].truncate(max_order - 1)
        got = t_derivative(y, a, parities)
        if got != want:
            raise ValueError(
                f"family is not integrable: derivative {a} mismatch")
    return y
