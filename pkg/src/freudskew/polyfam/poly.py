"""Dense univariate polynomials over mpf or Fraction coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable


def _zero_like(c):
    return c * 0


class Poly:
    """Polynomial with ascending-degree coefficients.

    Trailing zeros are stripped, so ``degree`` is exact; the zero
    polynomial has degree ``-1`` and coefficient tuple ``(0,)``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        c = list(coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [0]
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, k: int, one=1):
        return cls([one * 0] * k + [one])

    @classmethod
    def constant(cls, c):
        return cls([c])

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _zero_like(self.coeffs[0])

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.coeffs == other.coeffs

    __hash__ = None

    def _coerce(self, other):
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self), len(other))
        return Poly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        out = [_zero_like(self.coeffs[0]) * other.coeffs[0]] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "Poly":
        """Multiply by ``x**k``."""
        if self.degree < 0:
            return self
        return Poly([_zero_like(self.coeffs[0])] * k + list(self.coeffs))

    def derivative(self) -> "Poly":
        if len(self) == 1:
            return Poly([_zero_like(self.coeffs[0])])
        return Poly([k * self.coeffs[k] for k in range(1, len(self))])

    def __call__(self, x):
        acc = _zero_like(self.coeffs[0]) * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def max_abs(self):
        return max(abs(c) for c in self.coeffs)

    def parity_defect(self, parity: int):
        """Largest coefficient of the wrong parity (``parity`` is 0 or 1)."""
        bad = [abs(c) for k, c in enumerate(self.coeffs) if k % 2 != parity]
        return max(bad) if bad else abs(_zero_like(self.coeffs[0]))

    def in_square(self, parity: int) -> "Poly":
        """``p(x) = x**parity * q(x**2)`` returns ``q``; other coefficients
        are dropped, check :meth:`parity_defect` first."""
        return Poly(self.coeffs[parity::2] or [_zero_like(self.coeffs[0])])

    def of_square(self, parity: int = 0) -> "Poly":
        """``q(z)`` returns ``x**parity * q(x**2)``."""
        zero = _zero_like(self.coeffs[0])
        out = [zero] * parity
        for c in self.coeffs:
            out.extend([c, zero])
        return Poly(out)


X = Poly([0, 1])


def as_fraction_poly(coeffs) -> Poly:
    return Poly([Fraction(c) for c in coeffs])
