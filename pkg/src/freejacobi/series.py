"""Truncated complex power-series arithmetic.

A :class:`TruncatedSeries` holds coefficients c_0..c_N of a formal power
series truncated at a fixed order N.  All arithmetic is exact at the
truncation order: coefficient k of a product or composition depends only on
coefficients 0..k of the inputs.  This module is the shared engine for
moment generating functions, transform expansions and compositional
(Lagrange-type) inversion.

Design notes:

- Coefficients are double-precision complex.  Orders above ~200 require the
  caller to pre-scale the expansion variable (e.g. build series directly in
  a scaled variable such as e^{-t}u); this is documented, not automated.
- Compositional inversion uses Newton iteration on the series ring, which
  doubles the accurate order each step.
- Instances are immutable after construction; every operation is a pure
  function returning a new series, so values can be shared freely between
  threads.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

__all__ = ["TruncatedSeries"]


def _truncated_convolve(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Cauchy product of coefficient arrays, keeping orders 0..n only.

    Avoids forming the full convolution so that huge high-order products
    (which would be discarded anyway) cannot overflow.
    """
    out = np.zeros(n + 1, dtype=complex)
    top = min(len(a), n + 1)
    for i in range(top):
        ai = a[i]
        if ai == 0.0:
            continue
        m = min(len(b), n + 1 - i)
        out[i : i + m] += ai * b[:m]
    return out


class TruncatedSeries:
    """Formal power series truncated at a fixed order.

    Parameters
    ----------
    coeffs:
        Sequence of (complex) coefficients ``c_0 .. c_N``; the order of the
        series is ``len(coeffs) - 1``.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence[complex]):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a non-empty one-dimensional sequence")
        c = c.copy()
        c.setflags(write=False)
        self._c = c

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value: complex, order: int) -> "TruncatedSeries":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def identity(cls, order: int) -> "TruncatedSeries":
        """The series of z itself."""
        if order < 1:
            raise ValueError("identity needs order >= 1")
        c = np.zeros(order + 1, dtype=complex)
        c[1] = 1.0
        return cls(c)

    @classmethod
    def from_function(
        cls, coefficient: Callable[[int], complex], order: int
    ) -> "TruncatedSeries":
        return cls([coefficient(k) for k in range(order + 1)])

    # -- basic accessors ----------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return len(self._c) - 1

    def __getitem__(self, k: int) -> complex:
        return complex(self._c[k])

    def __len__(self) -> int:
        return len(self._c)

    def __repr__(self) -> str:
        head = ", ".join(f"{c:.6g}" for c in self._c[:4])
        tail = ", ..." if self.order > 3 else ""
        return f"TruncatedSeries([{head}{tail}], order={self.order})"

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return self
        return TruncatedSeries(self._c[: order + 1])

    def pad(self, order: int) -> "TruncatedSeries":
        if order <= self.order:
            return self
        c = np.zeros(order + 1, dtype=complex)
        c[: len(self._c)] = self._c
        return TruncatedSeries(c)

    def evaluate(self, z: complex) -> complex:
        """Horner evaluation of the truncated polynomial at a point."""
        acc = 0.0 + 0.0j
        for c in self._c[::-1]:
            acc = acc * z + c
        return complex(acc)

    # -- ring operations ----------------------------------------------

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            n = self.order
            c = self._c.copy()
            c[0] += other
            return TruncatedSeries(c)
        n = min(self.order, other.order)
        return TruncatedSeries(self._c[: n + 1] + other._c[: n + 1])

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self._c)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-other if isinstance(other, TruncatedSeries) else -complex(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self._c * complex(other))
        n = min(self.order, other.order)
        return TruncatedSeries(_truncated_convolve(self._c, other._c, n))

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        b = self._c
        if b[0] == 0.0:
            raise ZeroDivisionError("reciprocal of a series with zero constant term")
        n = self.order
        r = np.zeros(n + 1, dtype=complex)
        r[0] = 1.0 / b[0]
        for k in range(1, n + 1):
            m = min(k, len(b) - 1)
            r[k] = -np.dot(b[1 : m + 1], r[k - 1 :: -1][: m]) / b[0]
        return TruncatedSeries(r)

    def __truediv__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return TruncatedSeries(self._c / complex(other))

    def derivative(self) -> "TruncatedSeries":
        if self.order == 0:
            return TruncatedSeries([0.0])
        k = np.arange(1, self.order + 1)
        return TruncatedSeries(self._c[1:] * k)

    # -- composition ---------------------------------------------------

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(z)) as a truncated series.

        The inner series must have zero constant term; otherwise every
        coefficient of the result would depend on infinitely many input
        coefficients.
        """
        if inner._c[0] != 0.0:
            raise ValueError("compose requires inner series with zero constant term")
        n = min(self.order, inner.order)
        acc = np.zeros(n + 1, dtype=complex)
        for c in self._c[n::-1]:
            acc = _truncated_convolve(acc, inner._c, n)
            acc[0] += c
        return TruncatedSeries(acc)

    def invert_composition(self) -> "TruncatedSeries":
        """Compositional inverse g with self(g(z)) = z to the working order.

        Requires c_0 = 0 and c_1 != 0.  Newton iteration on the series ring,
        starting from g = z/c_1; the accurate order doubles each step.
        """
        f = self
        if f._c[0] != 0.0:
            raise ValueError("invert_composition requires zero constant term")
        if f._c[1] == 0.0:
            raise ValueError("invert_composition requires nonzero linear term")
        n = f.order
        ident = TruncatedSeries.identity(n)
        fprime = f.derivative().pad(n)
        g = TruncatedSeries(ident._c / 1.0) * (1.0 / f._c[1])
        m = 1
        while m < n:
            m = min(2 * m, n)
            gm = g.truncate(m).pad(m)
            resid = f.truncate(m).compose(gm) - ident.truncate(m)
            slope = fprime.truncate(m).compose(gm)
            g = (gm - resid / slope).pad(n)
        # one final polish at full order
        resid = f.compose(g) - ident
        g = g - resid / fprime.compose(g)
        return g

    # -- elementary functions -------------------------------------------

    def exp(self) -> "TruncatedSeries":
        """Series exponential, via the recurrence from (exp a)' = a' exp a."""
        a = self._c
        n = self.order
        e = np.zeros(n + 1, dtype=complex)
        e[0] = np.exp(a[0])
        for k in range(1, n + 1):
            j = np.arange(1, k + 1)
            e[k] = np.dot(j * a[1 : k + 1], e[k - 1 :: -1][:k]) / k
        return TruncatedSeries(e)

    def log1p(self) -> "TruncatedSeries":
        """log(1 + a) for a series a with zero constant term."""
        a = self._c
        if a[0] != 0.0:
            raise ValueError("log1p requires zero constant term (principal branch)")
        n = self.order
        l = np.zeros(n + 1, dtype=complex)
        for k in range(1, n + 1):
            j = np.arange(1, k)
            s = np.dot(j * l[1:k], a[k - 1 : 0 : -1][: k - 1]) if k > 1 else 0.0
            l[k] = a[k] - s / k
        return TruncatedSeries(l)

    def sqrt1p(self) -> "TruncatedSeries":
        """sqrt(1 + a) for a series a with zero constant term."""
        a = self._c
        if a[0] != 0.0:
            raise ValueError("sqrt1p requires zero constant term (principal branch)")
        n = self.order
        s = np.zeros(n + 1, dtype=complex)
        s[0] = 1.0
        for k in range(1, n + 1):
            inner = np.dot(s[1:k], s[k - 1 : 0 : -1][: k - 1]) if k > 1 else 0.0
            ak = a[k] if k < len(a) else 0.0
            s[k] = (ak - inner) / 2.0
        return TruncatedSeries(s)

    def pow1p(self, p: complex) -> "TruncatedSeries":
        """(1 + a)^p for a series a with zero constant term."""
        return (self.log1p() * p).exp()
