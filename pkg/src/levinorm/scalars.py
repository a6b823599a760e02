"""Exact scalar fields: rationals (``gmpy2.mpq``) and Gaussian rationals.

All algebra in the package is carried out over one of these two fields.
Rationals are plain ``mpq`` values; Gaussian rationals are
:class:`GaussianRational` instances whose parts are ``mpq``.
"""

from __future__ import annotations

import re

from gmpy2 import mpq

__all__ = [
    "mpq",
    "QQ",
    "GaussianRational",
    "FIELDS",
    "parse_scalar",
    "format_scalar",
    "to_field",
    "abs2",
    "to_complex",
    "ScalarParseError",
]

QQ = mpq
FIELDS = ("rational", "gaussian")

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


class ScalarParseError(ValueError):
    """A scalar string could not be read as an exact rational."""


class GaussianRational:
    """Element ``re + i*im`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, complex):
            raise TypeError("floating complex values are not exact")
        try:
            return GaussianRational(mpq(other), 0)
        except (TypeError, ValueError):
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational((self.re * o.re + self.im * o.im) / d,
                                (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def parse_scalar(value, field="rational"):
    """Read an exact scalar from its serialized form.

    Accepted forms are ``"p/q"`` or ``"p"`` strings, Python ints, and (in the
    Gaussian field) objects ``{"re": "p/q", "im": "p/q"}``. Floats are
    rejected since they are not exact.
    """
    if isinstance(value, dict):
        if set(value) - {"re", "im"}:
            raise ScalarParseError(f"unexpected keys in complex scalar: {sorted(value)}")
        re_part = parse_scalar(value.get("re", "0"))
        im_part = parse_scalar(value.get("im", "0"))
        if field != "gaussian" and im_part != 0:
            raise ScalarParseError("non-real scalar outside gaussian field mode")
        if field == "gaussian":
            return GaussianRational(re_part, im_part)
        return re_part
    if isinstance(value, bool) or isinstance(value, float):
        raise ScalarParseError(f"inexact or invalid scalar {value!r}")
    if isinstance(value, int):
        x = mpq(value)
    elif isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ScalarParseError(f"malformed rational {value!r}")
        try:
            x = mpq(value.replace(" ", ""))
        except ZeroDivisionError as exc:
            raise ScalarParseError(f"zero denominator in {value!r}") from exc
    else:
        raise ScalarParseError(f"cannot read scalar from {type(value).__name__}")
    return GaussianRational(x, 0) if field == "gaussian" else x


def format_scalar(x):
    """Inverse of :func:`parse_scalar`; rationals become ``"p/q"`` strings."""
    if isinstance(x, GaussianRational):
        return {"re": str(x.re), "im": str(x.im)}
    return str(mpq(x))


def to_field(x, field="rational"):
    if field == "gaussian":
        return x if isinstance(x, GaussianRational) else GaussianRational(x, 0)
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise ValueError("non-real value in rational field")
        return x.re
    return mpq(x)


def abs2(x):
    """Exact squared modulus."""
    if isinstance(x, GaussianRational):
        return x.re * x.re + x.im * x.im
    return x * x


def to_complex(x):
    if isinstance(x, GaussianRational):
        return complex(x)
    return complex(float(x))
