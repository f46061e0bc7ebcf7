"""Exact scalar backends.

Two fields are supported: the rationals (default) and prime fields GF(p).
Elements live in numpy object arrays so every tensor operation stays exact.
Rational elements are Python ``int`` when integral and ``Fraction`` otherwise;
prime-field elements are ``int`` in ``[0, p)``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

__all__ = ["Field", "Rationals", "PrimeField", "QQ", "field_from_descriptor", "MERSENNE31"]

MERSENNE31 = 2**31 - 1

_COEFF_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*(?:mod\s+(\d+))?\s*$")


class Field:
    """Common interface of the scalar backends."""

    name: str = "field"
    characteristic: int = 0

    def coerce(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Normalise an object array after raw arithmetic."""
        return arr

    def div(self, a, b):
        return self.coerce(a * self.inv(b))

    def parse(self, text: str):
        m = _COEFF_RE.match(str(text))
        if m is None:
            raise ValueError(f"cannot parse coefficient {text!r}")
        num, den, mod = m.groups()
        if mod is not None:
            if self.characteristic != int(mod):
                raise ValueError(f"coefficient {text!r} does not live in {self.descriptor()}")
        value = Fraction(int(num), int(den) if den else 1)
        return self.coerce(value)

    def format(self, x) -> str:
        return str(self.coerce(x))

    def array(self, data, shape=None) -> np.ndarray:
        arr = np.array(data, dtype=object)
        if shape is not None:
            arr = arr.reshape(shape)
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            flat[i] = self.coerce(v)
        return flat.reshape(arr.shape)

    def zeros(self, shape) -> np.ndarray:
        arr = np.empty(shape, dtype=object)
        arr.fill(0)
        return arr

    def eye(self, n: int) -> np.ndarray:
        arr = self.zeros((n, n))
        for i in range(n):
            arr[i, i] = 1
        return arr

    def is_zero_array(self, arr) -> bool:
        return not any(v != 0 for v in np.asarray(arr, dtype=object).reshape(-1))

    def equal_arrays(self, a, b) -> bool:
        a = self.reduce(np.asarray(a, dtype=object) - np.asarray(b, dtype=object))
        return self.is_zero_array(a)

    def descriptor(self) -> str:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.descriptor())

    def __repr__(self):
        return f"<{self.descriptor()}>"


class Rationals(Field):
    name = "rational"
    characteristic = 0

    def coerce(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, Integral):
            return int(x)
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, Rational):
            return self.coerce(Fraction(x.numerator, x.denominator))
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"refusing inexact scalar {x!r} of type {type(x).__name__}")

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.coerce(Fraction(1) / x)

    def reduce(self, arr):
        return arr

    def descriptor(self) -> str:
        return "rational"


class PrimeField(Field):
    name = "prime"

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def coerce(self, x):
        p = self.p
        if isinstance(x, bool):
            return int(x) % p
        if isinstance(x, Integral):
            return int(x) % p
        if isinstance(x, Rational):
            den = x.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
            return x.numerator * pow(den, -1, p) % p
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"refusing inexact scalar {x!r} of type {type(x).__name__}")

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def reduce(self, arr):
        if isinstance(arr, np.ndarray):
            return arr % self.p
        return int(arr) % self.p

    def format(self, x) -> str:
        return str(self.coerce(x))

    def descriptor(self) -> str:
        return f"prime:{self.p}"


QQ = Rationals()


def field_from_descriptor(desc) -> Field:
    """``"rational"`` or ``"prime:p"`` (also accepts ``{"kind": "prime", "p": p}``)."""
    if isinstance(desc, Field):
        return desc
    if isinstance(desc, dict):
        kind = desc.get("kind", "rational")
        if kind == "rational":
            return QQ
        if kind == "prime":
            return PrimeField(int(desc["p"]))
        raise ValueError(f"unknown field kind {kind!r}")
    text = str(desc).strip().lower()
    if text in ("rational", "q", "qq"):
        return QQ
    if text.startswith("prime:"):
        return PrimeField(int(text.split(":", 1)[1]))
    raise ValueError(f"unknown field descriptor {desc!r}")
