"""Exact polynomial coefficients: Q, Q[t] or Q[t1,t3] over Fractions.

A ParamPoly is a map from exponent tuples (one slot per ring generator)
to nonzero Fractions. The ring is identified by its generator-name tuple;
mixing rings raises. The empty ring embeds plain rationals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

Ring = tuple[str, ...]

RING_Q: Ring = ()
RING_T: Ring = ("t",)
RING_T1_T3: Ring = ("t1", "t3")

Scalar = Union[int, Fraction]


class RingMismatchError(ValueError):
    pass


class ParamPoly:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs: Mapping[tuple[int, ...], Scalar]):
        clean: dict[tuple[int, ...], Fraction] = {}
        n = len(ring)
        for exps, c in coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for ring {ring}")
            clean[exps] = clean.get(exps, Fraction(0)) + c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", {e: c for e, c in clean.items() if c != 0})

    def __setattr__(self, name, value):
        raise AttributeError("ParamPoly is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, ring: Ring, value: Scalar) -> "ParamPoly":
        value = Fraction(value)
        if value == 0:
            return cls(ring, {})
        return cls(ring, {(0,) * len(ring): value})

    @classmethod
    def gen(cls, ring: Ring, name: str) -> "ParamPoly":
        """The generator with the given name as a degree-1 monomial."""
        idx = ring.index(name)
        exps = tuple(1 if k == idx else 0 for k in range(len(ring)))
        return cls(ring, {exps: Fraction(1)})

    # -- predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.coeffs)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.coeffs.values()), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        return max(sum(e) for e in self.coeffs)

    # -- arithmetic -----------------------------------------------------------
    def _check(self, other: "ParamPoly") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(self.ring, other)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return ParamPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return ParamPoly(self.ring, {e: v * c for e, v in self.coeffs.items()})
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return ParamPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers not supported")
        out = ParamPoly.const(self.ring, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(self.ring, other)
        return isinstance(other, ParamPoly) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, frozenset(self.coeffs.items())))

    # -- output ---------------------------------------------------------------
    def __repr__(self):
        return f"ParamPoly({self.ring!r}, {self.coeffs!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for exps in sorted(self.coeffs, key=lambda e: (sum(e), e)):
            c = self.coeffs[exps]
            mono = "*".join(
                f"{name}^{e}" if e > 1 else name
                for name, e in zip(self.ring, exps)
                if e
            )
            if not mono:
                term = str(c)
            elif c == 1:
                term = mono
            elif c == -1:
                term = f"-{mono}"
            else:
                term = f"{c}*{mono}"
            bits.append(term)
        text = " + ".join(bits)
        return text.replace("+ -", "- ")

    def to_json(self) -> list[dict]:
        out = []
        for exps in sorted(self.coeffs, key=lambda e: (sum(e), e)):
            c = self.coeffs[exps]
            out.append(
                {
                    "param_exps": list(exps),
                    "numerator": c.numerator,
                    "denominator": c.denominator,
                }
            )
        return out

    @classmethod
    def from_json(cls, ring: Ring, data: list[dict]) -> "ParamPoly":
        return cls(
            ring,
            {
                tuple(item["param_exps"]): Fraction(item["numerator"], item["denominator"])
                for item in data
            },
        )
