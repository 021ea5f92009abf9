"""Truncated multivariate Laurent series with exact polynomial coefficients.

Variables: u (u = q^{1/2}, so integer u-exponents encode half-integer powers
of q) plus up to four loop variables z1..z4. A monomial is keyed by the flat
integer tuple (u_exp, z1_exp, ..., zn_exp). Every series carries a
TruncationSpec; a stored series is exact on its window, and all arithmetic
preserves that contract provided the operands' true supports stay inside the
window in the directions products can wrap (builders enlarge windows and
restrict at the end where needed).

Canonical monomial order is graded-lexicographic: sort key
(sum of exponents, exponent tuple).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from .parampoly import ParamPoly, Ring, RING_Q, Scalar

Key = tuple[int, ...]  # (u_exp, z_exps...)
Coefficient = Union[int, Fraction, ParamPoly]


class SeriesError(ValueError):
    pass


class SpecMismatchError(SeriesError):
    pass


def key_order(key: Key) -> tuple[int, Key]:
    return (sum(key), key)


@dataclass(frozen=True)
class TruncationSpec:
    """Per-variable exponent windows; optional cap on total z-degree."""

    u_lo: int
    u_hi: int
    z_windows: tuple[tuple[int, int], ...] = ()
    z_total: Optional[int] = None

    def __post_init__(self):
        if self.u_lo > self.u_hi:
            raise SeriesError(f"empty u-window [{self.u_lo}, {self.u_hi}]")
        if len(self.z_windows) > 4:
            raise SeriesError("at most four z-variables")
        for lo, hi in self.z_windows:
            if lo > hi:
                raise SeriesError(f"empty z-window [{lo}, {hi}]")

    @property
    def nz(self) -> int:
        return len(self.z_windows)

    def contains(self, key: Key) -> bool:
        if not (self.u_lo <= key[0] <= self.u_hi):
            return False
        for exp, (lo, hi) in zip(key[1:], self.z_windows):
            if not (lo <= exp <= hi):
                return False
        if self.z_total is not None and sum(key[1:]) > self.z_total:
            return False
        return True

    def unit_key(self) -> Key:
        return (0,) * (1 + self.nz)

    def widths(self) -> int:
        w = self.u_hi - self.u_lo
        for lo, hi in self.z_windows:
            w += hi - lo
        return w

    def pad_u(self, lo_pad: int, hi_pad: int) -> "TruncationSpec":
        """Widen the u-window; used by builders that restrict afterwards."""
        return TruncationSpec(self.u_lo - lo_pad, self.u_hi + hi_pad, self.z_windows, self.z_total)

    def with_u(self, u_lo: int, u_hi: int) -> "TruncationSpec":
        return TruncationSpec(u_lo, u_hi, self.z_windows, self.z_total)

    def to_json(self) -> dict:
        return {
            "u_window": [self.u_lo, self.u_hi],
            "z_windows": [[lo, hi] for lo, hi in self.z_windows],
            "z_total": self.z_total,
        }

    @classmethod
    def from_json(cls, data: dict) -> "TruncationSpec":
        return cls(
            data["u_window"][0],
            data["u_window"][1],
            tuple((lo, hi) for lo, hi in data.get("z_windows", [])),
            data.get("z_total"),
        )


class MultiSeries:
    __slots__ = ("spec", "ring", "terms")

    def __init__(self, spec: TruncationSpec, ring: Ring, terms: dict[Key, ParamPoly]):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", {k: c for k, c in terms.items() if not c.is_zero()})

    def __setattr__(self, name, value):
        raise AttributeError("MultiSeries is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, spec: TruncationSpec, ring: Ring = RING_Q) -> "MultiSeries":
        return cls(spec, ring, {})

    @classmethod
    def one(cls, spec: TruncationSpec, ring: Ring = RING_Q) -> "MultiSeries":
        return cls.monomial(spec, ring, 0, coeff=1)

    @classmethod
    def monomial(
        cls,
        spec: TruncationSpec,
        ring: Ring,
        u_exp: int,
        z_exps: Iterable[int] = (),
        coeff: Coefficient = 1,
    ) -> "MultiSeries":
        c = _as_poly(ring, coeff)
        z = tuple(z_exps)
        if len(z) < spec.nz:
            z = z + (0,) * (spec.nz - len(z))
        if len(z) != spec.nz:
            raise SeriesError(f"expected {spec.nz} z-exponents, got {len(z)}")
        if c.is_zero():
            return cls(spec, ring, {})
        key = (u_exp,) + z
        if not spec.contains(key):
            raise SeriesError(f"monomial {key} outside window {spec}")
        return cls(spec, ring, {key: c})

    # -- helpers ---------------------------------------------------------------
    def _check(self, other: "MultiSeries") -> None:
        if self.spec != other.spec:
            raise SpecMismatchError("operands carry different truncation specs")
        if self.ring != other.ring:
            raise SpecMismatchError(f"coefficient rings differ: {self.ring} vs {other.ring}")

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, u_exp: int, z_exps: Iterable[int] = ()) -> ParamPoly:
        """Stored coefficient; out-of-window queries are errors because a
        truncated-away monomial is indistinguishable from a zero one."""
        z = tuple(z_exps)
        if len(z) < self.spec.nz:
            z = z + (0,) * (self.spec.nz - len(z))
        key = (u_exp,) + z
        if not self.spec.contains(key):
            raise SeriesError(f"coefficient query {key} outside window")
        return self.terms.get(key, ParamPoly.const(self.ring, 0))

    def items_sorted(self) -> list[tuple[Key, ParamPoly]]:
        return sorted(self.terms.items(), key=lambda kv: key_order(kv[0]))

    def min_key(self) -> Optional[Key]:
        if not self.terms:
            return None
        return min(self.terms, key=key_order)

    # -- ring operations --------------------------------------------------------
    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            cur = out.get(k)
            out[k] = c if cur is None else cur + c
        return MultiSeries(self.spec, self.ring, out)

    def __neg__(self) -> "MultiSeries":
        return MultiSeries(self.spec, self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        return self + (-other)

    def __mul__(self, other: "MultiSeries") -> "MultiSeries":
        self._check(other)
        out: dict[Key, ParamPoly] = {}
        contains = self.spec.contains
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                if not contains(k):
                    continue
                cur = out.get(k)
                prod = c1 * c2
                out[k] = prod if cur is None else cur + prod
        return MultiSeries(self.spec, self.ring, out)

    def scale(self, c: Coefficient) -> "MultiSeries":
        poly = _as_poly(self.ring, c)
        return MultiSeries(self.spec, self.ring, {k: v * poly for k, v in self.terms.items()})

    def shift(self, u_exp: int, z_exps: Iterable[int] = (), coeff: Coefficient = 1) -> "MultiSeries":
        """Multiply by a single monomial, dropping out-of-window terms."""
        z = tuple(z_exps)
        if len(z) < self.spec.nz:
            z = z + (0,) * (self.spec.nz - len(z))
        delta = (u_exp,) + z
        poly = _as_poly(self.ring, coeff)
        out = {}
        for k, c in self.terms.items():
            nk = tuple(a + b for a, b in zip(k, delta))
            if self.spec.contains(nk):
                out[nk] = c * poly
        return MultiSeries(self.spec, self.ring, out)

    def restrict(self, spec: TruncationSpec) -> "MultiSeries":
        """Narrow to a sub-window (terms outside are dropped)."""
        if spec.nz != self.spec.nz:
            raise SpecMismatchError("restrict cannot change the z-variable count")
        return MultiSeries(spec, self.ring, {k: c for k, c in self.terms.items() if spec.contains(k)})

    # -- equality -----------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.spec == other.spec and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, self.ring, frozenset(self.terms)))

    # -- inverse / log / exp ---------------------------------------------------
    def inverse(self) -> "MultiSeries":
        """Multiplicative inverse on the window.

        The graded-lex lowest term must be a nonzero rational constant times
        a monomial whose inverse still fits in the window; the rest is
        expanded as a geometric series.
        """
        m0 = self.min_key()
        if m0 is None:
            raise SeriesError("zero series has no inverse")
        c0 = self.terms[m0]
        if not c0.is_constant():
            raise SeriesError(f"leading coefficient {c0} is not a rational unit")
        c0inv = 1 / c0.constant_value()
        m0inv = tuple(-e for e in m0)
        if not self.spec.contains(m0inv):
            raise SeriesError(f"inverse leading monomial {m0inv} falls outside the window")

        # b lives in coordinates shifted by -m0: a = c0*x^m0*(1 + b).
        b: dict[Key, ParamPoly] = {}
        for k, c in self.terms.items():
            if k == m0:
                continue
            b[tuple(a - bb for a, bb in zip(k, m0))] = c * c0inv

        # result = c0inv * x^(-m0) * sum_n (-b)^n, keeping only window terms.
        shifted_ok = lambda k: self.spec.contains(tuple(a - bb for a, bb in zip(k, m0)))
        acc: dict[Key, ParamPoly] = {self.spec.unit_key(): ParamPoly.const(self.ring, 1)}
        power: dict[Key, ParamPoly] = dict(acc)
        cap = 4 * self.spec.widths() + 8
        for _ in range(cap):
            power = _dict_mul(power, b, keep=shifted_ok)
            if not power:
                break
            for k, c in power.items():
                cur = acc.get(k)
                val = -c if cur is None else cur - c
                acc[k] = val
            power = {k: -c for k, c in power.items()}
        else:
            raise SeriesError("inverse does not terminate on this window")

        out = {}
        for k, c in acc.items():
            nk = tuple(a - bb for a, bb in zip(k, m0))
            if self.spec.contains(nk):
                out[nk] = c * c0inv
        return MultiSeries(self.spec, self.ring, out)

    def _require_no_constant(self, what: str) -> None:
        unit = self.spec.unit_key()
        if unit in self.terms:
            raise SeriesError(f"{what} requires zero constant term, found {self.terms[unit]}")

    def exp(self) -> "MultiSeries":
        self._require_no_constant("exp")
        acc: dict[Key, ParamPoly] = {self.spec.unit_key(): ParamPoly.const(self.ring, 1)}
        power: dict[Key, ParamPoly] = dict(acc)
        factorial = 1
        cap = 4 * self.spec.widths() + 8
        for n in range(1, cap + 1):
            power = _dict_mul(power, self.terms, keep=self.spec.contains)
            if not power:
                break
            factorial *= n
            inv = Fraction(1, factorial)
            for k, c in power.items():
                cur = acc.get(k)
                scaled = c * inv
                acc[k] = scaled if cur is None else cur + scaled
        else:
            raise SeriesError("exp does not terminate on this window")
        return MultiSeries(self.spec, self.ring, acc)

    def log1p(self) -> "MultiSeries":
        """log(1 + self); the argument passed is the series a with a(0)=0."""
        self._require_no_constant("log1p")
        acc: dict[Key, ParamPoly] = {}
        power: dict[Key, ParamPoly] = {self.spec.unit_key(): ParamPoly.const(self.ring, 1)}
        cap = 4 * self.spec.widths() + 8
        for n in range(1, cap + 1):
            power = _dict_mul(power, self.terms, keep=self.spec.contains)
            if not power:
                break
            coeff = Fraction((-1) ** (n + 1), n)
            for k, c in power.items():
                cur = acc.get(k)
                scaled = c * coeff
                acc[k] = scaled if cur is None else cur + scaled
        else:
            raise SeriesError("log1p does not terminate on this window")
        return MultiSeries(self.spec, self.ring, acc)

    def pow_param(self, exponent: Coefficient) -> "MultiSeries":
        """(1 + a)^e for symbolic e: exp(e * log(1 + a)); self must be 1 + a."""
        unit = self.spec.unit_key()
        one = ParamPoly.const(self.ring, 1)
        if self.terms.get(unit) != one:
            raise SeriesError("pow_param expects a series with constant term 1")
        a = MultiSeries(self.spec, self.ring, {k: c for k, c in self.terms.items() if k != unit})
        return a.log1p().scale(exponent).exp()

    # -- output ---------------------------------------------------------------
    def __repr__(self):
        return f"MultiSeries(ring={self.ring!r}, terms={len(self.terms)})"

    def __str__(self):
        return render_series(self)

    def to_json(self) -> dict:
        return {
            "ring": list(self.ring),
            "truncation": self.spec.to_json(),
            "terms": [
                {"u_exp": k[0], "z_exps": list(k[1:]), "coeff": c.to_json()}
                for k, c in self.items_sorted()
            ],
        }


def _as_poly(ring: Ring, c: Coefficient) -> ParamPoly:
    if isinstance(c, ParamPoly):
        if c.ring != ring:
            raise SpecMismatchError(f"coefficient ring {c.ring} does not match series ring {ring}")
        return c
    return ParamPoly.const(ring, c)


def _dict_mul(a: dict[Key, ParamPoly], b: dict[Key, ParamPoly], keep) -> dict[Key, ParamPoly]:
    out: dict[Key, ParamPoly] = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            if not keep(k):
                continue
            cur = out.get(k)
            prod = c1 * c2
            out[k] = prod if cur is None else cur + prod
    return {k: c for k, c in out.items() if not c.is_zero()}


# -- Euler products ------------------------------------------------------------

def euler_product(
    spec: TruncationSpec,
    ring: Ring,
    factors: Iterable[tuple[int, tuple[int, ...], Scalar, Coefficient]],
) -> MultiSeries:
    """Product of factors (1 + c * x^m)^e over the given generator.

    Each factor is (u_exp, z_exps, c, e). Factors whose monomial cannot reach
    the window contribute 1 and are skipped, so the caller's enumeration only
    has to cover the window-derived range. A factor with the unit monomial
    would make the enumeration non-terminating and is rejected.
    """
    log_acc: dict[Key, ParamPoly] = {}
    unit = spec.unit_key()
    for u_exp, z_exps, c, e in factors:
        z = tuple(z_exps)
        if len(z) < spec.nz:
            z = z + (0,) * (spec.nz - len(z))
        m = (u_exp,) + z
        if m == unit:
            raise SeriesError("euler_product factor has zero total weight (unit monomial)")
        if not spec.contains(m):
            continue
        c = Fraction(c)
        e_poly = _as_poly(ring, e)
        # log(1 + c x^m) = sum_j (-1)^(j+1) c^j x^(j m) / j, window-limited.
        j = 1
        cj = c
        mj = m
        while spec.contains(mj):
            coeff = e_poly * (Fraction((-1) ** (j + 1), j) * cj)
            cur = log_acc.get(mj)
            log_acc[mj] = coeff if cur is None else cur + coeff
            j += 1
            cj *= c
            mj = tuple(a + b for a, b in zip(mj, m))
    log_series = MultiSeries(spec, ring, log_acc)
    return log_series.exp()


# -- comparison ------------------------------------------------------------------

def first_mismatch(a: MultiSeries, b: MultiSeries) -> Optional[tuple[Key, ParamPoly, ParamPoly]]:
    """None when equal on the window, else the canonically first difference."""
    if a.spec != b.spec:
        raise SpecMismatchError("series compared under different truncation specs")
    if a.ring != b.ring:
        raise SpecMismatchError("series compared over different coefficient rings")
    zero = ParamPoly.const(a.ring, 0)
    keys = set(a.terms) | set(b.terms)
    for k in sorted(keys, key=key_order):
        ca = a.terms.get(k, zero)
        cb = b.terms.get(k, zero)
        if ca != cb:
            return (k, ca, cb)
    return None


# -- rendering --------------------------------------------------------------------

_Z_NAMES = ("z1", "z2", "z3", "z4")


def render_monomial(key: Key, z_names: tuple[str, ...] = _Z_NAMES) -> str:
    bits = []
    u = key[0]
    if u:
        if u % 2 == 0:
            qexp = u // 2
            bits.append("q" if qexp == 1 else f"q^{qexp}")
        else:
            bits.append(f"q^{{{u}/2}}")
    for name, e in zip(z_names, key[1:]):
        if e:
            bits.append(name if e == 1 else f"{name}^{e}")
    return "*".join(bits) if bits else "1"


def render_series(series: MultiSeries, z_names: tuple[str, ...] = _Z_NAMES, max_terms: int = 0) -> str:
    items = series.items_sorted()
    if not items:
        return "0"
    shown = items if max_terms <= 0 else items[:max_terms]
    bits = []
    for k, c in shown:
        mono = render_monomial(k, z_names)
        cs = str(c)
        if mono == "1":
            bits.append(f"({cs})" if ("+" in cs or "-" in cs[1:]) else cs)
        elif cs == "1":
            bits.append(mono)
        elif cs == "-1":
            bits.append(f"-{mono}")
        else:
            needs_paren = "+" in cs or "-" in cs[1:]
            bits.append(f"({cs})*{mono}" if needs_paren else f"{cs}*{mono}")
    text = " + ".join(bits).replace("+ -", "- ")
    if max_terms > 0 and len(items) > max_terms:
        text += " + ..."
    return text
