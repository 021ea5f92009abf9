"""Schur and skew-Schur functions at the engine's q-power specializations.

The alphabets that occur are always finite lists of u-exponents: variable i
takes the value u^{2(i - shift_i) - 1}, i.e. q^{i - 1/2 - shift_i}. On such an
alphabet every complete homogeneous function h_k is a finite Laurent
polynomial in u, so the Jacobi-Trudi determinant can be evaluated exactly;
truncation happens only when the result is restricted into a MultiSeries
window.

The number of variables m controls how well the finite alphabet approximates
the infinite specialization; `required_variable_count` gives the window bound
for the next variable's own exponent, and `sound_variable_count` additionally
accounts for boxes that can pick up negative exponents from a shifted
alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .partitions import Partition, empty
from .series import MultiSeries, TruncationSpec
from .parampoly import ParamPoly, RING_Q, Ring

UDict = dict[int, Fraction]


# -- exact Laurent-polynomial helpers (no truncation) ---------------------------

def udict_mul(a: UDict, b: UDict, top: int | None = None) -> UDict:
    out: UDict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            if top is not None and e > top:
                continue
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def udict_add(a: UDict, b: UDict) -> UDict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c != 0}


def udict_scale(a: UDict, c: Fraction) -> UDict:
    if c == 0:
        return {}
    return {e: v * c for e, v in a.items()}


@lru_cache(maxsize=None)
def _h_row(exps: tuple[int, ...], kmax: int) -> tuple:
    """h_0..h_kmax on the alphabet {u^e : e in exps}, as exact u-dicts."""
    h: list[UDict] = [{0: Fraction(1)}] + [{} for _ in range(kmax)]
    for e in exps:
        for k in range(1, kmax + 1):
            # h_k(x_1..x_v) = h_k(x_1..x_{v-1}) + x_v * h_{k-1}(x_1..x_v)
            bumped = {ee + e: c for ee, c in h[k - 1].items()}
            h[k] = udict_add(h[k], bumped)
    return tuple(h)


def complete_h_udict(k: int, exps: tuple[int, ...]) -> UDict:
    if k < 0:
        return {}
    if k == 0:
        return {0: Fraction(1)}
    return dict(_h_row(exps, k)[k])


@lru_cache(maxsize=None)
def skew_schur_udict(lam: Partition, mu: Partition, exps: tuple[int, ...]) -> UDict:
    """Jacobi-Trudi determinant det(h_{lam_i - mu_j - i + j]) as a u-dict."""
    if not lam.contains(mu):
        return {}
    n = len(lam)
    if n == 0:
        return {0: Fraction(1)}
    kmax = lam.part(1) + n
    hrow = _h_row(exps, kmax)

    def entry(i: int, j: int) -> UDict:
        k = lam.part(i) - mu.part(j) - i + j
        if k < 0:
            return {}
        if k > kmax:
            raise AssertionError("h index out of precomputed range")
        return hrow[k]

    total: UDict = {}
    for perm in permutations(range(1, n + 1)):
        sign = _perm_sign(perm)
        prod: UDict = {0: Fraction(1)}
        for i, j in enumerate(perm, start=1):
            cell = entry(i, j)
            if not cell:
                prod = {}
                break
            prod = udict_mul(prod, cell)
        if prod:
            total = udict_add(total, udict_scale(prod, Fraction(sign)))
    return total


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def hook_inverse_udict(hooks: list[int], top: int) -> UDict:
    """prod_h (1 - q^h)^{-1} expanded to u-exponent <= top (u = q^{1/2})."""
    out: UDict = {0: Fraction(1)}
    for h in hooks:
        geo: UDict = {}
        e = 0
        while e <= top:
            geo[e] = Fraction(1)
            e += 2 * h
        out = udict_mul(out, geo, top=top)
    return out


def principal_schur_udict(lam: Partition, top: int) -> UDict:
    """s_lam at q^{-rho} via the hook-product closed form, up to u^top."""
    shiftexp = lam.transpose().norm_sq()
    if shiftexp > top:
        return {}
    inv = hook_inverse_udict(lam.hooks(), top - shiftexp)
    return {e + shiftexp: c for e, c in inv.items()}


# -- specializations -------------------------------------------------------------

@dataclass(frozen=True)
class Specialization:
    """Finite alphabet x_i = q^{i - 1/2 - shift_i}, 1 <= i <= m.

    `transposed` applies the shift's transpose, so the q^{-rho-nu^t} alphabets
    can share a shift partition with their q^{-rho-nu} partners.
    """

    shift: Partition
    m: int
    transposed: bool = False

    @classmethod
    def principal(cls, m: int) -> "Specialization":
        return cls(empty(), m)

    def effective_shift(self) -> Partition:
        return self.shift.transpose() if self.transposed else self.shift

    def exps(self) -> tuple[int, ...]:
        shift = self.effective_shift()
        return tuple(2 * (i - shift.part(i)) - 1 for i in range(1, self.m + 1))


def required_variable_count(shift: Partition, trunc: TruncationSpec) -> int:
    """Smallest m whose next variable's own exponent already exits the
    u-window: 2(m+1) - 1 - 2*shift_{m+1} > u_hi with the shift zero beyond
    its length."""
    m = (trunc.u_hi + 1) // 2 if trunc.u_hi > 0 else 0
    while 2 * (m + 1) - 1 <= trunc.u_hi:
        m += 1
    return max(len(shift), m)


def sound_variable_count(shift: Partition, u_top: int, boxes: int) -> int:
    """Variable count making a skew Schur value exact up to u^u_top.

    A tableau can combine one entry beyond m with up to boxes-1 entries of
    negative exponent (at most 2*shift_1 - 1 below zero each), so the bound
    from the window alone is shifted by that worst case.
    """
    neg = max(0, 2 * shift.part(1) - 1)
    x = u_top + max(0, boxes - 1) * neg
    return max(len(shift), x // 2 + 1, 0)


# -- public window-restricted operations ----------------------------------------

def _udict_to_series(d: UDict, spec: TruncationSpec, ring: Ring = RING_Q) -> MultiSeries:
    zpad = (0,) * spec.nz
    terms = {}
    for e, c in d.items():
        key = (e,) + zpad
        if spec.contains(key):
            terms[key] = ParamPoly.const(ring, c)
    return MultiSeries(spec, ring, terms)


def complete_h(k: int, spec: Specialization, trunc: TruncationSpec) -> MultiSeries:
    return _udict_to_series(complete_h_udict(k, spec.exps()), trunc)


def skew_schur(lam: Partition, mu: Partition, spec: Specialization, trunc: TruncationSpec) -> MultiSeries:
    return _udict_to_series(skew_schur_udict(lam, mu, spec.exps()), trunc)


def schur(lam: Partition, spec: Specialization, trunc: TruncationSpec) -> MultiSeries:
    return skew_schur(lam, empty(), spec, trunc)


def principal_schur(lam: Partition, trunc: TruncationSpec) -> MultiSeries:
    return _udict_to_series(principal_schur_udict(lam, trunc.u_hi), trunc)
