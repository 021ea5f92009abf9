"""The topological vertex: a cyclically symmetric q-series indexed by three
partitions, assembled from skew Schur functions at shifted principal
specializations.

    C(a, b, c) = u^{kappa(b)} * s_{c^t}(q^{-rho})
                 * sum_eta s_{a^t/eta}(q^{-rho-c}) s_{b/eta}(q^{-rho-c^t})

with u = q^{1/2}. The eta-sum is finite (eta must fit inside both a^t and b).
The two skew factors are exact finite-alphabet Laurent polynomials; variable
counts are chosen so the result is exact on the requested window, including
the contribution of alphabet entries with negative exponents.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

from .parampoly import ParamPoly, RING_Q
from .partitions import Partition, common_subpartitions
from .series import Key, MultiSeries, TruncationSpec, first_mismatch
from .symfunc import (
    Specialization,
    UDict,
    hook_inverse_udict,
    skew_schur_udict,
    sound_variable_count,
    udict_add,
    udict_mul,
)


def vertex_valuation_bound(lam: Partition, mu: Partition, nu: Partition) -> int:
    """Lower bound for the u-valuation of C(lam, mu, nu)."""
    a_neg = lam.size * min(0, 1 - 2 * nu.part(1))
    b_neg = mu.size * min(0, 1 - 2 * len(nu))
    return mu.kappa() + nu.norm_sq() + a_neg + b_neg


def _skew_part(lam: Partition, mu: Partition, nu: Partition, top: int) -> UDict:
    """sum_eta s_{lam^t/eta}(q^{-rho-nu}) s_{mu/eta}(q^{-rho-nu^t}), exact up
    to u^top."""
    lamt = lam.transpose()
    nut = nu.transpose()
    a_neg = lam.size * max(0, 2 * nu.part(1) - 1)
    b_neg = mu.size * max(0, 2 * len(nu) - 1)
    m_a = sound_variable_count(nu, top + b_neg, lam.size)
    m_b = sound_variable_count(nut, top + a_neg, mu.size)
    exps_a = Specialization(nu, m_a).exps()
    exps_b = Specialization(nut, m_b).exps()

    total: UDict = {}
    for eta in common_subpartitions(lamt, mu):
        a = skew_schur_udict(lamt, eta, exps_a)
        if not a:
            continue
        b = skew_schur_udict(mu, eta, exps_b)
        if not b:
            continue
        total = udict_add(total, udict_mul(a, b, top=top))
    return total


@lru_cache(maxsize=65536)
def vertex_udict(lam: Partition, mu: Partition, nu: Partition, u_lo: int, u_hi: int) -> tuple:
    """Vertex coefficients exact on u_lo <= e <= u_hi, as sorted items."""
    kappa = mu.kappa()
    nsq = nu.norm_sq()

    skew = _skew_part(lam, mu, nu, u_hi - kappa - nsq)
    if not skew:
        return ()
    skew_min = min(skew)
    principal = hook_inverse_udict(nu.hooks(), max(u_hi - kappa - nsq - skew_min, 0))

    out: UDict = {}
    for b_exp, b_c in skew.items():
        base = kappa + nsq + b_exp
        if base > u_hi:
            continue
        for p_exp, p_c in principal.items():
            e = base + p_exp
            if u_lo <= e <= u_hi:
                out[e] = out.get(e, Fraction(0)) + b_c * p_c
    return tuple(sorted((e, c) for e, c in out.items() if c != 0))


def vertex(lam: Partition, mu: Partition, nu: Partition, spec: TruncationSpec) -> MultiSeries:
    zpad = (0,) * spec.nz
    terms: dict[Key, ParamPoly] = {}
    for e, c in vertex_udict(lam, mu, nu, spec.u_lo, spec.u_hi):
        terms[(e,) + zpad] = ParamPoly.const(RING_Q, c)
    return MultiSeries(spec, RING_Q, terms)


class CyclicReport(NamedTuple):
    ok: bool
    rotation: Optional[str]
    mismatch: Optional[tuple[Key, ParamPoly, ParamPoly]]


def check_cyclic(lam: Partition, mu: Partition, nu: Partition, spec: TruncationSpec) -> CyclicReport:
    """Compare C(lam,mu,nu) with its two cyclic rotations window-wise."""
    base = vertex(lam, mu, nu, spec)
    for label, triple in (
        ("(mu,nu,lam)", (mu, nu, lam)),
        ("(nu,lam,mu)", (nu, lam, mu)),
    ):
        rotated = vertex(triple[0], triple[1], triple[2], spec)
        diff = first_mismatch(base, rotated)
        if diff is not None:
            return CyclicReport(False, label, diff)
    return CyclicReport(True, None, None)
