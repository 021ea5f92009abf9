"""Independent brute-force backends used only by tests.

Everything here is deliberately naive: SSYT enumeration is exponential and
sits behind size guards. These functions never feed production paths; they
exist so the fast implementations have something independent to disagree
with.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .partitions import Partition, common_subpartitions, empty
from .symfunc import UDict, udict_add

MAX_ORACLE_BOXES = 8
MAX_ORACLE_VARS = 8
MAX_PENTAGONAL_N = 200


class OracleSizeError(ValueError):
    pass


def ssyt_skew_schur_udict(lam: Partition, mu: Partition, exps: tuple[int, ...]) -> UDict:
    """Skew Schur function by explicit semistandard-tableau enumeration.

    Entry v in a box contributes u^{exps[v-1]}; rows weakly increase,
    columns strictly increase.
    """
    nboxes = lam.size - mu.size
    if lam.size > MAX_ORACLE_BOXES or len(exps) > MAX_ORACLE_VARS:
        raise OracleSizeError(
            f"oracle refuses |shape|={lam.size}, m={len(exps)}; "
            f"guards are {MAX_ORACLE_BOXES} boxes / {MAX_ORACLE_VARS} variables"
        )
    if not lam.contains(mu):
        return {}
    if nboxes == 0:
        return {0: Fraction(1)}

    m = len(exps)
    cells = [(i, j) for i in range(1, len(lam) + 1) for j in range(mu.part(i) + 1, lam.part(i) + 1)]
    filling: dict[tuple[int, int], int] = {}
    out: UDict = {}

    def place(idx: int, weight: int) -> None:
        if idx == len(cells):
            out[weight] = out.get(weight, Fraction(0)) + 1
            return
        i, j = cells[idx]
        lo = 1
        left = filling.get((i, j - 1))
        if left is not None:
            lo = max(lo, left)
        above = filling.get((i - 1, j))
        if above is not None:
            lo = max(lo, above + 1)
        for v in range(lo, m + 1):
            filling[(i, j)] = v
            place(idx + 1, weight + exps[v - 1])
            del filling[(i, j)]

    place(0, 0)
    return out


def ssyt_vertex_udict(lam: Partition, mu: Partition, nu: Partition, exps_m: int, top: int) -> UDict:
    """Topological vertex recomputed from its definition with SSYT skews.

    All three skew/Schur factors use the brute enumeration on exps_m
    variables; exact only up to u^top when exps_m is large enough for the
    shapes involved (the caller chooses both).
    """
    from .symfunc import Specialization  # local import avoids a cycle at module load

    nut = nu.transpose()
    rho = Specialization.principal(exps_m).exps()
    shifted_nu = Specialization(nu, exps_m).exps()
    shifted_nut = Specialization(nut, exps_m).exps()

    principal = ssyt_skew_schur_udict(nut, empty(), rho)
    total: UDict = {}
    for eta in common_subpartitions(lam.transpose(), mu):
        a = ssyt_skew_schur_udict(lam.transpose(), eta, shifted_nu)
        b = ssyt_skew_schur_udict(mu, eta, shifted_nut)
        term: UDict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                term[e1 + e2] = term.get(e1 + e2, Fraction(0)) + c1 * c2
        total = udict_add(total, term)

    kappa = mu.kappa()
    out: UDict = {}
    for e1, c1 in total.items():
        for e2, c2 in principal.items():
            e = kappa + e1 + e2
            if e <= top:
                out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) by the pentagonal-number recurrence."""
    if n < 0:
        return 0
    if n > MAX_PENTAGONAL_N:
        raise OracleSizeError(f"partition_count guard is n <= {MAX_PENTAGONAL_N}")
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n and g2 > n:
            break
        sign = -1 if k % 2 == 0 else 1
        if g1 <= n:
            total += sign * partition_count(n - g1)
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def naive_product(factors, spec, ring=()):
    """Multiply an explicit factor list; cross-checks euler_product."""
    from .series import MultiSeries

    out = MultiSeries.one(spec, ring)
    for f in factors:
        out = out * f
    return out
