"""Registry of named series identities, each with an LHS builder, an RHS
builder and a verifier that localizes the first mismatching monomial.

Identity catalogue (all verified window-wise, exact coefficients):

  no-classic           hook-length sum over partitions vs Euler product with
                       symbolic exponent t^2 - 1.
  no-theta             two-parameter arm/leg deformation at sampled rational
                       theta vs Euler product with exponent (t-1)(t/theta+1).
  cyclic-schur         principal times shifted Schur value vs kappa-weighted
                       sum of principal skew pairs (a vertex-symmetry fact).
  cauchy-dual          sum of z^{|p|} s_p s_{p^t} at the principal point vs
                       prod (1+z q^k)^k.
  hook-product         ratio of the shifted double product by the unshifted
                       one vs the per-box hook factors, in both printed forms.
  no-generalized       two-variable hook sum vs infinite product (the
                       two-loop graph function computed two ways).
  four-loop            four-variable loop-graph function: graph evaluation vs
                       the resummed two-partition hook sum; the printed
                       product/sum forms are re-checked and reported as-is.
  four-loop-limit      the beta->0 limit of four-loop as a polynomial
                       identity over Q[t1,t3]; resolves the cross-statistics
                       reading of the second box product by ground truth.
  stanley-k2           one-partition quadruple hook sum (times the two Cauchy
                       prefactors) vs the octuple skew-Schur sum.
  no-limit-consistency beta-adic substitution into no-generalized; the
                       beta^0 row must reproduce no-classic.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .graphs import builtin as builtin_graph
from .graphs import evaluate as evaluate_graph
from .parampoly import ParamPoly, RING_Q, RING_T, RING_T1_T3, Ring
from .partitions import Partition, common_subpartitions, empty, partitions_of, partitions_up_to
from .series import (
    Key,
    MultiSeries,
    TruncationSpec,
    euler_product,
    first_mismatch,
    render_monomial,
)
from .symfunc import (
    Specialization,
    UDict,
    hook_inverse_udict,
    principal_schur_udict,
    skew_schur_udict,
    sound_variable_count,
    udict_add,
    udict_mul,
)

THETA_SAMPLES = (Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5, 3))


# ---------------------------------------------------------------------------
# reports


@dataclass
class IdentityReport:
    name: str
    truncation: TruncationSpec
    verdict: str  # "match" | "mismatch"
    mismatch: Optional[tuple[Key, ParamPoly, ParamPoly]]
    duration_ms: float
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict == "match"

    def to_json(self) -> dict:
        mism = None
        if self.mismatch is not None:
            key, lhs, rhs = self.mismatch
            mism = {
                "monomial": {"u_exp": key[0], "z_exps": list(key[1:])},
                "lhs": lhs.to_json(),
                "rhs": rhs.to_json(),
            }
        return {
            "name": self.name,
            "window": self.truncation.to_json(),
            "verdict": self.verdict,
            "mismatch": mism,
            "duration_ms": self.duration_ms,
        }

    def render(self) -> str:
        lines = [f"identity {self.name}: {self.verdict.upper()}"]
        if self.mismatch is not None:
            key, lhs, rhs = self.mismatch
            lines.append(f"  first mismatch at {render_monomial(key)}: lhs={lhs} rhs={rhs}")
        if self.detail:
            lines.append(f"  {self.detail}")
        lines.append(f"  window u=[{self.truncation.u_lo},{self.truncation.u_hi}]"
                     f" z={list(self.truncation.z_windows)}"
                     + (f" total<={self.truncation.z_total}" if self.truncation.z_total is not None else "")
                     + f"  ({self.duration_ms:.0f} ms)")
        return "\n".join(lines)


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    description: str
    ring: Ring
    z_count: int
    build_lhs: Callable[[TruncationSpec, dict], MultiSeries]
    build_rhs: Callable[[TruncationSpec, dict], MultiSeries]
    z_laurent: tuple[int, ...] = ()  # 1-based z indices verified on symmetric windows
    sampled_params: tuple = ()
    runner: Optional[Callable] = None  # strong per-member verification
    default_z_total: Optional[int] = None


class UnknownIdentityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# small builder helpers


def _series_from_udict(d: UDict, spec: TruncationSpec, ring: Ring, z_exps: tuple[int, ...] = ()) -> MultiSeries:
    z = tuple(z_exps) + (0,) * (spec.nz - len(z_exps))
    terms = {}
    for e, c in d.items():
        key = (e,) + z
        if spec.contains(key):
            terms[key] = ParamPoly.const(ring, c)
    return MultiSeries(spec, ring, terms)


def _binomial(spec: TruncationSpec, ring: Ring, u_exp: int, z_exps: tuple[int, ...], coeff=1) -> MultiSeries:
    """1 + coeff * x^monomial; the monomial may stick out of the window."""
    one = MultiSeries.one(spec, ring)
    z = tuple(z_exps) + (0,) * (spec.nz - len(z_exps))
    key = (u_exp,) + z
    if not spec.contains(key):
        return one
    return one + MultiSeries.monomial(spec, ring, u_exp, z, coeff)


def _geometric_inverse(spec: TruncationSpec, ring: Ring, u_exp: int, z_exps: tuple[int, ...], coeff=1) -> MultiSeries:
    """(1 + coeff*x^m)^{-1} for a monomial m with positive weight."""
    z = tuple(z_exps) + (0,) * (spec.nz - len(z_exps))
    terms: dict[Key, ParamPoly] = {}
    key = spec.unit_key()
    c = Fraction(1)
    j = 0
    while spec.contains(key):
        terms[key] = ParamPoly.const(ring, c)
        j += 1
        c *= -Fraction(coeff)
        key = (u_exp * j,) + tuple(e * j for e in z)
    return MultiSeries(spec, ring, terms)


def _hook_inverse_series(hooks, spec: TruncationSpec, ring: Ring, power: int = 1) -> MultiSeries:
    d = hook_inverse_udict(list(hooks) * power, max(spec.u_hi, 0))
    return _series_from_udict(d, spec, ring)


def _mul_negatives_first(factors: list[MultiSeries], spec: TruncationSpec, ring: Ring) -> MultiSeries:
    """Multiply binomial factors, lowest u-exponent first.

    Negative-exponent binomials are each used once, so consuming them first
    keeps every partial product's support above the window bottom; after
    that all remaining supports are non-negative and truncation is monotone.
    """
    def min_u(s: MultiSeries) -> int:
        return min((k[0] for k in s.terms), default=0)

    out = MultiSeries.one(spec, ring)
    for f in sorted(factors, key=min_u):
        out = out * f
    return out


# ---------------------------------------------------------------------------
# 1. no-classic


def _t_poly(*coeffs: tuple[int, Fraction]) -> ParamPoly:
    return ParamPoly(RING_T, {(d,): c for d, c in coeffs})


def no_classic_lhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    """sum_p z^{|p|} prod_{boxes} (h^2 - t^2) / h^2 over Q[t]."""
    terms: dict[Key, ParamPoly] = {}
    z_hi = spec.z_windows[0][1]
    for n in range(0, z_hi + 1):
        if not spec.contains((0, n) + (0,) * (spec.nz - 1)):
            continue
        acc = ParamPoly.const(RING_T, 0)
        for lam in partitions_of(n):
            poly = ParamPoly.const(RING_T, 1)
            denom = 1
            for h in lam.hooks():
                poly = poly * _t_poly((0, Fraction(h * h)), (2, Fraction(-1)))
                denom *= h * h
            acc = acc + poly * Fraction(1, denom)
        if not acc.is_zero():
            terms[(0, n) + (0,) * (spec.nz - 1)] = acc
    return MultiSeries(spec, RING_T, terms)


def no_classic_rhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    exponent = _t_poly((2, Fraction(1)), (0, Fraction(-1)))  # t^2 - 1
    z_hi = spec.z_windows[0][1]
    return euler_product(spec, RING_T, ((0, (k,), -1, exponent) for k in range(1, z_hi + 1)))


# ---------------------------------------------------------------------------
# 2. no-theta


def _theta(params: dict) -> Fraction:
    return Fraction(params.get("theta", 1))


def no_theta_lhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    """Box product (a+1+th*l-t)(a+th*(l+1)+t) / ((a+1+th*l)(a+th*(l+1)))."""
    th = _theta(params)
    terms: dict[Key, ParamPoly] = {}
    z_hi = spec.z_windows[0][1]
    for n in range(0, z_hi + 1):
        acc = ParamPoly.const(RING_T, 0)
        for lam in partitions_of(n):
            poly = ParamPoly.const(RING_T, 1)
            scale = Fraction(1)
            ok = True
            for (i, j) in lam.boxes():
                a = Fraction(lam.arm(i, j))
                l = Fraction(lam.leg(i, j))
                c1 = a + 1 + th * l
                c2 = a + th * (l + 1)
                if c1 == 0 or c2 == 0:
                    ok = False
                    break
                # (c1 - t)(c2 + t) = c1*c2 + (c1 - c2) t - t^2
                poly = poly * _t_poly((0, c1 * c2), (1, c1 - c2), (2, Fraction(-1)))
                scale /= c1 * c2
            if ok:
                acc = acc + poly * scale
        if not acc.is_zero():
            terms[(0, n)] = acc
    return MultiSeries(spec, RING_T, terms)


def no_theta_rhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    th = _theta(params)
    # (t-1)(t/th + 1) = t^2/th + (1 - 1/th) t - 1
    exponent = _t_poly((2, Fraction(1) / th), (1, 1 - Fraction(1) / th), (0, Fraction(-1)))
    z_hi = spec.z_windows[0][1]
    return euler_product(spec, RING_T, ((0, (k,), -1, exponent) for k in range(1, z_hi + 1)))


def _run_no_theta(spec: TruncationSpec, params: dict, threads: int):
    samples = params.get("thetas", THETA_SAMPLES)

    def member(th):
        p = {"theta": th}
        return (f"theta={th}", no_theta_lhs(spec, p), no_theta_rhs(spec, p))

    return _family_verdict(samples, member, threads)


# ---------------------------------------------------------------------------
# 3. cyclic-schur


def cyclic_schur_pair(lam: Partition, mu: Partition, u_lo: int, u_hi: int) -> tuple[UDict, UDict]:
    """Window-exact u-dicts for both sides of the vertex-symmetry identity
    s_mu(rho) s_lam(rho-mu) = q^{-(k(mu)+k(lam))/2} sum_eta s_{lam^t/eta} s_{mu^t/eta}."""
    # LHS
    musq = mu.transpose().norm_sq()
    m = sound_variable_count(mu, u_hi - musq if u_hi >= musq else 0, lam.size)
    shifted = skew_schur_udict(lam, empty(), Specialization(mu, m).exps())
    lhs: UDict = {}
    if shifted:
        neg = -min(0, min(shifted))
        principal = principal_schur_udict(mu, u_hi + neg)
        for e1, c1 in shifted.items():
            for e2, c2 in principal.items():
                e = e1 + e2
                if u_lo <= e <= u_hi:
                    lhs[e] = lhs.get(e, Fraction(0)) + c1 * c2
    lhs = {e: c for e, c in lhs.items() if c != 0}

    # RHS
    shift = -(mu.kappa() + lam.kappa())
    top = u_hi - shift
    acc: UDict = {}
    if top >= 0:
        m2 = top // 2 + 1
        exps = Specialization(empty(), m2).exps()
        lamt, mut = lam.transpose(), mu.transpose()
        for eta in common_subpartitions(lamt, mut):
            a = skew_schur_udict(lamt, eta, exps)
            if not a:
                continue
            b = skew_schur_udict(mut, eta, exps)
            if not b:
                continue
            acc = udict_add(acc, udict_mul(a, b, top=top))
    rhs = {e + shift: c for e, c in acc.items() if u_lo <= e + shift <= u_hi}
    return lhs, rhs


def _pair_sizes(spec: TruncationSpec, params: dict) -> tuple[int, int]:
    n1 = params.get("max_size", spec.z_windows[0][1] if spec.nz >= 1 else 4)
    n2 = params.get("max_size", spec.z_windows[1][1] if spec.nz >= 2 else 4)
    return n1, n2


def cyclic_schur_lhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    """Aggregate over pairs, tagged z1^{|lam|} z2^{|mu|}."""
    n1, n2 = _pair_sizes(spec, params)
    total = MultiSeries.zero(spec, RING_Q)
    for lam in partitions_up_to(n1):
        for mu in partitions_up_to(n2):
            lhs, _ = cyclic_schur_pair(lam, mu, spec.u_lo, spec.u_hi)
            total = total + _series_from_udict(lhs, spec, RING_Q, (lam.size, mu.size))
    return total


def cyclic_schur_rhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    n1, n2 = _pair_sizes(spec, params)
    total = MultiSeries.zero(spec, RING_Q)
    for lam in partitions_up_to(n1):
        for mu in partitions_up_to(n2):
            _, rhs = cyclic_schur_pair(lam, mu, spec.u_lo, spec.u_hi)
            total = total + _series_from_udict(rhs, spec, RING_Q, (lam.size, mu.size))
    return total


def _run_cyclic_schur(spec: TruncationSpec, params: dict, threads: int):
    n1, n2 = _pair_sizes(spec, params)
    pairs = [(lam, mu) for lam in partitions_up_to(n1) for mu in partitions_up_to(n2)]

    def member(pair):
        lam, mu = pair
        lhs, rhs = cyclic_schur_pair(lam, mu, spec.u_lo, spec.u_hi)
        return (
            f"lam=({lam}) mu=({mu})",
            _series_from_udict(lhs, spec, RING_Q, (lam.size, mu.size)),
            _series_from_udict(rhs, spec, RING_Q, (lam.size, mu.size)),
        )

    return _family_verdict(pairs, member, threads)


# ---------------------------------------------------------------------------
# 4. cauchy-dual


def cauchy_dual_lhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    """sum_p z^{|p|} s_p(rho) s_{p^t}(rho) via the hook closed form."""
    total: dict[Key, ParamPoly] = {}
    z_hi = spec.z_windows[0][1]
    for n in range(0, z_hi + 1):
        for lam in partitions_of(n):
            shift = lam.norm_sq() + lam.transpose().norm_sq()
            if shift > spec.u_hi:
                continue
            inv = hook_inverse_udict(lam.hooks() * 2, spec.u_hi - shift)
            for e, c in inv.items():
                key = (e + shift, n) + (0,) * (spec.nz - 1)
                if spec.contains(key):
                    cur = total.get(key)
                    poly = ParamPoly.const(RING_Q, c)
                    total[key] = poly if cur is None else cur + poly
    return MultiSeries(spec, RING_Q, total)


def cauchy_dual_rhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    return euler_product(
        spec, RING_Q, ((2 * k, (1,), 1, k) for k in range(1, spec.u_hi // 2 + 1))
    )


# ---------------------------------------------------------------------------
# 5. hook-product


def hook_product_forms(tau: Partition, spec: TruncationSpec) -> tuple[MultiSeries, MultiSeries, MultiSeries]:
    """(double-product ratio, per-box form, rewritten per-box form) for tau.

    z1 is the first z variable of spec; all three series live on spec.
    """
    hooks = tau.hooks()
    s2 = 2 * sum(hooks)
    # top pad s2: inverse-factor tails beyond u_hi re-enter the window once
    # multiplied by the q^{-h} binomials, so they must be retained.
    work = spec.with_u(min(spec.u_lo, -s2), spec.u_hi + s2)

    # LHS: prod_{ij} (1 + z1 q^{i+j-1-tau_i-tau^t_j}) / (1 + z1 q^{i+j-1}),
    # bounded because far cells cancel exactly.
    taut = tau.transpose()
    ell, t1 = len(tau), tau.part(1)
    imax = work.u_hi // 2 + ell + 2
    jmax = work.u_hi // 2 + t1 + 2
    factors: list[MultiSeries] = []
    for i in range(1, imax + 1):
        for j in range(1, jmax + 1):
            if i > ell and j > t1:
                continue  # numerator equals denominator here
            e_num = i + j - 1 - tau.part(i) - taut.part(j)
            e_den = i + j - 1
            factors.append(_binomial(work, RING_Q, 2 * e_num, (1,)))
            factors.append(_geometric_inverse(work, RING_Q, 2 * e_den, (1,)))
    lhs = _mul_negatives_first(factors, work, RING_Q).restrict(spec)

    # form A: prod_s (1 + z1 q^h)(1 + z1 q^{-h})
    fa = []
    for h in hooks:
        fa.append(_binomial(work, RING_Q, 2 * h, (1,)))
        fa.append(_binomial(work, RING_Q, -2 * h, (1,)))
    rhs_a = _mul_negatives_first(fa, work, RING_Q).restrict(spec)

    # form B: z1^{|tau|} q^{-sum h} prod (1 + z1 q^h)(1 + z1^{-1} q^h)
    #       = q^{-sum h} prod (1 + z1 q^h)(z1 + q^h)   [q-exponent -(|t|^2+|t^t|^2)/2]
    work2 = spec.with_u(min(spec.u_lo, -s2), spec.u_hi + s2)
    fb = []
    for h in hooks:
        fb.append(_binomial(work2, RING_Q, 2 * h, (1,)))
        fb.append(
            MultiSeries.monomial(work2, RING_Q, 0, (1,)) + MultiSeries.monomial(work2, RING_Q, 2 * h, (0,))
        )
    prod_b = _mul_negatives_first(fb, work2, RING_Q)
    rhs_b = prod_b.shift(-s2).restrict(spec)
    return lhs, rhs_a, rhs_b


def hook_product_lhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    max_size = params.get("max_size", spec.z_windows[1][1] if spec.nz >= 2 else 4)
    total = MultiSeries.zero(spec, RING_Q)
    for tau in partitions_up_to(max_size):
        lhs, _, _ = hook_product_forms(tau, spec)
        total = total + lhs.shift(0, (0, tau.size))
    return total


def hook_product_rhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    max_size = params.get("max_size", spec.z_windows[1][1] if spec.nz >= 2 else 4)
    total = MultiSeries.zero(spec, RING_Q)
    for tau in partitions_up_to(max_size):
        _, rhs_a, _ = hook_product_forms(tau, spec)
        total = total + rhs_a.shift(0, (0, tau.size))
    return total


def _run_hook_product(spec: TruncationSpec, params: dict, threads: int):
    max_size = params.get("max_size", spec.z_windows[1][1] if spec.nz >= 2 else 4)
    taus = list(partitions_up_to(max_size))

    def member(tau):
        lhs, rhs_a, rhs_b = hook_product_forms(tau, spec)
        diff_b = first_mismatch(rhs_a, rhs_b)
        if diff_b is not None:
            return (f"tau=({tau}) [rewritten form]", rhs_a, rhs_b)
        return (f"tau=({tau})", lhs, rhs_a)

    return _family_verdict(taus, member, threads)


# ---------------------------------------------------------------------------
# 6. no-generalized (two-loop function, sum vs product vs graph)


def _cauchy_prefactor(spec: TruncationSpec, z_slot: int) -> MultiSeries:
    """prod_k (1 + z q^k)^k for the given z variable slot (0-based)."""
    z = tuple(1 if i == z_slot else 0 for i in range(spec.nz))
    return euler_product(spec, RING_Q, ((2 * k, z, 1, k) for k in range(1, max(spec.u_hi // 2, 0) + 1)))


def no_generalized_sum(spec: TruncationSpec, params: dict) -> MultiSeries:
    """Full two-loop function in sum form:
    prod(1+z1 q^k)^k * sum_tau z2^{|tau|} prod_s (1+z1 q^h)(z1+q^h)/(1-q^h)^2."""
    z2_hi = spec.z_windows[1][1]
    total = MultiSeries.zero(spec, RING_Q)
    for tau in partitions_up_to(z2_hi):
        hooks = tau.hooks()
        term = MultiSeries.one(spec, RING_Q)
        for h in hooks:
            term = term * _binomial(spec, RING_Q, 2 * h, (1, 0))
            term = term * (
                MultiSeries.monomial(spec, RING_Q, 0, (1, 0))
                + MultiSeries.monomial(spec, RING_Q, 2 * h, (0, 0))
            )
        term = term * _hook_inverse_series(hooks, spec, RING_Q, power=2)
        total = total + term.shift(0, (0, tau.size))
    return total * _cauchy_prefactor(spec, 0)


def no_generalized_product(spec: TruncationSpec, params: dict) -> MultiSeries:
    """Full two-loop function in product form:
    prod(1+z1 q^k)^k (1-z1^k z2^k)^{-1}
    prod_{k,r} (1+z1^{k-1}z2^k q^r)^r (1+z1^{k+1}z2^k q^r)^r (1-z1^k z2^k q^r)^{-2r}."""
    z2_hi = spec.z_windows[1][1]
    r_hi = max(spec.u_hi // 2, 0)

    def factors():
        for k in range(1, max(z2_hi, 0) + 1):
            yield (0, (k, k), -1, -1)
            for r in range(1, r_hi + 1):
                yield (2 * r, (k - 1, k), 1, r)
                yield (2 * r, (k + 1, k), 1, r)
                yield (2 * r, (k, k), -1, -2 * r)

    return _cauchy_prefactor(spec, 0) * euler_product(spec, RING_Q, factors())


def no_generalized_graph(spec: TruncationSpec) -> MultiSeries:
    return evaluate_graph(builtin_graph("two-loop"), spec)


def _run_no_generalized(spec: TruncationSpec, params: dict, threads: int):
    def member(label):
        if label == "sum-vs-product":
            return (label, no_generalized_sum(spec, params), no_generalized_product(spec, params))
        return (label, no_generalized_sum(spec, params), no_generalized_graph(spec))

    return _family_verdict(["sum-vs-product", "sum-vs-graph"], member, threads)


# ---------------------------------------------------------------------------
# 7. four-loop


def _relative_hook(p: Partition, other: Partition, i: int, j: int) -> int:
    """p_i + other^t_j - i - j + 1 at box (i, j)."""
    return p.part(i) + other.transpose().part(j) - i - j + 1


def four_loop_sum(spec: TruncationSpec, params: dict) -> MultiSeries:
    """Resummed four-loop function (normalization restored; see ledger):

    prod_r (1+z1 q^r)^r (1+z3 q^r)^r * sum_{tau,nu} (z2 z3)^{|tau|} (z1 z4)^{|nu|}
      q^{||tau^t - nu^t||^2}
      prod_{s in tau} (1+z1 q^{R_tau})(1+z3^{-1} q^{R_tau}) / (1-q^{h_tau})^2
      prod_{s in nu } (1+z1^{-1} q^{R_nu})(1+z3 q^{R_nu}) / (1-q^{h_nu})^2

    with R_tau(i,j) = tau_i + nu^t_j - i - j + 1 and symmetrically R_nu.
    The z3^{-1}/z1^{-1} factors are absorbed into the weights:
    (z2 z3)^{|tau|} prod (1+z3^{-1} q^R) = z2^{|tau|} prod (z3 + q^R).
    """
    z2_hi = spec.z_windows[1][1]
    z4_hi = spec.z_windows[3][1]
    total = MultiSeries.zero(spec, RING_Q)
    for tau_size in range(0, z2_hi + 1):
        for nu_size in range(0, z4_hi + 1):
            # z2^{|tau|} z4^{|nu|} is the unavoidable part of the weight
            if not spec.contains((0, 0, tau_size, 0, nu_size)):
                continue
            for tau in partitions_of(tau_size):
                for nu in partitions_of(nu_size):
                    total = total + _four_loop_term(tau, nu, spec)
    return total * _cauchy_prefactor(spec, 0) * _cauchy_prefactor(spec, 2)


def _four_loop_term(tau: Partition, nu: Partition, spec: TruncationSpec) -> MultiSeries:
    r_tau = [_relative_hook(tau, nu, i, j) for (i, j) in tau.boxes()]
    r_nu = [_relative_hook(nu, tau, i, j) for (i, j) in nu.boxes()]
    neg = 4 * sum(max(0, -r) for r in r_tau + r_nu)
    work = spec.with_u(min(spec.u_lo, -neg), spec.u_hi + neg)

    factors: list[MultiSeries] = []
    for r in r_tau:
        factors.append(_binomial(work, RING_Q, 2 * r, (1, 0, 0, 0)))
        factors.append(
            MultiSeries.monomial(work, RING_Q, 0, (0, 0, 1, 0))
            + MultiSeries.monomial(work, RING_Q, 2 * r, (0, 0, 0, 0))
        )
    for r in r_nu:
        factors.append(_binomial(work, RING_Q, 2 * r, (0, 0, 1, 0)))
        factors.append(
            MultiSeries.monomial(work, RING_Q, 0, (1, 0, 0, 0))
            + MultiSeries.monomial(work, RING_Q, 2 * r, (0, 0, 0, 0))
        )
    term = _mul_negatives_first(factors, work, RING_Q)
    term = term * _hook_inverse_series(tau.hooks() + nu.hooks(), work, RING_Q, power=2)

    taut, nut = tau.transpose(), nu.transpose()
    width = max(len(taut), len(nut))
    csq = sum((taut.part(i) - nut.part(i)) ** 2 for i in range(1, width + 1))
    term = term.shift(2 * csq, (0, tau.size, 0, nu.size))
    return term.restrict(spec)


def four_loop_graph_eval(spec: TruncationSpec, params: dict) -> MultiSeries:
    return evaluate_graph(builtin_graph("four-loop"), spec)


def four_loop_sum_printed(spec: TruncationSpec, params: dict) -> MultiSeries:
    """Literal transcription of the printed sum form (weights (z1 z4)^{|tau|}
    (z2 z3)^{|nu|}, negated relative-hook exponents, no q-normalization)."""
    z4_hi = spec.z_windows[3][1]
    z2_hi = spec.z_windows[1][1]
    total = MultiSeries.zero(spec, RING_Q)
    for tau_size in range(0, z4_hi + 1):
        for nu_size in range(0, z2_hi + 1):
            if not spec.contains((0, 0, nu_size, 0, tau_size)):
                continue
            for tau in partitions_of(tau_size):
                for nu in partitions_of(nu_size):
                    taut, nut = tau.transpose(), nu.transpose()
                    e_tau = [i + j - 1 - nut.part(j) - tau.part(i) for (i, j) in tau.boxes()]
                    e_nu = [i + j - 1 - nu.part(j) - taut.part(i) for (i, j) in nu.boxes()]
                    neg = 4 * sum(max(0, -e) for e in e_tau + e_nu)
                    work = spec.with_u(min(spec.u_lo, -neg), spec.u_hi + neg)
                    factors = []
                    for e in e_tau:
                        # (z1 z4)^{|tau|} prod (1+z1^{-1} q^e) = z4^{|tau|} prod (z1 + q^e)
                        factors.append(
                            MultiSeries.monomial(work, RING_Q, 0, (1, 0, 0, 0))
                            + MultiSeries.monomial(work, RING_Q, 2 * e, (0, 0, 0, 0))
                        )
                        factors.append(_binomial(work, RING_Q, 2 * e, (0, 0, 1, 0)))
                    for e in e_nu:
                        factors.append(_binomial(work, RING_Q, 2 * e, (1, 0, 0, 0)))
                        factors.append(
                            MultiSeries.monomial(work, RING_Q, 0, (0, 0, 1, 0))
                            + MultiSeries.monomial(work, RING_Q, 2 * e, (0, 0, 0, 0))
                        )
                    term = _mul_negatives_first(factors, work, RING_Q)
                    term = term * _hook_inverse_series(tau.hooks() + nu.hooks(), work, RING_Q, power=2)
                    term = term.shift(0, (0, nu.size, 0, tau.size))
                    total = total + term.restrict(spec)
    return total * _cauchy_prefactor(spec, 0) * _cauchy_prefactor(spec, 2)


def four_loop_product_printed(spec: TruncationSpec, params: dict) -> MultiSeries:
    """Literal transcription of the printed closed product (the dangling k is
    read as ranging over the whole bracket together with (1-z^k)^{-1})."""
    r_hi = max(spec.u_hi // 2, 0)
    k_hi = max((hi for _, hi in spec.z_windows), default=0) + 1
    units = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    pair_minus = [(1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1)]

    def factors():
        for k in range(1, k_hi + 1):
            zk = (k, k, k, k)
            yield (0, zk, -1, -1)
            for r in range(1, r_hi + 1):
                for a in range(4):
                    m1 = tuple(k - 1 + units[a][i] for i in range(4))
                    yield (2 * r, m1, 1, r)
                    m2 = tuple(k - units[a][i] for i in range(4))
                    yield (2 * r, m2, 1, r)
                yield (2 * r, zk, -1, -4 * r)
                for pm in pair_minus:
                    m3 = tuple(k - pm[i] for i in range(4))
                    yield (2 * r, m3, -1, -r)

    return euler_product(spec, RING_Q, factors())


def _run_four_loop(spec: TruncationSpec, params: dict, threads: int):
    def member(label):
        graph = four_loop_graph_eval(spec, params)
        return (label, four_loop_sum(spec, params), graph)

    return _family_verdict(["sum-vs-graph"], member, threads)


def four_loop_printed_reports(spec: TruncationSpec, params: Optional[dict] = None) -> list[IdentityReport]:
    """Check both printed forms against the graph evaluation and report
    first mismatches without correcting them."""
    params = params or {}
    graph = four_loop_graph_eval(spec, params)
    out = []
    for label, builder in (
        ("four-loop/printed-sum", four_loop_sum_printed),
        ("four-loop/printed-product", four_loop_product_printed),
    ):
        t0 = time.perf_counter()
        diff = first_mismatch(builder(spec, params), graph)
        out.append(
            IdentityReport(
                name=label,
                truncation=spec,
                verdict="match" if diff is None else "mismatch",
                mismatch=diff,
                duration_ms=(time.perf_counter() - t0) * 1000.0,
                detail="printed form compared against the graph evaluation",
            )
        )
    return out


# ---------------------------------------------------------------------------
# 8. four-loop-limit


def _t13(d1: int, d3: int, c=1) -> ParamPoly:
    return ParamPoly(RING_T1_T3, {(d1, d3): Fraction(c)})


def four_loop_limit_lhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    """Limit sum over Q[t1,t3]; params["reading"] picks the cross-statistics
    convention: "derived" (default) or "printed"."""
    reading = params.get("reading", "derived")
    x_hi, y_hi = spec.z_windows[0][1], spec.z_windows[1][1]
    terms: dict[Key, ParamPoly] = {}
    for a in range(0, x_hi + 1):
        for b in range(0, y_hi + 1):
            if not spec.contains((0, a, b)):
                continue
            acc = ParamPoly.const(RING_T1_T3, 0)
            for tau in partitions_of(a if reading == "derived" else b):
                for nu in partitions_of(b if reading == "derived" else a):
                    acc = acc + _four_loop_limit_term(tau, nu, reading)
            if not acc.is_zero():
                terms[(0, a, b)] = acc
    return MultiSeries(spec, RING_T1_T3, terms)


def _limit_box(v: Fraction, plus: str) -> ParamPoly:
    """(v + t_plus)(v - t_other) as an element of Q[t1,t3]."""
    if plus == "t3":
        return _t13(0, 0, v * v) + _t13(0, 1, v) - _t13(1, 0, v) - _t13(1, 1)
    return _t13(0, 0, v * v) + _t13(1, 0, v) - _t13(0, 1, v) - _t13(1, 1)


def _four_loop_limit_term(tau: Partition, nu: Partition, reading: str) -> ParamPoly:
    poly = ParamPoly.const(RING_T1_T3, 1)
    scale = Fraction(1)
    if reading == "derived":
        # x^{|tau|} y^{|nu|} prod_tau (R+t3)(R-t1)/h^2 prod_nu (R+t1)(R-t3)/h^2
        for (i, j) in tau.boxes():
            poly = poly * _limit_box(Fraction(_relative_hook(tau, nu, i, j)), "t3")
            scale /= Fraction(tau.hook(i, j)) ** 2
        for (i, j) in nu.boxes():
            poly = poly * _limit_box(Fraction(_relative_hook(nu, tau, i, j)), "t1")
            scale /= Fraction(nu.hook(i, j)) ** 2
    else:
        # literal: x^{|nu|} y^{|tau|}, both products with (+t3)(-t1), second
        # product over nu^t with mixed statistics read verbatim.
        nut = nu.transpose()
        taut = tau.transpose()
        for (i, j) in tau.boxes():
            v = Fraction(tau.part(i) - j + nut.part(j) - i + 1)
            poly = poly * _limit_box(v, "t3")
            scale /= Fraction(tau.hook(i, j)) ** 2
        for (i, j) in nut.boxes():
            v = Fraction(nu.part(i) - j + taut.part(j) - i + 1)
            poly = poly * _limit_box(v, "t3")
            scale /= Fraction(nut.hook(i, j)) ** 2
    return poly * scale


def four_loop_limit_rhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    """prod_k (1-x^k y^{k-1})^{t1 t3} (1-x^{k-1} y^k)^{t1 t3} (1-x^k y^k)^{t1^2+t3^2-1}."""
    t1t3 = _t13(1, 1)
    diag = _t13(2, 0) + _t13(0, 2) - ParamPoly.const(RING_T1_T3, 1)
    k_hi = max(spec.z_windows[0][1], spec.z_windows[1][1]) + 1

    def factors():
        for k in range(1, k_hi + 1):
            yield (0, (k, k - 1), -1, t1t3)
            yield (0, (k - 1, k), -1, t1t3)
            yield (0, (k, k), -1, diag)

    return euler_product(spec, RING_T1_T3, factors())


def resolve_four_loop_limit(spec: TruncationSpec, params: Optional[dict] = None) -> dict[str, Optional[tuple]]:
    """Try both cross-statistics readings against the product side; the
    matching one is the ground-truth convention."""
    params = dict(params or {})
    rhs = four_loop_limit_rhs(spec, params)
    out = {}
    for reading in ("derived", "printed"):
        params["reading"] = reading
        out[reading] = first_mismatch(four_loop_limit_lhs(spec, params), rhs)
    return out


def _run_four_loop_limit(spec: TruncationSpec, params: dict, threads: int):
    resolution = resolve_four_loop_limit(spec, params)
    matched = [r for r, diff in resolution.items() if diff is None]
    detail = (
        "cross-statistics reading matched: " + (", ".join(matched) if matched else "none")
    )
    main = resolution.get("derived")
    if main is None:
        return "match", None, detail
    return "mismatch", main, detail


# ---------------------------------------------------------------------------
# 9. stanley-k2


def stanley_lhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    """prod_k (1+x q^k)^k (1+y q^k)^k *
    sum_nu z^{|nu|} prod_s (1+x q^h)(x+q^h)(1+y q^h)(y+q^h)/(1-q^h)^4.

    z, x, y are z1, z2, z3. The Cauchy prefactors are required for the z^0
    row to agree with the octuple sum; see ledger.
    """
    z_hi = spec.z_windows[0][1]
    total = MultiSeries.zero(spec, RING_Q)
    for nu in partitions_up_to(z_hi):
        hooks = nu.hooks()
        term = MultiSeries.one(spec, RING_Q)
        for h in hooks:
            term = term * _binomial(spec, RING_Q, 2 * h, (0, 1, 0))
            term = term * (
                MultiSeries.monomial(spec, RING_Q, 0, (0, 1, 0))
                + MultiSeries.monomial(spec, RING_Q, 2 * h, (0, 0, 0))
            )
            term = term * _binomial(spec, RING_Q, 2 * h, (0, 0, 1))
            term = term * (
                MultiSeries.monomial(spec, RING_Q, 0, (0, 0, 1))
                + MultiSeries.monomial(spec, RING_Q, 2 * h, (0, 0, 0))
            )
        term = term * _hook_inverse_series(hooks, spec, RING_Q, power=4)
        total = total + term.shift(0, (nu.size, 0, 0))
    return total * _cauchy_prefactor(spec, 1) * _cauchy_prefactor(spec, 2)


def stanley_rhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    """Octuple principal skew-Schur sum over (nu, mu, lam, eta1..eta4)."""
    z_hi, x_hi, y_hi = (w[1] for w in spec.z_windows)
    m = max(spec.u_hi, 0) // 2 + 1
    exps = Specialization(empty(), m).exps()
    top = spec.u_hi

    def sk(shape: Partition, eta: Partition) -> UDict:
        return skew_schur_udict(shape, eta, exps)

    total: dict[Key, ParamPoly] = {}
    for nu in partitions_up_to(z_hi):
        nut = nu.transpose()
        for mu in partitions_up_to(x_hi):
            mut = mu.transpose()
            for lam in partitions_up_to(y_hi):
                lamt = lam.transpose()
                key = (0, nu.size, mu.size, lam.size)
                if not spec.contains(key):
                    continue
                acc: UDict = {}
                for e1 in common_subpartitions(nu, lamt):
                    f1 = udict_mul(sk(nu, e1), sk(lamt, e1), top=top)
                    if not f1:
                        continue
                    for e2 in common_subpartitions(nut, mu):
                        f2 = udict_mul(f1, udict_mul(sk(nut, e2), sk(mu, e2), top=top), top=top)
                        if not f2:
                            continue
                        for e3 in common_subpartitions(nu, mut):
                            f3 = udict_mul(f2, udict_mul(sk(nu, e3), sk(mut, e3), top=top), top=top)
                            if not f3:
                                continue
                            for e4 in common_subpartitions(nut, lam):
                                f4 = udict_mul(
                                    f3, udict_mul(sk(nut, e4), sk(lam, e4), top=top), top=top
                                )
                                if f4:
                                    acc = udict_add(acc, f4)
                for e, c in acc.items():
                    k = (e,) + key[1:]
                    if spec.contains(k):
                        cur = total.get(k)
                        poly = ParamPoly.const(RING_Q, c)
                        total[k] = poly if cur is None else cur + poly
    return MultiSeries(spec, RING_Q, total)


# ---------------------------------------------------------------------------
# 10. no-limit-consistency


def _beta_exp_series(spec: TruncationSpec, ring: Ring, rate: ParamPoly, order_cap: int) -> MultiSeries:
    """exp(rate * beta) as a series in beta (the u slot), orders 0..order_cap."""
    terms: dict[Key, ParamPoly] = {}
    zpad = (0,) * spec.nz
    power = ParamPoly.const(ring, 1)
    fact = 1
    for n in range(0, order_cap + 1):
        key = (n,) + zpad
        if spec.contains(key):
            terms[key] = power * Fraction(1, fact)
        power = power * rate
        fact *= n + 1
    return MultiSeries(spec, ring, terms)


def no_limit_substituted_sum(z_hi: int, beta_order: int) -> MultiSeries:
    """The two-variable hook sum of no-generalized under z1 = -e^{beta t},
    z2 = -z, q = e^{-beta}, as a series in (beta, z) over Q[t].

    Per box: (1 - e^{beta(t-h)})(1 - e^{-beta(t+h)}) / (1 - e^{-beta h})^2,
    a beta-regular series; the weight is (z e^{beta t})^{|tau|}.
    """
    spec = TruncationSpec(0, beta_order, ((0, z_hi),))
    work = TruncationSpec(-2, beta_order + 4, ((0, z_hi),))
    t = ParamPoly.gen(RING_T, "t")

    def one_minus_exp(rate: ParamPoly) -> MultiSeries:
        # 1 - e^{beta*rate} up to beta^{order+4}
        s = _beta_exp_series(work, RING_T, rate, beta_order + 4)
        return MultiSeries.one(work, RING_T) - s

    total = MultiSeries.zero(spec, RING_T)
    for tau in partitions_up_to(z_hi):
        term = MultiSeries.one(spec, RING_T)
        for h in tau.hooks():
            hh = ParamPoly.const(RING_T, h)
            num = one_minus_exp(t - hh) * one_minus_exp(-t - hh)
            den = one_minus_exp(-hh)
            ratio = (num * den.inverse() * den.inverse()).restrict(work).restrict(
                TruncationSpec(0, beta_order, work.z_windows)
            )
            term = term * ratio.restrict(spec)
        weight = _beta_exp_series(spec, RING_T, t * tau.size, beta_order)
        term = term * weight
        total = total + term.shift(0, (tau.size,))
    return total


def no_limit_lhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    """beta^0 row of the substituted hook sum, as a z-series."""
    beta_order = params.get("beta_order", 2)
    z_hi = spec.z_windows[0][1]
    sub = no_limit_substituted_sum(z_hi, beta_order)
    terms: dict[Key, ParamPoly] = {}
    for key, c in sub.terms.items():
        if key[0] == 0:
            out_key = (0,) + key[1:]
            if spec.contains(out_key):
                terms[out_key] = c
    return MultiSeries(spec, RING_T, terms)


def no_limit_rhs(spec: TruncationSpec, params: dict) -> MultiSeries:
    return no_classic_lhs(spec, params)


# ---------------------------------------------------------------------------
# family verification plumbing


def _family_verdict(items, member_fn, threads: int):
    """Run member checks (label, lhs, rhs) and combine into one verdict."""
    def check(item):
        label, lhs, rhs = member_fn(item)
        return label, first_mismatch(lhs, rhs)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(check, items))
    else:
        results = [check(item) for item in items]

    for label, diff in results:
        if diff is not None:
            return "mismatch", diff, f"first failing member: {label}"
    return "match", None, f"{len(results)} member checks passed"


# ---------------------------------------------------------------------------
# registry


REGISTRY: dict[str, IdentitySpec] = {}


def _register(spec: IdentitySpec) -> None:
    REGISTRY[spec.name] = spec


_register(IdentitySpec(
    name="no-classic",
    description="hook-length partition sum equals the Euler product with exponent t^2-1",
    ring=RING_T,
    z_count=1,
    build_lhs=no_classic_lhs,
    build_rhs=no_classic_rhs,
))

_register(IdentitySpec(
    name="no-theta",
    description="arm/leg-deformed hook sum at rational theta equals the Euler product with exponent (t-1)(t/theta+1)",
    ring=RING_T,
    z_count=1,
    build_lhs=no_theta_lhs,
    build_rhs=no_theta_rhs,
    sampled_params=THETA_SAMPLES,
    runner=_run_no_theta,
))

_register(IdentitySpec(
    name="cyclic-schur",
    description="principal times shifted Schur value equals the kappa-weighted principal skew pair sum",
    ring=RING_Q,
    z_count=2,
    build_lhs=cyclic_schur_lhs,
    build_rhs=cyclic_schur_rhs,
    runner=_run_cyclic_schur,
))

_register(IdentitySpec(
    name="cauchy-dual",
    description="sum of z^{|p|} s_p s_{p^t} at the principal point equals prod (1+z q^k)^k",
    ring=RING_Q,
    z_count=1,
    build_lhs=cauchy_dual_lhs,
    build_rhs=cauchy_dual_rhs,
))

_register(IdentitySpec(
    name="hook-product",
    description="shifted-over-plain double product equals the per-box hook factors (both printed forms), per partition",
    ring=RING_Q,
    z_count=2,
    build_lhs=hook_product_lhs,
    build_rhs=hook_product_rhs,
    runner=_run_hook_product,
))

_register(IdentitySpec(
    name="no-generalized",
    description="two-loop graph function: two-variable hook sum equals the infinite product (graph evaluation as third route)",
    ring=RING_Q,
    z_count=2,
    build_lhs=no_generalized_sum,
    build_rhs=no_generalized_product,
    z_laurent=(1,),
    runner=_run_no_generalized,
    default_z_total=4,
))

_register(IdentitySpec(
    name="four-loop",
    description="four-loop graph function: resummed two-partition hook sum equals the graph evaluation; printed forms reported as-is",
    ring=RING_Q,
    z_count=4,
    build_lhs=four_loop_sum,
    build_rhs=four_loop_graph_eval,
    runner=_run_four_loop,
    default_z_total=3,
))

_register(IdentitySpec(
    name="four-loop-limit",
    description="beta->0 limit of four-loop over Q[t1,t3]; resolves the cross-statistics reading against the product side",
    ring=RING_T1_T3,
    z_count=2,
    build_lhs=four_loop_limit_lhs,
    build_rhs=four_loop_limit_rhs,
    runner=_run_four_loop_limit,
    default_z_total=3,
))

_register(IdentitySpec(
    name="stanley-k2",
    description="quadruple hook sum times Cauchy prefactors equals the octuple principal skew-Schur sum",
    ring=RING_Q,
    z_count=3,
    build_lhs=stanley_lhs,
    build_rhs=stanley_rhs,
))

_register(IdentitySpec(
    name="no-limit-consistency",
    description="beta-adic substitution into no-generalized reproduces no-classic at order beta^0",
    ring=RING_T,
    z_count=1,
    build_lhs=no_limit_lhs,
    build_rhs=no_limit_rhs,
))


def list_identities() -> list[IdentitySpec]:
    return list(REGISTRY.values())


def get(name: str) -> IdentitySpec:
    try:
        return REGISTRY[name]
    except KeyError:
        import difflib

        suggestions = difflib.get_close_matches(name, REGISTRY, n=3)
        hint = f"; did you mean {', '.join(suggestions)}?" if suggestions else ""
        raise UnknownIdentityError(f"unknown identity {name!r}{hint}") from None


def default_spec(name: str, z_order: int = 4, q_order: int = 8, z_total: Optional[int] = None) -> TruncationSpec:
    ident = get(name)
    windows = tuple(
        (-z_order, z_order) if (i + 1) in ident.z_laurent else (0, z_order)
        for i in range(ident.z_count)
    )
    if z_total is None:
        z_total = ident.default_z_total
    return TruncationSpec(-2 * q_order, 2 * q_order, windows, z_total)


def verify(
    name: str,
    trunc: Optional[TruncationSpec] = None,
    params: Optional[dict] = None,
    threads: int = 1,
) -> IdentityReport:
    ident = get(name)
    spec = trunc if trunc is not None else default_spec(name)
    if spec.nz != ident.z_count:
        raise ValueError(
            f"identity {name} needs {ident.z_count} z-variables, window has {spec.nz}"
        )
    params = params or {}
    t0 = time.perf_counter()
    if ident.runner is not None:
        verdict, mismatch, detail = ident.runner(spec, params, threads)
    else:
        diff = first_mismatch(ident.build_lhs(spec, params), ident.build_rhs(spec, params))
        verdict = "match" if diff is None else "mismatch"
        mismatch = diff
        detail = ""
    return IdentityReport(
        name=name,
        truncation=spec,
        verdict=verdict,
        mismatch=mismatch,
        duration_ms=(time.perf_counter() - t0) * 1000.0,
        detail=detail,
    )
