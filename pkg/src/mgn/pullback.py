"""Pull-backs of divisor classes along forgetful morphisms.

For the map pi: Mbar_{g,n+1} -> Mbar_{g,n} forgetting the last marked point,
the pull-back acts on the basis by

    pi* lambda      = lambda
    pi* delta_irr   = delta_irr
    pi* psi_j       = psi_j - delta_{0,{j,n+1}}
    pi* delta_{i,S} = delta_{i,S} + delta_{i, S + {n+1}}

with the one exception pi* delta_{g/2,{}} = delta_{g/2,{}} when n = 0 (both
summands would name the same divisor).  Iterating and relabeling gives the
pull-back pi_T* along the map remembering an arbitrary subset T of markings.

The module also builds the effective classes used by the bigness argument:
the divisor class computed by Farkas for the locus where the (r+1)-st
pluricanonical system passes through all marked points, and its symmetric
average over all 14-point subsets.  Classes that are known only up to
subtracting an unspecified effective boundary combination are modelled by
`EffectiveClassWithSlack`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .picard import (
    DELTA_IRR,
    LAMBDA,
    SYM_DELTA_IRR,
    SYM_LAMBDA,
    BasisElement,
    DivisorClass,
    ModuliIndex,
    SymDivisorClass,
    SymElement,
    boundary_elements,
    delta_sep,
    omega_total,
    psi,
    sym_boundary_elements,
    sym_delta,
    omega_total_sym,
)

__all__ = [
    "ForgetfulSpec",
    "pullback",
    "relabel",
    "pullback_multi",
    "pullback_from_unmarked",
    "symmetric_pullback_from_unmarked",
    "EffectiveClassWithSlack",
    "all_boundary_support",
    "all_sym_boundary_support",
    "farkas_class",
    "farkas_marked_points",
    "SymmetricFarkasClass",
    "symmetric_pullback_farkas",
    "farkas_average_bruteforce",
    "BRUTE_FORCE_LIMIT",
]

#: The literal subset-averaging oracle is capped here (C(16,14) = 120
#: pull-backs); it is a checking device, not a production path.
BRUTE_FORCE_LIMIT = 16


@dataclass(frozen=True)
class ForgetfulSpec:
    """A forgetful morphism Mbar_{g,n+1} -> Mbar_{g,n}.

    ``kept`` lists the retained markings in source labels; the single-point
    map keeps 1..n and forgets n+1.
    """

    source: ModuliIndex
    kept: tuple[int, ...]

    @classmethod
    def single(cls, g: int, n: int) -> "ForgetfulSpec":
        return cls(ModuliIndex(g, n + 1), tuple(range(1, n + 1)))

    @property
    def target(self) -> ModuliIndex:
        return ModuliIndex(self.source.g, len(self.kept))


def _acc(d: dict, key, value) -> None:
    w = d.get(key)
    if w is None:
        d[key] = value
    else:
        w = w + value
        if w:
            d[key] = w
        else:
            del d[key]


def _pullback_coeffs(coeffs: Mapping[BasisElement, Fraction], g: int, n: int) -> dict:
    """One forgetful step on a raw coefficient dict, (g,n) -> (g,n+1)."""
    new = n + 1
    out: dict[BasisElement, Fraction] = {}
    for e, v in coeffs.items():
        kind = e.kind
        if kind == BasisElement.PSI_KIND:
            _acc(out, e, v)
            _acc(out, delta_sep(0, (e.j, new), g, new), -v)
        elif kind == BasisElement.SEP_KIND:
            if n == 0 and 2 * e.i == g:
                # adding the point to either side names the same divisor
                _acc(out, e, v)
            else:
                _acc(out, delta_sep(e.i, e.S, g, new), v)
                _acc(out, delta_sep(e.i, e.S | {new}, g, new), v)
        else:
            _acc(out, e, v)
    return out


def pullback(c: DivisorClass, spec: ForgetfulSpec | None = None) -> DivisorClass:
    """Pull back along the single-point forgetful map (g,n+1) -> (g,n)."""
    g, n = c.index
    if spec is not None:
        if spec.target != c.index:
            raise ValueError(f"index mismatch: class on {c.index}, map target {spec.target}")
        if spec.source != ModuliIndex(g, n + 1) or spec.kept != tuple(range(1, n + 1)):
            raise ValueError("single-point pull-back forgets exactly the last marking")
    return DivisorClass._raw(ModuliIndex(g, n + 1), _pullback_coeffs(c._coeffs, g, n))


def _relabel_coeffs(
    coeffs: Mapping[BasisElement, Fraction], perm: Mapping[int, int], g: int, n: int
) -> dict:
    out: dict[BasisElement, Fraction] = {}
    for e, v in coeffs.items():
        kind = e.kind
        if kind == BasisElement.PSI_KIND:
            _acc(out, psi(perm[e.j]), v)
        elif kind == BasisElement.SEP_KIND:
            _acc(out, delta_sep(e.i, frozenset(perm[m] for m in e.S), g, n), v)
        else:
            _acc(out, e, v)
    return out


def relabel(c: DivisorClass, perm: Mapping[int, int]) -> DivisorClass:
    """Apply a permutation of the marked points to a class."""
    g, n = c.index
    if sorted(perm) != list(range(1, n + 1)) or sorted(perm.values()) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {perm}")
    return DivisorClass._raw(c.index, _relabel_coeffs(c._coeffs, perm, g, n))


def pullback_multi(c: DivisorClass, kept: Sequence[int], n: int) -> DivisorClass:
    """Pull back along the map (g,n) -> (g,m) remembering the listed markings.

    ``kept[j-1]`` is the marking of the larger space corresponding to marking
    j of ``c``.  Equals the composition of single-point pull-backs in any
    forgetting order; markings are matched order-preservingly.
    """
    g, m = c.index
    kept = tuple(kept)
    if len(kept) != m:
        raise ValueError(f"kept list has {len(kept)} entries for a class with {m} markings")
    if len(set(kept)) != len(kept):
        raise ValueError(f"kept markings must be injective, got {kept}")
    if not all(1 <= x <= n for x in kept):
        raise ValueError(f"kept markings must lie in 1..{n}, got {kept}")
    if n < m:
        raise ValueError(f"cannot pull back from {m} markings to {n}")

    sorted_kept = sorted(kept)
    rank = {label: pos + 1 for pos, label in enumerate(sorted_kept)}
    sigma = {j: rank[kept[j - 1]] for j in range(1, m + 1)}
    coeffs = c._coeffs if sigma == {j: j for j in range(1, m + 1)} else _relabel_coeffs(
        c._coeffs, sigma, g, m
    )
    for k in range(m, n):
        coeffs = _pullback_coeffs(coeffs, g, k)
    others = sorted(set(range(1, n + 1)) - set(kept))
    final = {}
    for pos in range(1, n + 1):
        final[pos] = sorted_kept[pos - 1] if pos <= m else others[pos - m - 1]
    if final != {j: j for j in range(1, n + 1)}:
        coeffs = _relabel_coeffs(coeffs, final, g, n)
    return DivisorClass._raw(ModuliIndex(g, n), coeffs)


def pullback_from_unmarked(c: DivisorClass, n: int) -> DivisorClass:
    """Pull back a class on Mbar_{g,0} along the map forgetting all points."""
    if c.index.n != 0:
        raise ValueError(f"expected a class without marked points, got {c.index}")
    return pullback_multi(c, (), n)


def symmetric_pullback_from_unmarked(c: DivisorClass, n: int) -> SymDivisorClass:
    """Symmetric form of `pullback_from_unmarked`, valid for any n.

    Iterating the one-point rule sends delta_{i,{}} to the sum of delta_{i,S}
    over every subset S, i.e. every symmetric key delta_{i,k} inherits the
    coefficient of delta_{i,{}}.
    """
    g, zero = c.index
    if zero != 0:
        raise ValueError(f"expected a class without marked points, got {c.index}")
    out: dict[SymElement, Fraction] = {}
    for e, v in c._coeffs.items():
        if e.kind == BasisElement.LAMBDA_KIND:
            _acc(out, SYM_LAMBDA, v)
        elif e.kind == BasisElement.IRR_KIND:
            _acc(out, SYM_DELTA_IRR, v)
        else:
            lo = 2 if e.i == 0 else 0
            hi = n // 2 if 2 * e.i == g else n
            for k in range(lo, hi + 1):
                _acc(out, sym_delta(e.i, k, g, n), v)
    return SymDivisorClass._raw(ModuliIndex(g, n), out)


# ---------------------------------------------------------------------------
# effective classes with unspecified boundary slack


def all_boundary_support(g: int, n: int) -> frozenset[BasisElement]:
    return frozenset(boundary_elements(g, n))


def all_sym_boundary_support(g: int, n: int) -> frozenset[SymElement]:
    return frozenset(sym_boundary_elements(g, n))


@dataclass(frozen=True)
class EffectiveClassWithSlack:
    """A divisor class known up to subtracting effective boundary terms.

    The represented class is ``known - E`` where E is an unspecified
    effective combination supported on ``slack_support``; only that much is
    needed to propagate effectivity through positive linear combinations.
    """

    known: object  # DivisorClass | SymDivisorClass
    slack_support: frozenset

    def __post_init__(self):
        for e in self.slack_support:
            if not e.is_boundary:
                raise ValueError(f"slack support must be boundary classes, got {e}")

    def pullback(self) -> "EffectiveClassWithSlack":
        """Single-point pull-back; slack stays effective boundary."""
        if not isinstance(self.known, DivisorClass):
            raise TypeError("pull-back of slack classes is implemented for the full basis")
        g, n = self.known.index
        support = set()
        for e in self.slack_support:
            image = _pullback_coeffs({e: Fraction(1)}, g, n)
            support.update(image)
        return EffectiveClassWithSlack(pullback(self.known), frozenset(support))


def farkas_marked_points(g: int, r: int) -> int:
    """Marked points carried by the Farkas divisor: h^0(omega^{r+1}) = (2r+1)(g-1)."""
    return (2 * r + 1) * (g - 1)


def _farkas_coefficients(r: int) -> tuple[int, int, int]:
    """(lambda, omega, delta_irr) coefficients -(6r^2+6r+1), r+1, C(r+1,2)."""
    return -(6 * r * r + 6 * r + 1), r + 1, comb(r + 1, 2)


def farkas_class(g: int, r: int) -> EffectiveClassWithSlack:
    """Farkas's effective divisor class on Mbar_{g,(2r+1)(g-1)}.

    Known part: -(6r^2+6r+1)*lambda + (r+1)*omega + C(r+1,2)*delta_irr
    - delta_{0,2}; an unspecified effective boundary combination has been
    subtracted, recorded as slack on every boundary class.
    """
    if g < 1 or r < 1:
        raise ValueError(f"need g, r >= 1, got ({g}, {r})")
    n = farkas_marked_points(g, r)
    index = ModuliIndex(g, n)  # raises for unstable targets such as g = 1
    lam, om, irr = _farkas_coefficients(r)
    known = (
        lam * DivisorClass(index, {LAMBDA: 1})
        + om * omega_total(g, n)
        + irr * DivisorClass(index, {DELTA_IRR: 1})
        - DivisorClass(index, {delta_sep(0, S, g, n): 1 for S in combinations(range(1, n + 1), 2)})
    )
    return EffectiveClassWithSlack(known, all_boundary_support(g, n))


@dataclass(frozen=True)
class SymmetricFarkasClass:
    """The symmetric average of the 14-point Farkas class over all subsets.

    ``known`` is the closed form

        -73*lambda + (56/n)*psi + 6*delta_irr - (182/(n(n-1)))*delta_{0,2}
                   - sum over k >= 2 of (56k/n)*delta_{0,k},

    i.e. the terms the bigness computation tracks explicitly.  Averaging the
    14-point known part literally also produces, for 3 <= k <= n-12, the
    effective-negative terms -C(k,2)C(n-k,12)/C(n,14)*delta_{0,k} coming from
    pull-backs of delta_{0,2} whose subset grew; those are filed under slack
    but kept available in ``averaging_correction`` so the exact average
    ``known - averaging_correction`` can be checked against literal
    enumeration.
    """

    n: int
    known: SymDivisorClass
    averaging_correction: SymDivisorClass
    slack_support: frozenset = field(repr=False)

    @property
    def exact_average(self) -> SymDivisorClass:
        return self.known - self.averaging_correction


def symmetric_pullback_farkas(n: int) -> SymmetricFarkasClass:
    """Average the pull-backs of the (g,r) = (3,3) Farkas class over all
    14-element marking subsets of Mbar_{3,n}.

    Term by term: lambda and delta_irr pull back to themselves; each omega_j
    pulls back to omega of the remembered marking, and a fixed marking lies
    in C(n-1,13) of the C(n,14) subsets, giving the factor 14/n; a fixed
    pair survives in C(n-2,12) subsets, giving the delta_{0,2} factor
    C(14,2)/C(n,2).
    """
    if n < 14:
        raise ValueError(f"symmetric pull-back needs n >= 14, got {n}")
    g, r, m = 3, 3, 14
    lam, om, irr = _farkas_coefficients(r)
    index = ModuliIndex(g, n)
    total = comb(n, m)
    omega_factor = Fraction(om * comb(n - 1, m - 1), total)  # = (r+1) * 14/n
    pair_factor = Fraction(comb(n - 2, m - 2), total)  # = C(14,2)/C(n,2)

    known = (
        lam * SymDivisorClass(index, {SYM_LAMBDA: 1})
        + omega_factor * omega_total_sym(g, n)
        + irr * SymDivisorClass(index, {SYM_DELTA_IRR: 1})
        - pair_factor * SymDivisorClass(index, {sym_delta(0, 2, g, n): 1})
    )
    correction = SymDivisorClass(
        index,
        {
            sym_delta(0, k, g, n): Fraction(comb(k, 2) * comb(n - k, m - 2), total)
            for k in range(3, n + 1)
            if comb(k, 2) * comb(n - k, m - 2)
        },
    )
    return SymmetricFarkasClass(n, known, correction, all_sym_boundary_support(g, n))


def farkas_average_bruteforce(n: int) -> DivisorClass:
    """Literal average of pi_T* over all C(n,14) subsets T, in the full basis.

    Oracle for `symmetric_pullback_farkas`; gated to n <= 16.
    """
    if not 14 <= n <= BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute-force averaging is gated to 14 <= n <= {BRUTE_FORCE_LIMIT}")
    base = farkas_class(3, 3).known
    acc: dict[BasisElement, Fraction] = {}
    count = 0
    for T in combinations(range(1, n + 1), 14):
        pulled = pullback_multi(base, T, n)
        for e, v in pulled._coeffs.items():
            _acc(acc, e, v)
        count += 1
    inv = Fraction(1, count)
    return DivisorClass._raw(ModuliIndex(3, n), {e: v * inv for e, v in acc.items()})
