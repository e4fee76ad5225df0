"""Intersection with the elliptic-tail test curve and rigid components.

The test curve gamma on Mbar_{3,n} is traced by gluing a variable elliptic
tail to a fixed one-pointed genus-2 curve (with the n markings on the fixed
part).  Its intersection numbers are

    gamma . kappa_1      = 1/12
    gamma . delta_irr    = 1
    gamma . delta_{1,{}} = -1/12

with every psi_j and every other boundary class pairing to zero.  The
lambda entry of the stored pairing vector is derived, not independent:
Mumford's relation kappa_1 = 12*lambda + psi - delta forces

    gamma . lambda = (gamma.kappa_1 + gamma.delta) / 12
                   = (1/12 + (1 - 1/12)) / 12 = 1/12.

A divisor E covered by irreducible curves of class gamma with
gamma . D < 0 and gamma . E < 0 is a rigid component of every effective D,
with multiplicity (gamma.D)/(gamma.E); here only the coarse elliptic-tail
divisor Delta_{1,{}} = 2*delta_{1,{}} qualifies, and
gamma . Delta_{1,{}} = -1/6.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

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
    coarse_boundary_class,
    delta_sep,
    sym_delta,
)

__all__ = ["TestCurveGamma", "gamma_pairing", "gamma_dot", "rigid_component"]

_GAMMA_LAMBDA = Fraction(1, 12)  # derived from Mumford's relation, see module docstring
_GAMMA_IRR = Fraction(1)
_GAMMA_TAIL = Fraction(-1, 12)


def gamma_pairing(e: BasisElement) -> Fraction:
    """Pairing of the elliptic-tail curve with one basis element (genus 3)."""
    if e is LAMBDA or e == LAMBDA:
        return _GAMMA_LAMBDA
    if e.kind == BasisElement.IRR_KIND:
        return _GAMMA_IRR
    if e.kind == BasisElement.SEP_KIND and e.i == 1 and not e.S:
        return _GAMMA_TAIL
    return Fraction(0)


def _sym_gamma_pairing(e: SymElement) -> Fraction:
    if e == SYM_LAMBDA:
        return _GAMMA_LAMBDA
    if e == SYM_DELTA_IRR:
        return _GAMMA_IRR
    if e.kind == "sep" and e.i == 1 and e.k == 0:
        return _GAMMA_TAIL
    return Fraction(0)


@dataclass(frozen=True)
class TestCurveGamma:
    """The elliptic-tail test curve class on a fixed Mbar_{3,n}."""

    index: ModuliIndex

    def __post_init__(self):
        if self.index.g != 3:
            raise ValueError(f"the elliptic-tail curve lives on genus 3, got {self.index}")

    def pairing(self, e: BasisElement) -> Fraction:
        return gamma_pairing(e)

    def dot(self, c) -> Fraction:
        if c.index != self.index:
            raise ValueError(f"class on {c.index} paired against gamma on {self.index}")
        return gamma_dot(c)


def gamma_dot(c) -> Fraction:
    """Intersection number of gamma with a class on Mbar_{3,n}.

    Accepts full-basis and symmetric classes; linear over the pairing table.
    """
    if c.index.g != 3:
        raise ValueError(f"the elliptic-tail curve lives on genus 3, got {c.index}")
    total = Fraction(0)
    if isinstance(c, SymDivisorClass):
        for e, v in c._coeffs.items():
            p = _sym_gamma_pairing(e)
            if p:
                total += v * p
        return total
    if isinstance(c, DivisorClass):
        for e, v in c._coeffs.items():
            p = gamma_pairing(e)
            if p:
                total += v * p
        return total
    raise TypeError(f"cannot pair {type(c).__name__} with gamma")


def rigid_component(d, e: BasisElement) -> Fraction | None:
    """Multiplicity of the coarse divisor of ``e`` as a rigid component of d.

    ``e`` must be a boundary divisor covered by gamma-curves; the only such
    divisor here is the elliptic-tail divisor Delta_{1,{}}.  Returns
    (gamma.d)/(gamma.E) when both numbers are negative and None otherwise
    (the sign test fails, so no rigidity is detected).
    """
    g, n = d.index
    if g != 3:
        raise ValueError(f"rigid-component test uses the genus-3 test curve, got {d.index}")
    if not (
        isinstance(e, BasisElement)
        and e.kind == BasisElement.SEP_KIND
        and e.i == 1
        and not e.S
    ):
        raise ValueError(
            f"{e!r} is not covered by elliptic-tail curves; only delta_1_{{}} qualifies"
        )
    coarse = coarse_boundary_class(1, (), 3, n)
    if isinstance(d, SymDivisorClass):
        gd_e = gamma_dot(SymDivisorClass((3, n), {sym_delta(1, 0, 3, n): 2}))
    else:
        gd_e = gamma_dot(coarse)
    gd_d = gamma_dot(d)
    if gd_d < 0 and gd_e < 0:
        return gd_d / gd_e
    return None
