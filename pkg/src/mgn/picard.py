"""Exact rational divisor classes on moduli spaces of stable pointed curves.

The rational Picard group of Mbar_{g,n} (for g >= 3) has a basis consisting
of the Hodge class lambda, the cotangent classes psi_1, ..., psi_n, the
irreducible boundary class delta_irr, and the separating boundary classes
delta_{i,S}.  This module implements sparse exact-rational vectors over that
basis together with

* canonical representatives for the identification
  Delta_{i,S} = Delta_{g-i, complement(S)},
* the standard named classes: the canonical class
  13*lambda + psi - 2*delta - delta_{1,{}}, Mumford's first kappa class
  kappa_1 = 12*lambda + psi - delta, the omega classes pulled back from
  one-pointed spaces, and the Harris-Mumford hyperelliptic-locus class
  9*lambda - delta_irr - 3*delta_1 on Mbar_3,
* the stack-versus-coarse-space convention delta_{1,{}} = [Delta_{1,{}}]/2
  (the generic elliptic-tail curve has an extra involution),
* an S_n-symmetric compressed representation for computations whose marked
  point count makes the 2^n separating classes unmanageable.

All coefficients are `fractions.Fraction`; floats are rejected everywhere.
For g < 3 the listed classes need not be linearly independent (on Mbar_{1,1}
for instance 12*lambda = delta_irr); the arithmetic here is formal in the
listed generators and imposes no such relations.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping

__all__ = [
    "ModuliIndex",
    "BasisElement",
    "LAMBDA",
    "DELTA_IRR",
    "psi",
    "delta_sep",
    "canonicalize",
    "boundary_elements",
    "DivisorClass",
    "lambda_class",
    "psi_class",
    "delta_irr_class",
    "delta_sep_class",
    "delta_total",
    "psi_total",
    "canonical_class",
    "kappa1",
    "kappa_basis_coefficients",
    "omega_class",
    "omega_total",
    "hyperelliptic_class",
    "coarse_boundary_class",
    "coarse_delta_irr",
    "SymElement",
    "SYM_LAMBDA",
    "SYM_PSI",
    "SYM_DELTA_IRR",
    "sym_delta",
    "sym_boundary_elements",
    "SymDivisorClass",
    "symmetrize",
    "expand",
    "canonical_class_sym",
    "kappa1_sym",
    "omega_total_sym",
    "delta_total_sym",
]

#: Full-basis classes keep one key per delta_{i,S}; beyond this many marked
#: points (2^20 subsets) only the symmetric representation is supported.
MAX_FULL_BASIS_POINTS = 20


def _as_coefficient(value) -> Fraction:
    """Coerce to an exact rational, refusing floats outright."""
    if isinstance(value, float):
        raise TypeError("float coefficients are not allowed; use Fraction")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as an exact rational coefficient")


class ModuliIndex:
    """The pair (g, n) of a stable moduli space Mbar_{g,n}."""

    __slots__ = ("g", "n")

    def __init__(self, g: int, n: int):
        if not (isinstance(g, int) and isinstance(n, int)):
            raise TypeError("genus and marked-point count must be integers")
        if g < 0 or n < 0:
            raise ValueError(f"invalid (g, n) = ({g}, {n})")
        if 2 * g - 2 + n <= 0:
            raise ValueError(f"unstable moduli index (g, n) = ({g}, {n}): need 2g - 2 + n > 0")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("ModuliIndex is immutable")

    def __eq__(self, other):
        return isinstance(other, ModuliIndex) and self.g == other.g and self.n == other.n

    def __hash__(self):
        return hash((self.g, self.n))

    def __repr__(self):
        return f"ModuliIndex({self.g}, {self.n})"

    def __str__(self):
        return f"Mbar({self.g},{self.n})"

    def __iter__(self):
        return iter((self.g, self.n))


def _index(index_or_pair) -> ModuliIndex:
    if isinstance(index_or_pair, ModuliIndex):
        return index_or_pair
    g, n = index_or_pair
    return ModuliIndex(g, n)


# ---------------------------------------------------------------------------
# basis elements


class BasisElement:
    """One generator of the divisor basis: lambda, psi_j, delta_irr or delta_{i,S}.

    Instances are immutable, interned by the factory functions below, and
    ordered lambda < psi_1 < psi_2 < ... < delta_irr < delta_{i,S}
    (separating classes lexicographically by (i, sorted S)), which fixes the
    serialization order.
    """

    __slots__ = ("kind", "j", "i", "S", "_hash", "_key")

    LAMBDA_KIND = "lambda"
    PSI_KIND = "psi"
    IRR_KIND = "irr"
    SEP_KIND = "sep"

    def __init__(self, kind: str, j: int = 0, i: int = 0, S: frozenset = frozenset()):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "S", S)
        if kind == self.LAMBDA_KIND:
            key = (0, 0, ())
        elif kind == self.PSI_KIND:
            key = (1, j, ())
        elif kind == self.IRR_KIND:
            key = (2, 0, ())
        elif kind == self.SEP_KIND:
            key = (3, i, tuple(sorted(S)))
        else:
            raise ValueError(f"unknown basis element kind {kind!r}")
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("BasisElement is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, BasisElement) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    @property
    def is_boundary(self) -> bool:
        return self.kind in (self.IRR_KIND, self.SEP_KIND)

    def name(self) -> str:
        """The serialization key, e.g. ``psi_3`` or ``delta_1_{1,2}``."""
        if self.kind == self.LAMBDA_KIND:
            return "lambda"
        if self.kind == self.PSI_KIND:
            return f"psi_{self.j}"
        if self.kind == self.IRR_KIND:
            return "delta_irr"
        subset = ",".join(str(m) for m in sorted(self.S))
        return f"delta_{self.i}_{{{subset}}}"

    def __repr__(self):
        return self.name()


LAMBDA = BasisElement(BasisElement.LAMBDA_KIND)
DELTA_IRR = BasisElement(BasisElement.IRR_KIND)


@lru_cache(maxsize=None)
def psi(j: int) -> BasisElement:
    """The cotangent class psi_j at the j-th marked point."""
    if j < 1:
        raise ValueError(f"marking index must be >= 1, got {j}")
    return BasisElement(BasisElement.PSI_KIND, j=j)


@lru_cache(maxsize=None)
def _sep(i: int, S: frozenset) -> BasisElement:
    return BasisElement(BasisElement.SEP_KIND, i=i, S=S)


def _canonical_sep_pair(i: int, S: frozenset, g: int, n: int) -> tuple[int, frozenset]:
    """Canonical representative of delta_{i,S} = delta_{g-i, complement(S)}.

    Representatives keep i < g/2; at the self-paired value i = g/2 the side
    not containing marking n is kept (for n = 0 the representative is
    (g/2, {})).  Validity is exactly stability of both sides of the node:
    |S| >= 2 when i = 0 and |S| <= n - 2 when i = g.
    """
    if not (0 <= i <= g):
        raise ValueError(f"separating genus {i} out of range for genus {g}")
    if not S <= frozenset(range(1, n + 1)):
        raise ValueError(f"subset {sorted(S)} not contained in {{1..{n}}}")
    if i == 0 and len(S) < 2:
        raise ValueError(f"delta_{{0,S}} needs |S| >= 2, got S = {sorted(S)}")
    if i == g and len(S) > n - 2:
        raise ValueError(f"delta_{{g,S}} needs |S| <= n - 2, got S = {sorted(S)}")
    if 2 * i > g:
        return g - i, frozenset(range(1, n + 1)) - S
    if 2 * i == g and n in S:
        return i, frozenset(range(1, n + 1)) - S
    return i, S


def delta_sep(i: int, S: Iterable[int], g: int, n: int) -> BasisElement:
    """The boundary class delta_{i,S} on Mbar_{g,n}, in canonical form."""
    ci, cS = _canonical_sep_pair(i, frozenset(S), g, n)
    return _sep(ci, cS)


def canonicalize(i: int, S: Iterable[int], g: int, n: int) -> BasisElement:
    """Canonical representative of the separating boundary class delta_{i,S}.

    Idempotent, and invariant under (i, S) -> (g - i, complement of S).
    Rejects pairs that are invalid in both orientations, e.g. (0, {j}).
    """
    return delta_sep(i, S, g, n)


def _validate_element(e: BasisElement, g: int, n: int) -> None:
    kind = e.kind
    if kind == BasisElement.PSI_KIND:
        if not 1 <= e.j <= n:
            raise ValueError(f"psi_{e.j} does not exist on Mbar({g},{n})")
    elif kind == BasisElement.IRR_KIND:
        if g < 1:
            raise ValueError("delta_irr does not exist in genus 0")
    elif kind == BasisElement.SEP_KIND:
        ci, cS = _canonical_sep_pair(e.i, e.S, g, n)
        if (ci, cS) != (e.i, e.S):
            raise ValueError(f"{e} is not in canonical form on Mbar({g},{n})")


def boundary_elements(g: int, n: int) -> list[BasisElement]:
    """All boundary basis elements of Mbar_{g,n} in canonical order."""
    ModuliIndex(g, n)
    out: list[BasisElement] = []
    if g >= 1:
        out.append(DELTA_IRR)
    markings = range(1, n + 1)
    for i in range(0, g // 2 + 1):
        min_size = 2 if i == 0 else 0
        if 2 * i == g:
            pool = list(range(1, n))  # representatives avoid marking n
        else:
            pool = list(markings)
        for size in range(min_size, len(pool) + 1):
            for S in combinations(pool, size):
                if i == g and size > n - 2:
                    continue
                out.append(_sep(i, frozenset(S)))
    return out


# ---------------------------------------------------------------------------
# divisor classes


class DivisorClass:
    """A sparse exact-rational vector over the divisor basis of Mbar_{g,n}.

    Zero coefficients are never stored.  Instances are immutable values:
    arithmetic returns new objects, so classes can be shared freely.
    """

    __slots__ = ("index", "_coeffs")

    def __init__(self, index, coeffs: Mapping[BasisElement, object] | None = None):
        index = _index(index)
        if index.n > MAX_FULL_BASIS_POINTS:
            raise ValueError(
                f"full-basis classes support n <= {MAX_FULL_BASIS_POINTS} marked points "
                f"(got n = {index.n}); use SymDivisorClass"
            )
        clean: dict[BasisElement, Fraction] = {}
        if coeffs:
            for e, v in coeffs.items():
                if not isinstance(e, BasisElement):
                    raise TypeError(f"coefficient key {e!r} is not a BasisElement")
                _validate_element(e, index.g, index.n)
                v = _as_coefficient(v)
                if v:
                    clean[e] = v
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "_coeffs", clean)

    @classmethod
    def _raw(cls, index: ModuliIndex, coeffs: dict[BasisElement, Fraction]) -> "DivisorClass":
        """Internal constructor trusting canonical keys and nonzero Fractions."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "index", index)
        object.__setattr__(obj, "_coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("DivisorClass is immutable")

    # -- access ------------------------------------------------------------

    def coeff(self, e: BasisElement) -> Fraction:
        return self._coeffs.get(e, Fraction(0))

    def __getitem__(self, e: BasisElement) -> Fraction:
        return self.coeff(e)

    def support(self) -> set[BasisElement]:
        return set(self._coeffs)

    def items(self) -> Iterator[tuple[BasisElement, Fraction]]:
        """Coefficients in the canonical (serialization) order."""
        return iter(sorted(self._coeffs.items()))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self):
        return len(self._coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, DivisorClass)
            and self.index == other.index
            and self._coeffs == other._coeffs
        )

    __hash__ = None  # mutable-dict backed; compare by value only

    def __repr__(self):
        terms = ", ".join(f"{e}: {v}" for e, v in self.items())
        return f"DivisorClass({self.index}, {{{terms}}})"

    # -- linear algebra ------------------------------------------------------

    def _require_same_index(self, other: "DivisorClass") -> None:
        if self.index != other.index:
            raise ValueError(f"index mismatch: {self.index} vs {other.index}")

    def __add__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        self._require_same_index(other)
        out = dict(self._coeffs)
        for e, v in other._coeffs.items():
            w = out.get(e)
            if w is None:
                out[e] = v
            else:
                w = w + v
                if w:
                    out[e] = w
                else:
                    del out[e]
        return DivisorClass._raw(self.index, out)

    def __sub__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return DivisorClass._raw(self.index, {e: -v for e, v in self._coeffs.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, float):
            return NotImplemented
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar == 0:
            return DivisorClass._raw(self.index, {})
        return DivisorClass._raw(self.index, {e: v * scalar for e, v in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, float) or not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self * (Fraction(1) / Fraction(scalar))

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "g": self.index.g,
            "n": self.index.n,
            "coeffs": {e.name(): str(v) for e, v in self.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "DivisorClass":
        index = ModuliIndex(data["g"], data["n"])
        coeffs: dict[BasisElement, Fraction] = {}
        for key, value in data["coeffs"].items():
            e = parse_element(key, index.g, index.n)
            v = Fraction(value)
            if v:
                coeffs[e] = coeffs.get(e, Fraction(0)) + v
        return cls(index, coeffs)

    @classmethod
    def from_json(cls, text: str) -> "DivisorClass":
        return cls.from_json_dict(json.loads(text))

    # -- representation change ------------------------------------------------

    def symmetric(self) -> "SymDivisorClass":
        return symmetrize(self)


_SEP_KEY_RE = re.compile(r"^delta_(\d+)_\{([0-9,]*)\}$")
_PSI_KEY_RE = re.compile(r"^psi_(\d+)$")


def parse_element(key: str, g: int, n: int) -> BasisElement:
    """Parse a serialization key back into a basis element."""
    if key == "lambda":
        return LAMBDA
    if key == "delta_irr":
        return DELTA_IRR
    m = _PSI_KEY_RE.match(key)
    if m:
        return psi(int(m.group(1)))
    m = _SEP_KEY_RE.match(key)
    if m:
        subset = frozenset(int(s) for s in m.group(2).split(",") if s)
        return delta_sep(int(m.group(1)), subset, g, n)
    raise ValueError(f"unrecognized basis element key {key!r}")


# ---------------------------------------------------------------------------
# named classes


def lambda_class(g: int, n: int) -> DivisorClass:
    return DivisorClass((g, n), {LAMBDA: 1})


def psi_class(j: int, g: int, n: int) -> DivisorClass:
    return DivisorClass((g, n), {psi(j): 1})


def psi_total(g: int, n: int) -> DivisorClass:
    return DivisorClass((g, n), {psi(j): 1 for j in range(1, n + 1)})


def delta_irr_class(g: int, n: int) -> DivisorClass:
    return DivisorClass((g, n), {DELTA_IRR: 1})


def delta_sep_class(i: int, S: Iterable[int], g: int, n: int) -> DivisorClass:
    return DivisorClass((g, n), {delta_sep(i, S, g, n): 1})


def delta_total(g: int, n: int) -> DivisorClass:
    """The total boundary class delta, every boundary generator once."""
    return DivisorClass((g, n), {e: 1 for e in boundary_elements(g, n)})


def canonical_class(g: int, n: int) -> DivisorClass:
    """The canonical class 13*lambda + psi - 2*delta - delta_{1,{}}.

    Valid for g >= 1 and g + n >= 4; every boundary class enters with
    coefficient -2 except delta_{1,{}} which gets the extra -1.
    """
    if g < 1 or g + n < 4:
        raise ValueError(f"canonical class formula needs g >= 1 and g + n >= 4, got ({g},{n})")
    coeffs: dict[BasisElement, Fraction] = {LAMBDA: Fraction(13)}
    for j in range(1, n + 1):
        coeffs[psi(j)] = Fraction(1)
    for e in boundary_elements(g, n):
        coeffs[e] = Fraction(-2)
    tail = delta_sep(1, (), g, n)
    coeffs[tail] += Fraction(-1)
    return DivisorClass((g, n), coeffs)


def kappa1(g: int, n: int) -> DivisorClass:
    """Mumford's relation: kappa_1 = 12*lambda + psi - delta."""
    coeffs: dict[BasisElement, Fraction] = {LAMBDA: Fraction(12)}
    for j in range(1, n + 1):
        coeffs[psi(j)] = Fraction(1)
    for e in boundary_elements(g, n):
        coeffs[e] = Fraction(-1)
    return DivisorClass((g, n), coeffs)


def kappa_basis_coefficients(c: DivisorClass) -> tuple[Fraction, DivisorClass]:
    """Rewrite a class over the basis with kappa_1 in place of lambda.

    Returns ``(a, r)`` with ``c == a*kappa_1 + r`` and ``r`` free of lambda.
    Since kappa_1 = 12*lambda + psi - delta, the kappa_1 coefficient is the
    lambda coefficient divided by 12.
    """
    g, n = c.index
    a = c.coeff(LAMBDA) / 12
    remainder = c - a * kappa1(g, n)
    if remainder.coeff(LAMBDA):
        raise ArithmeticError("lambda failed to cancel in kappa-basis rewrite")
    return a, remainder


def omega_class(j: int, g: int, n: int) -> DivisorClass:
    """omega_j = psi_j - sum of delta_{0,S} over S containing j (|S| >= 2).

    This is the pull-back of psi_1 along the map to Mbar_{g,1} remembering
    only the j-th point.
    """
    if not 1 <= j <= n:
        raise ValueError(f"marking {j} out of range 1..{n}")
    ModuliIndex(g, 1)  # the one-pointed target must be stable
    coeffs: dict[BasisElement, Fraction] = {psi(j): Fraction(1)}
    others = [m for m in range(1, n + 1) if m != j]
    for size in range(1, n):
        for rest in combinations(others, size):
            coeffs[delta_sep(0, frozenset(rest) | {j}, g, n)] = Fraction(-1)
    return DivisorClass((g, n), coeffs)


def omega_total(g: int, n: int) -> DivisorClass:
    """omega = psi - sum over k >= 2 of k * delta_{0,k}."""
    ModuliIndex(g, 1)
    coeffs: dict[BasisElement, Fraction] = {psi(j): Fraction(1) for j in range(1, n + 1)}
    for size in range(2, n + 1):
        for S in combinations(range(1, n + 1), size):
            coeffs[delta_sep(0, S, g, n)] = Fraction(-size)
    return DivisorClass((g, n), coeffs)


def hyperelliptic_class() -> DivisorClass:
    """The hyperelliptic locus on Mbar_3: 9*lambda - delta_irr - 3*delta_1."""
    return DivisorClass(
        (3, 0),
        {LAMBDA: 9, DELTA_IRR: -1, delta_sep(1, (), 3, 0): -3},
    )


def coarse_boundary_class(i: int, S: Iterable[int], g: int, n: int) -> DivisorClass:
    """The class of the coarse boundary divisor [Delta_{i,S}].

    Equals 2*delta_{1,{}} for the elliptic-tail divisor (its generic curve
    has an extra involution) and delta_{i,S} otherwise.
    """
    e = delta_sep(i, S, g, n)
    factor = 2 if (e.i, e.S) == (1, frozenset()) and g >= 2 else 1
    return DivisorClass((g, n), {e: factor})


def coarse_delta_irr(g: int, n: int) -> DivisorClass:
    """[Delta_irr] carries no stacky factor: it equals delta_irr."""
    return delta_irr_class(g, n)


# ---------------------------------------------------------------------------
# symmetric representation


class SymElement:
    """A key of the S_n-symmetric representation.

    ``lambda``, ``psi`` (the common coefficient of every psi_j),
    ``delta_irr``, or ``delta_{i,k}`` (the common coefficient of every
    delta_{i,S} with |S| = k; at i = g/2 the sizes k and n-k label the same
    classes and the representative keeps k <= n/2).
    """

    __slots__ = ("kind", "i", "k", "_hash", "_key")

    def __init__(self, kind: str, i: int = 0, k: int = 0):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "k", k)
        order = {"lambda": 0, "psi": 1, "irr": 2, "sep": 3}
        if kind not in order:
            raise ValueError(f"unknown symmetric key kind {kind!r}")
        key = (order[kind], i, k)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("SymElement is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, SymElement) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    @property
    def is_boundary(self) -> bool:
        return self.kind in ("irr", "sep")

    def name(self) -> str:
        if self.kind == "lambda":
            return "lambda"
        if self.kind == "psi":
            return "psi"
        if self.kind == "irr":
            return "delta_irr"
        return f"delta_{self.i}_{self.k}"

    def __repr__(self):
        return self.name()


SYM_LAMBDA = SymElement("lambda")
SYM_PSI = SymElement("psi")
SYM_DELTA_IRR = SymElement("irr")


@lru_cache(maxsize=None)
def _sym_sep(i: int, k: int) -> SymElement:
    return SymElement("sep", i=i, k=k)


def sym_delta(i: int, k: int, g: int, n: int) -> SymElement:
    """The symmetric boundary key delta_{i,k} in canonical form."""
    if not (0 <= i <= g):
        raise ValueError(f"separating genus {i} out of range for genus {g}")
    if not (0 <= k <= n):
        raise ValueError(f"subset size {k} out of range 0..{n}")
    if 2 * i > g or (2 * i == g and 2 * k > n):
        i, k = g - i, n - k
    if i == 0 and k < 2:
        raise ValueError(f"delta_{{0,k}} needs k >= 2, got k = {k}")
    if i == g and k > n - 2:
        raise ValueError(f"delta_{{g,k}} needs k <= n - 2, got k = {k}")
    return _sym_sep(i, k)


def sym_boundary_elements(g: int, n: int) -> list[SymElement]:
    """All symmetric boundary keys of Mbar_{g,n} in canonical order."""
    ModuliIndex(g, n)
    out: list[SymElement] = []
    if g >= 1:
        out.append(SYM_DELTA_IRR)
    for i in range(0, g // 2 + 1):
        lo = 2 if i == 0 else 0
        hi = n // 2 if 2 * i == g else n
        for k in range(lo, hi + 1):
            if i == g and k > n - 2:
                continue
            out.append(_sym_sep(i, k))
    return out


class SymDivisorClass:
    """An S_n-invariant divisor class stored by orbit instead of by subset.

    Coefficients are per basis element: the ``psi`` entry is the common
    coefficient of each psi_j and the ``delta_{i,k}`` entry the common
    coefficient of each delta_{i,S} with |S| = k, matching the aggregate
    notation psi = sum psi_j, delta_{i,k} = sum_{|S|=k} delta_{i,S}.
    """

    __slots__ = ("index", "_coeffs")

    def __init__(self, index, coeffs: Mapping[SymElement, object] | None = None):
        index = _index(index)
        clean: dict[SymElement, Fraction] = {}
        if coeffs:
            for e, v in coeffs.items():
                if not isinstance(e, SymElement):
                    raise TypeError(f"coefficient key {e!r} is not a SymElement")
                self._validate_key(e, index.g, index.n)
                v = _as_coefficient(v)
                if v:
                    clean[e] = v
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "_coeffs", clean)

    @staticmethod
    def _validate_key(e: SymElement, g: int, n: int) -> None:
        if e.kind == "psi" and n < 1:
            raise ValueError("psi coefficient requires n >= 1")
        if e.kind == "irr" and g < 1:
            raise ValueError("delta_irr does not exist in genus 0")
        if e.kind == "sep" and sym_delta(e.i, e.k, g, n) != e:
            raise ValueError(f"{e} is not in canonical form on Mbar({g},{n})")

    @classmethod
    def _raw(cls, index: ModuliIndex, coeffs: dict[SymElement, Fraction]) -> "SymDivisorClass":
        obj = object.__new__(cls)
        object.__setattr__(obj, "index", index)
        object.__setattr__(obj, "_coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("SymDivisorClass is immutable")

    def coeff(self, e: SymElement) -> Fraction:
        return self._coeffs.get(e, Fraction(0))

    def __getitem__(self, e: SymElement) -> Fraction:
        return self.coeff(e)

    def support(self) -> set[SymElement]:
        return set(self._coeffs)

    def items(self) -> Iterator[tuple[SymElement, Fraction]]:
        return iter(sorted(self._coeffs.items()))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        return (
            isinstance(other, SymDivisorClass)
            and self.index == other.index
            and self._coeffs == other._coeffs
        )

    __hash__ = None

    def __repr__(self):
        terms = ", ".join(f"{e}: {v}" for e, v in self.items())
        return f"SymDivisorClass({self.index}, {{{terms}}})"

    def _require_same_index(self, other: "SymDivisorClass") -> None:
        if self.index != other.index:
            raise ValueError(f"index mismatch: {self.index} vs {other.index}")

    def __add__(self, other):
        if not isinstance(other, SymDivisorClass):
            return NotImplemented
        self._require_same_index(other)
        out = dict(self._coeffs)
        for e, v in other._coeffs.items():
            w = out.get(e)
            if w is None:
                out[e] = v
            else:
                w = w + v
                if w:
                    out[e] = w
                else:
                    del out[e]
        return SymDivisorClass._raw(self.index, out)

    def __sub__(self, other):
        if not isinstance(other, SymDivisorClass):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return SymDivisorClass._raw(self.index, {e: -v for e, v in self._coeffs.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, float) or not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar == 0:
            return SymDivisorClass._raw(self.index, {})
        return SymDivisorClass._raw(self.index, {e: v * scalar for e, v in self._coeffs.items()})

    __rmul__ = __mul__

    def to_json_dict(self) -> dict:
        return {
            "g": self.index.g,
            "n": self.index.n,
            "symmetric": True,
            "coeffs": {e.name(): str(v) for e, v in self.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    def expand(self) -> DivisorClass:
        return expand(self)


def symmetrize(c: DivisorClass) -> SymDivisorClass:
    """Compress an S_n-invariant class, rejecting non-symmetric input.

    All psi_j coefficients must agree, and all delta_{i,S} coefficients with
    the same orbit (i, |S|) must agree; the offending pair is reported
    otherwise.
    """
    g, n = c.index
    out: dict[SymElement, Fraction] = {}
    lam = c.coeff(LAMBDA)
    if lam:
        out[SYM_LAMBDA] = lam
    if n >= 1:
        first = psi(1)
        value = c.coeff(first)
        for j in range(2, n + 1):
            if c.coeff(psi(j)) != value:
                raise ValueError(
                    f"not S_n-symmetric: psi_1 has coefficient {value} "
                    f"but psi_{j} has {c.coeff(psi(j))}"
                )
        if value:
            out[SYM_PSI] = value
    irr = c.coeff(DELTA_IRR)
    if irr:
        out[SYM_DELTA_IRR] = irr
    seen: dict[SymElement, tuple[BasisElement, Fraction]] = {}
    for e in boundary_elements(g, n):
        if e.kind != BasisElement.SEP_KIND:
            continue
        size = len(e.S)
        key = sym_delta(e.i, size, g, n)
        value = c.coeff(e)
        if key in seen:
            witness, expected = seen[key]
            if value != expected:
                raise ValueError(
                    f"not S_n-symmetric: {witness} has coefficient {expected} "
                    f"but {e} has {value}"
                )
        else:
            seen[key] = (e, value)
            if value:
                out[key] = value
    return SymDivisorClass((g, n), out)


def expand(s: SymDivisorClass) -> DivisorClass:
    """Expand a symmetric class to the full basis (inverse of symmetrize)."""
    g, n = s.index
    coeffs: dict[BasisElement, Fraction] = {}
    lam = s.coeff(SYM_LAMBDA)
    if lam:
        coeffs[LAMBDA] = lam
    value = s.coeff(SYM_PSI)
    if value:
        for j in range(1, n + 1):
            coeffs[psi(j)] = value
    irr = s.coeff(SYM_DELTA_IRR)
    if irr:
        coeffs[DELTA_IRR] = irr
    for e in boundary_elements(g, n):
        if e.kind != BasisElement.SEP_KIND:
            continue
        value = s.coeff(sym_delta(e.i, len(e.S), g, n))
        if value:
            coeffs[e] = value
    return DivisorClass((g, n), coeffs)


def _sym_boundary_constant(g: int, n: int, value: Fraction) -> dict[SymElement, Fraction]:
    return {e: value for e in sym_boundary_elements(g, n)}


def delta_total_sym(g: int, n: int) -> SymDivisorClass:
    return SymDivisorClass((g, n), _sym_boundary_constant(g, n, Fraction(1)))


def canonical_class_sym(g: int, n: int) -> SymDivisorClass:
    """Symmetric form of the canonical class, for large n."""
    if g < 1 or g + n < 4:
        raise ValueError(f"canonical class formula needs g >= 1 and g + n >= 4, got ({g},{n})")
    coeffs = _sym_boundary_constant(g, n, Fraction(-2))
    coeffs[SYM_LAMBDA] = Fraction(13)
    if n >= 1:
        coeffs[SYM_PSI] = Fraction(1)
    tail = sym_delta(1, 0, g, n)
    coeffs[tail] += Fraction(-1)
    return SymDivisorClass((g, n), coeffs)


def kappa1_sym(g: int, n: int) -> SymDivisorClass:
    coeffs = _sym_boundary_constant(g, n, Fraction(-1))
    coeffs[SYM_LAMBDA] = Fraction(12)
    if n >= 1:
        coeffs[SYM_PSI] = Fraction(1)
    return SymDivisorClass((g, n), coeffs)


def omega_total_sym(g: int, n: int) -> SymDivisorClass:
    """Symmetric form of omega = psi - sum over k >= 2 of k * delta_{0,k}."""
    ModuliIndex(g, 1)
    coeffs: dict[SymElement, Fraction] = {SYM_PSI: Fraction(1)}
    for k in range(2, n + 1):
        coeffs[sym_delta(0, k, g, n)] = Fraction(-k)
    return SymDivisorClass((g, n), coeffs)
