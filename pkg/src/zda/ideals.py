"""Ideals of finite rings and exhaustively verified ring homomorphisms."""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CrossRingError,
    InternalConsistencyError,
    InvalidParameterError,
    NotAHomomorphismError,
    ResourceBoundError,
    UnresolvableNaturalHomError,
)
from .rings import Element, FiniteRing, nilpotents_mask, units_mask, zero_divisors_mask

ALL_IDEALS_BOUND = 512


def _member_indices(ring: FiniteRing, xs: Iterable[Element | int]) -> set[int]:
    out = set()
    for x in xs:
        if isinstance(x, Element):
            if x.ring is not ring:
                raise CrossRingError(
                    f"element of {x.ring.label!r} used with ring {ring.label!r}"
                )
            out.add(x.index)
        else:
            i = int(x)
            if not 0 <= i < ring.size:
                raise InvalidParameterError(f"index {i} outside carrier of {ring.label}")
            out.add(i)
    return out


def ideal_defect(ring: FiniteRing, members: frozenset[int]):
    """None if the subset is an ideal, else a (reason, witness) pair."""
    if ring.zero not in members:
        return ("missing-zero", ring.zero)
    idx = np.fromiter(members, dtype=np.int64)
    in_set = np.zeros(ring.size, dtype=bool)
    in_set[idx] = True
    sums = ring.add[np.ix_(idx, idx)].astype(np.int64)
    bad = ~in_set[sums]
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return ("not-additively-closed", (int(idx[i]), int(idx[j])))
    prods = ring.mul[:, idx].astype(np.int64)
    bad = ~in_set[prods]
    if bad.any():
        r, i = np.argwhere(bad)[0]
        return ("not-absorbing", (int(r), int(idx[i])))
    return None


def is_ideal_subset(ring: FiniteRing, members: Iterable[Element | int]) -> bool:
    return ideal_defect(ring, frozenset(_member_indices(ring, members))) is None


class Ideal:
    """A subset of a ring's carrier closed under + and ring multiplication."""

    __slots__ = ("ring", "members")

    def __init__(self, ring: FiniteRing, members: Iterable[Element | int], check: bool = True):
        self.ring = ring
        self.members = frozenset(_member_indices(ring, members))
        if check:
            defect = ideal_defect(ring, self.members)
            if defect is not None:
                raise InvalidParameterError(
                    f"subset is not an ideal of {ring.label}: {defect[0]} at {defect[1]}"
                )

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_zero(self) -> bool:
        return self.members == frozenset({self.ring.zero})

    @property
    def is_proper(self) -> bool:
        return len(self.members) < self.ring.size

    def elements(self) -> frozenset[Element]:
        return frozenset(Element(self.ring, i) for i in self.members)

    def names(self) -> tuple[str, ...]:
        return tuple(self.ring.names[i] for i in sorted(self.members))

    def __contains__(self, x) -> bool:
        if isinstance(x, Element):
            return x.ring is self.ring and x.index in self.members
        return int(x) in self.members

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Ideal)
            and other.ring is self.ring
            and other.members == self.members
        )

    def __hash__(self) -> int:
        return hash((id(self.ring), self.members))

    def __repr__(self) -> str:
        if self.size <= 8:
            body = "{" + ",".join(self.names()) + "}"
        else:
            body = f"<{self.size} elements>"
        return f"Ideal({body} of {self.ring.label})"


def ideal_generated(ring: FiniteRing, gens: Iterable[Element | int]) -> Ideal:
    """Smallest ideal containing ``gens``: multiples first, then additive closure."""
    mask = np.zeros(ring.size, dtype=bool)
    mask[ring.zero] = True
    for g in _member_indices(ring, gens):
        mask[ring.mul[:, g].astype(np.int64)] = True
    # additive closure; inverses come for free in a finite abelian group
    while True:
        idx = np.flatnonzero(mask)
        new = np.zeros_like(mask)
        new[ring.add[np.ix_(idx, idx)].astype(np.int64).ravel()] = True
        if not (new & ~mask).any():
            break
        mask |= new
    return Ideal(ring, frozenset(int(i) for i in np.flatnonzero(mask)))


def all_ideals(ring: FiniteRing, bound: int = ALL_IDEALS_BOUND) -> list[Ideal]:
    """Every distinct ideal, by closing one extra generator at a time.

    Each ideal is reachable from {0} by repeatedly adjoining a single element
    and re-closing, so this enumeration is exhaustive.  Intended for small
    sweep rings; refuses carriers above ``bound``.
    """
    if ring.size > bound:
        raise ResourceBoundError(
            f"all_ideals on carrier {ring.size} exceeds the bound {bound}"
        )
    zero_only = frozenset({ring.zero})
    seen = {zero_only}
    frontier = [zero_only]
    while frontier:
        base = frontier.pop()
        for x in range(ring.size):
            if x in base:
                continue
            grown = ideal_generated(ring, base | {x}).members
            if grown not in seen:
                seen.add(grown)
                frontier.append(grown)
    return sorted(
        (Ideal(ring, m, check=False) for m in seen),
        key=lambda i: (i.size, sorted(i.members)),
    )


def is_prime(ideal: Ideal) -> bool:
    """Proper, and ab in I forces a in I or b in I (all-pairs scan)."""
    if not ideal.is_proper:
        return False
    ring = ideal.ring
    in_p = np.zeros(ring.size, dtype=bool)
    in_p[list(ideal.members)] = True
    prod_in = in_p[ring.mul.astype(np.int64)]
    either = in_p[:, None] | in_p[None, :]
    return not (prod_in & ~either).any()


def is_regular_ideal(ideal: Ideal) -> bool:
    """Contains a regular element.  Proper ideals of finite rings never do."""
    result = any(units_mask(ideal.ring)[i] for i in ideal.members)
    if result and ideal.is_proper:
        raise InternalConsistencyError(
            f"{ideal.ring.label}: proper ideal contains a unit"
        )
    return result


def contained_in_nil(ideal: Ideal) -> bool:
    nil = nilpotents_mask(ideal.ring)
    return all(nil[i] for i in ideal.members)


def intersects_nil_trivially(ideal: Ideal) -> bool:
    nil = nilpotents_mask(ideal.ring)
    meet = {i for i in ideal.members if nil[i]}
    return meet == {ideal.ring.zero}


# ---------------------------------------------------------------------------
# homomorphisms


class RingHom:
    """A total map between carriers, verified to preserve 0, 1, + and *."""

    __slots__ = ("source", "target", "map", "label")

    def __init__(self, source: FiniteRing, target: FiniteRing, map: np.ndarray, label: str):
        self.source = source
        self.target = target
        self.map = map
        self.label = label

    def __call__(self, x: Element) -> Element:
        if x.ring is not self.source:
            raise CrossRingError(f"{self.label}: argument belongs to {x.ring.label}")
        return Element(self.target, int(self.map[x.index]))

    def __repr__(self) -> str:
        return f"RingHom({self.label}: {self.source.label} -> {self.target.label})"


def make_hom(
    source: FiniteRing,
    target: FiniteRing,
    mapping: Sequence[int] | Mapping[int, int] | Callable[[Element], Element] | np.ndarray,
    label: str = "f",
) -> RingHom:
    """Build a homomorphism, failing loudly with a witness if any axiom breaks."""
    n = source.size
    if callable(mapping):
        arr = np.array([mapping(Element(source, i)).index for i in range(n)], dtype=np.int64)
    elif isinstance(mapping, Mapping):
        if set(mapping) != set(range(n)):
            raise InvalidParameterError("mapping must cover the whole source carrier")
        arr = np.array([int(mapping[i]) for i in range(n)], dtype=np.int64)
    else:
        arr = np.asarray(mapping, dtype=np.int64)
    if arr.shape != (n,):
        raise InvalidParameterError("mapping must assign every source element")
    if arr.min() < 0 or arr.max() >= target.size:
        raise InvalidParameterError("mapping hits indices outside the target carrier")

    if arr[source.zero] != target.zero:
        raise NotAHomomorphismError(f"{label}(0) != 0", witness=(source.zero,))
    if arr[source.one] != target.one:
        raise NotAHomomorphismError(f"{label}(1) != 1", witness=(source.one,))
    lhs = target.add[arr[:, None], arr[None, :]].astype(np.int64)
    rhs = arr[source.add.astype(np.int64)]
    bad = lhs != rhs
    if bad.any():
        x, y = map(int, np.argwhere(bad)[0])
        raise NotAHomomorphismError(
            f"{label} does not preserve + at ({source.names[x]}, {source.names[y]})",
            witness=(x, y),
        )
    lhs = target.mul[arr[:, None], arr[None, :]].astype(np.int64)
    rhs = arr[source.mul.astype(np.int64)]
    bad = lhs != rhs
    if bad.any():
        x, y = map(int, np.argwhere(bad)[0])
        raise NotAHomomorphismError(
            f"{label} does not preserve * at ({source.names[x]}, {source.names[y]})",
            witness=(x, y),
        )
    arr.setflags(write=False)
    return RingHom(source, target, arr, label)


def identity_hom(ring: FiniteRing) -> RingHom:
    return RingHom(ring, ring, np.arange(ring.size), "identity")


def _natural_map(src: FiniteRing, tgt: FiniteRing) -> np.ndarray | None:
    """Index map for the canonical homomorphism, or None when undefined.

    Supported shapes: structural identity; Z_n -> Z_m reduction for m | n;
    componentwise maps into (and between) direct products; constant inclusion
    into polynomial quotients.  Anything else is deliberately unresolvable.
    """
    if src.key == tgt.key:
        return np.arange(src.size, dtype=np.int64)
    if src.kind == "zn" and tgt.kind == "zn":
        n, m = src.params[0], tgt.params[0]
        if n % m == 0:
            return np.arange(n, dtype=np.int64) % m
        return None
    if tgt.kind == "product":
        t1, t2 = tgt.params
        if src.kind == "product":
            s1, s2 = src.params
            g1 = _natural_map(s1, t1)
            g2 = _natural_map(s2, t2)
            if g1 is not None and g2 is not None:
                i1 = np.arange(src.size, dtype=np.int64) // s2.size
                i2 = np.arange(src.size, dtype=np.int64) % s2.size
                return g1[i1] * t2.size + g2[i2]
        f1 = _natural_map(src, t1)
        f2 = _natural_map(src, t2)
        if f1 is not None and f2 is not None:
            return f1 * t2.size + f2
        return None
    if tgt.kind == "polyquot":
        base = tgt.params[0]
        g = _natural_map(src, base)
        if g is not None:
            # constant polynomials occupy the first |base| indices
            return g
        return None
    return None


def natural_hom(source: FiniteRing, target: FiniteRing) -> RingHom:
    arr = _natural_map(source, target)
    if arr is None:
        raise UnresolvableNaturalHomError(
            f"no canonical homomorphism {source.label} -> {target.label} is defined"
        )
    return make_hom(source, target, arr, label="natural")


def preimage_ideal(hom: RingHom, ideal: Ideal) -> Ideal:
    """{x in source : f(x) in J}; the preimage of an ideal is always an ideal."""
    if ideal.ring is not hom.target:
        raise CrossRingError("ideal does not belong to the homomorphism's target")
    in_j = np.zeros(hom.target.size, dtype=bool)
    in_j[list(ideal.members)] = True
    members = frozenset(int(i) for i in np.flatnonzero(in_j[hom.map]))
    defect = ideal_defect(hom.source, members)
    if defect is not None:
        raise InternalConsistencyError(
            f"preimage of an ideal failed to be an ideal: {defect}"
        )
    return Ideal(hom.source, members, check=False)


def z_set_is_ideal(ring: FiniteRing) -> bool:
    """Whether the zero-divisors form an ideal (additive closure is the content)."""
    members = frozenset(int(i) for i in np.flatnonzero(zero_divisors_mask(ring)))
    return ideal_defect(ring, members) is None
