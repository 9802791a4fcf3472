"""Finite commutative rings with identity, stored as dense operation tables.

A ring is an ordered carrier of ``n`` element handles (indices ``0..n-1``)
together with total ``n x n`` addition and multiplication tables.  Everything
is immutable after construction, so rings and elements can be shared freely
across threads; derived invariants (units, nilpotents, spectrum, ...) are
memoized per ring.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CrossRingError,
    InternalConsistencyError,
    InvalidParameterError,
    ResourceBoundError,
)

DEFAULT_MAX_CARRIER = 4096

# exhaustive axiom checking up to this carrier size, seeded sampling above
AXIOM_EXHAUSTIVE_BOUND = 64
AXIOM_SAMPLE_TRIPLES = 60_000

_ring_serial = itertools.count()


def carrier_limit() -> int:
    """Size bound enforced by ring constructors (env ZDA_MAX_CARRIER overrides)."""
    raw = os.environ.get("ZDA_MAX_CARRIER")
    return int(raw) if raw else DEFAULT_MAX_CARRIER


def _table_dtype(n: int):
    return np.uint16 if n <= np.iinfo(np.uint16).max else np.int64


@dataclass(frozen=True, eq=False)
class Element:
    """A handle into a specific ring's carrier.

    Mixing elements of different rings in one operation raises CrossRingError;
    equality across rings is simply False.
    """

    ring: "FiniteRing"
    index: int

    @property
    def name(self) -> str:
        return self.ring.names[self.index]

    def _peer(self, other: "Element") -> int:
        if not isinstance(other, Element):
            raise CrossRingError(f"expected Element, got {type(other).__name__}")
        if other.ring is not self.ring:
            raise CrossRingError(
                f"elements of {self.ring.label!r} and {other.ring.label!r} cannot be combined"
            )
        return other.index

    def __add__(self, other: "Element") -> "Element":
        return Element(self.ring, int(self.ring.add[self.index, self._peer(other)]))

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.ring, int(self.ring.neg[self.index]))

    def __mul__(self, other: "Element") -> "Element":
        return Element(self.ring, int(self.ring.mul[self.index, self._peer(other)]))

    def __pow__(self, k: int) -> "Element":
        if k < 0:
            raise InvalidParameterError("negative powers are not defined in a ring")
        acc = self.ring.one_element
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and other.ring is self.ring
            and other.index == self.index
        )

    def __hash__(self) -> int:
        return hash((id(self.ring), self.index))

    def __repr__(self) -> str:
        return f"<{self.name} in {self.ring.label}>"


class FiniteRing:
    """Carrier + tables + display metadata.  Use the module constructors."""

    def __init__(
        self,
        label: str,
        names: Sequence[str],
        add: np.ndarray,
        mul: np.ndarray,
        zero: int,
        one: int,
        kind: str = "table",
        params: tuple = (),
        key: tuple | None = None,
        check: bool = True,
        max_size: int | None = None,
    ):
        n = len(names)
        bound = carrier_limit() if max_size is None else max_size
        if n > bound:
            raise ResourceBoundError(
                f"carrier of size {n} exceeds the bound {bound} "
                "(set ZDA_MAX_CARRIER or pass max_size to override)"
            )
        if n < 2 or zero == one:
            raise InvalidParameterError("ring must be nontrivial (zero != one)")
        dtype = _table_dtype(n)
        self.label = label
        self.names = tuple(names)
        self.add = np.ascontiguousarray(add, dtype=dtype)
        self.mul = np.ascontiguousarray(mul, dtype=dtype)
        self.zero = int(zero)
        self.one = int(one)
        self.kind = kind
        self.params = params
        self.key = key if key is not None else ("table", next(_ring_serial))
        self._cache: dict = {}
        if self.add.shape != (n, n) or self.mul.shape != (n, n):
            raise InvalidParameterError("operation tables must be n x n")
        self.add.setflags(write=False)
        self.mul.setflags(write=False)
        if check:
            _check_axioms(self)

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def neg(self) -> np.ndarray:
        """Additive-inverse lookup, derived from the addition table."""
        tab = self._cache.get("neg")
        if tab is None:
            tab = np.argmax(self.add == self.zero, axis=1)
            self._cache["neg"] = tab
        return tab

    @property
    def zero_element(self) -> Element:
        return Element(self, self.zero)

    @property
    def one_element(self) -> Element:
        return Element(self, self.one)

    def element(self, index: int) -> Element:
        if not 0 <= index < self.size:
            raise InvalidParameterError(f"index {index} outside carrier of {self.label}")
        return Element(self, index)

    def by_name(self, name: str) -> Element:
        try:
            return Element(self, self.names.index(name))
        except ValueError:
            raise InvalidParameterError(f"no element named {name!r} in {self.label}") from None

    def elements(self) -> tuple[Element, ...]:
        return tuple(Element(self, i) for i in range(self.size))

    def integer_image(self, k: int) -> Element:
        """The canonical image of the integer k, i.e. k copies of 1 summed."""
        images = self._cache.get("int_images")
        if images is None:
            images = [self.zero]
            cur = self.zero
            while True:
                cur = int(self.add[cur, self.one])
                if cur == self.zero:
                    break
                images.append(cur)
            self._cache["int_images"] = images
        return Element(self, images[k % len(images)])

    def __repr__(self) -> str:
        return f"FiniteRing({self.label}, n={self.size})"


def _check_axioms(ring: FiniteRing) -> None:
    """Commutative-ring axiom suite over the tables.

    All n^2 checks (identities, commutativity, inverses) run exhaustively;
    the n^3 triple checks (associativity, distributivity) run exhaustively up
    to AXIOM_EXHAUSTIVE_BOUND and on a fixed-seed sample above it.
    """
    n = ring.size
    a, m = ring.add, ring.mul
    idx = np.arange(n)
    if not np.array_equal(a[ring.zero], idx):
        raise InternalConsistencyError(f"{ring.label}: 0 is not an additive identity")
    if not np.array_equal(m[ring.one], idx):
        raise InternalConsistencyError(f"{ring.label}: 1 is not a multiplicative identity")
    if not np.array_equal(a, a.T):
        raise InternalConsistencyError(f"{ring.label}: addition is not commutative")
    if not np.array_equal(m, m.T):
        raise InternalConsistencyError(f"{ring.label}: multiplication is not commutative")
    if not (a == ring.zero).any(axis=1).all():
        raise InternalConsistencyError(f"{ring.label}: some element has no additive inverse")

    if n <= AXIOM_EXHAUSTIVE_BOUND:
        i = idx[:, None, None]
        j = idx[None, :, None]
        k = idx[None, None, :]
    else:
        rng = np.random.default_rng(0)
        i, j, k = rng.integers(0, n, size=(3, AXIOM_SAMPLE_TRIPLES))
    if not np.array_equal(a[a[i, j], k], a[i, a[j, k]]):
        raise InternalConsistencyError(f"{ring.label}: addition is not associative")
    if not np.array_equal(m[m[i, j], k], m[i, m[j, k]]):
        raise InternalConsistencyError(f"{ring.label}: multiplication is not associative")
    if not np.array_equal(m[i, a[j, k]], a[m[i, j], m[i, k]]):
        raise InternalConsistencyError(f"{ring.label}: distributivity fails")


# ---------------------------------------------------------------------------
# constructors


def make_zn(n: int, max_size: int | None = None) -> FiniteRing:
    """The ring of integers modulo n, with canonical names 0..n-1."""
    if n < 2:
        raise InvalidParameterError(f"modulus must be at least 2, got {n}")
    idx = np.arange(n)
    add = (idx[:, None] + idx[None, :]) % n
    mul = (idx[:, None] * idx[None, :]) % n
    return FiniteRing(
        label=f"Z{n}",
        names=[str(i) for i in range(n)],
        add=add,
        mul=mul,
        zero=0,
        one=1,
        kind="zn",
        params=(n,),
        key=("zn", n),
        max_size=max_size,
    )


def _chunks(n: int, size: int) -> Iterable[slice]:
    for start in range(0, n, size):
        yield slice(start, min(start + size, n))


def _chunk_rows(n: int) -> int:
    # keep per-chunk temporaries around a few MB
    return max(1, (1 << 20) // max(n, 1))


def direct_product(a: FiniteRing, b: FiniteRing, max_size: int | None = None) -> FiniteRing:
    """Cartesian product with componentwise operations; names are pairs."""
    na, nb = a.size, b.size
    n = na * nb
    ia = np.arange(n) // nb
    ib = np.arange(n) % nb
    names = [f"({a.names[x]},{b.names[y]})" for x, y in zip(ia, ib)]
    add = np.empty((n, n), dtype=_table_dtype(n))
    mul = np.empty((n, n), dtype=_table_dtype(n))
    for sl in _chunks(n, _chunk_rows(n)):
        ra, rb = ia[sl][:, None], ib[sl][:, None]
        ca, cb = ia[None, :], ib[None, :]
        add[sl] = a.add[ra, ca].astype(np.int64) * nb + b.add[rb, cb]
        mul[sl] = a.mul[ra, ca].astype(np.int64) * nb + b.mul[rb, cb]
    zero = a.zero * nb + b.zero
    one = a.one * nb + b.one
    return FiniteRing(
        label=f"{a.label}*{b.label}",
        names=names,
        add=add,
        mul=mul,
        zero=zero,
        one=one,
        kind="product",
        params=(a, b),
        key=("product", a.key, b.key),
        max_size=max_size,
    )


def _poly_name(base: FiniteRing, coeffs: Sequence[int], var: str) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == base.zero and not (k == 0 and not terms):
            continue
        cname = base.names[c]
        if k == 0:
            terms.append(cname)
            continue
        power = var if k == 1 else f"{var}^{k}"
        if c == base.one:
            terms.append(power)
        elif cname.isalnum():
            terms.append(f"{cname}{power}")
        else:
            terms.append(f"({cname}){power}")
    return "+".join(terms)


def poly_quotient(
    base: FiniteRing,
    modulus: Sequence[int | Element],
    var: str = "x",
    max_size: int | None = None,
) -> FiniteRing:
    """Residues modulo a monic polynomial over ``base``.

    ``modulus`` lists coefficients in ascending degree; entries are carrier
    indices of ``base`` (or Elements of it).  The leading coefficient must be
    1.  A degree-d modulus yields |base|**d residues of degree < d.
    """
    f = []
    for c in modulus:
        if isinstance(c, Element):
            if c.ring is not base:
                raise CrossRingError("modulus coefficients must belong to the base ring")
            f.append(c.index)
        else:
            f.append(int(c))
    if len(f) < 2:
        raise InvalidParameterError("modulus must have degree at least 1")
    if f[-1] != base.one:
        raise InvalidParameterError("modulus must be monic")
    d = len(f) - 1
    nb = base.size
    n = nb**d
    bound = carrier_limit() if max_size is None else max_size
    if n > bound:
        raise ResourceBoundError(
            f"quotient would have {n} elements, exceeding the bound {bound}"
        )

    powers = nb ** np.arange(d, dtype=np.int64)
    digits = (np.arange(n)[:, None] // powers[None, :]) % nb  # (n, d), ascending degree
    names = [_poly_name(base, row, var) for row in digits]
    neg_f = base.neg[np.asarray(f[:-1], dtype=np.int64)]  # top power rewrites to these

    addB = base.add.astype(np.int64)
    mulB = base.mul.astype(np.int64)
    add = np.empty((n, n), dtype=_table_dtype(n))
    mul = np.empty((n, n), dtype=_table_dtype(n))
    for sl in _chunks(n, _chunk_rows(n)):
        rows = digits[sl]  # (c, d)
        # addition: digitwise
        acc = np.zeros((rows.shape[0], n), dtype=np.int64)
        for k in range(d):
            acc += addB[rows[:, k][:, None], digits[:, k][None, :]] * powers[k]
        add[sl] = acc
        # multiplication: convolution then reduction by x^d = -(f mod x^d)
        res = [np.full((rows.shape[0], n), base.zero, dtype=np.int64) for _ in range(2 * d - 1)]
        for i in range(d):
            ri = rows[:, i][:, None]
            for j in range(d):
                prod = mulB[ri, digits[:, j][None, :]]
                res[i + j] = addB[res[i + j], prod]
        for t in range(2 * d - 2, d - 1, -1):
            top = res[t]
            for k in range(d):
                res[t - d + k] = addB[res[t - d + k], mulB[top, int(neg_f[k])]]
        acc = np.zeros((rows.shape[0], n), dtype=np.int64)
        for k in range(d):
            acc += res[k] * powers[k]
        mul[sl] = acc

    zero = int((np.full(d, base.zero, dtype=np.int64) * powers).sum())
    one_digits = np.full(d, base.zero, dtype=np.int64)
    one_digits[0] = base.one
    one = int((one_digits * powers).sum())
    fname = _poly_name(base, f, var)
    return FiniteRing(
        label=f"{base.label}[{var}]/({fname})",
        names=names,
        add=add,
        mul=mul,
        zero=zero,
        one=one,
        kind="polyquot",
        params=(base, tuple(f), var),
        key=("polyquot", base.key, tuple(f), var),
        max_size=max_size,
    )


# ---------------------------------------------------------------------------
# invariant scans (mask form for internal use, Element sets for the public API)


def _mask_cached(ring: FiniteRing, name: str, compute):
    mask = ring._cache.get(name)
    if mask is None:
        mask = compute()
        mask.setflags(write=False)
        ring._cache[name] = mask
    return mask


def units_mask(ring: FiniteRing) -> np.ndarray:
    return _mask_cached(ring, "units", lambda: (ring.mul == ring.one).any(axis=1))


def zero_divisors_mask(ring: FiniteRing) -> np.ndarray:
    """z such that z*w = 0 for some w != 0; contains 0 by convention."""

    def compute():
        hits = ring.mul == ring.zero
        hits = hits.copy()
        hits[:, ring.zero] = False
        return hits.any(axis=1)

    return _mask_cached(ring, "zd", compute)


def nilpotents_mask(ring: FiniteRing) -> np.ndarray:
    def compute():
        # x is nilpotent iff x^(2^t) = 0 for 2^t >= carrier size
        power = np.arange(ring.size)
        t = 0
        while (1 << t) < ring.size:
            power = ring.mul[power, power]
            t += 1
        return power == ring.zero

    return _mask_cached(ring, "nil", compute)


def idempotents_mask(ring: FiniteRing) -> np.ndarray:
    return _mask_cached(
        ring, "idem", lambda: ring.mul.diagonal() == np.arange(ring.size)
    )


def _mask_to_set(ring: FiniteRing, mask: np.ndarray) -> frozenset[Element]:
    return frozenset(Element(ring, int(i)) for i in np.flatnonzero(mask))


def units(ring: FiniteRing) -> frozenset[Element]:
    """All u with u*v = 1 for some v."""
    return _mask_to_set(ring, units_mask(ring))


def zero_divisors(ring: FiniteRing) -> frozenset[Element]:
    """All z annihilated by some nonzero element; includes 0."""
    return _mask_to_set(ring, zero_divisors_mask(ring))


def regular_elements(ring: FiniteRing) -> frozenset[Element]:
    """Complement of the zero-divisors; equals the units in a finite ring."""
    mask = ~zero_divisors_mask(ring)
    if not np.array_equal(mask, units_mask(ring)):
        raise InternalConsistencyError(
            f"{ring.label}: regular elements differ from units in a finite ring"
        )
    return _mask_to_set(ring, mask)


def nilpotents(ring: FiniteRing) -> frozenset[Element]:
    return _mask_to_set(ring, nilpotents_mask(ring))


def idempotents(ring: FiniteRing) -> frozenset[Element]:
    return _mask_to_set(ring, idempotents_mask(ring))


# ---------------------------------------------------------------------------
# prime spectrum via primitive idempotents


@dataclass(frozen=True)
class SpectrumResult:
    """Complete prime spectrum of a finite ring.

    Finite commutative rings are zero-dimensional: every prime ideal is both
    maximal and minimal, and there is one per primitive idempotent.
    """

    primes: tuple
    primitive_idempotents: tuple[Element, ...]
    local_factor_sizes: tuple[int, ...]


def _primitive_idempotents(ring: FiniteRing) -> list[int]:
    idem = [int(i) for i in np.flatnonzero(idempotents_mask(ring)) if int(i) != ring.zero]
    prim = []
    for e in idem:
        # e is an atom iff no other nonzero idempotent g satisfies g*e = g
        if all(g == e or int(ring.mul[g, e]) != g for g in idem):
            prim.append(e)
    return prim


def prime_spectrum(ring: FiniteRing) -> SpectrumResult:
    """All prime ideals, via the primitive-idempotent decomposition.

    For each primitive idempotent e the set {x : e*x is not a unit of the
    component ring e*R} is prime; a direct all-pairs primality test re-checks
    every returned ideal, so a disagreement can only mean a table bug.
    """
    cached = ring._cache.get("spectrum")
    if cached is not None:
        return cached
    from .ideals import Ideal  # late import; ideals.py builds on this module

    prim = _primitive_idempotents(ring)
    # orthogonality and completeness of the decomposition
    acc = ring.zero
    for e in prim:
        for g in prim:
            if e != g and int(ring.mul[e, g]) != ring.zero:
                raise InternalConsistencyError(
                    f"{ring.label}: primitive idempotents {e} and {g} are not orthogonal"
                )
        acc = int(ring.add[acc, e])
    if acc != ring.one:
        raise InternalConsistencyError(
            f"{ring.label}: primitive idempotents do not sum to 1"
        )

    primes = []
    sizes = []
    for e in prim:
        ex = ring.mul[e]  # e*x for each x
        reaches_e = (ring.mul[ex.astype(np.int64)] == e).any(axis=1)
        members = frozenset(int(i) for i in np.flatnonzero(~reaches_e))
        sizes.append(len(np.unique(ex)))
        _assert_prime_direct(ring, members)
        primes.append(Ideal(ring, members))

    order = np.argsort([min(p.members) for p in primes], kind="stable")
    result = SpectrumResult(
        primes=tuple(primes[i] for i in order),
        primitive_idempotents=tuple(Element(ring, prim[i]) for i in order),
        local_factor_sizes=tuple(sizes[i] for i in order),
    )
    total = 1
    for s in result.local_factor_sizes:
        total *= s
    if total != ring.size:
        raise InternalConsistencyError(
            f"{ring.label}: local factor sizes {result.local_factor_sizes} "
            f"do not multiply to {ring.size}"
        )
    ring._cache["spectrum"] = result
    return result


def _assert_prime_direct(ring: FiniteRing, members: frozenset[int]) -> None:
    in_p = np.zeros(ring.size, dtype=bool)
    in_p[list(members)] = True
    if in_p.all():
        raise InternalConsistencyError(f"{ring.label}: candidate prime is not proper")
    for sl in _chunks(ring.size, _chunk_rows(ring.size)):
        prod_in = in_p[ring.mul[sl].astype(np.int64)]
        either_in = in_p[sl][:, None] | in_p[None, :]
        if (prod_in & ~either_in).any():
            raise InternalConsistencyError(
                f"{ring.label}: idempotent decomposition produced a non-prime ideal"
            )


# ---------------------------------------------------------------------------
# ring-level predicates


def is_field(ring: FiniteRing) -> bool:
    mask = units_mask(ring)
    return bool(mask.sum() == ring.size - 1 and not mask[ring.zero])


def is_domain(ring: FiniteRing) -> bool:
    """zero_divisors = {0}; for finite rings this coincides with being a field."""
    result = bool(zero_divisors_mask(ring).sum() == 1)
    if result != is_field(ring):
        raise InternalConsistencyError(
            f"{ring.label}: finite domain/field dichotomy violated"
        )
    return result


def is_reduced(ring: FiniteRing) -> bool:
    return bool(nilpotents_mask(ring).sum() == 1)


def is_local(ring: FiniteRing) -> bool:
    return len(prime_spectrum(ring).primes) == 1


def is_boolean_four(ring: FiniteRing) -> bool:
    """True iff the ring has 4 elements, all idempotent.

    A finite commutative ring of order 4 in which every element is idempotent
    is the product of two 2-element fields, which is the only isomorphism
    test this package needs.
    """
    return ring.size == 4 and bool(idempotents_mask(ring).all())
