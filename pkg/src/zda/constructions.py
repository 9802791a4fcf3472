"""The four ring constructions and their zero-divisor bookkeeping.

Everything here produces honest pair carriers: an amalgamation is the set of
pairs (r, f(r)+j) with componentwise operations, so every element keeps its
(r, j) witness for readable reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    CrossRingError,
    InternalConsistencyError,
    InvalidParameterError,
    ResourceBoundError,
)
from .ideals import Ideal, RingHom, identity_hom, make_hom
from .rings import (
    Element,
    FiniteRing,
    _chunk_rows,
    _chunks,
    _table_dtype,
    carrier_limit,
    prime_spectrum,
    zero_divisors_mask,
)


@dataclass(frozen=True, eq=False)
class AmalgamSpec:
    """The data (R, S, f, J) defining an amalgamated construction."""

    base: FiniteRing
    host: FiniteRing
    hom: RingHom
    j: Ideal

    def __post_init__(self):
        if self.hom.source is not self.base or self.hom.target is not self.host:
            raise InvalidParameterError("hom must map the base ring into the host ring")
        if self.j.ring is not self.host:
            raise CrossRingError("J must be an ideal of the host ring")
        if self.j.is_zero:
            raise InvalidParameterError("J must be a nonzero ideal")
        if not self.j.is_proper:
            raise InvalidParameterError("J must be a proper ideal")

    @property
    def j_star_size(self) -> int:
        return self.j.size - 1

    def describe(self) -> str:
        jn = self.j
        jdesc = "{" + ",".join(jn.names()) + "}" if jn.size <= 8 else f"J(#{jn.size})"
        if self.host is self.base and self.hom.label == "identity":
            return f"{self.base.label} bowtie {jdesc}"
        return f"{self.base.label} bowtie^{self.hom.label} {jdesc} of {self.host.label}"


class AmalgamRing:
    """The pair ring {(r, f(r)+j)} with projections back to its witnesses."""

    def __init__(self, spec: AmalgamSpec, max_size: int | None = None):
        R, S, f, J = spec.base, spec.host, spec.hom, spec.j
        p = R.size
        js = np.array(sorted(J.members), dtype=np.int64)
        q = len(js)
        n = p * q
        bound = carrier_limit() if max_size is None else max_size
        if n > bound:
            raise ResourceBoundError(
                f"amalgam carrier would have {n} elements, exceeding the bound {bound}"
            )
        r_of = np.repeat(np.arange(p, dtype=np.int64), q)
        j_of = np.tile(js, p)
        s_of = S.add[f.map[r_of], j_of].astype(np.int64)

        pair_pos = np.full((p, S.size), -1, dtype=np.int64)
        pair_pos[r_of, s_of] = np.arange(n)
        if (pair_pos >= 0).sum() != n:
            raise InternalConsistencyError(
                "pair carrier collision: f(r)+j failed to determine j uniquely"
            )

        names = [f"({R.names[r]},{S.names[s]})" for r, s in zip(r_of, s_of)]
        add = np.empty((n, n), dtype=_table_dtype(n))
        mul = np.empty((n, n), dtype=_table_dtype(n))
        for sl in _chunks(n, _chunk_rows(n)):
            ra, sa = r_of[sl][:, None], s_of[sl][:, None]
            blk = pair_pos[R.add[ra, r_of[None, :]].astype(np.int64),
                           S.add[sa, s_of[None, :]].astype(np.int64)]
            if blk.min() < 0:
                raise InternalConsistencyError("amalgam carrier not closed under +")
            add[sl] = blk
            blk = pair_pos[R.mul[ra, r_of[None, :]].astype(np.int64),
                           S.mul[sa, s_of[None, :]].astype(np.int64)]
            if blk.min() < 0:
                raise InternalConsistencyError("amalgam carrier not closed under *")
            mul[sl] = blk

        self.spec = spec
        self.r_of = r_of
        self.s_of = s_of
        self.j_of = j_of
        self._pair_pos = pair_pos
        self.ring = FiniteRing(
            label=spec.describe(),
            names=names,
            add=add,
            mul=mul,
            zero=int(pair_pos[R.zero, S.zero]),
            one=int(pair_pos[R.one, S.one]),
            kind="amalgam",
            params=(spec,),
            max_size=max_size,
        )

    @property
    def size(self) -> int:
        return self.ring.size

    def pair(self, k: int) -> tuple[Element, Element]:
        """Element k as its (r, f(r)+j) coordinates."""
        return (
            Element(self.spec.base, int(self.r_of[k])),
            Element(self.spec.host, int(self.s_of[k])),
        )

    def witness(self, k: int) -> tuple[Element, Element]:
        """Element k as its unique (r, j) witness."""
        return (
            Element(self.spec.base, int(self.r_of[k])),
            Element(self.spec.host, int(self.j_of[k])),
        )

    def index_of(self, r: Element, s: Element) -> int:
        if r.ring is not self.spec.base or s.ring is not self.spec.host:
            raise CrossRingError("pair coordinates belong to the wrong rings")
        k = int(self._pair_pos[r.index, s.index])
        if k < 0:
            raise InvalidParameterError(f"({r.name},{s.name}) is not in the pair carrier")
        return k

    def __repr__(self) -> str:
        return f"AmalgamRing({self.ring.label}, n={self.size})"


def amalgamation(spec: AmalgamSpec, max_size: int | None = None) -> AmalgamRing:
    return AmalgamRing(spec, max_size=max_size)


def duplication(ring: FiniteRing, ideal: Ideal, max_size: int | None = None) -> AmalgamRing:
    """Amalgamation of a ring with itself along one of its ideals (f = id)."""
    if ideal.ring is not ring:
        raise CrossRingError("ideal must belong to the duplicated ring")
    return AmalgamRing(
        AmalgamSpec(ring, ring, identity_hom(ring), ideal), max_size=max_size
    )


# ---------------------------------------------------------------------------
# modules and trivial extensions


class ModuleData:
    """A finite module: abelian carrier plus a verified bilinear ring action."""

    def __init__(
        self,
        base: FiniteRing,
        names: Sequence[str],
        add: np.ndarray,
        action: np.ndarray,
        zero: int,
        label: str = "M",
    ):
        m = len(names)
        self.base = base
        self.names = tuple(names)
        self.add = np.ascontiguousarray(add, dtype=np.int64)
        self.action = np.ascontiguousarray(action, dtype=np.int64)
        self.zero = int(zero)
        self.label = label
        if self.add.shape != (m, m) or self.action.shape != (base.size, m):
            raise InvalidParameterError("module tables have wrong shape")
        self._check()

    @property
    def size(self) -> int:
        return len(self.names)

    def _check(self) -> None:
        m = self.size
        nr = self.base.size
        idx = np.arange(m)
        madd, act = self.add, self.action
        if not np.array_equal(madd[self.zero], idx):
            raise InvalidParameterError("module zero is not an additive identity")
        if not np.array_equal(madd, madd.T):
            raise InvalidParameterError("module addition is not commutative")
        if not (madd == self.zero).any(axis=1).all():
            raise InvalidParameterError("module addition lacks inverses")
        if not np.array_equal(madd[madd], madd[:, madd]):
            raise InvalidParameterError("module addition is not associative")
        if not np.array_equal(act[self.base.one], idx):
            raise InvalidParameterError("1 does not act as identity on the module")
        radd = self.base.add.astype(np.int64)
        rmul = self.base.mul.astype(np.int64)
        rcol = np.arange(nr)[:, None]
        for x in range(m):
            rx = act[:, x]
            if not np.array_equal(act[radd, x], madd[rx[:, None], rx[None, :]]):
                raise InvalidParameterError(
                    f"module action is not additive in the ring; witness m={self.names[x]}"
                )
            if not np.array_equal(act[rmul, x], act[rcol, rx[None, :]]):
                raise InvalidParameterError(
                    f"module action is not associative; witness m={self.names[x]}"
                )
        # r(m+m') = rm + rm'
        for r in range(nr):
            rx = act[r]
            if not np.array_equal(rx[madd], madd[rx[:, None], rx[None, :]]):
                raise InvalidParameterError(
                    f"module action is not additive in the module; witness r={self.base.names[r]}"
                )

    def __repr__(self) -> str:
        return f"ModuleData({self.label} over {self.base.label}, m={self.size})"


def cyclic_module(
    base: FiniteRing, m: int, factor: int | None = None, label: str | None = None
) -> ModuleData:
    """The integers mod m as a module, scaled by an integer-valued coordinate.

    With ``factor=None`` the base must be Z_n with m | n and acts by
    multiplication mod m.  For a direct-product base, ``factor`` (0-based)
    selects the coordinate that acts; the other coordinates are ignored.
    """
    if m < 1:
        raise InvalidParameterError("module modulus must be positive")
    values = _integer_values(base, factor)
    if values is None:
        raise InvalidParameterError(
            f"no canonical integer action of {base.label} on Z{m}; "
            "pick a Z_n base or a product factor"
        )
    # the action r*x = value(r)*x mod m is well defined only when m divides
    # the modulus underlying the chosen coordinate
    modulus = _coordinate_modulus(base, factor)
    if modulus is None or modulus % m != 0:
        raise InvalidParameterError(
            f"Z{m} is not a module over {base.label}: {m} does not divide {modulus}"
        )
    idx = np.arange(m, dtype=np.int64)
    add = (idx[:, None] + idx[None, :]) % m
    action = (values[:, None] * idx[None, :]) % m
    return ModuleData(
        base,
        names=[str(i) for i in range(m)],
        add=add,
        action=action,
        zero=0,
        label=label or f"Z{m}",
    )


def _integer_values(base: FiniteRing, factor: int | None) -> np.ndarray | None:
    if factor is None:
        if base.kind != "zn":
            return None
        return np.arange(base.size, dtype=np.int64)
    if base.kind != "product":
        return None
    a, b = base.params
    nb = b.size
    if factor == 0:
        sub = _integer_values(a, None)
        return None if sub is None else sub[np.arange(base.size) // nb]
    if factor == 1:
        sub = _integer_values(b, None)
        return None if sub is None else sub[np.arange(base.size) % nb]
    return None


def _coordinate_modulus(base: FiniteRing, factor: int | None) -> int | None:
    if factor is None:
        return base.params[0] if base.kind == "zn" else None
    if base.kind != "product":
        return None
    sub = base.params[factor] if factor in (0, 1) else None
    return _coordinate_modulus(sub, None) if sub is not None else None


class Idealization:
    """R x M with multiplication (r,m)(r',m') = (rr', rm' + r'm).

    Also exposes the equivalent amalgamated description (host = this ring,
    J = 0 x M, embedding r -> (r,0)) so idealizations flow through the same
    classifier as every other construction.
    """

    def __init__(self, base: FiniteRing, module: ModuleData, max_size: int | None = None):
        if module.base is not base:
            raise CrossRingError("module is defined over a different ring")
        p, m = base.size, module.size
        n = p * m
        ri = np.arange(n, dtype=np.int64) // m
        mi = np.arange(n, dtype=np.int64) % m
        names = [f"({base.names[r]},{module.names[x]})" for r, x in zip(ri, mi)]
        add = np.empty((n, n), dtype=_table_dtype(n))
        mul = np.empty((n, n), dtype=_table_dtype(n))
        radd = base.add.astype(np.int64)
        rmul = base.mul.astype(np.int64)
        for sl in _chunks(n, _chunk_rows(n)):
            ra, ma = ri[sl][:, None], mi[sl][:, None]
            rb, mb = ri[None, :], mi[None, :]
            add[sl] = radd[ra, rb] * m + module.add[ma, mb]
            cross = module.add[module.action[ra, mb], module.action[rb, ma]]
            mul[sl] = rmul[ra, rb] * m + cross
        self.base = base
        self.module = module
        self.ring = FiniteRing(
            label=f"{base.label} ltimes {module.label}",
            names=names,
            add=add,
            mul=mul,
            zero=base.zero * m + module.zero,
            one=base.one * m + module.zero,
            kind="idealization",
            params=(base, module),
            max_size=max_size,
        )
        j_members = frozenset(int(base.zero * m + x) for x in range(m))
        embed = np.arange(p, dtype=np.int64) * m + module.zero
        self.amalgam_spec = AmalgamSpec(
            base,
            self.ring,
            make_hom(base, self.ring, embed, label="embed"),
            Ideal(self.ring, j_members),
        )

    def as_amalgam(self, max_size: int | None = None) -> AmalgamRing:
        return AmalgamRing(self.amalgam_spec, max_size=max_size)

    def __repr__(self) -> str:
        return f"Idealization({self.ring.label}, n={self.ring.size})"


def idealization(base: FiniteRing, module: ModuleData, max_size: int | None = None) -> Idealization:
    return Idealization(base, module, max_size=max_size)


@dataclass(frozen=True, eq=False)
class TrivialExtSpec:
    """Base ring, graded modules M1..Mn, and the bilinear level products.

    ``products`` maps 1-based index pairs (i, j) with i+j <= n to tables of
    shape (|Mi|, |Mj|) valued in M_{i+j}; omitted pairs multiply to zero.
    Symmetry is enforced, associativity checked on all applicable triples.
    """

    base: FiniteRing
    modules: tuple[ModuleData, ...]
    products: dict[tuple[int, int], np.ndarray]

    def __post_init__(self):
        n = len(self.modules)
        for mod in self.modules:
            if mod.base is not self.base:
                raise CrossRingError("all modules must share the base ring")
        for (i, j), tab in self.products.items():
            if not (1 <= i <= n and 1 <= j <= n and i + j <= n):
                raise InvalidParameterError(
                    f"product ({i},{j}) lands outside the grading (n={n})"
                )
            expected = (self.modules[i - 1].size, self.modules[j - 1].size)
            if np.asarray(tab).shape != expected:
                raise InvalidParameterError(f"product table ({i},{j}) has wrong shape")

    def product_table(self, i: int, j: int) -> np.ndarray:
        """The (i,j) level product, symmetrized, with zero as default."""
        tab = self.products.get((i, j))
        if tab is not None:
            return np.asarray(tab, dtype=np.int64)
        tab = self.products.get((j, i))
        if tab is not None:
            return np.asarray(tab, dtype=np.int64).T
        tgt = self.modules[i + j - 1]
        return np.full((self.modules[i - 1].size, self.modules[j - 1].size), tgt.zero, dtype=np.int64)


class TrivialExtension:
    """The graded ring on R + M1 + ... + Mn with convolution multiplication."""

    def __init__(self, spec: TrivialExtSpec, max_size: int | None = None):
        _check_trivial_ext(spec)
        base, mods = spec.base, spec.modules
        n_mods = len(mods)
        sizes = [base.size] + [mod.size for mod in mods]
        n = 1
        for s in sizes:
            n *= s
        digits = np.empty((n, n_mods + 1), dtype=np.int64)
        rem = np.arange(n, dtype=np.int64)
        for pos in range(n_mods, -1, -1):
            digits[:, pos] = rem % sizes[pos]
            rem //= sizes[pos]

        names = []
        for row in digits:
            parts = [base.names[row[0]]] + [
                mods[i].names[row[i + 1]] for i in range(n_mods)
            ]
            names.append("(" + ",".join(parts) + ")")

        level_tab = {
            (i, j): spec.product_table(i, j)
            for i in range(1, n_mods + 1)
            for j in range(1, n_mods + 1)
            if i + j <= n_mods
        }
        radd = base.add.astype(np.int64)
        rmul = base.mul.astype(np.int64)
        add = np.empty((n, n), dtype=_table_dtype(n))
        mul = np.empty((n, n), dtype=_table_dtype(n))
        weights = np.empty(n_mods + 1, dtype=np.int64)
        w = 1
        for pos in range(n_mods, -1, -1):
            weights[pos] = w
            w *= sizes[pos]
        for sl in _chunks(n, _chunk_rows(n)):
            rows = digits[sl]
            acc_add = radd[rows[:, 0][:, None], digits[:, 0][None, :]] * weights[0]
            for i in range(1, n_mods + 1):
                acc_add += mods[i - 1].add[rows[:, i][:, None], digits[:, i][None, :]] * weights[i]
            add[sl] = acc_add

            acc_mul = rmul[rows[:, 0][:, None], digits[:, 0][None, :]] * weights[0]
            for lvl in range(1, n_mods + 1):
                mod = mods[lvl - 1]
                comp = mod.action[rows[:, 0][:, None], digits[:, lvl][None, :]]
                comp = mod.add[comp, mod.action[digits[:, 0][None, :], rows[:, lvl][:, None]]]
                for i in range(1, lvl):
                    j = lvl - i
                    tab = level_tab[(i, j)]
                    comp = mod.add[comp, tab[rows[:, i][:, None], digits[:, j][None, :]]]
                acc_mul += comp * weights[lvl]
            mul[sl] = acc_mul

        zero = int(sum(w * z for w, z in zip(weights, [base.zero] + [m.zero for m in mods])))
        one = int(zero - weights[0] * base.zero + weights[0] * base.one)
        mod_names = ",".join(m.label for m in mods)
        self.spec = spec
        self.ring = FiniteRing(
            label=f"{base.label} ltimes_{n_mods} ({mod_names})",
            names=names,
            add=add,
            mul=mul,
            zero=zero,
            one=one,
            kind="trivial_ext",
            params=(spec,),
            max_size=max_size,
        )
        j_members = frozenset(
            int(k) for k in range(n) if digits[k, 0] == base.zero
        )
        embed = np.arange(base.size, dtype=np.int64) * weights[0] + (zero - weights[0] * base.zero)
        self.amalgam_spec = AmalgamSpec(
            base,
            self.ring,
            make_hom(base, self.ring, embed, label="embed"),
            Ideal(self.ring, j_members),
        )

    def as_amalgam(self, max_size: int | None = None) -> AmalgamRing:
        return AmalgamRing(self.amalgam_spec, max_size=max_size)

    def __repr__(self) -> str:
        return f"TrivialExtension({self.ring.label}, n={self.ring.size})"


def _check_trivial_ext(spec: TrivialExtSpec) -> None:
    """Symmetry, additivity, action-compatibility, and associativity of the
    level products; violations carry the witness triple."""
    mods = spec.modules
    n = len(mods)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i + j > n:
                continue
            tab = spec.product_table(i, j)
            tba = spec.product_table(j, i)
            if not np.array_equal(tab, tba.T):
                raise InvalidParameterError(
                    f"level product ({i},{j}) is not symmetric with ({j},{i})"
                )
            tgt = mods[i + j - 1]
            mi, mj = mods[i - 1], mods[j - 1]
            # additivity in the first slot (second follows by symmetry)
            for y in range(mj.size):
                lhs = tab[mi.add, y]
                rhs = tgt.add[tab[:, y][:, None], tab[:, y][None, :]]
                if not np.array_equal(lhs, rhs):
                    raise InvalidParameterError(
                        f"level product ({i},{j}) is not additive; witness column {y}"
                    )
            # r(m_i m_j) = (r m_i) m_j
            for r in range(spec.base.size):
                lhs = tgt.action[r][tab]
                rhs = tab[mi.action[r][:, None], np.arange(mj.size)[None, :]]
                if not np.array_equal(lhs, rhs):
                    raise InvalidParameterError(
                        f"level product ({i},{j}) ignores the ring action; witness r={r}"
                    )
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                if i + j + k > n:
                    continue
                tij = spec.product_table(i, j)
                t_ij_k = spec.product_table(i + j, k)
                tjk = spec.product_table(j, k)
                t_i_jk = spec.product_table(i, j + k)
                for x in range(mods[i - 1].size):
                    for y in range(mods[j - 1].size):
                        for z in range(mods[k - 1].size):
                            if t_ij_k[tij[x, y], z] != t_i_jk[x, tjk[y, z]]:
                                raise InvalidParameterError(
                                    f"level products are not associative at "
                                    f"indices ({i},{j},{k}), witness ({x},{y},{z})"
                                )


def n_trivial_extension(spec: TrivialExtSpec, max_size: int | None = None) -> TrivialExtension:
    return TrivialExtension(spec, max_size=max_size)


# ---------------------------------------------------------------------------
# zero-divisor bookkeeping on amalgams


def z1_mask(am: AmalgamRing) -> np.ndarray:
    """Pairs whose base coordinate is a zero-divisor of the base ring."""
    return zero_divisors_mask(am.spec.base)[am.r_of]


def z2_mask(am: AmalgamRing) -> np.ndarray:
    """Pairs whose host coordinate is annihilated by some nonzero element of J."""
    S = am.spec.host
    j_star = np.array(sorted(am.spec.j.members - {S.zero}), dtype=np.int64)
    hits = S.mul[np.ix_(j_star, am.s_of)].astype(np.int64) == S.zero
    return hits.any(axis=0)


def z1_set(am: AmalgamRing) -> frozenset[Element]:
    return frozenset(Element(am.ring, int(k)) for k in np.flatnonzero(z1_mask(am)))


def z2_set(am: AmalgamRing) -> frozenset[Element]:
    return frozenset(Element(am.ring, int(k)) for k in np.flatnonzero(z2_mask(am)))


def has_condition_star(am: AmalgamRing) -> bool:
    """Whether the amalgam's zero-divisors are exactly Z1 union Z2."""
    return bool(np.array_equal(zero_divisors_mask(am.ring), z1_mask(am) | z2_mask(am)))


def property_a(spec: AmalgamSpec) -> bool:
    """Any two zero-divisors of the base ring multiply to zero."""
    R = spec.base
    zd = np.flatnonzero(zero_divisors_mask(R))
    return bool((R.mul[np.ix_(zd, zd)].astype(np.int64) == R.zero).all())


def property_b(spec: AmalgamSpec) -> bool:
    """No nonzero element of J annihilates the image of a regular element."""
    R, S, f = spec.base, spec.host, spec.hom
    reg = np.flatnonzero(~zero_divisors_mask(R))
    j_star = np.array(sorted(spec.j.members - {S.zero}), dtype=np.int64)
    prods = S.mul[np.ix_(j_star, f.map[reg])].astype(np.int64)
    return bool((prods != S.zero).all())


def property_c(spec: AmalgamSpec) -> bool:
    """Every nonzero element of J annihilates the image of every nonzero
    zero-divisor of the base ring."""
    R, S, f = spec.base, spec.host, spec.hom
    zd = zero_divisors_mask(R).copy()
    zd[R.zero] = False
    zd_idx = np.flatnonzero(zd)
    j_star = np.array(sorted(spec.j.members - {S.zero}), dtype=np.int64)
    prods = S.mul[np.ix_(j_star, f.map[zd_idx])].astype(np.int64)
    return bool((prods == S.zero).all())


def property_d(spec: AmalgamSpec) -> bool:
    """J squares to zero."""
    S = spec.host
    idx = np.array(sorted(spec.j.members), dtype=np.int64)
    return bool((S.mul[np.ix_(idx, idx)].astype(np.int64) == S.zero).all())


def induced_primes(
    spec: AmalgamSpec, am: AmalgamRing | None = None
) -> tuple[list[Ideal], list[Ideal]]:
    """The two families of primes of the amalgam, checked against its spectrum.

    First list: one lifted prime per prime of the base ring (pairs whose base
    coordinate lies in it).  Second list: one prime per prime of the host not
    containing J (pairs whose host coordinate lies in it).  Together these
    must equal the directly computed spectrum of the pair ring.
    """
    if am is None:
        am = AmalgamRing(spec)
    lifted = []
    for p in prime_spectrum(spec.base).primes:
        in_p = np.zeros(spec.base.size, dtype=bool)
        in_p[list(p.members)] = True
        members = frozenset(int(k) for k in np.flatnonzero(in_p[am.r_of]))
        lifted.append(Ideal(am.ring, members, check=False))
    host_side = []
    for q in prime_spectrum(spec.host).primes:
        if spec.j.members <= q.members:
            continue
        in_q = np.zeros(spec.host.size, dtype=bool)
        in_q[list(q.members)] = True
        members = frozenset(int(k) for k in np.flatnonzero(in_q[am.s_of]))
        host_side.append(Ideal(am.ring, members, check=False))

    expected = {p.members for p in prime_spectrum(am.ring).primes}
    produced = {p.members for p in lifted} | {p.members for p in host_side}
    if produced != expected:
        raise InternalConsistencyError(
            f"{am.ring.label}: induced primes disagree with the computed spectrum "
            f"({len(produced)} vs {len(expected)})"
        )
    return lifted, host_side
