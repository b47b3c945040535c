"""Automorphisms given by generator images, and the search for (⋆) violations.

Automorphisms act on the right, as ``x -> x^alpha``; :func:`compose` applies
its first argument first.  Conjugation by ``x`` is ``g -> x^-1 g x``, which
sends ``a`` to ``a [a, x]``.
"""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import Batch, Elem, FamilyGroup
from .structure import SubgroupSet, closure, derived_subgroup, frattini

PRUNED_CAP = 2**12
BRUTE_CAP = 2**10


class EnumerationCapError(ValueError):
    pass


class InnerCheckDisagreement(RuntimeError):
    """The commutator criterion and the direct search disagree on inner-ness."""


@dataclass(frozen=True)
class GenMap:
    group: FamilyGroup
    image_a: Elem
    image_b: Elem

    def __post_init__(self) -> None:
        for x in (self.image_a, self.image_b):
            if not self.group.is_element(x):
                raise ValueError(f"{x} is not a canonical element of {self.group}")

    def as_dict(self) -> dict:
        return {"image_a": list(self.image_a), "image_b": list(self.image_b)}

    def __str__(self) -> str:
        return f"(a -> {self.image_a}, b -> {self.image_b})"


@dataclass(frozen=True, eq=False)
class Aut:
    map: GenMap
    table: np.ndarray = field(repr=False)

    @property
    def group(self) -> FamilyGroup:
        return self.map.group

    def __call__(self, g: Elem) -> Elem:
        return apply(self, g)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Aut):
            return NotImplemented
        return self.map == other.map

    def __hash__(self) -> int:
        return hash(self.map)

    def __repr__(self) -> str:
        return f"Aut{self.map}"


def _scalar(x: Elem) -> Batch:
    return tuple(np.int64(v) for v in x)


def induced_images(G: FamilyGroup, X: Elem | Batch, Y: Elem | Batch, at: Batch) -> Batch:
    """Evaluate ``a^i b^j c^k -> X^i Y^j [X,Y]^k`` at the elements ``at``.

    ``X`` and ``Y`` may themselves be batches broadcastable against ``at``.
    Whether this is a homomorphism is not checked here.
    """
    X = _scalar(X) if isinstance(X, Elem) else X
    Y = _scalar(Y) if isinstance(Y, Elem) else Y
    Z = G.commutator_batch(X, Y)
    i, j, k = at
    return G.mul_batch(G.mul_batch(G.pow_batch(X, i), G.pow_batch(Y, j)), G.pow_batch(Z, k))


def induced_table(gm: GenMap) -> np.ndarray:
    G = gm.group
    return G.index(induced_images(G, gm.image_a, gm.image_b, G.elements_batch))


def check(gm: GenMap) -> tuple[Aut | None, str | None]:
    """Validate a generator map, returning ``(aut, None)`` or ``(None, reason)``.

    Reasons: ``relation-violated: <relation>``, ``not-homomorphism``,
    ``not-surjective``.
    """
    G = gm.group
    X, Y = gm.image_a, gm.image_b
    for name, ok in G.relations(X, Y).items():
        if not ok:
            return None, f"relation-violated: {name}"
    table = induced_table(gm)
    # alpha(g s) = alpha(g) alpha(s) for s in {a, b} gives a homomorphism by
    # induction on word length.
    allg = G.elements_batch
    ei, ej, ek = allg
    images = (ei[table], ej[table], ek[table])
    for s, S in ((G.a, X), (G.b, Y)):
        lhs = table[G.index(G.mul_batch(allg, _scalar(s)))]
        rhs = G.index(G.mul_batch(images, _scalar(S)))
        if not np.array_equal(lhs, rhs):
            return None, "not-homomorphism"
    if closure([X, Y], G).order != G.order:
        return None, "not-surjective"
    table.flags.writeable = False
    return Aut(gm, table), None


def validate(gm: GenMap) -> Aut | None:
    return check(gm)[0]


def make_aut(G: FamilyGroup, image_a: Elem, image_b: Elem) -> Aut:
    """Validated automorphism from generator images; raises if invalid."""
    aut, reason = check(GenMap(G, Elem(*image_a), Elem(*image_b)))
    if aut is None:
        raise ValueError(f"({image_a}, {image_b}) is not an automorphism of {G}: {reason}")
    return aut


def identity_aut(G: FamilyGroup) -> Aut:
    return make_aut(G, G.a, G.b)


def apply(alpha: Aut, g: Elem) -> Elem:
    G = alpha.group
    return G.element_at(alpha.table[G.index(g)])


def compose(alpha: Aut, beta: Aut) -> Aut:
    """``g -> beta(alpha(g))``."""
    if alpha.group != beta.group:
        raise ValueError("automorphisms of different groups")
    G = alpha.group
    table = beta.table[alpha.table]
    table.flags.writeable = False
    gm = GenMap(G, apply(beta, alpha.map.image_a), apply(beta, alpha.map.image_b))
    return Aut(gm, table)


def aut_order(alpha: Aut) -> int:
    G = alpha.group
    a0, b0 = G.index(G.a), G.index(G.b)
    ia, ib = alpha.table[a0], alpha.table[b0]
    m = 1
    while (ia, ib) != (a0, b0):
        ia, ib = alpha.table[ia], alpha.table[ib]
        m += 1
        if m > G.order**2:
            raise RuntimeError("automorphism order did not terminate")
    return m


def fixes_pointwise(alpha: Aut, S: SubgroupSet) -> bool:
    return bool(np.array_equal(alpha.table[S.indices], S.indices))


def inner_from(x: Elem, G: FamilyGroup) -> Aut:
    """Conjugation ``g -> x^-1 g x``."""
    return make_aut(G, G.mul(G.a, G.commutator(G.a, x)), G.mul(G.b, G.commutator(G.b, x)))


def _conjugation_images(G: FamilyGroup) -> tuple[np.ndarray, np.ndarray]:
    allg = G.elements_batch
    img_a = G.mul_batch(_scalar(G.a), G.commutator_batch(_scalar(G.a), allg))
    img_b = G.mul_batch(_scalar(G.b), G.commutator_batch(_scalar(G.b), allg))
    return G.index(img_a), G.index(img_b)


@functools.lru_cache(maxsize=64)
def _conjugation_lookup(G: FamilyGroup) -> tuple[np.ndarray, np.ndarray]:
    ia, ib = _conjugation_images(G)
    for arr in (ia, ib):
        arr.flags.writeable = False
    return ia, ib


def is_inner_direct(alpha: Aut) -> Elem | None:
    """Least ``x`` (lexicographically) with ``inner_from(x) == alpha``, else None."""
    G = alpha.group
    ia, ib = _conjugation_lookup(G)
    hits = np.flatnonzero(
        (ia == G.index(alpha.map.image_a)) & (ib == G.index(alpha.map.image_b))
    )
    return G.element_at(hits[0]) if hits.size else None


def commutator_subgroup_with(alpha: Aut) -> SubgroupSet:
    """[G, alpha], generated by ``g^-1 g^alpha`` over all g."""
    G = alpha.group
    allg = G.elements_batch
    ei, ej, ek = allg
    t = alpha.table
    moved = G.mul_batch(G.inv_batch(allg), (ei[t], ej[t], ek[t]))
    return closure(moved, G)


def is_inner_criterion(alpha: Aut) -> bool:
    """Inner iff ``[G, alpha] <= G'`` (valid for the 2-generator class-2 groups here)."""
    return commutator_subgroup_with(alpha) <= derived_subgroup(alpha.group)


def is_inner(alpha: Aut) -> bool:
    """Direct search, cross-checked against the commutator criterion."""
    direct = is_inner_direct(alpha) is not None
    if direct != is_inner_criterion(alpha):
        raise InnerCheckDisagreement(
            f"{alpha} in {alpha.group}: direct={direct}, criterion={not direct}"
        )
    return direct


# -- enumeration ---------------------------------------------------------


def _square_roots(G: FamilyGroup, target: Elem) -> np.ndarray:
    sq = G.index(G.pow_batch(G.elements_batch, 2))
    return np.flatnonzero(sq == G.index(target))


def _pruned_chunk(G: FamilyGroup, xs: list[int], ys: list[int], involutions: bool) -> list[tuple[int, int]]:
    c = G.c
    a0, b0 = G.index(G.a), G.index(G.b)
    out = []
    for xi in xs:
        X = G.element_at(xi)
        for yi in ys:
            Y = G.element_at(yi)
            if G.commutator(X, Y) != c:
                continue
            aut = validate(GenMap(G, X, Y))
            if aut is None:
                continue
            if involutions:
                if (xi, yi) == (a0, b0):
                    continue
                if aut.table[xi] != a0 or aut.table[yi] != b0:
                    continue
            out.append((xi, yi))
    return out


def _check_cap(G: FamilyGroup, cap: int) -> None:
    if G.order > cap:
        raise EnumerationCapError(f"|{G}| = {G.order} exceeds enumeration cap {cap}")


def enumerate_phi_fixing(
    G: FamilyGroup,
    *,
    involutions: bool = True,
    jobs: int = 1,
    cap: int = PRUNED_CAP,
) -> list[Aut]:
    """Automorphisms fixing Φ(G) pointwise (only those of order 2 by default).

    Fixing Φ(G) = <a^2, b^2, c> pointwise forces ``X^2 = a^2``, ``Y^2 = b^2``
    and ``[X, Y] = c`` for the images X, Y of a, b, which bounds the search.
    """
    _check_cap(G, cap)
    xs = _square_roots(G, G.pow(G.a, 2)).tolist()
    ys = _square_roots(G, G.pow(G.b, 2)).tolist()
    if jobs > 1 and len(xs) > 1:
        chunks = [xs[w::jobs] for w in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_pruned_chunk, [G] * jobs, chunks, [ys] * jobs, [involutions] * jobs)
            pairs = [p for part in parts for p in part]
    else:
        pairs = _pruned_chunk(G, xs, ys, involutions)
    return _finish(G, pairs)


def enumerate_phi_fixing_involutions(
    G: FamilyGroup, *, mode: str = "pruned", jobs: int = 1, cap: int | None = None
) -> list[Aut]:
    if mode == "pruned":
        return enumerate_phi_fixing(G, jobs=jobs, cap=PRUNED_CAP if cap is None else cap)
    if mode == "brute":
        return enumerate_brute(G, cap=BRUTE_CAP if cap is None else cap)
    raise ValueError(f"unknown enumeration mode {mode!r}")


def enumerate_brute(G: FamilyGroup, *, cap: int = BRUTE_CAP) -> list[Aut]:
    """Reference enumeration over all |G|^2 generator-image pairs.

    Pairs are filtered by evaluating the induced map on every element of Φ(G)
    (no appeal to generators of Φ), then validated and tested for order 2.
    """
    _check_cap(G, cap)
    allg = G.elements_batch
    N = G.order
    xi = np.repeat(np.arange(N, dtype=np.int64), N)
    yi = np.tile(np.arange(N, dtype=np.int64), N)
    phi = frattini(G)
    ei, ej, ek = allg
    for p in phi.indices:
        X = (ei[xi], ej[xi], ek[xi])
        Y = (ei[yi], ej[yi], ek[yi])
        at = (ei[p], ej[p], ek[p])
        keep = G.index(induced_images(G, X, Y, at)) == p
        xi, yi = xi[keep], yi[keep]
    pairs = []
    for x, y in zip(xi.tolist(), yi.tolist()):
        aut = validate(GenMap(G, G.element_at(x), G.element_at(y)))
        if aut is not None and aut_order(aut) == 2 and fixes_pointwise(aut, phi):
            pairs.append((x, y))
    return _finish(G, pairs)


def _finish(G: FamilyGroup, pairs: list[tuple[int, int]]) -> list[Aut]:
    out = []
    for x, y in sorted(pairs):
        aut = validate(GenMap(G, G.element_at(x), G.element_at(y)))
        assert aut is not None
        out.append(aut)
    return out


# -- condition (⋆) -------------------------------------------------------


@dataclass(frozen=True)
class StarReport:
    group: FamilyGroup
    total: int
    inner_count: int
    noninner_witnesses: tuple[GenMap, ...]

    @property
    def star_holds(self) -> bool:
        return not self.noninner_witnesses

    @property
    def noninner_count(self) -> int:
        return len(self.noninner_witnesses)


def star_condition(
    G: FamilyGroup, *, mode: str = "pruned", jobs: int = 1, cap: int | None = None
) -> StarReport:
    """Does every order-2 automorphism fixing Φ(G) pointwise come from conjugation?"""
    auts = enumerate_phi_fixing_involutions(G, mode=mode, jobs=jobs, cap=cap)
    witnesses = tuple(alpha.map for alpha in auts if not is_inner(alpha))
    return StarReport(G, len(auts), len(auts) - len(witnesses), witnesses)
