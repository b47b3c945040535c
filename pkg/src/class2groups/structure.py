"""Subgroups of a :class:`FamilyGroup` and the characteristic ones we need.

A subgroup is an explicit sorted array of element indices.  Groups here are
at most a few million elements, and automorphism checks need fast membership
anyway, so nothing cleverer is warranted.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .engine import Batch, Elem, FamilyGroup


class StructureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SubgroupSet:
    group: FamilyGroup
    indices: np.ndarray = field(repr=False)
    generators: tuple[Elem, ...] = ()

    @property
    def order(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> list[Elem]:
        return [self.group.element_at(i) for i in self.indices]

    @property
    def batch(self) -> Batch:
        i, j, k = self.group.elements_batch
        return i[self.indices], j[self.indices], k[self.indices]

    @functools.cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.indices] = True
        return m

    def __contains__(self, x: Elem) -> bool:
        return bool(self.mask[self.group.index(x)])

    def contains_batch(self, x: Batch) -> np.ndarray:
        return self.mask[self.group.index(x)]

    def __le__(self, other: SubgroupSet) -> bool:
        return bool(other.mask[self.indices].all())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubgroupSet):
            return NotImplemented
        return self.group == other.group and np.array_equal(self.indices, other.indices)

    def __hash__(self) -> int:
        return hash((self.group, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"SubgroupSet({self.group}, order={self.order})"


def _from_mask(G: FamilyGroup, mask: np.ndarray, gens: Iterable[Elem]) -> SubgroupSet:
    idx = np.flatnonzero(mask).astype(np.int64)
    idx.flags.writeable = False
    return SubgroupSet(G, idx, tuple(gens))


def closure(gens: Sequence[Elem] | Batch, G: FamilyGroup) -> SubgroupSet:
    """Smallest subgroup containing ``gens`` (a list of elements or a batch).

    Generators already inside the subgroup built so far are dropped, so the
    recorded generating set is irredundant in the order given.
    """
    if isinstance(gens, tuple) and len(gens) == 3 and isinstance(gens[0], np.ndarray):
        gens = [G.element_at(x) for x in np.unique(G.index(gens))]
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    kept: list[Elem] = []
    ei, ej, ek = G.elements_batch
    for g in gens:
        g = Elem(*map(int, g))
        if mask[G.index(g)]:
            continue
        kept.append(g)
        frontier = np.flatnonzero(mask)
        while frontier.size:
            cur = (ei[frontier], ej[frontier], ek[frontier])
            found = [G.index(G.mul_batch(cur, tuple(np.int64(v) for v in h))) for h in kept]
            cand = np.unique(np.concatenate(found))
            frontier = cand[~mask[cand]]
            mask[frontier] = True
    return _from_mask(G, mask, kept)


def whole_group(G: FamilyGroup) -> SubgroupSet:
    return _whole(G)


@functools.lru_cache(maxsize=128)
def _whole(G: FamilyGroup) -> SubgroupSet:
    return _from_mask(G, np.ones(G.order, dtype=bool), (G.a, G.b))


def trivial_subgroup(G: FamilyGroup) -> SubgroupSet:
    return closure([], G)


def _commutes_with_all(G: FamilyGroup, gens: Iterable[Elem], pool: Batch) -> np.ndarray:
    ok = np.ones(pool[0].shape, dtype=bool)
    for s in gens:
        com = G.commutator_batch(pool, tuple(np.int64(v) for v in s))
        ok &= G.index(com) == 0
    return ok


@functools.lru_cache(maxsize=128)
def center(G: FamilyGroup) -> SubgroupSet:
    mask = _commutes_with_all(G, (G.a, G.b), G.elements_batch)
    return _from_mask(G, mask, _generators_of(G, mask))


@functools.lru_cache(maxsize=128)
def derived_subgroup(G: FamilyGroup) -> SubgroupSet:
    return closure([G.commutator(G.a, G.b)], G)


@functools.lru_cache(maxsize=128)
def frattini(G: FamilyGroup) -> SubgroupSet:
    """Φ(G) for a 2-group: generated by all squares together with G'."""
    squares = G.pow_batch(G.elements_batch, 2)
    i, j, k = squares
    c = G.c
    gens = (np.append(i, c.i), np.append(j, c.j), np.append(k, c.k))
    return closure(gens, G)


def is_abelian(H: SubgroupSet) -> bool:
    G = H.group
    gens = H.generators or tuple(H.elements)
    return all(G.commutator(x, y) == G.identity for x in gens for y in gens)


def omega1(H: SubgroupSet) -> SubgroupSet:
    """Elements of order dividing 2 in an abelian subgroup."""
    if not is_abelian(H):
        raise StructureError(f"omega1 needs an abelian subgroup, got non-abelian {H}")
    G = H.group
    sq = G.pow_batch(H.batch, 2)
    keep = H.indices[G.index(sq) == 0]
    mask = np.zeros(G.order, dtype=bool)
    mask[keep] = True
    return _from_mask(G, mask, _generators_of(G, mask))


def centralizer(S: SubgroupSet, G: FamilyGroup | None = None) -> SubgroupSet:
    G = S.group if G is None else G
    gens = S.generators if S.generators or S.order == 1 else tuple(S.elements)
    mask = _commutes_with_all(G, gens, G.elements_batch)
    return _from_mask(G, mask, _generators_of(G, mask))


def subgroup_center(H: SubgroupSet) -> SubgroupSet:
    """Z(H): members of H commuting with every generator of H."""
    mask = centralizer(H).mask & H.mask
    return _from_mask(H.group, mask, _generators_of(H.group, mask))


def element_orders(G: FamilyGroup, x: Batch) -> np.ndarray:
    """Orders of a batch of elements (all are powers of two)."""
    orders = np.ones(x[0].shape, dtype=np.int64)
    cur = x
    pending = G.index(cur) != 0
    while pending.any():
        orders[pending] *= 2
        cur = G.mul_batch(cur, cur)
        pending &= G.index(cur) != 0
        if orders.max() > G.order:
            raise StructureError("element order exceeds group order")
    return orders


def is_cyclic(H: SubgroupSet) -> bool:
    return bool((element_orders(H.group, H.batch) == H.order).any())


def subgroup_frattini(H: SubgroupSet) -> SubgroupSet:
    """Φ(H) for a subgroup H viewed as a 2-group in its own right."""
    G = H.group
    sq = G.pow_batch(H.batch, 2)
    gens = [G.element_at(x) for x in np.unique(G.index(sq))]
    if not is_abelian(H):
        hg = H.generators
        gens += [G.commutator(x, y) for x in hg for y in hg]
    return closure(gens, G)


def rank(H: SubgroupSet) -> int:
    """Minimum number of generators of a subgroup (a 2-group)."""
    quotient = H.order // subgroup_frattini(H).order
    d = int(math.log2(quotient))
    if 2**d != quotient:
        raise StructureError(f"|H/Φ(H)| = {quotient} is not a power of 2")
    return d


def d_of_group(G: FamilyGroup) -> int:
    quotient = G.order // frattini(G).order
    d = int(math.log2(quotient))
    if 2**d != quotient:
        raise StructureError(f"|G/Φ(G)| = {quotient} is not a power of 2")
    return d


def frattini_quotient_decompose(g: Elem, G: FamilyGroup) -> tuple[int, int]:
    """Bits ``(e1, e2)`` with ``g`` in ``a^e1 b^e2 Φ(G)``."""
    phi = frattini(G)
    hits = [
        (e1, e2)
        for e1 in (0, 1)
        for e2 in (0, 1)
        if G.mul(g, G.inv(G.word(e1, e2))) in phi
    ]
    if len(hits) != 1:
        raise StructureError(f"{{aΦ, bΦ}} is not a basis of G/Φ for {G}")
    return hits[0]


def _generators_of(G: FamilyGroup, mask: np.ndarray) -> tuple[Elem, ...]:
    """A small generating set for the subgroup given by ``mask``, largest orders first."""
    idx = np.flatnonzero(mask)
    ei, ej, ek = G.elements_batch
    orders = element_orders(G, (ei[idx], ej[idx], ek[idx]))
    by_order = idx[np.lexsort((idx, -orders))]
    return closure([G.element_at(x) for x in by_order], G).generators
