"""Explicit automorphism constructions.

* the literal witness maps attached to each classification case,
* ``phi_f`` maps ``g -> g f(gΦ)`` for homomorphisms ``f: G/Φ -> Ω1(Z(G))``,
* extensions ``a -> a b1, b -> b b2`` by central-ish involutions of Z(Φ(G)),
* gluing automorphisms of a normal subgroup and a complement-like subgroup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .automorphisms import (
    Aut,
    GenMap,
    aut_order,
    check,
    enumerate_phi_fixing,
    fixes_pointwise,
    is_inner_criterion,
    is_inner_direct,
    make_aut,
)
from .engine import Elem, Family, FamilyGroup
from .structure import (
    SubgroupSet,
    center,
    frattini,
    omega1,
    subgroup_center,
)

CASE_IDS = ("1i", "1ii", "1iii-a1", "1iii-a2", "2i", "2ii", "2iii", "3i", "3ii")

# Which parameters (m, s) each case ranges over.
CASE_FREE_PARAMS = {
    "1i": (),
    "1ii": ("m",),
    "1iii-a1": ("m", "s"),
    "1iii-a2": ("m", "s"),
    "2i": (),
    "2ii": (),
    "2iii": (),
    "3i": (),
    "3ii": (),
}

CONVENTIONS = ("left", "right")  # [x,y] = x^-1 y^-1 x y  /  x y x^-1 y^-1


class InapplicableCase(ValueError):
    pass


class HypothesisError(ValueError):
    pass


class ExtensionError(ValueError):
    def __init__(self, message: str, pair: tuple[Elem, Elem] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class WitnessCase:
    case_id: str
    m: int = 0
    s: int = 0

    def __post_init__(self) -> None:
        if self.case_id not in CASE_IDS:
            raise InapplicableCase(f"unknown case {self.case_id!r}")
        if self.m not in (0, 1) or self.s not in (0, 1):
            raise InapplicableCase("m and s must be 0 or 1")

    def __str__(self) -> str:
        free = CASE_FREE_PARAMS[self.case_id]
        if not free:
            return self.case_id
        return self.case_id + "(" + ",".join(f"{p}={getattr(self, p)}" for p in free) + ")"


def applicable(case_id: str, G: FamilyGroup) -> bool:
    n, r, fam = G.n, G.r, G.family
    if case_id == "1i":
        return fam is Family.Q1 and (n, r) == (2, 1)
    if case_id == "1ii":
        return fam is Family.Q1 and r == 1 and n >= 3
    if case_id in ("1iii-a1", "1iii-a2"):
        return fam is Family.Q1 and n > 2 and r >= 2
    if case_id == "2i":
        return fam is Family.Q2 and (n, r) == (1, 1)
    if case_id == "2ii":
        return fam is Family.Q2 and n == r > 1
    if case_id == "2iii":
        return fam is Family.Q2 and r > 1 and r + 1 <= n < 2 * r
    if case_id == "3i":
        return fam is Family.R3 and n == 1
    if case_id == "3ii":
        return fam is Family.R3 and n >= 2
    raise InapplicableCase(f"unknown case {case_id!r}")


def applicable_cases(G: FamilyGroup) -> list[WitnessCase]:
    out = []
    for cid in CASE_IDS:
        if not applicable(cid, G):
            continue
        free = CASE_FREE_PARAMS[cid]
        for values in itertools.product((0, 1), repeat=len(free)):
            out.append(WitnessCase(cid, **dict(zip(free, values))))
    return out


def _monomial(G: FamilyGroup, ea: int = 0, eb: int = 0, ec: int = 0, convention: str = "left") -> Elem:
    """``a^ea b^eb [a,b]^ec`` evaluated by group multiplication."""
    if convention == "left":
        com = G.commutator(G.a, G.b)
    elif convention == "right":
        com = G.commutator_right(G.a, G.b)
    else:
        raise ValueError(f"unknown commutator convention {convention!r}")
    return G.product(G.pow(G.a, ea), G.pow(G.b, eb), G.pow(com, ec))


def case_witness(case: WitnessCase, G: FamilyGroup, convention: str = "left") -> GenMap:
    """Generator images of a classification case, exponents evaluated as written."""
    if not applicable(case.case_id, G):
        raise InapplicableCase(f"case {case.case_id} does not apply to {G}")
    n, r, m, s = G.n, G.r, case.m, case.s

    def mono(ea=0, eb=0, ec=0):
        return _monomial(G, ea, eb, ec, convention)

    cid = case.case_id
    if cid == "1i":
        x, y = mono(3), mono(1, 1)
    elif cid == "1ii":
        x, y = mono(1 + 2 ** (n - 2) + m * 2 ** (n - 1), 1), mono(2 ** (n - 1), 1)
    elif cid == "1iii-a1":
        x, y = mono(1 + m * 2 ** (n - 1)), mono(s * 2 ** (n - 1), 1)
    elif cid == "1iii-a2":
        x = mono(1 + 2 ** (n - 2) + m * 2 ** (n - 1), 2 ** (r - 1))
        y = mono(s * 2 ** (n - 1), 1)
    elif cid == "2i":
        x, y = mono(0, 1), mono(1)
    elif cid == "2ii":
        x, y = mono(2 ** (r - 1) + 1), mono(0, 2 ** (r - 1) + 1)
    elif cid == "2iii":
        x = mono(2 ** (n - 1) - 2 ** (r - 1) + 1, 0, 2 ** (2 * r - n - 1))
        y = mono(2 ** (n - 1), 2 ** (r - 1) + 1)
    elif cid == "3i":
        x, y = mono(1, 1), mono(0, 3)
    else:  # 3ii
        e = 2**n + 2 ** (n - 1) + 1
        x, y = mono(e, 0, 2 ** (n - 2)), mono(0, e, 2 ** (n - 2))
    return GenMap(G, x, y)


def expected_claims(case_id: str) -> tuple[str, ...]:
    """Names of the properties each case asserts about its map."""
    if case_id == "1iii-a1":
        return ("valid", "phi_fixing", "inner")
    if case_id == "1iii-a2":
        return ("valid", "phi_fixing", "non_inner", "order_not_2")
    return ("valid", "phi_fixing", "non_inner", "order_2")


@dataclass(frozen=True)
class WitnessVerdict:
    case: WitnessCase
    group: FamilyGroup
    map: GenMap
    convention: str
    claims: dict[str, bool]  # claimed property -> holds?
    order: int | None
    reason: str | None = None
    other_convention: WitnessVerdict | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return all(self.claims.values())

    def as_dict(self) -> dict:
        out = {
            "case": str(self.case),
            "group": self.group.name,
            "convention": self.convention,
            **self.map.as_dict(),
            "claims": dict(self.claims),
            "order": self.order,
            "passed": self.passed,
        }
        if self.reason:
            out["reason"] = self.reason
        if self.other_convention is not None:
            out["other_convention"] = self.other_convention.as_dict()
        return out


def _verdict(case: WitnessCase, G: FamilyGroup, convention: str) -> WitnessVerdict:
    gm = case_witness(case, G, convention)
    expected = expected_claims(case.case_id)
    aut, reason = check(gm)
    if aut is None:
        claims = {name: False for name in expected}
        return WitnessVerdict(case, G, gm, convention, claims, None, reason)
    order = aut_order(aut)
    inner_direct = is_inner_direct(aut) is not None
    if inner_direct != is_inner_criterion(aut):
        reason = "inner-ness criterion disagrees with direct search"
    observed = {
        "valid": True,
        "phi_fixing": fixes_pointwise(aut, frattini(G)),
        "inner": inner_direct,
        "non_inner": not inner_direct,
        "order_2": order == 2,
        "order_not_2": order != 2,
    }
    claims = {name: observed[name] for name in expected}
    if reason:
        claims["criterion_agrees"] = False
    return WitnessVerdict(case, G, gm, convention, claims, order, reason)


def verify_witness(case: WitnessCase, G: FamilyGroup) -> WitnessVerdict:
    """Check every property claimed for a case's map.

    Runs with ``[x,y] = x^-1 y^-1 x y``; on failure it is re-run with
    ``[x,y] = x y x^-1 y^-1`` and the second outcome is attached.
    """
    if not applicable(case.case_id, G):
        raise InapplicableCase(f"case {case.case_id} does not apply to {G}")
    verdict = _verdict(case, G, "left")
    if verdict.passed:
        return verdict
    other = _verdict(case, G, "right")
    return WitnessVerdict(
        verdict.case, G, verdict.map, verdict.convention, verdict.claims,
        verdict.order, verdict.reason, other,
    )


def match_case(gm: GenMap) -> str | None:
    """Identifier of the first applicable case whose map equals ``gm``."""
    for case in applicable_cases(gm.group):
        if case_witness(case, gm.group) == gm:
            return str(case)
    return None


# -- phi_f ---------------------------------------------------------------


@dataclass(frozen=True)
class HomGF2:
    """A homomorphism G/Φ -> Ω1(Z(G)) given by the images of aΦ and bΦ."""

    image_a: Elem
    image_b: Elem


def frattini_bits(G: FamilyGroup) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates of every gΦ in the basis {aΦ, bΦ}, as two bit arrays."""
    phi = frattini(G)
    allg = G.elements_batch
    e1 = np.full(G.order, -1, dtype=np.int64)
    e2 = np.full(G.order, -1, dtype=np.int64)
    for b1, b2 in itertools.product((0, 1), repeat=2):
        shift = G.inv(G.word(b1, b2))
        hit = phi.contains_batch(G.mul_batch(allg, tuple(np.int64(v) for v in shift)))
        if (e1[hit] != -1).any():
            raise ValueError(f"{{aΦ, bΦ}} is not a basis of G/Φ for {G}")
        e1[hit], e2[hit] = b1, b2
    if (e1 < 0).any():
        raise ValueError(f"{{aΦ, bΦ}} does not span G/Φ for {G}")
    return e1, e2


def homs_to_omega1_center(G: FamilyGroup) -> list[HomGF2]:
    targets = omega1(center(G)).elements
    return [HomGF2(x, y) for x in targets for y in targets]


def phi_f(f: HomGF2, G: FamilyGroup) -> Aut:
    """The automorphism ``g -> g f(gΦ)``."""
    om = omega1(center(G))
    if not om <= frattini(G):
        raise HypothesisError(f"Ω1(Z(G)) is not contained in Φ(G) for {G}")
    if f.image_a not in om or f.image_b not in om:
        raise HypothesisError("f must take values in Ω1(Z(G))")
    e1, e2 = frattini_bits(G)
    fa, fb = f.image_a, f.image_b
    # f(aΦ^e1 bΦ^e2) = fa^e1 fb^e2
    vals = G.mul_batch(G.pow_batch(tuple(np.int64(v) for v in fa), e1),
                       G.pow_batch(tuple(np.int64(v) for v in fb), e2))
    table = G.index(G.mul_batch(G.elements_batch, vals))
    aut = make_aut(G, G.element_at(table[G.index(G.a)]), G.element_at(table[G.index(G.b)]))
    if not np.array_equal(aut.table, table):
        raise RuntimeError(f"phi_f for {f} is not determined by its generator images")
    return aut


# -- extensions ------------------------------------------------------------


def omega1_center_of_frattini(G: FamilyGroup) -> SubgroupSet:
    return omega1(center_of_frattini(G))


def center_of_frattini(G: FamilyGroup) -> SubgroupSet:
    return subgroup_center(frattini(G))


def _extension_hypotheses(G: FamilyGroup, b1: Elem, b2: Elem) -> str | None:
    om = omega1_center_of_frattini(G)
    e = G.identity
    if b1 not in om:
        return "b1 not in Ω1(Z(Φ(G)))"
    if b2 not in om:
        return "b2 not in Ω1(Z(Φ(G)))"
    if G.commutator(G.a, b1) != e:
        return "[x1, b1] != 1"
    if G.commutator(G.b, b2) != e:
        return "[x2, b2] != 1"
    if G.commutator(G.a, b2) != G.commutator(G.b, b1):
        return "[x1, b2] != [x2, b1]"
    return None


def aut_extend(G: FamilyGroup, b_list: tuple[Elem, Elem]) -> Aut:
    """The automorphism ``a -> a b1, b -> b b2`` when the hypotheses hold."""
    b1, b2 = b_list
    problem = _extension_hypotheses(G, b1, b2)
    if problem:
        raise HypothesisError(problem)
    return make_aut(G, G.mul(G.a, b1), G.mul(G.b, b2))


def varphi_kernel(G: FamilyGroup) -> list[tuple[Elem, Elem]]:
    """Pairs in Ω1(Z(Φ))^2 killed by ``(b1,b2) -> ([x1,b1], [x2,b2], [x1,b2][b1,x2])``."""
    om = omega1_center_of_frattini(G).elements
    e = G.identity
    x1, x2 = G.a, G.b
    out = []
    for b1 in om:
        for b2 in om:
            if (
                G.commutator(x1, b1) == e
                and G.commutator(x2, b2) == e
                and G.mul(G.commutator(x1, b2), G.commutator(b1, x2)) == e
            ):
                out.append((b1, b2))
    return out


def _as_lookup(H: SubgroupSet, f: Mapping[Elem, Elem] | Callable[[Elem], Elem]) -> np.ndarray:
    """Index-level table of a map defined on H's elements."""
    G = H.group
    get = f.__getitem__ if isinstance(f, Mapping) else f
    out = np.full(G.order, -1, dtype=np.int64)
    for x in H.elements:
        y = Elem(*get(x))
        if y not in H:
            raise ValueError(f"map sends {x} outside its subgroup")
        out[G.index(x)] = G.index(y)
    return out


def _check_automorphism_of(H: SubgroupSet, table: np.ndarray, label: str) -> None:
    G = H.group
    img = table[H.indices]
    if np.unique(img).size != H.order:
        raise ValueError(f"{label} is not a bijection of its subgroup")
    ei, ej, ek = G.elements_batch
    X = (ei[H.indices][:, None], ej[H.indices][:, None], ek[H.indices][:, None])
    Y = (ei[H.indices][None, :], ej[H.indices][None, :], ek[H.indices][None, :])
    prod = table[G.index(G.mul_batch(X, Y))]
    ix = img[:, None]
    iy = img[None, :]
    rhs = G.index(G.mul_batch((ei[ix], ej[ix], ek[ix]), (ei[iy], ej[iy], ek[iy])))
    if not np.array_equal(prod, rhs):
        raise ValueError(f"{label} is not a homomorphism")


def common_extension(
    G: FamilyGroup,
    A: SubgroupSet,
    B: SubgroupSet,
    alpha: Mapping[Elem, Elem] | Callable[[Elem], Elem],
    beta: Mapping[Elem, Elem] | Callable[[Elem], Elem],
) -> Aut:
    """Glue automorphisms of ``A`` (normal) and ``B`` with ``G = AB``.

    Succeeds iff the maps agree on A ∩ B and ``[x,y]^alpha = [x^alpha, y^beta]``
    for all x in A, y in B; otherwise :class:`ExtensionError` names the
    offending pair.
    """
    for g in (G.a, G.b):
        for x in A.generators or A.elements:
            if G.product(G.inv(g), x, g) not in A:
                raise ValueError("A is not normal in G")
    inter = A.mask & B.mask
    if A.order * B.order // int(inter.sum()) != G.order:
        raise ValueError("G is not the product AB")
    ta = _as_lookup(A, alpha)
    tb = _as_lookup(B, beta)
    _check_automorphism_of(A, ta, "alpha")
    _check_automorphism_of(B, tb, "beta")
    for idx in np.flatnonzero(inter):
        if ta[idx] != tb[idx]:
            x = G.element_at(idx)
            raise ExtensionError(f"alpha and beta differ at {x} in A ∩ B", (x, x))

    ei, ej, ek = G.elements_batch
    xa = A.indices[:, None]
    yb = B.indices[None, :]
    X = (ei[xa], ej[xa], ek[xa])
    Y = (ei[yb], ej[yb], ek[yb])
    ax, by = ta[xa], tb[yb]
    AX = (ei[ax], ej[ax], ek[ax])
    BY = (ei[by], ej[by], ek[by])
    lhs = ta[G.index(G.commutator_batch(X, Y))]
    rhs = G.index(G.commutator_batch(AX, BY))
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        p, q = bad[0]
        pair = (G.element_at(A.indices[p]), G.element_at(B.indices[q]))
        raise ExtensionError(f"[x,y]^alpha != [x^alpha, y^beta] at {pair}", pair)

    prod = G.index(G.mul_batch(X, Y)).ravel()
    img = G.index(G.mul_batch(AX, BY)).ravel()
    table = np.full(G.order, -1, dtype=np.int64)
    table[prod] = img
    if (table < 0).any() or not np.array_equal(table[prod], img):
        raise ExtensionError("extension x y -> x^alpha y^beta is not well defined")
    aut = make_aut(G, G.element_at(table[G.index(G.a)]), G.element_at(table[G.index(G.b)]))
    if not np.array_equal(aut.table, table):
        raise ExtensionError("glued map differs from the automorphism it generates")
    return aut


# -- the shape claim for Q(n, r), r >= 2 -----------------------------------


def phi_fixing_shape_report(G: FamilyGroup) -> dict:
    """Match every Φ-fixing automorphism (any order) to the alpha1/alpha2 shapes."""
    if not (applicable("1iii-a1", G)):
        raise InapplicableCase(f"shape claim concerns Q1(n,r) with n > 2, r >= 2, not {G}")
    shapes = {case_witness(c, G): str(c) for c in applicable_cases(G)
              if c.case_id in ("1iii-a1", "1iii-a2")}
    rows = []
    for aut in enumerate_phi_fixing(G, involutions=False):
        rows.append({**aut.map.as_dict(), "order": aut_order(aut),
                     "inner": is_inner_direct(aut) is not None,
                     "shape": shapes.get(aut.map)})
    return {
        "group": G.name,
        "phi_fixing": len(rows),
        "unmatched": [r for r in rows if r["shape"] is None],
        "rows": rows,
    }


def compose_pointwise(G: FamilyGroup, f: HomGF2, g: HomGF2) -> HomGF2:
    return HomGF2(G.mul(f.image_a, g.image_a), G.mul(f.image_b, g.image_b))


__all__ = [
    "CASE_IDS", "WitnessCase", "WitnessVerdict", "HomGF2",
    "InapplicableCase", "HypothesisError", "ExtensionError",
    "applicable", "applicable_cases", "case_witness", "verify_witness", "match_case",
    "frattini_bits", "homs_to_omega1_center", "phi_f",
    "omega1_center_of_frattini", "center_of_frattini", "aut_extend",
    "varphi_kernel", "common_extension", "phi_fixing_shape_report", "compose_pointwise",
]
