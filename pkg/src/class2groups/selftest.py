"""Exhaustive and sampled consistency checks of the arithmetic and the searches."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automorphisms import (
    enumerate_brute,
    enumerate_phi_fixing,
    is_inner_criterion,
    is_inner_direct,
)
from .engine import FamilyGroup

EXHAUSTIVE_LIMIT = 512
RANDOM_TRIPLES = 10**6


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    ok: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"group": self.group, "check": self.name, "ok": self.ok, "detail": self.detail}


def cayley_table(G: FamilyGroup) -> np.ndarray:
    ei, ej, ek = G.elements_batch
    X = (ei[:, None], ej[:, None], ek[:, None])
    Y = (ei[None, :], ej[None, :], ek[None, :])
    return G.index(G.mul_batch(X, Y))


def check_associativity(G: FamilyGroup, *, seed: int = 0, samples: int = RANDOM_TRIPLES) -> CheckResult:
    if G.order <= EXHAUSTIVE_LIMIT:
        M = cayley_table(G)
        for x in range(G.order):
            # (x y) z  vs  x (y z) for all y, z
            if not np.array_equal(M[M[x]], M[x][M]):
                return CheckResult(G.name, "associativity", False, f"fails for x index {x}")
        return CheckResult(G.name, "associativity", True, f"exhaustive, {G.order**3} triples")
    rng = np.random.default_rng(seed)
    ei, ej, ek = G.elements_batch
    done = 0
    while done < samples:
        size = min(200_000, samples - done)
        t = rng.integers(0, G.order, size=(3, size))
        x, y, z = ((ei[v], ej[v], ek[v]) for v in t)
        lhs = G.index(G.mul_batch(G.mul_batch(x, y), z))
        rhs = G.index(G.mul_batch(x, G.mul_batch(y, z)))
        if not np.array_equal(lhs, rhs):
            return CheckResult(G.name, "associativity", False, "random triple fails")
        done += size
    return CheckResult(G.name, "associativity", True, f"{samples} random triples, seed {seed}")


def check_identity_inverse(G: FamilyGroup) -> CheckResult:
    allg = G.elements_batch
    idx = np.arange(G.order)
    e = tuple(np.int64(0) for _ in range(3))
    inv = G.inv_batch(allg)
    ok = (
        np.array_equal(G.index(G.mul_batch(e, allg)), idx)
        and np.array_equal(G.index(G.mul_batch(allg, e)), idx)
        and not G.index(G.mul_batch(allg, inv)).any()
        and not G.index(G.mul_batch(inv, allg)).any()
    )
    return CheckResult(G.name, "identity/inverse", bool(ok))


def check_faithfulness(G: FamilyGroup) -> CheckResult:
    """Left multiplication by every element permutes the canonical triples."""
    ei, ej, ek = G.elements_batch
    canonical = (ei < G.Ma) & (ej < G.Mb) & (ek < G.Mc)
    if not canonical.all() or np.unique(G.index(G.elements_batch)).size != G.order:
        return CheckResult(G.name, "faithfulness", False, "duplicate or non-canonical triples")
    if G.order <= EXHAUSTIVE_LIMIT:
        M = cayley_table(G)
        rows_ok = (np.sort(M, axis=1) == np.arange(G.order)).all()
        return CheckResult(G.name, "faithfulness", bool(rows_ok), "exhaustive")
    for x in range(0, G.order, max(1, G.order // 64)):
        row = G.index(G.mul_batch((ei[x], ej[x], ek[x]), G.elements_batch))
        if np.unique(row).size != G.order:
            return CheckResult(G.name, "faithfulness", False, f"row {x} not a permutation")
    return CheckResult(G.name, "faithfulness", True, "sampled rows")


def check_power_formula(G: FamilyGroup) -> CheckResult:
    allg = G.elements_batch
    cur = tuple(np.zeros(G.order, dtype=np.int64) for _ in range(3))
    limit = G.order if G.order <= EXHAUSTIVE_LIMIT else 64
    for m in range(limit + 1):
        if not np.array_equal(G.index(G.pow_batch(allg, m)), G.index(cur)):
            return CheckResult(G.name, "power formula", False, f"fails at m={m}")
        cur = G.mul_batch(cur, allg)
    return CheckResult(G.name, "power formula", True, f"0 <= m <= {limit}")


def check_commutator_formula(G: FamilyGroup) -> CheckResult:
    ei, ej, ek = G.elements_batch
    if G.order <= EXHAUSTIVE_LIMIT:
        X = (ei[:, None], ej[:, None], ek[:, None])
        Y = (ei[None, :], ej[None, :], ek[None, :])
    else:
        rng = np.random.default_rng(0)
        t = rng.integers(0, G.order, size=(2, 100_000))
        X, Y = ((ei[v], ej[v], ek[v]) for v in t)
    direct = G.mul_batch(G.mul_batch(G.inv_batch(X), G.inv_batch(Y)), G.mul_batch(X, Y))
    closed = G.commutator_batch(X, Y)
    return CheckResult(G.name, "commutator formula", bool(np.array_equal(G.index(direct), G.index(closed))))


def check_enumeration_oracle(G: FamilyGroup) -> CheckResult:
    pruned = {aut.map for aut in enumerate_phi_fixing(G)}
    brute = {aut.map for aut in enumerate_brute(G)}
    return CheckResult(
        G.name, "pruned == brute enumeration", pruned == brute,
        f"{len(pruned)} pruned, {len(brute)} brute",
    )


def check_inner_criterion(G: FamilyGroup) -> CheckResult:
    auts = enumerate_phi_fixing(G, involutions=False)
    bad = [a for a in auts if (is_inner_direct(a) is not None) != is_inner_criterion(a)]
    return CheckResult(G.name, "criterion == direct inner test", not bad, f"{len(auts)} automorphisms")


def engine_checks(G: FamilyGroup, *, seed: int = 0) -> list[CheckResult]:
    return [
        check_associativity(G, seed=seed),
        check_identity_inverse(G),
        check_faithfulness(G),
        check_power_formula(G),
        check_commutator_formula(G),
    ]


def run_all(G: FamilyGroup, *, seed: int = 0, brute_limit: int = 2**10) -> list[CheckResult]:
    out = engine_checks(G, seed=seed)
    if G.order <= brute_limit:
        out.append(check_enumeration_oracle(G))
    out.append(check_inner_criterion(G))
    return out
