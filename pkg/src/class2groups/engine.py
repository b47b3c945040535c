"""Concrete realizations of the 2-generator 2-groups of class 2 with cyclic center.

Every element is stored as an exponent triple ``(i, j, k)`` standing for
``a**i * b**j * c**k`` with ``c = [a, b] = a^-1 b^-1 a b`` central.  The three
families differ only in the exponent ranges and in how an overflowing
exponent carries into the next generator:

=====  ===========  ========  ============  ==================  ==================
tag    constraint   Ma        Mb            Mc                  carries
=====  ===========  ========  ============  ==================  ==================
Q1     2r <= n      2^n       2^r           1                   c -> a^(2^(n-r))
Q2     r <= n < 2r  2^n       2^r           2^(2r-n)            c^Mc -> a^(2^r)
R3     n >= 1       2^(n+1)   2^n           2^(n-1)             b^Mb -> c^(2^(n-1)),
                                                                c^Mc -> a^(2^n)
=====  ===========  ========  ============  ==================  ==================

All arithmetic helpers accept either Python ints or numpy integer arrays, so
the same closed forms drive single-element and batched computations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple

import numpy as np

DEFAULT_ORDER_CAP = 2**21


class Family(str, enum.Enum):
    Q1 = "Q1"
    Q2 = "Q2"
    R3 = "R3"


class GroupConstructionError(ValueError):
    """Raised for parameters outside a family's range or over the order cap."""


class RelationError(RuntimeError):
    """A realized group failed one of its defining relations."""


class Elem(NamedTuple):
    i: int
    j: int
    k: int

    def __str__(self) -> str:
        return f"a^{self.i} b^{self.j} c^{self.k}"


# A batch of elements: three equally shaped integer arrays.
Batch = tuple[np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class FamilyGroup:
    family: Family
    n: int
    r: int | None
    Ma: int
    Mb: int
    Mc: int
    b_carry: int  # k gained per wrap of j by Mb
    c_carry: int  # i gained per wrap of k by Mc

    # -- identification -------------------------------------------------

    @property
    def order(self) -> int:
        return self.Ma * self.Mb * self.Mc

    @property
    def name(self) -> str:
        if self.family is Family.R3:
            return f"R3({self.n})"
        return f"{self.family.value}({self.n},{self.r})"

    def __str__(self) -> str:
        return self.name

    # -- generators -----------------------------------------------------

    @property
    def identity(self) -> Elem:
        return Elem(0, 0, 0)

    @property
    def a(self) -> Elem:
        return self.normalize(1, 0, 0)

    @property
    def b(self) -> Elem:
        return self.normalize(0, 1, 0)

    @property
    def c(self) -> Elem:
        return self.normalize(0, 0, 1)

    # -- arithmetic on raw exponents (ints or arrays) -------------------

    def _reduce(self, i, j, k):
        q = j // self.Mb
        j = j - q * self.Mb
        k = k + q * self.b_carry
        q = k // self.Mc
        k = k - q * self.Mc
        i = (i + q * self.c_carry) % self.Ma
        return i, j, k

    @staticmethod
    def _raw_mul(x, y):
        # b^j a^i' = a^i' b^j c^(-i' j)
        return x[0] + y[0], x[1] + y[1], x[2] + y[2] - x[1] * y[0]

    @staticmethod
    def _raw_inv(x):
        return -x[0], -x[1], -x[2] - x[0] * x[1]

    @staticmethod
    def _raw_pow(x, m):
        # (a^i b^j)^m = a^(mi) b^(mj) c^(-C(m,2) ij) in class 2
        return m * x[0], m * x[1], m * x[2] - (m * (m - 1) // 2) * x[0] * x[1]

    # -- single elements ------------------------------------------------

    def normalize(self, i: int, j: int, k: int) -> Elem:
        return Elem(*(int(v) for v in self._reduce(i, j, k)))

    def mul(self, x: Elem, y: Elem) -> Elem:
        return self.normalize(*self._raw_mul(x, y))

    def inv(self, x: Elem) -> Elem:
        return self.normalize(*self._raw_inv(x))

    def pow(self, x: Elem, m: int) -> Elem:
        if m < 0:
            return self.pow(self.inv(x), -m)
        return self.normalize(*self._raw_pow(x, m))

    def commutator(self, x: Elem, y: Elem) -> Elem:
        """``x^-1 y^-1 x y``, which equals ``c^(i j' - j i')`` in class 2."""
        return self.normalize(0, 0, x[0] * y[1] - x[1] * y[0])

    def commutator_right(self, x: Elem, y: Elem) -> Elem:
        """The other convention, ``x y x^-1 y^-1``, evaluated by multiplication."""
        return self.product(x, y, self.inv(x), self.inv(y))

    def product(self, *elems: Elem) -> Elem:
        out = self.identity
        for e in elems:
            out = self.mul(out, e)
        return out

    def word(self, i: int = 0, j: int = 0, k: int = 0) -> Elem:
        """Canonical form of ``a^i b^j c^k`` for arbitrary integer exponents."""
        return self.normalize(i, j, k)

    def element_order(self, x: Elem) -> int:
        # every element order is a power of two dividing |G|
        m = 1
        while self.pow(x, m) != self.identity:
            m *= 2
            if m > self.order:
                raise RelationError(f"{x} has no finite 2-power order in {self}")
        return m

    def is_element(self, x) -> bool:
        return (
            len(x) == 3
            and 0 <= x[0] < self.Ma
            and 0 <= x[1] < self.Mb
            and 0 <= x[2] < self.Mc
        )

    # -- batches --------------------------------------------------------

    def normalize_batch(self, i, j, k) -> Batch:
        i, j, k = (np.asarray(v, dtype=np.int64) for v in (i, j, k))
        return self._reduce(i, j, k)

    def mul_batch(self, x: Batch, y: Batch) -> Batch:
        return self.normalize_batch(*self._raw_mul(x, y))

    def inv_batch(self, x: Batch) -> Batch:
        return self.normalize_batch(*self._raw_inv(x))

    def pow_batch(self, x: Batch, m) -> Batch:
        """Elementwise ``x**m`` for non-negative ``m`` (scalar or array)."""
        m = np.asarray(m, dtype=np.int64)
        return self.normalize_batch(*self._raw_pow(x, m))

    def commutator_batch(self, x: Batch, y: Batch) -> Batch:
        zero = np.zeros(np.broadcast(x[0], y[0]).shape, dtype=np.int64)
        return self.normalize_batch(zero, zero, x[0] * y[1] - x[1] * y[0])

    def index(self, x) -> int | np.ndarray:
        """Position of a canonical element (or batch) in :meth:`all_elements`."""
        return (x[0] * self.Mb + x[1]) * self.Mc + x[2]

    def element_at(self, idx: int) -> Elem:
        idx, k = divmod(int(idx), self.Mc)
        i, j = divmod(idx, self.Mb)
        return Elem(i, j, k)

    @cached_property
    def elements_batch(self) -> Batch:
        idx = np.arange(self.order, dtype=np.int64)
        rest, k = np.divmod(idx, self.Mc)
        i, j = np.divmod(rest, self.Mb)
        for arr in (i, j, k):
            arr.flags.writeable = False
        return i, j, k

    def all_elements(self) -> list[Elem]:
        return list(self)

    def __iter__(self) -> Iterator[Elem]:
        for i in range(self.Ma):
            for j in range(self.Mb):
                for k in range(self.Mc):
                    yield Elem(i, j, k)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, x) -> bool:
        return self.is_element(x)

    # -- presentation ---------------------------------------------------

    def relations(self, x: Elem, y: Elem) -> dict[str, bool]:
        """Evaluate every defining relation of the family on images ``x``, ``y``.

        Keys name the relation; values say whether it holds.
        """
        e = self.identity
        n, r = self.n, self.r
        z = self.commutator(x, y)
        central = {
            "[[a,b],a]=1": self.commutator(z, x) == e,
            "[[a,b],b]=1": self.commutator(z, y) == e,
        }
        if self.family is Family.Q1:
            return {
                f"a^{2**n}=1": self.pow(x, 2**n) == e,
                f"b^{2**r}=1": self.pow(y, 2**r) == e,
                f"a^{2**(n - r)}=[a,b]": self.pow(x, 2 ** (n - r)) == z,
            }
        if self.family is Family.Q2:
            return {
                f"a^{2**n}=1": self.pow(x, 2**n) == e,
                f"b^{2**r}=1": self.pow(y, 2**r) == e,
                f"a^{2**r}=[a,b]^{2**(2 * r - n)}": self.pow(x, 2**r)
                == self.pow(z, 2 ** (2 * r - n)),
                **central,
            }
        return {
            f"a^{2**(n + 1)}=1": self.pow(x, 2 ** (n + 1)) == e,
            f"b^{2**(n + 1)}=1": self.pow(y, 2 ** (n + 1)) == e,
            f"a^{2**n}=[a,b]^{2**(n - 1)}": self.pow(x, 2**n)
            == self.pow(z, 2 ** (n - 1)),
            f"[a,b]^{2**(n - 1)}=b^{2**n}": self.pow(z, 2 ** (n - 1))
            == self.pow(y, 2**n),
            **central,
        }

    def check_relations(self) -> None:
        a, b, c = self.a, self.b, self.c
        failed = [name for name, ok in self.relations(a, b).items() if not ok]
        if self.commutator(a, b) != c:
            failed.append("[a,b]=c")
        if c == self.identity:
            failed.append("c!=1 (class exactly 2)")
        if self.commutator(c, a) != self.identity or self.commutator(c, b) != self.identity:
            failed.append("c central")
        if failed:
            raise RelationError(f"{self}: relations fail: {', '.join(failed)}")


def make_group(
    family: Family | str,
    n: int,
    r: int | None = None,
    *,
    order_cap: int = DEFAULT_ORDER_CAP,
) -> FamilyGroup:
    """Build and self-check one member of the classification.

    >>> make_group("Q1", 2, 1).order
    8
    """
    family = Family(family)
    if not isinstance(n, int) or n < 1:
        raise GroupConstructionError(f"n must be a positive integer, got {n!r}")
    if family is Family.R3:
        if r is not None:
            raise GroupConstructionError("R3 takes no r parameter")
        params = dict(Ma=2 ** (n + 1), Mb=2**n, Mc=2 ** (n - 1), b_carry=2 ** (n - 1), c_carry=2**n)
    else:
        if not isinstance(r, int) or r < 1:
            raise GroupConstructionError(f"{family.value} needs r >= 1, got {r!r}")
        if family is Family.Q1:
            if 2 * r > n:
                raise GroupConstructionError(
                    f"Q1 requires 2r <= n; constraint 2r <= n violated for n={n}, r={r}"
                )
            params = dict(Ma=2**n, Mb=2**r, Mc=1, b_carry=0, c_carry=2 ** (n - r))
        else:
            if not r <= n < 2 * r:
                raise GroupConstructionError(
                    f"Q2 requires r <= n < 2r; constraint violated for n={n}, r={r}"
                )
            params = dict(Ma=2**n, Mb=2**r, Mc=2 ** (2 * r - n), b_carry=0, c_carry=2**r)
    order = params["Ma"] * params["Mb"] * params["Mc"]
    if order > order_cap:
        raise GroupConstructionError(f"order {order} of {family.value} exceeds cap {order_cap}")
    G = FamilyGroup(family=family, n=n, r=r, **params)
    G.check_relations()
    return G


def family_parameters(family: Family | str, max_order: int) -> list[tuple[int, int | None]]:
    """All admissible ``(n, r)`` for ``family`` with group order at most ``max_order``.

    Orders: Q1 is 2^(n+r), Q2 is 2^(3r), R3(n) is 2^(3n).
    """
    family = Family(family)
    out: list[tuple[int, int | None]] = []
    if family is Family.R3:
        n = 1
        while 2 ** (3 * n) <= max_order:
            out.append((n, None))
            n += 1
        return out
    r = 1
    while True:
        if family is Family.Q1:
            ns = [n for n in range(2 * r, 2 * r + 64) if 2 ** (n + r) <= max_order]
        else:
            ns = list(range(r, 2 * r)) if 2 ** (3 * r) <= max_order else []
        if not ns:
            break
        out.extend((n, r) for n in ns)
        r += 1
    return sorted(out)
