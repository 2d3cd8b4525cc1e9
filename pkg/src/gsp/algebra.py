"""Exact linear algebra over Z_p^n.

Vectors are immutable tuples of residues; subgroups are kept in reduced
row echelon form (RREF) over F_p, which makes equality of subgroups a
plain ``==`` on their bases and gives every subgroup a unique textual
serialization.  All arithmetic is exact integer arithmetic; p must be a
prime below 2**16 and n at most 64.

Everything in this module is a pure function on immutable values and is
safe to share across threads.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatchError, ParameterError, ResourceCapError

MAX_PRIME = 1 << 16
MAX_DIM = 64

#: Largest p**n accepted by the subgroup/element enumerators by default.
DEFAULT_ENUMERATION_CAP = 1 << 20

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _check_prime(p: int) -> None:
    if not (2 <= p < MAX_PRIME) or not is_prime(p):
        raise ParameterError(f"p must be a prime in [2, {MAX_PRIME}), got {p}")


def _inv_mod(a: int, p: int) -> int:
    # branch-free modular inverse, fine for small prime p
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class VectorP:
    """An element of Z_p^n: a tuple of residues mod a prime p."""

    p: int
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_prime(self.p)
        coords = tuple(int(c) for c in self.coords)
        if len(coords) > MAX_DIM:
            raise ParameterError(f"n must be at most {MAX_DIM}, got {len(coords)}")
        if any(c < 0 or c >= self.p for c in coords):
            raise ParameterError(f"coordinates must lie in [0, {self.p}), got {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def zero(cls, p: int, n: int) -> "VectorP":
        return cls(p, (0,) * n)

    @classmethod
    def unit(cls, p: int, n: int, j: int) -> "VectorP":
        """Standard basis vector with a 1 at column j (0-based)."""
        return cls(p, tuple(1 if i == j else 0 for i in range(n)))

    def _require_same_space(self, other: "VectorP") -> None:
        if self.p != other.p or self.n != other.n:
            raise DimensionMismatchError(
                f"operands over Z_{self.p}^{self.n} and Z_{other.p}^{other.n}"
            )

    def __add__(self, other: "VectorP") -> "VectorP":
        self._require_same_space(other)
        return VectorP(self.p, tuple((a + b) % self.p for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "VectorP") -> "VectorP":
        self._require_same_space(other)
        return VectorP(self.p, tuple((a - b) % self.p for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "VectorP":
        return VectorP(self.p, tuple((-a) % self.p for a in self.coords))

    def scale(self, c: int) -> "VectorP":
        c %= self.p
        return VectorP(self.p, tuple((c * a) % self.p for a in self.coords))

    def dot(self, other: "VectorP") -> int:
        self._require_same_space(other)
        return sum(a * b for a, b in zip(self.coords, other.coords)) % self.p

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __lt__(self, other: "VectorP") -> bool:
        self._require_same_space(other)
        return self.coords < other.coords

    def to_index(self) -> int:
        """Rank of the vector in lexicographic order (base-p, most significant first)."""
        idx = 0
        for c in self.coords:
            idx = idx * self.p + c
        return idx

    @classmethod
    def from_index(cls, p: int, n: int, idx: int) -> "VectorP":
        coords = [0] * n
        for i in range(n - 1, -1, -1):
            idx, coords[i] = divmod(idx, p)
        return cls(p, tuple(coords))

    def digits(self) -> str:
        """Base-p digit string, most significant coordinate first."""
        if self.p > len(_DIGITS):
            raise ParameterError(f"digit serialization supports p <= {len(_DIGITS)}")
        return "".join(_DIGITS[c] for c in self.coords)

    @classmethod
    def from_digits(cls, p: int, text: str) -> "VectorP":
        try:
            coords = tuple(_DIGITS.index(ch) for ch in text)
        except ValueError as exc:
            raise ParameterError(f"bad digit string {text!r}") from exc
        return cls(p, coords)

    def __str__(self) -> str:
        return self.digits()


def vec_add(a: VectorP, b: VectorP) -> VectorP:
    return a + b


def vec_sub(a: VectorP, b: VectorP) -> VectorP:
    return a - b


def dot(a: VectorP, b: VectorP) -> int:
    return a.dot(b)


def all_vectors(p: int, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[VectorP]:
    """All of Z_p^n in lexicographic order."""
    if p**n > cap:
        raise ResourceCapError(f"p^n = {p**n} exceeds enumeration cap {cap}")
    for coords in itertools.product(range(p), repeat=n):
        yield VectorP(p, coords)


def _rref(p: int, n: int, rows: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Reduced row echelon form over F_p; zero rows dropped, pivots ascending."""
    mat = [list(r) for r in rows]
    pivot_row = 0
    for col in range(n):
        src = next((r for r in range(pivot_row, len(mat)) if mat[r][col] % p), None)
        if src is None:
            continue
        mat[pivot_row], mat[src] = mat[src], mat[pivot_row]
        inv = _inv_mod(mat[pivot_row][col] % p, p)
        mat[pivot_row] = [(inv * x) % p for x in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col] % p:
                c = mat[r][col] % p
                mat[r] = [(x - c * y) % p for x, y in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return [tuple(row) for row in mat[:pivot_row]]


def _nullspace(p: int, ncols: int, rows: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of {x : M x = 0 mod p} for the matrix M given by ``rows``."""
    red = _rref(p, ncols, rows)
    pivots = [next(j for j, x in enumerate(row) if x) for row in red]
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-red[i][f]) % p
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of Z_p^n held as its unique RREF basis.

    Equal subgroups have identical bases, so ``==`` and ``hash`` are
    span equality.  The empty basis is the trivial subgroup {0^n}.
    """

    p: int
    n: int
    basis: tuple[VectorP, ...]

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if not (0 <= self.n <= MAX_DIM):
            raise ParameterError(f"n must be in [0, {MAX_DIM}], got {self.n}")
        basis = tuple(self.basis)
        object.__setattr__(self, "basis", basis)
        for row in basis:
            if row.p != self.p or row.n != self.n:
                raise DimensionMismatchError("basis row does not live over (p, n)")
        if [r.coords for r in basis] != _rref(self.p, self.n, [r.coords for r in basis]):
            raise ParameterError("basis is not in reduced row echelon form")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return self.p**self.rank

    def is_trivial(self) -> bool:
        return not self.basis

    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row.coords) if x) for row in self.basis)

    def elements(self) -> Iterator[VectorP]:
        """Every element of the span, ordered by coefficient tuples."""
        for coeffs in itertools.product(range(self.p), repeat=self.rank):
            v = VectorP.zero(self.p, self.n)
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = v + row.scale(c)
            yield v

    def contains(self, x: VectorP) -> bool:
        return self.coset_reduce(x).is_zero()

    __contains__ = contains

    def coset_reduce(self, x: VectorP) -> VectorP:
        """Canonical representative of the coset x + self.

        The unique member of the coset whose coordinates at every pivot
        column are zero; pivots are eliminated in ascending order.
        """
        if x.p != self.p or x.n != self.n:
            raise DimensionMismatchError("vector does not live over (p, n)")
        for row in self.basis:
            c = x.coords[next(j for j, v in enumerate(row.coords) if v)]
            if c:
                x = x - row.scale(c)
        return x

    def to_text(self) -> str:
        """``p=<p> n=<n> rows=<row;row;...>`` with rows as base-p digit strings."""
        rows = ";".join(row.digits() for row in self.basis)
        return f"p={self.p} n={self.n} rows={rows}"

    @classmethod
    def from_text(cls, text: str) -> "Subgroup":
        try:
            p_part, n_part, rows_part = text.strip().split(" ", 2)
            p = int(p_part.removeprefix("p="))
            n = int(n_part.removeprefix("n="))
            body = rows_part.removeprefix("rows=")
        except (ValueError, IndexError) as exc:
            raise ParameterError(f"bad subgroup serialization {text!r}") from exc
        rows = [VectorP.from_digits(p, tok) for tok in body.split(";") if tok]
        for row in rows:
            if row.n != n:
                raise ParameterError(f"row {row} does not have n={n} coordinates")
        return canonicalize(p, n, rows)

    def __str__(self) -> str:
        return self.to_text()


def trivial_subgroup(p: int, n: int) -> Subgroup:
    return Subgroup(p, n, ())


def full_subgroup(p: int, n: int) -> Subgroup:
    return Subgroup(p, n, tuple(VectorP.unit(p, n, j) for j in range(n)))


def canonicalize(p: int, n: int, rows: Iterable[VectorP]) -> Subgroup:
    """The subgroup generated by ``rows``, in canonical RREF form."""
    mat = []
    for row in rows:
        if row.p != p or row.n != n:
            raise DimensionMismatchError("generator does not live over (p, n)")
        mat.append(row.coords)
    red = _rref(p, n, mat)
    return Subgroup(p, n, tuple(VectorP(p, r) for r in red))


def contains(h: Subgroup, x: VectorP) -> bool:
    return h.contains(x)


def coset_reduce(h: Subgroup, x: VectorP) -> VectorP:
    return h.coset_reduce(x)


def _require_same_group_space(h: Subgroup, k: Subgroup) -> None:
    if h.p != k.p or h.n != k.n:
        raise DimensionMismatchError(
            f"subgroups over Z_{h.p}^{h.n} and Z_{k.p}^{k.n}"
        )


def subgroup_sum(h: Subgroup, k: Subgroup) -> Subgroup:
    """Canonical basis of H + K."""
    _require_same_group_space(h, k)
    return canonicalize(h.p, h.n, h.basis + k.basis)


def intersect(h: Subgroup, k: Subgroup) -> Subgroup:
    """Canonical basis of H ∩ K via a kernel computation.

    x = sum_i a_i h_i lies in K iff g·x = 0 for every g in a basis of the
    orthogonal subgroup of K, which is a linear system in the a_i.
    """
    _require_same_group_space(h, k)
    if h.is_trivial() or k.is_trivial():
        return trivial_subgroup(h.p, h.n)
    constraints = orthogonal(k).basis
    if not constraints:  # K is the full group
        return h
    matrix = [[g.dot(hi) for hi in h.basis] for g in constraints]
    gens = []
    for alpha in _nullspace(h.p, h.rank, matrix):
        v = VectorP.zero(h.p, h.n)
        for a, row in zip(alpha, h.basis):
            if a:
                v = v + row.scale(a)
        gens.append(v)
    return canonicalize(h.p, h.n, gens)


def complement(h: Subgroup) -> Subgroup:
    """A direct complement of H: standard basis vectors at H's non-pivot columns."""
    pivots = set(h.pivots())
    rows = [VectorP.unit(h.p, h.n, j) for j in range(h.n) if j not in pivots]
    return Subgroup(h.p, h.n, tuple(rows))


def orthogonal(h: Subgroup) -> Subgroup:
    """The orthogonal subgroup {g : g·h = 0 for all h in H}."""
    null = _nullspace(h.p, h.n, [row.coords for row in h.basis])
    return canonicalize(h.p, h.n, [VectorP(h.p, v) for v in null])


def enumerate_subgroups(
    p: int, n: int, k: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[Subgroup]:
    """Every rank-k subgroup of Z_p^n exactly once.

    RREF bases are generated directly: choose the pivot columns, then run
    over all assignments of the free entries.  Uniqueness of the RREF makes
    the stream duplicate-free.
    """
    _check_prime(p)
    if not (0 <= k <= n):
        raise ParameterError(f"need 0 <= k <= n, got k={k}, n={n}")
    if p**n > cap:
        raise ResourceCapError(f"p^n = {p**n} exceeds enumeration cap {cap}")
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivot_set]
        for values in itertools.product(range(p), repeat=len(free)):
            mat = [[0] * n for _ in range(k)]
            for r in range(k):
                mat[r][pivots[r]] = 1
            for (r, c), v in zip(free, values):
                mat[r][c] = v
            yield Subgroup(p, n, tuple(VectorP(p, tuple(row)) for row in mat))


def random_subgroup(p: int, n: int, k: int, seed: int) -> Subgroup:
    """A uniformly random rank-k subgroup, deterministic in ``seed``.

    Rejection-samples k linearly independent vectors; every rank-k subgroup
    has the same number of ordered bases, so the draw is uniform.
    """
    _check_prime(p)
    if not (0 <= k <= n):
        raise ParameterError(f"need 0 <= k <= n, got k={k}, n={n}")
    rng = random.Random(seed)
    rows: list[VectorP] = []
    while len(rows) < k:
        cand = VectorP(p, tuple(rng.randrange(p) for _ in range(n)))
        if len(_rref(p, n, [r.coords for r in rows] + [cand.coords])) > len(rows):
            rows.append(cand)
    return canonicalize(p, n, rows)
