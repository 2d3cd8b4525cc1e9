"""Hidden-subgroup instances and the query-counting oracle around them.

An instance is a secret subgroup S of Z_p^n plus the labeling function
f(x) = canonical coset representative of x, optionally pushed through a
seeded bijection of Z_p^n so that solvers cannot read S off the label
structure.  Labels live in Z_p^n (not an abstract finite set) so that the
quantum oracle |g>|y> -> |g>|f(g)+y> can add them group-wise.

f(x) = f(y) holds exactly when x - y is in S, for both label modes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from .algebra import Subgroup, VectorP, _rref, random_subgroup
from .errors import DimensionMismatchError, ParameterError

_INSTANCE_HEADER = "gsp-instance v1"


@dataclass(frozen=True)
class HiddenInstance:
    """The problem instance: parameters, the secret S, and the label rule."""

    p: int
    n: int
    k: int
    secret: Subgroup
    label_seed: int = 0
    obfuscate: bool = False

    def __post_init__(self) -> None:
        if not (1 <= self.k < self.n):
            raise ParameterError(f"need 1 <= k < n, got k={self.k}, n={self.n}")
        if self.secret.p != self.p or self.secret.n != self.n:
            raise DimensionMismatchError("secret does not live over (p, n)")
        if self.secret.rank != self.k:
            raise ParameterError(
                f"secret has rank {self.secret.rank}, expected k={self.k}"
            )
        if not (0 <= self.label_seed < 1 << 64):
            raise ParameterError("label_seed must fit in 64 bits")

    @cached_property
    def _bijection(self) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...], tuple[int, ...]]:
        """Seeded invertible affine map (matrix, shift) plus coordinate permutation."""
        rng = random.Random(self.label_seed)
        rows: list[tuple[int, ...]] = []
        while len(rows) < self.n:
            cand = tuple(rng.randrange(self.p) for _ in range(self.n))
            if len(_rref(self.p, self.n, rows + [cand])) > len(rows):
                rows.append(cand)
        shift = tuple(rng.randrange(self.p) for _ in range(self.n))
        perm = list(range(self.n))
        rng.shuffle(perm)
        return tuple(rows), shift, tuple(perm)

    def evaluate(self, x: VectorP) -> VectorP:
        """The label f(x); constant exactly on cosets of the secret."""
        rep = self.secret.coset_reduce(x)
        if not self.obfuscate:
            return rep
        matrix, shift, perm = self._bijection
        mixed = tuple(
            (sum(m * c for m, c in zip(row, rep.coords)) + s) % self.p
            for row, s in zip(matrix, shift)
        )
        return VectorP(self.p, tuple(mixed[perm[i]] for i in range(self.n)))


def make_instance(
    p: int,
    n: int,
    k: int,
    subgroup_seed: int,
    label_seed: int = 0,
    obfuscate: bool = False,
) -> HiddenInstance:
    """Instance with a seeded random secret; deterministic in all seeds."""
    if not (1 <= k < n):
        raise ParameterError(f"need 1 <= k < n, got k={k}, n={n}")
    secret = random_subgroup(p, n, k, subgroup_seed)
    return HiddenInstance(p, n, k, secret, label_seed, obfuscate)


@dataclass
class QueryLog:
    """Counting and caching wrapper around an instance.

    ``dedup=True`` (the default) counts distinct queried elements, matching
    the usual "set of queried elements" accounting; ``dedup=False`` counts
    every call (strict mode, for nonadaptive-style accounting).  Answers are
    cached, so re-queries are always consistent.
    """

    instance: HiddenInstance
    dedup: bool = True
    count: int = 0
    cache: dict[VectorP, VectorP] = field(default_factory=dict)
    trace: list[tuple[VectorP, VectorP]] = field(default_factory=list)

    @property
    def queried(self):
        return self.cache.keys()

    def query(self, x: VectorP) -> VectorP:
        if x.p != self.instance.p or x.n != self.instance.n:
            raise DimensionMismatchError("query vector does not live over (p, n)")
        if x in self.cache:
            if not self.dedup:
                self.count += 1
                self.trace.append((x, self.cache[x]))
            return self.cache[x]
        label = self.instance.evaluate(x)
        self.cache[x] = label
        self.count += 1
        self.trace.append((x, label))
        return label


def instance_to_text(inst: HiddenInstance) -> str:
    lines = [
        _INSTANCE_HEADER,
        f"p={inst.p}",
        f"n={inst.n}",
        f"k={inst.k}",
        f"secret={inst.secret.to_text()}",
        f"label_seed={inst.label_seed}",
        f"obfuscate={1 if inst.obfuscate else 0}",
    ]
    return "\n".join(lines) + "\n"


def instance_from_text(text: str) -> HiddenInstance:
    lines = text.splitlines()
    if not lines or lines[0].strip() != _INSTANCE_HEADER:
        raise ParameterError(f"missing '{_INSTANCE_HEADER}' header")
    fields: dict[str, str] = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        fields[key.strip()] = value
    try:
        p = int(fields["p"])
        n = int(fields["n"])
        k = int(fields["k"])
        secret = Subgroup.from_text(fields["secret"])
        label_seed = int(fields["label_seed"])
        obfuscate = fields["obfuscate"].strip()
    except KeyError as exc:
        raise ParameterError(f"instance file missing field {exc}") from exc
    if obfuscate not in ("0", "1"):
        raise ParameterError(f"obfuscate must be 0 or 1, got {obfuscate!r}")
    return HiddenInstance(p, n, k, secret, label_seed, obfuscate == "1")


def write_instance(inst: HiddenInstance, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(instance_to_text(inst))


def read_instance(path: str) -> HiddenInstance:
    with open(path, "r", encoding="ascii") as fh:
        return instance_from_text(fh.read())
