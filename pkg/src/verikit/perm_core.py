"""
Permutation groups at desk scale.

Permutations act on {0, ..., n-1} and compose right to left:
``(a * b)(x) == a(b(x))``.  Text I/O uses 1-indexed disjoint cycles such as
"(1,2,3)(4,5)".

Stabilizer chains are built by a deterministic Schreier-Sims: base points are
taken from an optional prefix and otherwise as the smallest point moved by the
element that needs a new level.  Orders and memberships are therefore
reproducible run to run.
"""

from __future__ import annotations

import math
import random
import re
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Sequence

from .errors import (
    MembershipFailure,
    NotNormal,
    NotTransitive,
    ResourceBudgetExceeded,
)

DEFAULT_SIFT_BUDGET = 20_000_000
FINGERPRINT_ENUM_LIMIT = 10_000
FINGERPRINT_SAMPLES = 10_000


# ---------------------------------------------------------------------------
# raw tuple helpers (hot paths use these directly)

def pmul(a: tuple, b: tuple) -> tuple:
    """Right-to-left product of raw image tuples: apply ``b`` then ``a``."""
    return tuple(map(a.__getitem__, b))


def pinv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def pid(n: int) -> tuple:
    return tuple(range(n))


def pconj(a: tuple, g: tuple) -> tuple:
    """g a g^-1 on raw tuples."""
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[g[i]] = g[x]
    return tuple(out)


def pcycles(a: tuple, include_fixed: bool = False) -> list[tuple[int, ...]]:
    seen = bytearray(len(a))
    out = []
    for i in range(len(a)):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = 1
        j = a[i]
        while j != i:
            cyc.append(j)
            seen[j] = 1
            j = a[j]
        if len(cyc) > 1 or include_fixed:
            out.append(tuple(cyc))
    return out


def pcycle_lengths(a: tuple) -> tuple[int, ...]:
    seen = bytearray(len(a))
    lens = []
    for i in range(len(a)):
        if seen[i]:
            continue
        k = 0
        j = i
        while not seen[j]:
            seen[j] = 1
            j = a[j]
            k += 1
        lens.append(k)
    lens.sort(reverse=True)
    return tuple(lens)


def ppow(a: tuple, k: int) -> tuple:
    n = len(a)
    if k < 0:
        a = pinv(a)
        k = -k
    result = pid(n)
    base = a
    while k:
        if k & 1:
            result = pmul(base, result)
        base = pmul(base, base)
        k >>= 1
    return result


def porder(a: tuple) -> int:
    return reduce(lambda x, y: x * y // math.gcd(x, y), pcycle_lengths(a), 1)


# ---------------------------------------------------------------------------
# Permutation and CycleType

class Permutation:
    """Bijection of {0..degree-1} stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def _raw(cls, images: tuple) -> "Permutation":
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    def __setattr__(self, key, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._raw(pid(n))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from 0-indexed cycles."""
        imgs = list(range(degree))
        seen = set()
        for cyc in cycles:
            for k, x in enumerate(cyc):
                if x in seen or not 0 <= x < degree:
                    raise ValueError(f"bad cycle {cyc} for degree {degree}")
                seen.add(x)
                imgs[x] = cyc[(k + 1) % len(cyc)]
        return cls._raw(tuple(imgs))

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "Permutation":
        """Parse 1-indexed cycle notation, e.g. "(1,2,3)(4,5)" or "()"."""
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", text):
            body = body.strip()
            if not body:
                continue
            cycles.append([int(tok) - 1 for tok in re.split(r"[,\s]+", body) if tok])
        stripped = re.sub(r"\(([^()]*)\)", "", text).strip()
        if stripped:
            raise ValueError(f"cannot parse permutation {text!r}")
        if degree is None:
            degree = max((max(c) for c in cycles if c), default=-1) + 1
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation._raw(pmul(self.images, other.images))

    def __pow__(self, k: int) -> "Permutation":
        return Permutation._raw(ppow(self.images, k))

    def inverse(self) -> "Permutation":
        return Permutation._raw(pinv(self.images))

    def conjugate(self, g: "Permutation") -> "Permutation":
        """g * self * g^-1."""
        return Permutation._raw(pconj(self.images, g.images))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def order(self) -> int:
        return porder(self.images)

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        return pcycles(self.images, include_fixed)

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i != x]

    def to_cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cyc)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({self.to_cycle_string()!r}, degree={self.degree})"


@dataclass(frozen=True, order=True)
class CycleType:
    """Multiset of cycle lengths, fixed points included, sorted descending."""

    parts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))
        if any(p <= 0 for p in self.parts):
            raise ValueError("cycle lengths must be positive")

    @property
    def degree(self) -> int:
        return sum(self.parts)

    @property
    def index(self) -> int:
        return self.degree - len(self.parts)

    @classmethod
    def parse(cls, text: str) -> "CycleType":
        """Accept "[2,1,1]", "[2.1^2]", "[2^2.1]", "2.1^2" or a plain list."""
        if isinstance(text, (list, tuple)):
            return cls(tuple(int(x) for x in text))
        body = text.strip().strip("[]").replace(" ", "")
        parts: list[int] = []
        if "," in body or "." not in body and "^" not in body:
            for tok in body.split(","):
                if tok:
                    parts.append(int(tok))
            return cls(tuple(parts))
        for tok in body.split("."):
            if "^" in tok:
                a, k = tok.split("^")
                parts.extend([int(a)] * int(k))
            else:
                parts.append(int(tok))
        return cls(tuple(parts))

    def notation(self) -> str:
        """Compact bracket notation, e.g. [2^2.1]."""
        items = []
        for value, count in sorted(Counter(self.parts).items(), reverse=True):
            items.append(f"{value}^{count}" if count > 1 else f"{value}")
        return "[" + ".".join(items) + "]"

    def as_list(self) -> list[int]:
        return list(self.parts)

    def __str__(self):
        return self.notation()


def cycle_type(p: Permutation | tuple) -> CycleType:
    imgs = p.images if isinstance(p, Permutation) else p
    return CycleType(pcycle_lengths(imgs))


def index(p: Permutation | tuple) -> int:
    imgs = p.images if isinstance(p, Permutation) else p
    return len(imgs) - len(pcycle_lengths(imgs))


# ---------------------------------------------------------------------------
# stabilizer chain

class StabChain:
    """Base and strong generating set with explicit transversals.

    Transversals only ever grow (existing coset representatives are never
    replaced), so a Schreier generator once verified stays verified.
    """

    def __init__(self, degree: int, gens: Iterable[tuple], base_prefix: Sequence[int] = (),
                 budget: int = DEFAULT_SIFT_BUDGET):
        self.degree = degree
        self.base: list[int] = []
        self.level_gens: list[list[tuple]] = []
        self.trans: list[dict[int, tuple]] = []
        self.trans_inv: list[dict[int, tuple]] = []
        self._prefix = list(base_prefix)
        self._budget = budget
        self._work = 0
        self._checked: set[tuple[int, int, int]] = set()
        self._ident = pid(degree)
        self.strong: list[tuple] = []
        for p in self._prefix:
            self._push_level(p)
        for g in dict.fromkeys(gens):
            if g != self._ident:
                self._insert(g)

    def _push_level(self, point: int):
        self.base.append(point)
        self.level_gens.append([])
        self.trans.append({point: self._ident})
        self.trans_inv.append({point: self._ident})

    def _new_base_point(self, h: tuple) -> int:
        used = set(self.base)
        for p in self._prefix:
            if p not in used and h[p] != p:
                return p
        for i, x in enumerate(h):
            if i != x and i not in used:
                return i
        raise AssertionError("element fixes every point")

    def _extend_orbit(self, i: int, new_gen: tuple):
        tr = self.trans[i]
        inv = self.trans_inv[i]
        gens = self.level_gens[i]
        queue = []
        for pt in list(tr):
            q = new_gen[pt]
            if q not in tr:
                tr[q] = pmul(new_gen, tr[pt])
                inv[q] = pinv(tr[q])
                queue.append(q)
        k = 0
        while k < len(queue):
            pt = queue[k]
            k += 1
            u = tr[pt]
            for g in gens:
                q = g[pt]
                if q not in tr:
                    tr[q] = pmul(g, u)
                    inv[q] = pinv(tr[q])
                    queue.append(q)

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        base = self.base
        for i in range(start, len(base)):
            inv = self.trans_inv[i].get(g[base[i]])
            if inv is None:
                return g, i
            g = pmul(inv, g)
        return g, len(base)

    def _add_strong(self, h: tuple, lo: int, hi: int):
        if hi == len(self.base):
            self._push_level(self._new_base_point(h))
        self.strong.append(h)
        for l in range(lo, hi + 1):
            self.level_gens[l].append(h)
            self._extend_orbit(l, h)

    def add_generator(self, g: tuple) -> bool:
        """Extend the group by g; returns False when g was already a member."""
        h, j = self.sift(g)
        if j == len(self.base) and h == self._ident:
            return False
        self._add_strong(h, 0, j)
        self._complete(j)
        return True

    def _insert(self, g: tuple):
        h, j = self.sift(g)
        if j == len(self.base) and h == self._ident:
            return
        self._add_strong(h, 0, j)
        self._complete(j)

    def _complete(self, start: int):
        ident = self._ident
        checked = self._checked
        i = start
        while i >= 0:
            restart = False
            tr = self.trans[i]
            inv = self.trans_inv[i]
            gens = self.level_gens[i]
            for beta, u in list(tr.items()):
                for gi, x in enumerate(gens):
                    key = (i, beta, gi)
                    if key in checked:
                        continue
                    self._work += 1
                    if self._work > self._budget:
                        raise ResourceBudgetExceeded(
                            f"stabilizer chain exceeded {self._budget} sifts")
                    sch = pmul(inv[x[beta]], pmul(x, u))
                    h, j = self.sift(sch, i + 1)
                    checked.add(key)
                    if j == len(self.base) and h == ident:
                        continue
                    self._add_strong(h, i + 1, j)
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

    # -- queries

    def order(self) -> int:
        n = 1
        for tr in self.trans:
            n *= len(tr)
        return n

    def contains(self, g: tuple) -> bool:
        h, j = self.sift(g)
        return j == len(self.base) and h == self._ident

    def elements(self) -> Iterator[tuple]:
        """Every element once, as u_0 u_1 ... u_k over the transversals."""
        levels = [list(tr.values()) for tr in self.trans]

        def gen(i):
            if i == len(levels):
                yield self._ident
                return
            for tail in gen(i + 1):
                for u in levels[i]:
                    yield pmul(u, tail)

        yield from gen(0)

    def random_element(self, rng: random.Random) -> tuple:
        g = self._ident
        for tr in reversed(self.trans):
            reps = list(tr.values())
            g = pmul(reps[rng.randrange(len(reps))], g)
        return g

    def stabilizer_gens(self, level: int) -> list[tuple]:
        """Strong generators of the pointwise stabilizer of base[:level]."""
        if level >= len(self.base):
            return []
        return list(self.level_gens[level])


# ---------------------------------------------------------------------------
# PermGroup

class PermGroup:
    """Group generated by permutations of a common degree.

    The stabilizer chain is built lazily on first use and cached; the object is
    otherwise immutable.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation | tuple | Sequence[int]] = (),
                 budget: int = DEFAULT_SIFT_BUDGET):
        gens = []
        for g in generators:
            imgs = g.images if isinstance(g, Permutation) else tuple(g)
            if len(imgs) != degree:
                raise ValueError(f"generator of degree {len(imgs)} in group of degree {degree}")
            gens.append(imgs)
        ident = pid(degree)
        self.degree = degree
        self._gens = tuple(g for g in dict.fromkeys(gens) if g != ident)
        self._budget = budget
        self._chain: StabChain | None = None

    # -- construction helpers

    @classmethod
    def from_cycle_strings(cls, degree: int, gens: Iterable[str]) -> "PermGroup":
        return cls(degree, [Permutation.parse(s, degree) for s in gens])

    @classmethod
    def from_json(cls, record: dict) -> "PermGroup":
        return cls.from_cycle_strings(int(record["degree"]), record["generators"])

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "generators": [Permutation._raw(g).to_cycle_string() for g in self._gens]}

    @property
    def generators(self) -> list[Permutation]:
        return [Permutation._raw(g) for g in self._gens]

    @property
    def raw_generators(self) -> tuple[tuple, ...]:
        return self._gens

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain(self.degree, self._gens, budget=self._budget)
        return self._chain

    def chain_with_base(self, prefix: Sequence[int]) -> StabChain:
        return StabChain(self.degree, self._gens, base_prefix=prefix, budget=self._budget)

    # -- basic queries

    def order(self) -> int:
        return self.chain.order()

    def __contains__(self, g) -> bool:
        imgs = g.images if isinstance(g, Permutation) else tuple(g)
        if len(imgs) != self.degree:
            return False
        return self.chain.contains(imgs)

    def contains(self, g) -> bool:
        return g in self

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(g in other for g in self._gens)

    def equals(self, other: "PermGroup") -> bool:
        return (self.degree == other.degree and self.order() == other.order()
                and self.is_subgroup_of(other))

    def elements(self) -> Iterator[tuple]:
        return self.chain.elements()

    def random_element(self, rng: random.Random) -> tuple:
        return self.chain.random_element(rng)

    def is_trivial(self) -> bool:
        return not self._gens

    def is_abelian(self) -> bool:
        gens = self._gens
        return all(pmul(a, b) == pmul(b, a) for i, a in enumerate(gens) for b in gens[i + 1:])

    def subgroup(self, gens: Iterable) -> "PermGroup":
        return PermGroup(self.degree, gens, budget=self._budget)

    def conjugate(self, g: tuple) -> "PermGroup":
        return PermGroup(self.degree, [pconj(x, g) for x in self._gens], budget=self._budget)

    def is_normal_in(self, G: "PermGroup") -> bool:
        return all(pconj(n, g) in self for g in G.raw_generators for n in self._gens)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self._gens)})"


# ---------------------------------------------------------------------------
# standard groups

def symmetric_group(n: int) -> PermGroup:
    if n <= 1:
        return PermGroup(max(n, 1), [])
    gens = [tuple(list(range(1, n)) + [0])]
    if n > 2:
        gens.append(tuple([1, 0] + list(range(2, n))))
    return PermGroup(n, gens)


def alternating_group(n: int) -> PermGroup:
    if n <= 2:
        return PermGroup(max(n, 1), [])
    gens = []
    for k in range(2, n):
        imgs = list(range(n))
        imgs[0], imgs[1], imgs[k] = 1, k, 0
        gens.append(tuple(imgs))
    return PermGroup(n, gens)


def cyclic_group(n: int) -> PermGroup:
    return PermGroup(n, [tuple(list(range(1, n)) + [0])] if n > 1 else [])


def dihedral_group(n: int) -> PermGroup:
    """Symmetries of the n-gon acting on its vertices (order 2n for n >= 3)."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return PermGroup(n, [rot, ref])


def direct_product(groups: Sequence[PermGroup]) -> PermGroup:
    """Intransitive direct product acting on the disjoint union of the degrees."""
    total = sum(G.degree for G in groups)
    gens = []
    offset = 0
    for G in groups:
        for g in G.raw_generators:
            imgs = list(range(total))
            for i, x in enumerate(g):
                imgs[offset + i] = offset + x
            gens.append(tuple(imgs))
        offset += G.degree
    return PermGroup(total, gens)


def product_action(U: PermGroup, V: PermGroup) -> PermGroup:
    """U x V acting on the m*n pairs (a, b), point index a + m*b."""
    m, n = U.degree, V.degree
    gens = []
    for u in U.raw_generators:
        gens.append(tuple(u[i % m] + m * (i // m) for i in range(m * n)))
    for v in V.raw_generators:
        gens.append(tuple(i % m + m * v[i // m] for i in range(m * n)))
    return PermGroup(m * n, gens)


# ---------------------------------------------------------------------------
# orbits and transitivity

def orbits(G: PermGroup) -> list[list[int]]:
    n = G.degree
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        orb = [s]
        seen[s] = True
        k = 0
        while k < len(orb):
            x = orb[k]
            k += 1
            for g in G.raw_generators:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
        out.append(sorted(orb))
    return out


def is_transitive(G: PermGroup) -> bool:
    return len(orbits(G)) == 1


def orbit_with_transversal(gens: Sequence[tuple], point: int, degree: int) -> dict[int, tuple]:
    tr = {point: pid(degree)}
    queue = [point]
    k = 0
    while k < len(queue):
        x = queue[k]
        k += 1
        for g in gens:
            y = g[x]
            if y not in tr:
                tr[y] = pmul(g, tr[x])
                queue.append(y)
    return tr


# ---------------------------------------------------------------------------
# block systems

@dataclass(frozen=True)
class BlockSystem:
    """Partition into equal cells, cells sorted internally and by minimum point."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cells = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", cells)
        sizes = {len(b) for b in cells}
        if len(sizes) > 1:
            raise ValueError("block sizes differ")

    @property
    def degree(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def is_trivial(self) -> bool:
        return self.block_size in (1, self.degree)

    def block_of(self) -> list[int]:
        lookup = [0] * self.degree
        for k, b in enumerate(self.blocks):
            for x in b:
                lookup[x] = k
        return lookup

    def is_invariant(self, G: PermGroup) -> bool:
        lookup = self.block_of()
        for g in G.raw_generators:
            for b in self.blocks:
                target = lookup[g[b[0]]]
                if any(lookup[g[x]] != target for x in b):
                    return False
        return True

    def refines(self, other: "BlockSystem") -> bool:
        lookup = other.block_of()
        return all(len({lookup[x] for x in b}) == 1 for b in self.blocks)

    def block_action(self, g: tuple) -> tuple:
        lookup = self.block_of()
        return tuple(lookup[g[b[0]]] for b in self.blocks)


def _closure_partition(gens: Sequence[tuple], n: int, seeds: Iterable[tuple[int, int]]) -> list[int]:
    """Finest G-invariant partition merging the given pairs (union-find closure)."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pending = []

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return
        if ra > rb:
            ra, rb = rb, ra
        parent[rb] = ra
        pending.append((a, b))

    for a, b in seeds:
        union(a, b)
    while pending:
        a, b = pending.pop()
        for g in gens:
            union(g[a], g[b])
    return [find(x) for x in range(n)]


def _partition_to_system(labels: list[int]) -> BlockSystem | None:
    cells: dict[int, list[int]] = {}
    for x, r in enumerate(labels):
        cells.setdefault(r, []).append(x)
    blocks = list(cells.values())
    if len({len(b) for b in blocks}) != 1:
        return None
    return BlockSystem(tuple(tuple(b) for b in blocks))


def _pair_systems(G: PermGroup) -> list[BlockSystem]:
    if not is_transitive(G):
        raise NotTransitive("block systems are defined here for transitive groups")
    n = G.degree
    systems = []
    for i in range(1, n):
        sysm = _partition_to_system(_closure_partition(G.raw_generators, n, [(0, i)]))
        if sysm is not None and sysm not in systems:
            systems.append(sysm)
    return systems


def minimal_block_systems(G: PermGroup) -> list[BlockSystem]:
    """Minimal nontrivial block systems from merging the pairs (0, i)."""
    n = G.degree
    cands = [s for s in _pair_systems(G) if s.block_size < n]
    return sorted(s for s in cands
                  if not any(t != s and t.refines(s) for t in cands))


def _join(G: PermGroup, a: BlockSystem, b: BlockSystem) -> BlockSystem:
    seeds = [(blk[0], x) for blk in a.blocks + b.blocks for x in blk[1:]]
    sysm = _partition_to_system(_closure_partition(G.raw_generators, G.degree, seeds))
    assert sysm is not None
    return sysm


def all_block_systems(G: PermGroup) -> list[BlockSystem]:
    """All nontrivial block systems, obtained as joins of the pair systems."""
    n = G.degree
    found = {s for s in _pair_systems(G) if s.block_size < n}
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in list(found):
                j = _join(G, a, b)
                if j.block_size < n and j not in found:
                    found.add(j)
                    new.append(j)
        frontier = new
    return sorted(found, key=lambda s: (s.block_size, s.blocks))


def maximal_block_systems(G: PermGroup) -> list[BlockSystem]:
    systems = all_block_systems(G)
    return [s for s in systems if not any(t != s and s.refines(t) for t in systems)]


def is_primitive(G: PermGroup) -> bool:
    if not is_transitive(G):
        raise NotTransitive("primitivity needs a transitive group")
    return not minimal_block_systems(G)


# ---------------------------------------------------------------------------
# normal structure

def normal_closure(G: PermGroup, S: Iterable, check_membership: bool = True) -> PermGroup:
    """Smallest normal subgroup of G containing S."""
    items = [s.images if isinstance(s, Permutation) else tuple(s) for s in S]
    if check_membership:
        for s in items:
            if s not in G:
                raise MembershipFailure(f"{Permutation._raw(s).to_cycle_string()} is not in G")
    n = G.degree
    ident = pid(n)
    gens: list[tuple] = []
    chain = StabChain(n, [])
    queue = []
    for s in items:
        if s != ident and chain.add_generator(s):
            gens.append(s)
            queue.append(s)
    while queue:
        x = queue.pop()
        for g in G.raw_generators:
            y = pconj(x, g)
            if chain.add_generator(y):
                gens.append(y)
                queue.append(y)
    N = PermGroup(n, gens)
    N._chain = chain
    return N


def derived_subgroup(G: PermGroup) -> PermGroup:
    gens = G.raw_generators
    comms = []
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            c = pmul(pmul(pinv(a), pinv(b)), pmul(a, b))
            comms.append(c)
    return normal_closure(G, comms, check_membership=False)


def centralizer_elements(G: PermGroup, x: tuple, limit: int = 10**6) -> list[tuple]:
    if G.order() > limit:
        raise ResourceBudgetExceeded("centralizer by enumeration is capped")
    return [g for g in G.elements() if pmul(g, x) == pmul(x, g)]


def conjugacy_classes(G: PermGroup, limit: int = 10**6) -> list[list[tuple]]:
    """Classes by conjugation-orbit BFS over all elements (capped)."""
    if G.order() > limit:
        raise ResourceBudgetExceeded(f"group order exceeds class enumeration cap {limit}")
    remaining = set(G.elements())
    ordered = sorted(remaining)
    classes = []
    for x in ordered:
        if x not in remaining:
            continue
        cls = {x}
        queue = [x]
        while queue:
            y = queue.pop()
            for g in G.raw_generators:
                z = pconj(y, g)
                if z not in cls:
                    cls.add(z)
                    queue.append(z)
        remaining -= cls
        classes.append(sorted(cls))
    return classes


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(n ** 0.5) + 1):
        if n % p == 0:
            return False
    return True


def socle_small(G: PermGroup, bound: int = 10**6) -> PermGroup:
    """Subgroup generated by all minimal normal subgroups of G."""
    if G.order() > bound:
        raise ResourceBudgetExceeded(f"socle computation capped at order {bound}")
    if G.is_trivial():
        return PermGroup(G.degree, [])
    # every minimal normal subgroup is the normal closure of one prime-order class
    candidates: list[PermGroup] = []
    for cls in conjugacy_classes(G, limit=bound):
        x = cls[0]
        if not _is_prime(porder(x)):
            continue
        N = normal_closure(G, [x], check_membership=False)
        if any(M.order() == N.order() and M.is_subgroup_of(N) for M in candidates):
            continue
        candidates.append(N)
    minimal = [N for N in candidates
               if not any(M.order() < N.order() and M.is_subgroup_of(N) for M in candidates)]
    gens = [g for N in minimal for g in N.raw_generators]
    return PermGroup(G.degree, gens)


# ---------------------------------------------------------------------------
# split extensions

@dataclass
class SplitResult:
    status: str  # "split", "nonsplit", "unknown"
    complement: PermGroup | None = None
    nodes: int = 0

    def __str__(self):
        return self.status


def _quotient_generators(G: PermGroup, N: PermGroup, rng: random.Random, tries: int = 200) -> list[tuple]:
    """A short list of elements of G whose images generate G/N."""
    target = G.order()
    base = list(N.raw_generators)
    gens = list(G.raw_generators)
    for k in (1, 2):
        for _ in range(tries):
            cand = [G.random_element(rng) for _ in range(k)]
            if PermGroup(G.degree, base + cand).order() == target:
                return cand
    # fall back to a greedy subset of the given generators
    chosen: list[tuple] = []
    for g in gens:
        if PermGroup(G.degree, base + chosen).order() == target:
            break
        if g not in PermGroup(G.degree, base + chosen):
            chosen.append(g)
    return chosen


def is_split_extension(G: PermGroup, N: PermGroup, budget: int = 200_000,
                       seed: int = 0) -> SplitResult:
    """Decide whether N has a complement in G by lifting quotient generators.

    Searches n_1..n_k in N so that <g_i n_i> meets N trivially and has order
    |G|/|N|.  Returns "unknown" only when the node budget runs out.
    """
    if not N.is_subgroup_of(G) or not N.is_normal_in(G):
        raise NotNormal("N must be a normal subgroup of G")
    n = G.degree
    qorder = G.order() // N.order()
    if qorder == 1:
        return SplitResult("split", PermGroup(n, []))
    if N.is_trivial():
        return SplitResult("split", G)
    rng = random.Random(seed)
    qgens = _quotient_generators(G, N, rng)
    n_elems = sorted(N.elements())
    nodes = 0

    def image_order(gens):
        return PermGroup(n, list(N.raw_generators) + gens).order() // N.order()

    def rec(i, chosen):
        nonlocal nodes
        if i == len(qgens):
            K = PermGroup(n, chosen)
            return K if K.order() == qorder else None
        for m in n_elems:
            nodes += 1
            if nodes > budget:
                raise ResourceBudgetExceeded("complement search budget exhausted")
            cand = chosen + [pmul(qgens[i], m)]
            K = PermGroup(n, cand)
            if K.order() != image_order(cand):
                continue
            found = rec(i + 1, cand)
            if found is not None:
                return found
        return None

    try:
        K = rec(0, [])
    except ResourceBudgetExceeded:
        return SplitResult("unknown", None, nodes)
    if K is None:
        return SplitResult("nonsplit", None, nodes)
    return SplitResult("split", K, nodes)


# ---------------------------------------------------------------------------
# abelianization and fingerprint

def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def coset_key(g: tuple, chain: StabChain) -> tuple:
    """Lexicographically least element of the left coset g*D, D given by its chain."""
    h = g
    for i, tr in enumerate(chain.trans):
        beta = min(tr, key=lambda b: h[b])
        h = pmul(h, tr[beta])
    return h


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def abelianization_invariants(G: PermGroup, cap: int = 10**4) -> tuple[int, ...] | None:
    """Prime-power invariants of G/[G,G]; None if the quotient exceeds ``cap``."""
    D = derived_subgroup(G)
    q = G.order() // D.order()
    if q == 1:
        return ()
    if q > cap:
        return None
    chain = D.chain
    one = coset_key(pid(G.degree), chain)
    reps = {one: pid(G.degree)}
    queue = [pid(G.degree)]
    k = 0
    while k < len(queue):
        a = queue[k]
        k += 1
        for g in G.raw_generators:
            b = pmul(a, g)
            key = coset_key(b, chain)
            if key not in reps:
                reps[key] = b
                queue.append(b)
    assert len(reps) == q
    divs = _divisors(q)
    orders = []
    for r in reps.values():
        for d in divs:
            if coset_key(ppow(r, d), chain) == one:
                orders.append(d)
                break
    invariants: list[int] = []
    for p, e in _factorize(q).items():
        counts = [1]
        j = 1
        while counts[-1] < p ** e:
            counts.append(sum(1 for o in orders if (p ** j) % o == 0))
            j += 1
        s = [round(math.log(c, p)) for c in counts]
        ge = [s[t] - s[t - 1] for t in range(1, len(s))]
        for t in range(len(ge)):
            nxt = ge[t + 1] if t + 1 < len(ge) else 0
            invariants.extend([p ** (t + 1)] * (ge[t] - nxt))
    return tuple(sorted(invariants))


@dataclass(frozen=True)
class Fingerprint:
    degree: int
    order: int
    transitive: bool
    cycle_types: tuple[tuple[tuple[int, ...], int], ...]
    exhaustive_cycle_types: bool
    num_block_systems: int
    abelianization: tuple[int, ...] | None

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "order": self.order,
            "transitive": self.transitive,
            "cycle_types": [[list(k), v] for k, v in self.cycle_types],
            "exhaustive_cycle_types": self.exhaustive_cycle_types,
            "num_block_systems": self.num_block_systems,
            "abelianization": None if self.abelianization is None else list(self.abelianization),
        }


def fingerprint(G: PermGroup) -> Fingerprint:
    order = G.order()
    trans = is_transitive(G)
    counts: Counter = Counter()
    if order <= FINGERPRINT_ENUM_LIMIT:
        for g in G.elements():
            counts[pcycle_lengths(g)] += 1
        exhaustive = True
    else:
        rng = random.Random(0)
        for _ in range(FINGERPRINT_SAMPLES):
            counts[pcycle_lengths(G.random_element(rng))] += 1
        exhaustive = False
    nblocks = len(all_block_systems(G)) if trans else -1
    return Fingerprint(G.degree, order, trans, tuple(sorted(counts.items())), exhaustive,
                       nblocks, abelianization_invariants(G))


def group_order(G: PermGroup, budget: int | None = None) -> int:
    """Exact order through the stabilizer chain."""
    if budget is not None:
        return PermGroup(G.degree, G.raw_generators, budget=budget).order()
    return G.order()
