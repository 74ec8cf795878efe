"""
Branch cycle calculus.

Products of tuple entries compose right to left, so the tuple
(1,2,3,4), (1,2), (1,3), (1,4) has product one: the rightmost factor acts
first.  Braid words use 1-based generator indices; ``coalesce`` positions are
1-based to match.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (IndexOutOfRange, InvalidTuple, NotTransitive, OddIndexSum,
                     ResourceBudgetExceeded)
from .perm_core import (CycleType, Permutation, PermGroup, cycle_type, index, pcycle_lengths, pid, pinv,
                        pmul)


def tuple_product(entries: Sequence[tuple]) -> tuple:
    """pi_1 pi_2 ... pi_r composed right to left."""
    n = len(entries[0])
    out = pid(n)
    for e in reversed(entries):
        out = pmul(e, out)
    return out


def _orbit_count(entries: Sequence[tuple], n: int) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in entries:
        for i, x in enumerate(e):
            a, b = find(i), find(x)
            if a != b:
                parent[a] = b
    return len({find(i) for i in range(n)})


@dataclass(frozen=True)
class RamificationType:
    types: tuple[CycleType, ...]

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(sorted(self.types, reverse=True)))

    @classmethod
    def parse(cls, items: Iterable) -> "RamificationType":
        return cls(tuple(t if isinstance(t, CycleType) else CycleType.parse(t) for t in items))

    def __str__(self):
        return "(" + ", ".join(t.notation() for t in self.types) + ")"

    def index_sum(self) -> int:
        return sum(t.index for t in self.types)


@dataclass(frozen=True)
class BranchTuple:
    """A product-one tuple of permutations of {0..degree-1}."""

    degree: int
    entries: tuple[tuple, ...]
    tags: tuple = ()

    def __post_init__(self):
        ents = tuple(e.images if isinstance(e, Permutation) else tuple(e) for e in self.entries)
        object.__setattr__(self, "entries", ents)
        if len(ents) < 2:
            raise InvalidTuple("a branch tuple needs at least two entries")
        for e in ents:
            if len(e) != self.degree or sorted(e) != list(range(self.degree)):
                raise InvalidTuple("entry is not a permutation of the stated degree")
        if tuple_product(ents) != pid(self.degree):
            raise InvalidTuple("entries do not multiply to the identity")

    @classmethod
    def from_cycle_strings(cls, degree: int, entries: Iterable[str], tags=()) -> "BranchTuple":
        return cls(degree, tuple(Permutation.parse(s, degree).images for s in entries), tuple(tags))

    @property
    def r(self) -> int:
        return len(self.entries)

    def group(self) -> PermGroup:
        return PermGroup(self.degree, self.entries)

    def is_transitive(self) -> bool:
        return _orbit_count(self.entries, self.degree) == 1

    def index_sum(self) -> int:
        return sum(index(e) for e in self.entries)

    def ramification_type(self, drop_identity: bool = True) -> RamificationType:
        return RamificationType(tuple(cycle_type(e) for e in self.entries
                                      if not (drop_identity and e == pid(self.degree))))

    def cycle_strings(self) -> list[str]:
        return [Permutation(e).to_cycle_string() for e in self.entries]

    def to_json(self) -> dict:
        return {"degree": self.degree, "entries": self.cycle_strings(), "tags": list(self.tags)}

    @classmethod
    def from_json(cls, rec: dict) -> "BranchTuple":
        return cls.from_cycle_strings(int(rec["degree"]), rec["entries"], rec.get("tags", ()))

    def __str__(self):
        return " ".join(self.cycle_strings())


def genus(t: BranchTuple, require_transitive: bool = True) -> int:
    """Riemann-Hurwitz: 2(n - 1 + g) = sum of indices.

    With ``require_transitive=False`` the same formula is evaluated with the
    number of orbits in place of 1 (per-component sum).
    """
    s = t.index_sum()
    if s % 2:
        raise OddIndexSum(f"index sum {s} is odd")
    k = _orbit_count(t.entries, t.degree)
    if k != 1 and require_transitive:
        raise NotTransitive("tuple generates an intransitive group")
    return s // 2 - t.degree + k


def is_polynomial_tuple(t: BranchTuple) -> bool:
    n = t.degree
    if not t.is_transitive():
        return False
    try:
        if genus(t) != 0:
            return False
    except OddIndexSum:
        return False
    return any(pcycle_lengths(e) == (n,) for e in t.entries)


def coalesce(t: BranchTuple, i: int) -> BranchTuple:
    """Replace entries i, i+1 (1-based) by their product."""
    if t.r < 3:
        raise IndexOutOfRange("coalescing needs at least three entries")
    if not 1 <= i <= t.r - 1:
        raise IndexOutOfRange(f"position {i} outside 1..{t.r - 1}")
    e = list(t.entries)
    merged = pmul(e[i - 1], e[i])
    return BranchTuple(t.degree, tuple(e[:i - 1] + [merged] + e[i + 1:]), t.tags)


# ---------------------------------------------------------------------------
# braids

@dataclass(frozen=True)
class BraidWord:
    """Letters +i / -i stand for beta_i and its inverse (1-based), applied left to right."""

    letters: tuple[int, ...]

    def check(self, r: int):
        for a in self.letters:
            if a == 0 or abs(a) > r - 1:
                raise IndexOutOfRange(f"braid letter {a} invalid for {r} strands")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple(-a for a in reversed(self.letters)))


def _braid_step(entries: list[tuple], a: int) -> None:
    i = abs(a) - 1
    x, y = entries[i], entries[i + 1]
    if a > 0:
        entries[i], entries[i + 1] = pmul(pmul(x, y), pinv(x)), x
    else:
        entries[i], entries[i + 1] = y, pmul(pmul(pinv(y), x), y)


def braid_act(t: BranchTuple, w: BraidWord | Sequence[int]) -> BranchTuple:
    if not isinstance(w, BraidWord):
        w = BraidWord(tuple(w))
    w.check(t.r)
    e = list(t.entries)
    for a in w.letters:
        _braid_step(e, a)
    return BranchTuple(t.degree, tuple(e), t.tags)


# ---------------------------------------------------------------------------
# canonical forms under simultaneous conjugation

def _relabel(entries: Sequence[tuple], label: Sequence[int]) -> tuple[tuple, ...]:
    """Conjugate by the map point -> label[point]."""
    n = len(label)
    out = []
    for e in entries:
        img = [0] * n
        for x in range(n):
            img[label[x]] = label[e[x]]
        out.append(tuple(img))
    return tuple(out)


def _full_cycle_canon(entries: Sequence[tuple]) -> tuple[tuple, ...]:
    first = entries[0]
    n = len(first)
    best = None
    for start in range(n):
        label = [0] * n
        x = start
        for k in range(n):
            label[x] = k
            x = first[x]
        cand = _relabel(entries, label)
        if best is None or cand[1:] < best[1:]:
            best = cand
    return best


def _bfs_canon(entries: Sequence[tuple]) -> tuple[tuple, ...]:
    n = len(entries[0])
    best = None
    for start in range(n):
        label = [-1] * n
        label[start] = 0
        order = [start]
        k = 0
        while k < len(order):
            x = order[k]
            k += 1
            for e in entries:
                y = e[x]
                if label[y] < 0:
                    label[y] = len(order)
                    order.append(y)
        if len(order) < n:
            raise NotTransitive("canonical form needs a transitive tuple")
        cand = _relabel(entries, label)
        if best is None or cand < best:
            best = cand
    return best


def canonical_entries(entries: Sequence[tuple]) -> tuple[tuple, ...]:
    """Representative of the simultaneous conjugacy class.

    When the first entry is a full cycle it is moved to (0 1 ... n-1) and the
    remaining entries are minimized over the n rotations; otherwise each start
    point defines a breadth-first relabelling and the least result is taken.
    """
    n = len(entries[0])
    if pcycle_lengths(entries[0]) == (n,):
        return _full_cycle_canon(entries)
    return _bfs_canon(entries)


def canonical_form(t: BranchTuple) -> BranchTuple:
    return BranchTuple(t.degree, canonical_entries(t.entries), t.tags)


def braid_orbit(t: BranchTuple, up_to_conjugacy: bool = True,
                budget: int = 2_000_000) -> set[BranchTuple]:
    """Closure under beta_i^{+-1}; elements canonicalized when ``up_to_conjugacy``."""
    key = canonical_entries if up_to_conjugacy else (lambda e: tuple(e))
    start = key(t.entries)
    seen = {start}
    queue = [start]
    k = 0
    r = t.r
    while k < len(queue):
        cur = queue[k]
        k += 1
        for a in list(range(1, r)) + [-a for a in range(1, r)]:
            e = list(cur)
            _braid_step(e, a)
            c = key(e)
            if c not in seen:
                seen.add(c)
                queue.append(c)
                if len(seen) > budget:
                    raise ResourceBudgetExceeded("braid orbit exceeded its budget",
                                                 partial={BranchTuple(t.degree, s) for s in seen})
    return {BranchTuple(t.degree, s, t.tags) for s in seen}


# ---------------------------------------------------------------------------
# random tuples and I/O

def random_tuple(n: int, r: int, rng: random.Random,
                 generator: Sequence[tuple] | None = None) -> BranchTuple:
    """Random product-one tuple; the last entry closes the product."""
    entries = []
    for _ in range(r - 1):
        p = list(range(n))
        rng.shuffle(p)
        entries.append(tuple(p))
    head = tuple_product(entries)
    entries.append(pinv(head))
    return BranchTuple(n, tuple(entries))


def read_jsonl(path) -> list[BranchTuple]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(BranchTuple.from_json(json.loads(line)))
    return out


def write_jsonl(path, tuples: Iterable[BranchTuple], extra: Iterable[dict] | None = None) -> None:
    extra = list(extra) if extra is not None else None
    with open(path, "w") as fh:
        for k, t in enumerate(tuples):
            rec = t.to_json()
            if extra is not None:
                rec.update(extra[k])
            fh.write(json.dumps(rec) + "\n")
