"""
Genus-zero lifting search in U wr V.

A polynomial g with branch cycle tuple (s_1, ..., s_r) in S_d and an
indecomposable h with monodromy U <= S_m compose to f = g(h) whose branch
cycles lie in U wr S_d above the s_i.  Entries are written x = (u_0..u_{d-1}) s
acting by  a + m*b  ->  u_{s(b)}[a] + m*s(b).  Over a cycle b_0 -> b_1 -> ...
of s the product u_{b_0} u_{b_{l-1}} ... u_{b_1} is the local monodromy of h at
the corresponding point of the g-fibre, so a branch point configuration is a
prescription of these cycle-product types.

The first entry is normalized to (c, 1, ..., 1) s_1 with c running over
U-class representatives of full m-cycles; the last entry is read off from the
product.  Hits are deduplicated by the canonical form of the ramification
module.
"""

from __future__ import annotations

import itertools
import math
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import DegreeOverflow, InvalidTuple, ResourceBudgetExceeded
from .perm_core import (CycleType, PermGroup, conjugacy_classes, cycle_type, fingerprint,
                        pcycle_lengths, pcycles, pid, pinv, pmul)
from .ramification import BranchTuple, _orbit_count, canonical_entries, tuple_product
from .wreath import ImprimitiveFrame, kernel_report

HARD_DEGREE_CAP = 32


# ---------------------------------------------------------------------------
# block cycles and lifted elements

def block_cycles(s: tuple) -> list[tuple[int, ...]]:
    """Cycles of s including fixed points, each starting at its minimum, sorted."""
    return pcycles(s, include_fixed=True)


def lift(u: Sequence[tuple], s: tuple, m: int) -> tuple:
    d = len(s)
    out = [0] * (m * d)
    for b in range(d):
        t = s[b]
        ut = u[t]
        off_src, off_dst = m * b, m * t
        for a in range(m):
            out[off_src + a] = off_dst + ut[a]
    return tuple(out)


def split(x: tuple, m: int) -> tuple[list[tuple], tuple]:
    """Inverse of ``lift``: (u, s) with x = (u) s; None if x is not block-compatible."""
    d = len(x) // m
    s = [0] * d
    u: list = [None] * d
    for b in range(d):
        t = x[m * b] // m
        s[b] = t
        comp = []
        for a in range(m):
            y = x[m * b + a]
            if y // m != t:
                raise InvalidTuple("element does not preserve the standard blocks")
            comp.append(y - m * t)
        u[t] = tuple(comp)
    return u, tuple(s)


def cycle_product(u: Sequence[tuple], cyc: Sequence[int]) -> tuple:
    """u_{b_0} u_{b_{l-1}} ... u_{b_1} for cyc = (b_0, b_1, ..., b_{l-1})."""
    m = len(u[0])
    out = pid(m)
    for b in cyc[1:]:
        out = pmul(u[b], out)
    return pmul(u[cyc[0]], out)


def local_types(x: tuple, m: int) -> list[CycleType]:
    """Cycle types of the cycle products over the block cycles of the projection."""
    u, s = split(x, m)
    return [cycle_type(cycle_product(u, c)) for c in block_cycles(s)]


# ---------------------------------------------------------------------------
# specs

def _ct(x) -> CycleType:
    return x if isinstance(x, CycleType) else CycleType.parse(x)


@dataclass
class SearchSpec:
    """Lifting problem.

    ``lift_constraints[i]`` maps a block-cycle index of base entry i (cycles in
    canonical order) to the required cycle type of its cycle product; cycles
    not listed must have identity product.  ``free_positions[i]`` (for base
    entries equal to the identity) lists types to be placed on distinct blocks
    in every possible way.
    """

    U: PermGroup
    base_tuple: BranchTuple
    lift_constraints: list[dict[int, CycleType]]
    free_positions: dict[int, tuple[CycleType, ...]] = field(default_factory=dict)
    require_genus0: bool = True
    require_transitive: bool = True
    require_full_cycle: bool = True
    require_block_group: bool = True
    budget_nodes: int = 50_000_000
    max_degree: int = 24
    seed: int = 0
    label: str = ""

    @property
    def m(self) -> int:
        return self.U.degree

    @property
    def d(self) -> int:
        return self.base_tuple.degree

    @property
    def degree(self) -> int:
        return self.m * self.d

    def to_json(self) -> dict:
        return {
            "U": self.U.to_json(),
            "base_tuple": self.base_tuple.to_json(),
            "lift_constraints": [{str(k): v.as_list() for k, v in c.items()}
                                 for c in self.lift_constraints],
            "free_positions": {str(k): [t.as_list() for t in v] for k, v in self.free_positions.items()},
            "require": {"genus": 0 if self.require_genus0 else None,
                        "transitive": self.require_transitive,
                        "contains_full_cycle": self.require_full_cycle,
                        "block_group": self.require_block_group},
            "budget_nodes": self.budget_nodes,
            "max_degree": self.max_degree,
            "seed": self.seed,
            "label": self.label,
        }

    @classmethod
    def from_json(cls, rec: dict) -> "SearchSpec":
        req = rec.get("require", {})
        return cls(
            U=PermGroup.from_json(rec["U"]),
            base_tuple=BranchTuple.from_json(rec["base_tuple"]),
            lift_constraints=[{int(k): _ct(v) for k, v in c.items()} for c in rec["lift_constraints"]],
            free_positions={int(k): tuple(_ct(t) for t in v)
                            for k, v in rec.get("free_positions", {}).items()},
            require_genus0=req.get("genus", 0) == 0,
            require_transitive=req.get("transitive", True),
            require_full_cycle=req.get("contains_full_cycle", True),
            require_block_group=req.get("block_group", True),
            budget_nodes=int(rec.get("budget_nodes", 50_000_000)),
            max_degree=int(rec.get("max_degree", 24)),
            seed=int(rec.get("seed", 0)),
            label=rec.get("label", ""),
        )


# ---------------------------------------------------------------------------
# candidate generation

def _elements_by_type(U: PermGroup) -> dict[CycleType, list[tuple]]:
    out: dict[CycleType, list[tuple]] = defaultdict(list)
    for g in sorted(U.elements()):
        out[cycle_type(g)].append(g)
    return out


def _cycle_choices(cyc: Sequence[int], K: Sequence[tuple], Uel: Sequence[tuple]) -> Iterator[dict[int, tuple]]:
    """Assignments u_b on the blocks of one cycle with cycle product in K."""
    rest = cyc[1:]
    for combo in itertools.product(Uel, repeat=len(rest)):
        tail = pid(len(Uel[0]))
        for b, v in zip(rest, combo):
            tail = pmul(v, tail)
        tinv = pinv(tail)
        for k in K:
            a = dict(zip(rest, combo))
            a[cyc[0]] = pmul(k, tinv)
            yield a


def candidates(spec: SearchSpec, pos: int, byType=None, Uel=None) -> list[tuple]:
    m, d = spec.m, spec.d
    U = spec.U
    if byType is None:
        byType = _elements_by_type(U)
    if Uel is None:
        Uel = sorted(U.elements())
    s = spec.base_tuple.entries[pos]
    ident_m = pid(m)
    cons = spec.lift_constraints[pos] if pos < len(spec.lift_constraints) else {}
    cycles = block_cycles(s)
    if pos in spec.free_positions:
        if s != pid(d):
            raise InvalidTuple("free positions need an identity base entry")
        types = spec.free_positions[pos]
        out = set()
        for blocks in itertools.permutations(range(d), len(types)):
            pools = [byType.get(t, []) for t in types]
            for pick in itertools.product(*pools):
                u = [ident_m] * d
                for b, v in zip(blocks, pick):
                    u[b] = v
                out.add(lift(u, s, m))
        return sorted(out)
    per_cycle = []
    for ci, cyc in enumerate(cycles):
        t = cons.get(ci)
        K = byType.get(t, []) if t is not None else [ident_m]
        if not K:
            return []
        per_cycle.append(list(_cycle_choices(cyc, K, Uel)))
    out = []
    for combo in itertools.product(*per_cycle):
        u = [ident_m] * d
        for a in combo:
            for b, v in a.items():
                u[b] = v
        out.append(lift(u, s, m))
    return sorted(set(out))


def first_entries(spec: SearchSpec) -> list[tuple]:
    """(c, 1, ..., 1) s_1 for U-class representatives c of the prescribed type."""
    m, d = spec.m, spec.d
    s = spec.base_tuple.entries[0]
    if pcycle_lengths(s) != (d,):
        raise InvalidTuple("the first base entry must be a full cycle")
    cons = spec.lift_constraints[0] if spec.lift_constraints else {}
    t = cons.get(0, CycleType((m,)))
    reps = []
    for cls in conjugacy_classes(spec.U):
        c = min(cls)
        if cycle_type(c) == t:
            reps.append(c)
    out = []
    for c in sorted(reps):
        u = [pid(m)] * d
        u[0] = c
        out.append(lift(u, s, m))
    return out


# ---------------------------------------------------------------------------
# core enumeration

@dataclass
class _Work:
    spec_json: dict
    x1_index: int
    chunk: tuple[int, int]  # slice of the first free position's candidates


def _validate(entries: Sequence[tuple], spec: SearchSpec) -> bool:
    n = spec.degree
    if spec.require_transitive and _orbit_count(entries, n) != 1:
        return False
    if spec.require_genus0:
        s = sum(n - len(pcycles(e, include_fixed=True)) for e in entries)
        k = _orbit_count(entries, n)
        if s % 2 or s // 2 - n + k != 0:
            return False
    if spec.require_full_cycle and not any(pcycle_lengths(e) == (n,) for e in entries):
        return False
    return True


def _record(hits: dict, e: tuple) -> None:
    key = canonical_entries(e)
    old = hits.get(key)
    if old is None or e < old:
        hits[key] = e


def _enumerate(spec: SearchSpec, x1s: Sequence[tuple], cands: list[list[tuple]],
               chunk: tuple[int, int] | None, budget: int) -> tuple[dict, int, bool]:
    """Completions keyed by canonical form, each with its least raw witness
    (which keeps the standard block labelling); returns (hits, nodes, exhaustive)."""
    r = spec.base_tuple.r
    hits: dict = {}
    nodes = 0
    if r == 2:
        last = set(cands[1])
        for x1 in x1s:
            nodes += 1
            y = pinv(x1)
            if y in last:
                e = (x1, y)
                if _validate(e, spec):
                    _record(hits, e)
        return hits, nodes, True
    middle = cands[1:r - 1]
    if chunk is not None:
        middle = [middle[0][chunk[0]:chunk[1]]] + middle[1:]
    last_set = set(cands[r - 1])
    # split the middle positions: left part iterated, right part tabulated with the last entry
    k_best, cost_best = len(middle), math.prod(len(c) for c in middle)
    for k in range(1, len(middle)):
        left = math.prod(len(c) for c in middle[:k])
        right = math.prod(len(c) for c in middle[k:]) * len(last_set)
        if left + right < cost_best:
            k_best, cost_best = k, left + right
    left_pos, right_pos = middle[:k_best], middle[k_best:]
    table: dict[tuple, list[tuple]] = defaultdict(list)
    if right_pos:
        for combo in itertools.product(*right_pos, sorted(last_set)):
            nodes += 1
            if nodes > budget:
                return hits, nodes, False
            table[tuple_product(combo)].append(combo)
    for x1 in x1s:
        for combo in itertools.product(*left_pos):
            nodes += 1
            if nodes > budget:
                return hits, nodes, False
            P = x1
            for y in combo:
                P = pmul(P, y)
            need = pinv(P)
            if right_pos:
                tails = table.get(need, ())
            else:
                tails = [(need,)] if need in last_set else ()
            for tail in tails:
                e = (x1,) + combo + tuple(tail)
                if _validate(e, spec):
                    _record(hits, e)
    return hits, nodes, True


def _run_work(args) -> tuple[list, int, bool]:
    spec_json, x1_index, chunk, budget = args
    spec = SearchSpec.from_json(spec_json)
    x1s = first_entries(spec)
    byType = _elements_by_type(spec.U)
    Uel = sorted(spec.U.elements())
    cands = [None] + [candidates(spec, i, byType, Uel) for i in range(1, spec.base_tuple.r)]
    hits, nodes, ok = _enumerate(spec, [x1s[x1_index]], cands, chunk, budget)
    return sorted(hits.items()), nodes, ok


# ---------------------------------------------------------------------------
# results

@dataclass
class GroupRecord:
    order: int
    fingerprint: dict | None
    kernel: dict | None
    max_block_systems: int | None
    block_group_order: int
    witnesses: list[int]

    def to_json(self) -> dict:
        return {"order": self.order, "fingerprint": self.fingerprint, "kernel": self.kernel,
                "max_block_systems": self.max_block_systems,
                "block_group_order": self.block_group_order, "witnesses": self.witnesses}


@dataclass
class SearchResult:
    tuples: list[BranchTuple]
    groups: list[GroupRecord]
    stats: dict
    exhaustive: bool
    label: str = ""
    rejected_block_group: int = 0

    def to_json(self) -> dict:
        return {"label": self.label, "exhaustive": self.exhaustive, "stats": self.stats,
                "tuples": [t.to_json() for t in self.tuples],
                "groups": [g.to_json() for g in self.groups],
                "rejected_block_group": self.rejected_block_group}


def _group_records(spec: SearchSpec, tuples: Sequence[BranchTuple], with_fingerprint: bool,
                   with_kernel: bool) -> tuple[list[GroupRecord], list[int]]:
    from .perm_core import maximal_block_systems
    records: list[GroupRecord] = []
    groups: list[PermGroup] = []
    keep: list[int] = []
    for idx, t in enumerate(tuples):
        G = PermGroup(spec.degree, t.entries)
        F = ImprimitiveFrame.standard(G, spec.m) if spec.d > 1 else None
        bg = F.U_model.order() if F is not None else G.order()
        if spec.require_block_group and bg != spec.U.order():
            continue
        keep.append(idx)
        merged = False
        for rec, H in zip(records, groups):
            if rec.order == G.order() and all(g in H for g in G.raw_generators):
                rec.witnesses.append(idx)
                merged = True
                break
        if merged:
            continue
        fp = fingerprint(G).to_json() if with_fingerprint else None
        if fp is not None:
            # identical fingerprints share a record (no isomorphism claim beyond that)
            for rec in records:
                if rec.fingerprint == fp:
                    rec.witnesses.append(idx)
                    merged = True
                    break
            if merged:
                continue
        kern = kernel_report(F, cycle_element=t.entries[0]).to_json() if (with_kernel and F is not None) else None
        if kern is not None:
            kern.pop("gamma", None)
        records.append(GroupRecord(G.order(), fp, kern, len(maximal_block_systems(G)), bg, [idx]))
        groups.append(G)
    return records, keep


def search(spec: SearchSpec, jobs: int = 1, with_fingerprint: bool = True,
           with_kernel: bool = True, chunks: int | None = None) -> SearchResult:
    """Exhaustive lifting search; output independent of ``jobs`` and ``seed``."""
    if spec.degree > HARD_DEGREE_CAP or spec.degree > spec.max_degree:
        raise DegreeOverflow(f"ambient degree {spec.degree} above the configured cap")
    t0 = time.time()
    r = spec.base_tuple.r
    if len(spec.lift_constraints) != r:
        raise InvalidTuple("one lift constraint per base entry is required")
    x1s = first_entries(spec)
    byType = _elements_by_type(spec.U)
    Uel = sorted(spec.U.elements())
    cands = [None] + [candidates(spec, i, byType, Uel) for i in range(1, r)]
    hits: dict = {}
    nodes = 0
    exhaustive = True
    if jobs <= 1:
        hits, nodes, exhaustive = _enumerate(spec, x1s, cands, None, spec.budget_nodes)
    else:
        nfirst = len(cands[1]) if r > 2 else 1
        nchunks = chunks or max(1, min(nfirst, 4 * jobs))
        step = max(1, -(-nfirst // nchunks))
        sj = spec.to_json()
        work = []
        for xi in range(len(x1s)):
            if r == 2:
                work.append((sj, xi, None, spec.budget_nodes))
            else:
                for a in range(0, nfirst, step):
                    work.append((sj, xi, (a, min(nfirst, a + step)), spec.budget_nodes))
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for h, nd, ok in ex.map(_run_work, work):
                for key, e in h:
                    _record(hits, e)
                nodes += nd
                exhaustive = exhaustive and ok
        if nodes > spec.budget_nodes:
            exhaustive = False
    tuples = [BranchTuple(spec.degree, hits[k]) for k in sorted(hits)]
    records, keep = _group_records(spec, tuples, with_fingerprint, with_kernel)
    rejected = len(tuples) - len(keep)
    # re-index witnesses to the kept tuples
    remap = {old: new for new, old in enumerate(keep)}
    kept = [tuples[i] for i in keep]
    for rec in records:
        rec.witnesses = [remap[i] for i in rec.witnesses]
    stats = {"nodes": nodes, "hits": len(hits), "kept": len(kept),
             "candidates": [len(c) for c in cands[1:]], "first_entries": len(x1s),
             "wall": round(time.time() - t0, 3)}
    return SearchResult(kept, records, stats, exhaustive, spec.label, rejected)


def revalidate(spec: SearchSpec, t: BranchTuple, base: BranchTuple | None = None) -> bool:
    """Independent re-check: product one, genus, transitivity and projection entrywise."""
    base = base or spec.base_tuple
    if tuple_product(t.entries) != pid(spec.degree):
        return False
    if not _validate(t.entries, spec):
        return False
    projs = []
    for x in t.entries:
        try:
            _, s = split(x, spec.m)
        except InvalidTuple:
            # canonical relabelling may move blocks; fall back to block-system projection
            return _projects_to_conjugate(spec, t, base)
        projs.append(s)
    return canonical_entries(tuple(projs)) == canonical_entries(base.entries) or \
        _projects_to_conjugate(spec, t, base)


def _projects_to_conjugate(spec: SearchSpec, t: BranchTuple, base: BranchTuple) -> bool:
    """Project through a block system of cell size m; compare base tuples up to conjugacy."""
    from .perm_core import all_block_systems
    G = PermGroup(spec.degree, t.entries)
    for B in all_block_systems(G):
        if B.block_size != spec.m:
            continue
        projs = tuple(B.block_action(x) for x in t.entries)
        if _tuple_class_key(projs) == _tuple_class_key(base.entries):
            return True
    return False


def _tuple_class_key(entries):
    d = len(entries[0])
    if _orbit_count(entries, d) == 1:
        return canonical_entries(entries)
    return tuple(sorted(pcycle_lengths(e) for e in entries))


# ---------------------------------------------------------------------------
# branch point configurations

@dataclass(frozen=True)
class Placement:
    """Where the finite branch points of h sit relative to g.

    ``assigned`` pairs (base position, block-cycle index) with a type;
    ``free_groups`` lists groups of types lying over a common non-branch value.
    """

    assigned: tuple[tuple[tuple[int, int], CycleType], ...]
    free_groups: tuple[tuple[CycleType, ...], ...]

    def describe(self, base: BranchTuple) -> str:
        by_pos: dict[int, list[str]] = defaultdict(list)
        for (pos, ci), t in self.assigned:
            cyc = block_cycles(base.entries[pos])[ci]
            kind = "special" if len(cyc) == 1 else f"ramified{len(cyc)}"
            by_pos[pos].append(f"{t.notation()}@{kind}")
        parts = []
        for pos in range(1, base.r):
            gt = cycle_type(base.entries[pos]).notation()
            items = ",".join(sorted(by_pos.get(pos, [])))
            parts.append(f"{gt}:{{{items}}}")
        free = ";".join("{" + ",".join(sorted(t.notation() for t in g)) + "}" for g in self.free_groups)
        return " ".join(parts) + (f" free:{free}" if free else "")

    def class_label(self, base: BranchTuple, h_label: str = "") -> str:
        """Label invariant under reordering branch points of g of equal type."""
        by_pos: dict[int, list[str]] = defaultdict(list)
        for (pos, ci), t in self.assigned:
            cyc = block_cycles(base.entries[pos])[ci]
            kind = "special" if len(cyc) == 1 else f"ramified{len(cyc)}"
            by_pos[pos].append(f"{t.notation()}@{kind}")
        items = []
        for pos in range(1, base.r):
            gt = cycle_type(base.entries[pos]).notation()
            items.append(f"{gt}:{{{','.join(sorted(by_pos.get(pos, [])))}}}")
        items.sort()
        free = sorted("{" + ",".join(sorted(t.notation() for t in g)) + "}" for g in self.free_groups)
        g_label = "g=(" + ",".join(cycle_type(e).notation() for e in base.entries) + ")"
        s = f"{g_label} h={h_label} " + " ".join(items)
        if free:
            s += " free:" + ";".join(free)
        return s


def _set_partitions(items: list) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def placements(base: BranchTuple, h_types: Sequence[CycleType], allow_free: bool = True) -> list[Placement]:
    """All placements of h's finite branch types: on distinct slots over g's finite
    branch values, or over non-branch values of g grouped by common value."""
    slots = [(pos, ci) for pos in range(1, base.r)
             for ci, _ in enumerate(block_cycles(base.entries[pos]))]
    types = sorted(h_types, reverse=True)
    out = set()
    n = len(types)
    for k in range(n + 1):
        if k < n and not allow_free:
            continue
        for chosen in itertools.combinations(range(n), k):
            placed = [types[i] for i in chosen]
            free = [types[i] for i in range(n) if i not in chosen]
            for sl in itertools.permutations(slots, k):
                assigned = tuple(sorted(zip(sl, placed)))
                fgs = set()
                for part in _set_partitions(free):
                    fgs.add(tuple(sorted(tuple(sorted(g, reverse=True)) for g in part)))
                if not free:
                    fgs = {()}
                for fg in fgs:
                    if len(fg) and max(len(g) for g in fg) > base.degree:
                        continue
                    out.add(Placement(assigned, fg))
    return sorted(out, key=lambda p: (len(p.free_groups), repr(p)))


def spec_for_placement(U: PermGroup, base: BranchTuple, pl: Placement, **kw) -> SearchSpec:
    m = U.degree
    entries = list(base.entries)
    cons: list[dict[int, CycleType]] = [{0: CycleType((m,))}] + [{} for _ in entries[1:]]
    for (pos, ci), t in pl.assigned:
        cons[pos][ci] = t
    free = {}
    for g in pl.free_groups:
        entries.append(pid(base.degree))
        cons.append({})
        free[len(entries) - 1] = tuple(g)
    bt = BranchTuple(base.degree, tuple(entries))
    return SearchSpec(U, bt, cons, free, **kw)


# ---------------------------------------------------------------------------
# base tuples

def enumerate_base_tuples(V: PermGroup, types: Sequence[CycleType | str],
                          budget: int = 10_000_000) -> list[BranchTuple]:
    """Product-one tuples generating exactly V with entry i of type types[i], up to conjugacy."""
    types = [_ct(t) for t in types]
    d = V.degree
    if d > 16:
        raise DegreeOverflow("base tuples are enumerated only up to degree 16")
    byType = _elements_by_type(V)
    reps = sorted(min(c) for c in conjugacy_classes(V) if cycle_type(min(c)) == types[0])
    target = V.order()
    out = set()
    nodes = 0
    pools = [byType.get(t, []) for t in types[1:-1]]
    last_type = types[-1]
    for x1 in reps:
        for combo in itertools.product(*pools):
            nodes += 1
            if nodes > budget:
                raise ResourceBudgetExceeded("base tuple enumeration over budget",
                                             partial=[BranchTuple(d, e) for e in sorted(out)])
            P = x1
            for y in combo:
                P = pmul(P, y)
            last = pinv(P)
            if cycle_type(last) != last_type:
                continue
            e = (x1,) + combo + (last,)
            if _orbit_count(e, d) != 1:
                continue
            if PermGroup(d, e).order() != target:
                continue
            out.add(canonical_entries(e))
    return [BranchTuple(d, e) for e in sorted(out)]


# ---------------------------------------------------------------------------
# naive reference enumerator (small degrees)

def naive_search(spec: SearchSpec) -> set[tuple]:
    """Brute force over all of U^d per position, no normalization; degree <= 10."""
    if spec.degree > 10:
        raise DegreeOverflow("the naive enumerator is limited to degree 10")
    m, d = spec.m, spec.d
    Uel = sorted(spec.U.elements())
    r = spec.base_tuple.r
    pools = []
    for pos in range(r):
        s = spec.base_tuple.entries[pos]
        cycles = block_cycles(s)
        cons = spec.lift_constraints[pos]
        pool = []
        for u in itertools.product(Uel, repeat=d):
            if pos in spec.free_positions:
                types = sorted(spec.free_positions[pos], reverse=True)
                nontriv = sorted((cycle_type(v) for v in u if v != pid(m)), reverse=True)
                if nontriv != types:
                    continue
            else:
                ok = True
                for ci, c in enumerate(cycles):
                    want = cons.get(ci, CycleType((1,) * m))
                    if cycle_type(cycle_product(u, c)) != want:
                        ok = False
                        break
                if not ok:
                    continue
            pool.append(lift(list(u), s, m))
        pools.append(pool)
    last = set(pools[-1])
    out = set()
    for combo in itertools.product(*pools[:-1]):
        y = pinv(tuple_product(combo))
        if y in last:
            e = combo + (y,)
            if _validate(e, spec):
                out.add(canonical_entries(e))
    return out


def polynomial_types(V: PermGroup, max_entries: int = 6) -> list[tuple[CycleType, ...]]:
    """Genus-zero ramification types ([n], t_2, ..., t_r) realized by generating tuples of V."""
    n = V.degree
    full = CycleType((n,))
    present = sorted({cycle_type(min(c)) for c in conjugacy_classes(V)} - {CycleType((1,) * n)},
                     reverse=True)
    out = []

    def rec(start: int, left: int, chosen: list[CycleType]):
        if left == 0:
            if chosen:
                types = (full,) + tuple(chosen)
                if enumerate_base_tuples(V, types):
                    out.append(types)
            return
        if len(chosen) >= max_entries - 1:
            return
        for k in range(start, len(present)):
            t = present[k]
            if t.index <= left:
                rec(k, left - t.index, chosen + [t])

    rec(0, n - 1, [])
    return out
