"""
Exact linear algebra over F_p for permutation and monomial modules.

Submodules are stored by their reduced row echelon basis, so two submodules
are equal exactly when their basis tuples are equal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, HypothesisViolated
from .perm_core import (PermGroup, alternating_group, cyclic_group, dihedral_group, pcycles, pmul,
                        symmetric_group)


# ---------------------------------------------------------------------------
# vectors and row reduction

@dataclass(frozen=True)
class FpVector:
    p: int
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) % self.p for c in self.coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coords) if c]

    def to_json(self) -> dict:
        return {"p": self.p, "coords": list(self.coords)}

    @classmethod
    def from_json(cls, rec: dict) -> "FpVector":
        return cls(int(rec["p"]), tuple(rec["coords"]))


def unit(p: int, n: int, i: int, scale: int = 1) -> tuple[int, ...]:
    v = [0] * n
    v[i % n] = scale % p
    return tuple(v)


def rref(rows: Iterable[Sequence[int]], p: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form over F_p, zero rows dropped."""
    mat = [[x % p for x in r] for r in rows]
    for r in mat:
        if len(r) != n:
            raise DimensionMismatch(f"row of length {len(r)} in ambient dimension {n}")
    out: list[list[int]] = []
    pivots: list[int] = []
    for col in range(n):
        piv = None
        for k, r in enumerate(mat):
            if r[col]:
                piv = k
                break
        if piv is None:
            continue
        row = mat.pop(piv)
        inv = pow(row[col], p - 2, p)
        row = [(x * inv) % p for x in row]
        for k, r in enumerate(mat):
            if r[col]:
                f = r[col]
                mat[k] = [(a - f * b) % p for a, b in zip(r, row)]
        for k, r in enumerate(out):
            if r[col]:
                f = r[col]
                out[k] = [(a - f * b) % p for a, b in zip(r, row)]
        out.append(row)
        pivots.append(col)
        mat = [r for r in mat if any(r)]
    order = sorted(range(len(out)), key=lambda k: pivots[k])
    return tuple(tuple(out[k]) for k in order)


@dataclass(frozen=True)
class FpSubmodule:
    """Subspace of F_p^n given by its canonical RREF basis."""

    p: int
    n: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, p: int, n: int, vectors: Iterable[Sequence[int]]) -> "FpSubmodule":
        return cls(p, n, rref(vectors, p, n))

    @classmethod
    def zero(cls, p: int, n: int) -> "FpSubmodule":
        return cls(p, n, ())

    @classmethod
    def full(cls, p: int, n: int) -> "FpSubmodule":
        return cls.span(p, n, [unit(p, n, i) for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains_vector(self, v: Sequence[int]) -> bool:
        return rref(list(self.basis) + [tuple(v)], self.p, self.n) == self.basis

    def contains(self, other: "FpSubmodule") -> bool:
        return all(self.contains_vector(b) for b in other.basis)

    def __add__(self, other: "FpSubmodule") -> "FpSubmodule":
        return FpSubmodule.span(self.p, self.n, list(self.basis) + list(other.basis))

    def intersect(self, other: "FpSubmodule") -> "FpSubmodule":
        # Zassenhaus: rows (a | a) for a in A and (b | 0) for b in B
        n, p = self.n, self.p
        rows = [tuple(a) + tuple(a) for a in self.basis] + [tuple(b) + (0,) * n for b in other.basis]
        red = rref(rows, p, 2 * n)
        inter = [r[n:] for r in red if not any(r[:n])]
        return FpSubmodule.span(p, n, inter)

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "basis": [list(b) for b in self.basis]}


# ---------------------------------------------------------------------------
# monomial actions

@dataclass(frozen=True)
class MonomialAction:
    """Action of a permutation group on F_p^n twisted by per-generator scalars.

    ``character[k]`` lists, for generator k, the scalar multiplying the image
    coordinate of each point; all ones gives the permutation module.
    """

    group: PermGroup
    p: int
    character: tuple[tuple[int, ...], ...] | None = None

    @property
    def n(self) -> int:
        return self.group.degree

    def scalars(self, k: int) -> tuple[int, ...]:
        if self.character is None:
            return (1,) * self.n
        return self.character[k]

    def apply(self, k: int, v: Sequence[int]) -> tuple[int, ...]:
        """g_k . v where (g.v)[g(i)] = c_i v[i]."""
        g = self.group.raw_generators[k]
        c = self.scalars(k)
        out = [0] * self.n
        for i, x in enumerate(v):
            if x:
                out[g[i]] = (c[i] * x) % self.p
        return tuple(out)

    def apply_perm(self, g: tuple, v: Sequence[int]) -> tuple[int, ...]:
        """Permutation-module action of an arbitrary element."""
        out = [0] * self.n
        for i, x in enumerate(v):
            out[g[i]] = x % self.p
        return tuple(out)

    def word_action(self, word: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        for k in reversed(word):
            v = self.apply(k, v)
        return v

    def spot_check_character(self, trials: int = 1000, seed: int = 0, max_len: int = 12) -> bool:
        """Words evaluating to the identity permutation must act as the identity."""
        if self.character is None:
            return True
        rng = random.Random(seed)
        gens = self.group.raw_generators
        n = self.n
        ident = tuple(range(n))
        probe = tuple(range(1, n + 1))
        tested = 0
        for _ in range(trials * 20):
            if tested >= trials:
                break
            length = rng.randint(1, max_len)
            word = [rng.randrange(len(gens)) for _ in range(length)]
            g = ident
            for k in word:
                g = pmul(gens[k], g)
            # close the word with powers of its own element so it becomes a relator
            order = _perm_order(g)
            full = word * order
            tested += 1
            if self.word_action(full, probe) != tuple(x % self.p for x in probe):
                return False
        return True


def _perm_order(g: tuple) -> int:
    from .perm_core import porder
    return porder(g)


def orbit_span(action: MonomialAction, v: FpVector | Sequence[int]) -> FpSubmodule:
    """F_p-span of the orbit of v, closed under the generators."""
    coords = v.coords if isinstance(v, FpVector) else tuple(x % action.p for x in v)
    if isinstance(v, FpVector) and v.p != action.p:
        raise DimensionMismatch("field characteristic differs from the action")
    if len(coords) != action.n:
        raise DimensionMismatch(f"vector of length {len(coords)} for degree {action.n}")
    p, n = action.p, action.n
    basis = rref([coords], p, n)
    frontier = list(basis)
    while frontier:
        new = []
        for b in frontier:
            for k in range(len(action.group.raw_generators)):
                w = action.apply(k, b)
                ext = rref(list(basis) + [w], p, n)
                if ext != basis:
                    basis = ext
                    new.append(w)
        frontier = new
    M = FpSubmodule(p, n, basis)
    assert is_action_closed(action, M)
    return M


def is_action_closed(action: MonomialAction, M: FpSubmodule) -> bool:
    return all(M.contains_vector(action.apply(k, b))
               for b in M.basis for k in range(len(action.group.raw_generators)))


# ---------------------------------------------------------------------------
# distinguished submodules

def diag_module(p: int, n: int) -> FpSubmodule:
    return FpSubmodule.span(p, n, [(1,) * n])


def aug_module(p: int, n: int) -> FpSubmodule:
    return FpSubmodule.span(p, n, [tuple(1 if k == i else (-1 if k == i + 1 else 0) for k in range(n))
                                   for i in range(n - 1)])


def aug_minus_module(p: int, n: int) -> FpSubmodule:
    """Vectors with alternating-sign coordinate sum zero: a_1 - a_2 + ... - a_n = 0."""
    if n % 2:
        raise HypothesisViolated("the alternating augmentation needs an even length")
    return FpSubmodule.span(p, n, [tuple(1 if k == i else (1 if k == i + 1 else 0) for k in range(n))
                                   for i in range(n - 1)])


def _block_sum(p: int, n: int, o: int, local: FpSubmodule) -> FpSubmodule:
    """Copies of a length-o module on the residue classes j, j + n/o, j + 2n/o, ..."""
    step = n // o
    rows = []
    for j in range(step):
        for b in local.basis:
            v = [0] * n
            for k in range(o):
                v[j + k * step] = b[k]
            rows.append(v)
    return FpSubmodule.span(p, n, rows)


def aug_power(p: int, n: int, o: int) -> FpSubmodule:
    return _block_sum(p, n, o, aug_module(p, o))


def aug_minus_power(p: int, n: int, o: int) -> FpSubmodule:
    return _block_sum(p, n, o, aug_minus_module(p, o))


@dataclass(frozen=True)
class DistinguishedSubmodule:
    kind: str  # zero, diag, aug, aug_minus, full, aug_power, aug_minus_power, other
    param: int | None = None  # o for the powers, dim for other

    def __str__(self):
        return self.kind if self.param is None else f"{self.kind}({self.param})"

    def build(self, p: int, n: int) -> FpSubmodule | None:
        if self.kind == "zero":
            return FpSubmodule.zero(p, n)
        if self.kind == "diag":
            return diag_module(p, n)
        if self.kind == "aug":
            return aug_module(p, n)
        if self.kind == "aug_minus":
            return aug_minus_module(p, n)
        if self.kind == "full":
            return FpSubmodule.full(p, n)
        if self.kind == "aug_power":
            return aug_power(p, n, self.param)
        if self.kind == "aug_minus_power":
            return aug_minus_power(p, n, self.param)
        return None


def classify_submodule(M: FpSubmodule) -> DistinguishedSubmodule:
    """Identify M against the closed forms, else report other(dim)."""
    p, n = M.p, M.n
    if M.dim == 0:
        return DistinguishedSubmodule("zero")
    if M.dim == n:
        return DistinguishedSubmodule("full")
    if M == diag_module(p, n):
        return DistinguishedSubmodule("diag")
    if n >= 2 and M == aug_module(p, n):
        return DistinguishedSubmodule("aug")
    if n % 2 == 0 and M == aug_minus_module(p, n):
        return DistinguishedSubmodule("aug_minus")
    for o in range(2, n):
        if n % o:
            continue
        if M == aug_power(p, n, o):
            return DistinguishedSubmodule("aug_power", o)
        if o % 2 == 0 and M == aug_minus_power(p, n, o):
            return DistinguishedSubmodule("aug_minus_power", o)
    return DistinguishedSubmodule("other", M.dim)


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, lowest degree first)

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def fp_poly(coeffs: Iterable[int], p: int) -> list[int]:
    return _trim([c % p for c in coeffs])


def fp_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = fp_poly(a, p)
    b = fp_poly(b, p)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = (a[-1] * inv) % p
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] = (a[i + shift] - f * c) % p
        _trim(a)
    return _trim(q), a


def fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    """Monic gcd."""
    a = fp_poly(a, p)
    b = fp_poly(b, p)
    while b:
        _, r = fp_divmod(a, b, p)
        a, b = b, r
    if not a:
        return []
    inv = pow(a[-1], p - 2, p)
    return [(c * inv) % p for c in a]


def xq_minus_one(q: int, p: int) -> list[int]:
    f = [0] * (q + 1)
    f[0] = p - 1
    f[q] = 1
    return f


def cyclic_code(p: int, q: int, f: Sequence[int]) -> FpSubmodule:
    """Cyclic code of length q with generator gcd(X^q - 1, f).

    Vectors are coefficient sequences of c(X) = sum c_i X^i with X acting as
    the cyclic shift e_i -> e_{i+1}.
    """
    g = fp_gcd(xq_minus_one(q, p), list(f), p) if any(c % p for c in f) else xq_minus_one(q, p)
    deg = len(g) - 1
    rows = []
    for s in range(q - deg):
        v = [0] * q
        for i, c in enumerate(g):
            v[(i + s) % q] = c
        rows.append(v)
    return FpSubmodule.span(p, q, rows)


def code_polynomial(v: Sequence[int]) -> list[int]:
    return list(v)


# ---------------------------------------------------------------------------
# closed-form predictions

def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n ** 0.5) + 1))


def additive_order(i: int, q: int) -> int:
    from math import gcd
    return q // gcd(i % q, q)


def lemma_prediction(lemma_id: str, params: dict) -> DistinguishedSubmodule:
    """Closed-form span predicted for a short orbit vector.

    lemma ids: "3.2" (C_q, v = e_i + mu e_j, primes p,q with p != 1 mod q),
    "3.3" (C_q, v = e_j + e_{i+j}), "3.4" (C_q over F_2, reflection-invariant
    support of size 4), "3.5" (D_q over F_2, support of size 3), "3.6" (S_4,
    support of size 1..3; the prediction is a lower bound "contains aug").
    """
    lid = str(lemma_id)
    p = int(params["p"])
    if lid == "3.2":
        q, mu = int(params["q"]), int(params["mu"]) % p
        if not (_is_prime(p) and _is_prime(q)):
            raise HypothesisViolated("p and q must be prime")
        if p % q == 1:
            raise HypothesisViolated("requires p != 1 mod q")
        if mu == 0:
            raise HypothesisViolated("mu must be a unit")
        return DistinguishedSubmodule("aug" if mu == p - 1 else "full")
    if lid == "3.3":
        q, i = int(params["q"]), int(params["i"])
        if q < 2 or i % q == 0:
            raise HypothesisViolated("need q >= 2 and i != 0 mod q")
        o = additive_order(i, q)
        if "o" in params and int(params["o"]) != o:
            raise HypothesisViolated("o must be the additive order of i")
        if p == 2:
            return DistinguishedSubmodule("aug" if o == q else "aug_power", None if o == q else o)
        if o % 2 == 0:
            return DistinguishedSubmodule("aug_minus" if o == q else "aug_minus_power",
                                          None if o == q else o)
        return DistinguishedSubmodule("full")
    if lid == "3.4":
        q = int(params["q"])
        support = sorted(int(s) % q for s in params["support"])
        if p != 2 or q < 5 or not _is_prime(q):
            raise HypothesisViolated("needs p = 2 and a prime q >= 5")
        if len(set(support)) != 4 or not _reflection_invariant(support, q):
            raise HypothesisViolated("support must have size 4 and be reflection invariant")
        return DistinguishedSubmodule("aug")
    if lid == "3.5":
        q = int(params["q"])
        support = sorted(set(int(s) % q for s in params["support"]))
        if p != 2 or q < 5 or not _is_prime(q) or len(support) != 3:
            raise HypothesisViolated("needs p = 2, prime q >= 5 and support of size 3")
        return DistinguishedSubmodule("full")
    if lid == "3.6":
        v = [int(x) % p for x in params["v"]]
        if len(v) != 4 or not 1 <= sum(1 for x in v if x) <= 3:
            raise HypothesisViolated("needs v in F_p^4 with support of size 1..3")
        return DistinguishedSubmodule("aug")
    raise HypothesisViolated(f"unknown lemma id {lemma_id}")


def _reflection_invariant(support: Sequence[int], q: int) -> bool:
    s = set(support)
    return any({(c - x) % q for x in s} == s for c in range(q))


def prediction_module(lemma_id: str, params: dict, n: int) -> FpSubmodule:
    pred = lemma_prediction(lemma_id, params)
    M = pred.build(int(params["p"]), n)
    assert M is not None
    return M


# ---------------------------------------------------------------------------
# lemma instance enumeration (for suites and tests)

@dataclass
class LemmaRecord:
    lemma: str
    params: dict
    predicted: str
    computed: str
    match: bool

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "params": self.params, "predicted": self.predicted,
                "computed": self.computed, "match": self.match}


def _primes_upto(n: int) -> list[int]:
    return [k for k in range(2, n + 1) if _is_prime(k)]


def lemma_instances(max_pq: int = 13) -> Iterable[tuple[str, dict]]:
    """All admissible parameter sets with p, q <= max_pq, up to the acting symmetry."""
    primes = _primes_upto(max_pq)
    for p in primes:
        for q in primes:
            if p % q == 1:
                continue
            for j in range(1, q):
                for mu in range(1, p):
                    yield "3.2", {"p": p, "q": q, "i": 0, "j": j, "mu": mu}
    for p in primes:
        for q in range(2, max_pq + 1):
            for i in range(1, q):
                yield "3.3", {"p": p, "q": q, "i": i, "j": 0}
    for q in primes:
        if q < 5:
            continue
        seen = set()
        for sup in combinations(range(q), 4):
            if 0 not in sup or not _reflection_invariant(sup, q):
                continue
            key = _cyclic_canon(sup, q)
            if key in seen:
                continue
            seen.add(key)
            yield "3.4", {"p": 2, "q": q, "support": list(sup)}
    for q in primes:
        if q < 5:
            continue
        seen = set()
        for sup in combinations(range(q), 3):
            key = _dihedral_canon(sup, q)
            if key in seen:
                continue
            seen.add(key)
            yield "3.5", {"p": 2, "q": q, "support": list(sup)}
    for p in primes:
        seen = set()
        for v in _all_vectors(p, 4):
            k = sum(1 for x in v if x)
            if not 1 <= k <= 3:
                continue
            key = tuple(sorted(v))
            if key in seen:
                continue
            seen.add(key)
            yield "3.6", {"p": p, "v": list(v)}


def _cyclic_canon(sup, q):
    return min(tuple(sorted((x + s) % q for x in sup)) for s in range(q))


def _dihedral_canon(sup, q):
    opts = []
    for s in range(q):
        opts.append(tuple(sorted((x + s) % q for x in sup)))
        opts.append(tuple(sorted((-x + s) % q for x in sup)))
    return min(opts)


def _all_vectors(p, n):
    if n == 0:
        yield ()
        return
    for rest in _all_vectors(p, n - 1):
        for x in range(p):
            yield rest + (x,)


def compute_lemma_span(lemma_id: str, params: dict) -> FpSubmodule:
    p = int(params["p"])
    if lemma_id == "3.2":
        q = int(params["q"])
        v = [0] * q
        v[int(params["i"]) % q] = 1
        v[int(params["j"]) % q] = (v[int(params["j"]) % q] + int(params["mu"])) % p
        return orbit_span(MonomialAction(cyclic_group(q), p), v)
    if lemma_id == "3.3":
        q = int(params["q"])
        j = int(params.get("j", 0))
        v = [0] * q
        v[j % q] += 1
        v[(j + int(params["i"])) % q] += 1
        return orbit_span(MonomialAction(cyclic_group(q), p), v)
    if lemma_id == "3.4":
        q = int(params["q"])
        v = [1 if k in params["support"] else 0 for k in range(q)]
        return orbit_span(MonomialAction(cyclic_group(q), 2), v)
    if lemma_id == "3.5":
        q = int(params["q"])
        v = [1 if k in params["support"] else 0 for k in range(q)]
        return orbit_span(MonomialAction(dihedral_group(q), 2), v)
    if lemma_id == "3.6":
        return orbit_span(MonomialAction(symmetric_group(4), p), params["v"])
    raise HypothesisViolated(f"unknown lemma id {lemma_id}")


def check_lemma_instance(lemma_id: str, params: dict) -> LemmaRecord:
    pred = lemma_prediction(lemma_id, params)
    M = compute_lemma_span(lemma_id, params)
    n = M.n
    target = pred.build(int(params["p"]), n)
    if lemma_id == "3.6":
        ok = M.contains(target)
        computed = f"{classify_submodule(M)} (contains aug: {ok})"
        return LemmaRecord(lemma_id, params, "contains aug", computed, ok)
    got = classify_submodule(M)
    return LemmaRecord(lemma_id, params, str(pred), str(got), M == target)


def invariant_subspaces(action: MonomialAction) -> list[FpSubmodule]:
    """All invariant subspaces, by closing spans of every vector and summing.

    Exhaustive over the p^n vectors, so only for small p^n.
    """
    p, n = action.p, action.n
    cyclic = set()
    for v in _all_vectors(p, n):
        cyclic.add(orbit_span(action, v))
    mods = set(cyclic)
    frontier = list(mods)
    while frontier:
        new = []
        for a in frontier:
            for b in list(cyclic):
                c = a + b
                if c not in mods:
                    mods.add(c)
                    new.append(c)
        frontier = new
    return sorted(mods, key=lambda M: (M.dim, M.basis))


def _scaled_multisets(p: int, n: int) -> Iterator[tuple[int, ...]]:
    """Sorted vectors, one per class under nonzero scaling."""
    for v in combinations_with_replacement(range(p), n):
        if all(tuple(sorted((lam * x) % p for x in v)) >= v for lam in range(2, p)):
            yield v


def symmetric_invariant_subspaces(p: int, n: int, alternating: bool = False) -> list[FpSubmodule]:
    """Invariant subspaces of F_p^n under S_n (or A_n), from cyclic spans.

    Every orbit under S_n times scalars meets the sorted vectors; an A_n orbit
    meets a sorted vector or its image under (0 1).
    """
    V = alternating_group(n) if alternating else symmetric_group(n)
    act = MonomialAction(V, p)
    cyclic = set()
    for v in _scaled_multisets(p, n):
        cyclic.add(orbit_span(act, v))
        if alternating:
            cyclic.add(orbit_span(act, (v[1], v[0]) + v[2:]))
    mods = set(cyclic)
    frontier = list(mods)
    while frontier:
        new = []
        for a in frontier:
            for b in list(cyclic):
                c = a + b
                if c not in mods:
                    mods.add(c)
                    new.append(c)
        frontier = new
    return sorted(mods, key=lambda M: (M.dim, M.basis))


def full_cycle_power_check(m: int, n: int, trials: int = 100, seed: int = 0) -> list[bool]:
    """For random mn-cycles s in C_n wr S_m, test that s^m is a nonzero diagonal element.

    Elements are pairs (a, tau) with a in Z_n^m and tau in S_m acting by
    (a, tau)(k, x) = (tau(k), x + a[k]); full cycles are drawn uniformly by
    rejection.
    """
    rng = random.Random(seed)
    results = []
    while len(results) < trials:
        tau = list(range(m))
        rng.shuffle(tau)
        a = [rng.randrange(n) for _ in range(m)]
        perm = tuple(tau[k] * n + (x + a[k]) % n for k in range(m) for x in range(n))
        if len(pcycles(perm)) != 1 or len(pcycles(perm)[0]) != m * n:
            continue
        sm = perm
        for _ in range(m - 1):
            sm = pmul(perm, sm)
        shifts = []
        for k in range(m):
            img = sm[k * n]
            if img // n != k:
                shifts = None
                break
            shifts.append((img - k * n) % n)
            # every point of the block must shift by the same amount
            if any(sm[k * n + x] != k * n + (x + shifts[-1]) % n for x in range(n)):
                shifts = None
                break
        ok = shifts is not None and len(set(shifts)) == 1 and shifts[0] != 0
        results.append(ok)
    return results
