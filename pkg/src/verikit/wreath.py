"""
Imprimitive structure of permutation groups G <= U wr V.

A frame fixes a block system of G with d cells of size m.  Points of a cell
are labelled locally by their sorted position, so cell k contributes local
points 0..m-1.  The block kernel, stabilizers of block data and centralizer
style kernels are all obtained from one device: let G act on extra label
points alongside its natural action and read off a pointwise stabilizer from
a chain whose base starts at the labels.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

import sympy

from .errors import HypothesisViolated, InvalidFrame, NotInKernel, NotTransitive
from .linmod import (DistinguishedSubmodule, FpSubmodule, aug_minus_module, aug_module,
                     classify_submodule, diag_module, rref)
from .perm_core import (BlockSystem, PermGroup, StabChain, _factorize, all_block_systems,
                        is_split_extension, is_transitive, maximal_block_systems, pconj, pid, pinv,
                        pmul, porder, ppow, socle_small)


# ---------------------------------------------------------------------------
# kernels of induced actions

def kernel_of_action(degree: int, gens: Sequence[tuple],
                     extra: Sequence[tuple]) -> tuple[list[tuple], int]:
    """Generators and order of the kernel of an action given on generators.

    ``extra[k]`` is the image tuple of generator k on N extra points.  The
    action must be a homomorphism (the caller guarantees this).
    """
    N = len(extra[0]) if extra else 0
    ext = [tuple(g) + tuple(degree + x for x in e) for g, e in zip(gens, extra)]
    chain = StabChain(degree + N, ext, base_prefix=range(degree, degree + N))
    gens_k = [h[:degree] for h in chain.stabilizer_gens(N)]
    order = 1
    for tr in chain.trans[N:]:
        order *= len(tr)
    ident = pid(degree)
    return [g for g in dict.fromkeys(gens_k) if g != ident], order


# ---------------------------------------------------------------------------
# wreath products

def wreath_product(U: PermGroup, V: PermGroup) -> PermGroup:
    """Imprimitive U wr V on m*d points; point a + m*b is local point a of block b."""
    m, d = U.degree, V.degree
    gens = []
    for u in U.raw_generators:
        gens.append(tuple(u[i] if i < m else i for i in range(m * d)))
    for v in V.raw_generators:
        gens.append(tuple(i % m + m * v[i // m] for i in range(m * d)))
    return PermGroup(m * d, gens)


def embed_local(s: tuple, cell: Sequence[int], degree: int) -> tuple:
    """Permutation acting as the local permutation s on one cell, fixing the rest."""
    img = list(range(degree))
    for a, x in enumerate(cell):
        img[x] = cell[s[a]]
    return tuple(img)


def embed_tuple(parts: Sequence[tuple], m: int) -> tuple:
    """(u_0, ..., u_{d-1}) in U^d on the standard labelling."""
    out = []
    for b, u in enumerate(parts):
        out.extend(m * b + u[a] for a in range(m))
    return tuple(out)


def block_perm_standard(v: tuple, m: int) -> tuple:
    return tuple(i % m + m * v[i // m] for i in range(m * len(v)))


# ---------------------------------------------------------------------------
# frames

@dataclass(frozen=True)
class ImprimitiveFrame:
    ambient: PermGroup
    blocks: BlockSystem
    U_model: PermGroup
    V_model: PermGroup

    @property
    def m(self) -> int:
        return self.blocks.block_size

    @property
    def d(self) -> int:
        return self.blocks.num_blocks

    @property
    def degree(self) -> int:
        return self.ambient.degree

    @classmethod
    def from_blocks(cls, G: PermGroup, blocks: BlockSystem) -> "ImprimitiveFrame":
        if blocks.degree != G.degree or not blocks.is_invariant(G):
            raise InvalidFrame("block system is not invariant under the group")
        if not is_transitive(G):
            raise InvalidFrame("frames need a transitive ambient group")
        V = PermGroup(blocks.num_blocks, [blocks.block_action(g) for g in G.raw_generators])
        frame = cls(G, blocks, PermGroup(blocks.block_size, []), V)
        U = PermGroup(blocks.block_size, frame._block_stabilizer_locals(0))
        return cls(G, blocks, U, V)

    @classmethod
    def standard(cls, G: PermGroup, m: int) -> "ImprimitiveFrame":
        n = G.degree
        if n % m:
            raise InvalidFrame("block size must divide the degree")
        cells = tuple(tuple(range(m * b, m * b + m)) for b in range(n // m))
        return cls.from_blocks(G, BlockSystem(cells))

    @classmethod
    def detect(cls, G: PermGroup, block_size: int) -> "ImprimitiveFrame":
        """Frame from the first block system (canonical order) with the given cell size."""
        if not is_transitive(G):
            raise NotTransitive("group is not transitive")
        systems = [B for B in all_block_systems(G) if B.block_size == block_size]
        if not systems:
            raise InvalidFrame(f"no block system with cells of size {block_size}")
        return cls.from_blocks(G, systems[0])

    # -- local coordinates

    def block_of(self) -> list[int]:
        return self.blocks.block_of()

    def block_image(self, x: tuple) -> tuple:
        return self.blocks.block_action(x)

    def local(self, x: tuple, k: int) -> tuple:
        """Local permutation induced from cell k to its image cell."""
        lookup = self.block_of()
        cell = self.blocks.blocks[k]
        target = self.blocks.blocks[lookup[x[cell[0]]]]
        pos = {p: a for a, p in enumerate(target)}
        return tuple(pos[x[p]] for p in cell)

    def embed(self, s: tuple, k: int) -> tuple:
        return embed_local(s, self.blocks.blocks[k], self.degree)

    def _block_label_images(self, gens: Sequence[tuple]) -> list[tuple]:
        return [self.blocks.block_action(g) for g in gens]

    def _block_stabilizer_locals(self, k: int) -> list[tuple]:
        gens = list(self.ambient.raw_generators)
        ext = [tuple(g) + tuple(self.degree + x for x in self.blocks.block_action(g)) for g in gens]
        chain = StabChain(self.degree + self.d, ext, base_prefix=[self.degree + k])
        stab = [h[:self.degree] for h in chain.stabilizer_gens(1)]
        return [self.local(h, k) for h in stab]

    def transports(self) -> list[tuple]:
        """t_k in G mapping cell 0 to cell k, chosen by breadth-first search on blocks."""
        gens = list(self.ambient.raw_generators)
        bgens = self._block_label_images(gens)
        tr = {0: pid(self.degree)}
        queue = [0]
        i = 0
        while i < len(queue):
            b = queue[i]
            i += 1
            for g, bg in zip(gens, bgens):
                c = bg[b]
                if c not in tr:
                    tr[c] = pmul(g, tr[b])
                    queue.append(c)
        return [tr[k] for k in range(self.d)]

    def transport_local(self, s: tuple) -> list[tuple]:
        """Copies of a local permutation on cell 0, carried to every cell by conjugation."""
        base = self.embed(s, 0)
        return [pconj(base, t) for t in self.transports()]

    def to_json(self) -> dict:
        return {"ambient": self.ambient.to_json(), "block_size": self.m,
                "blocks": [list(b) for b in self.blocks.blocks]}


# ---------------------------------------------------------------------------
# block kernel and supports

def block_kernel(F: ImprimitiveFrame) -> PermGroup:
    gens = list(F.ambient.raw_generators)
    if not gens:
        return PermGroup(F.degree, [])
    gens_k, order = kernel_of_action(F.degree, gens, F._block_label_images(gens))
    K = PermGroup(F.degree, gens_k)
    assert K.order() == order
    assert order * F.V_model.order() == F.ambient.order()
    return K


def in_kernel(F: ImprimitiveFrame, x: tuple) -> bool:
    return F.block_image(x) == tuple(range(F.d)) and x in F.ambient


def support(F: ImprimitiveFrame, x: tuple) -> frozenset[int]:
    """Cells (0-indexed, canonical order) on which x acts nontrivially."""
    x = tuple(x)
    if not in_kernel(F, x):
        raise NotInKernel("element does not lie in the block kernel")
    return frozenset(k for k, cell in enumerate(F.blocks.blocks) if any(x[p] != p for p in cell))


# ---------------------------------------------------------------------------
# socle modules for cyclic socles

def _socle_generator(U: PermGroup) -> tuple | None:
    S = socle_small(U)
    if S.order() > 1 and len(_factorize(S.order())) == 1 and sum(_factorize(S.order()).values()) == 1:
        return next(g for g in S.elements() if g != pid(U.degree))
    return None


def _exponent(c: tuple, x: tuple, p: int, point: int) -> int | None:
    y = point
    for e in range(p):
        if y == x[point]:
            return e
        y = c[y]
    return None


@dataclass
class SocleModule:
    """Gamma meet soc(U)^d as a subspace of F_p^d, coordinates along transported generators."""

    p: int
    module: FpSubmodule
    generators: list[tuple]  # c_0..c_{d-1}

    def element(self, a: Sequence[int]) -> tuple:
        n = len(self.generators[0])
        x = pid(n)
        for c, e in zip(self.generators, a):
            if e % self.p:
                x = pmul(ppow(c, e % self.p), x)
        return x


def cycle_coordinates(F: ImprimitiveFrame, x: tuple, s: tuple) -> tuple[list[int], list[tuple]]:
    """Cells in the order visited by a full cycle x, with socle generators
    x^k c x^-k (c = s on cell 0).  These coordinates make the cyclic shift
    act by rotation, so diag, Aug and Aug- read off correctly."""
    bx = F.blocks.block_action(x)
    c = F.embed(s, 0)
    cells, gens = [], []
    b = 0
    for _ in range(F.d):
        cells.append(b)
        gens.append(c)
        c = pconj(c, x)
        b = bx[b]
    if b != 0 or len(set(cells)) != F.d:
        raise HypothesisViolated("element does not cycle the blocks transitively")
    return cells, gens


def socle_module(F: ImprimitiveFrame, gamma: PermGroup | None = None,
                 order: Sequence[int] | None = None,
                 cycle_element: tuple | None = None) -> SocleModule:
    """Kernel part inside the cyclic socle power, as an F_p-subspace.

    Requires soc(U) = C_p with C_U(soc U) = soc U (true for all transitive
    subgroups of AGL_1(p)), so Gamma meet soc^d is the kernel of conjugation
    on the transported socle generators.  ``order`` relabels cells;
    ``cycle_element`` (a full cycle on the blocks) fixes both the cell order
    and the generators as in ``cycle_coordinates``.
    """
    s = _socle_generator(F.U_model)
    if s is None:
        raise HypothesisViolated("socle of the block group is not cyclic of prime order")
    p = porder(s)
    cent = [u for u in F.U_model.elements() if pmul(u, s) == pmul(s, u)]
    if len(cent) != p:
        raise HypothesisViolated("the socle is not self-centralizing in the block group")
    cs = F.transport_local(s)
    if cycle_element is not None:
        order, gens_c = cycle_coordinates(F, cycle_element, s)
        for k, c in zip(order, gens_c):
            cs[k] = c
    if gamma is None:
        gamma = block_kernel(F)
    n = F.degree
    labels = {}
    for k, c in enumerate(cs):
        x = c
        for e in range(1, p):
            labels[x] = len(labels)
            x = pmul(c, x)
    keys = list(labels)
    gens = list(gamma.raw_generators)
    if gens:
        extra = [tuple(labels[pconj(key, g)] for key in keys) for g in gens]
        kgens, _ = kernel_of_action(n, gens, extra)
    else:
        kgens = []
    ordr = list(order) if order is not None else list(range(F.d))
    vecs = []
    for x in kgens:
        v = []
        for k in ordr:
            cell = F.blocks.blocks[k]
            e = _exponent(cs[k], x, p, cell[0])
            if e is None:
                raise AssertionError("kernel element outside the socle power")
            v.append(e)
        vecs.append(v)
    M = FpSubmodule.span(p, F.d, vecs)
    return SocleModule(p, M, [cs[k] for k in ordr])


def sign_module(F: ImprimitiveFrame, gamma: PermGroup | None = None,
                order: Sequence[int] | None = None,
                cycle_element: tuple | None = None) -> FpSubmodule:
    """Image of Gamma in C_2^d under U -> U/soc(U) = C_2 (dihedral block groups)."""
    s = _socle_generator(F.U_model)
    if s is None or F.U_model.order() != 2 * porder(s):
        raise HypothesisViolated("block group is not an extension of its cyclic socle by C_2")
    cs = F.transport_local(s)
    if cycle_element is not None:
        order, _ = cycle_coordinates(F, cycle_element, s)
    if gamma is None:
        gamma = block_kernel(F)
    ordr = list(order) if order is not None else list(range(F.d))
    vecs = []
    for x in gamma.raw_generators:
        vecs.append([0 if pconj(cs[k], x) == cs[k] else 1 for k in ordr])
    return FpSubmodule.span(2, F.d, vecs)


# ---------------------------------------------------------------------------
# reports

@dataclass
class BlockKernelReport:
    gamma: PermGroup
    gamma_order: int
    p_part_orders: dict[int, int]
    contains: dict[str, bool]
    classification: DistinguishedSubmodule | None
    socle_dim: int | None = None
    sign_classification: DistinguishedSubmodule | None = None

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma.to_json(),
            "gamma_order": self.gamma_order,
            "p_part_orders": {str(k): v for k, v in self.p_part_orders.items()},
            "contains": self.contains,
            "classification": None if self.classification is None else str(self.classification),
            "socle_dim": self.socle_dim,
            "sign_classification": None if self.sign_classification is None
            else str(self.sign_classification),
        }


def contains_power(F: ImprimitiveFrame, gamma: PermGroup, H_local: PermGroup) -> bool:
    """Whether Gamma contains the transported copy of H (on cell 0) on every cell."""
    for h in H_local.raw_generators:
        for c in F.transport_local(h):
            if c not in gamma:
                return False
    return True


def kernel_report(F: ImprimitiveFrame, order: Sequence[int] | None = None,
                  cycle_element: tuple | None = None) -> BlockKernelReport:
    gamma = block_kernel(F)
    go = gamma.order()
    parts = {p: p ** e for p, e in _factorize(go).items()}
    soc = socle_small(F.U_model)
    contains = {"soc^d": contains_power(F, gamma, soc)}
    classification = None
    socle_dim = None
    sign_cls = None
    try:
        sm = socle_module(F, gamma, order, cycle_element)
    except HypothesisViolated:
        sm = None
    if sm is not None:
        p, d, M = sm.p, F.d, sm.module
        socle_dim = M.dim
        classification = classify_submodule(M)
        contains["diag"] = M.contains(diag_module(p, d))
        contains["aug"] = M.contains(aug_module(p, d))
        contains["aug_minus"] = d % 2 == 0 and M.contains(aug_minus_module(p, d))
        contains["C_p^(d-1)"] = M.dim >= d - 1
        try:
            sign_cls = classify_submodule(sign_module(F, gamma, order, cycle_element))
        except HypothesisViolated:
            pass
    return BlockKernelReport(gamma, go, parts, contains, classification, socle_dim, sign_cls)


@dataclass
class LargeKernelVerdict:
    large: bool
    reason: str

    def __bool__(self):
        return self.large


def large_kernel(F: ImprimitiveFrame, soc_U: PermGroup | None = None) -> LargeKernelVerdict:
    if soc_U is None:
        soc_U = socle_small(F.U_model)
    gamma = block_kernel(F)
    if contains_power(F, gamma, soc_U):
        return LargeKernelVerdict(True, "kernel contains soc(U)^d")
    if soc_U.order() > 1 and len(_factorize(soc_U.order())) == 1 and sum(_factorize(soc_U.order()).values()) == 1:
        sm = socle_module(F, gamma)
        if sm.module.dim >= F.d - 1:
            return LargeKernelVerdict(True, f"cyclic socle, kernel meets soc^d in dimension {sm.module.dim}")
        return LargeKernelVerdict(False, f"cyclic socle, dimension {sm.module.dim} < {F.d - 1}")
    return LargeKernelVerdict(False, "kernel does not contain soc(U)^d")


# ---------------------------------------------------------------------------
# group-level checks

def ritt_obstruction(G: PermGroup) -> int:
    """Number of maximal block systems; two or more signal a non-unique decomposition."""
    if not is_transitive(G):
        raise NotTransitive("group is not transitive")
    return len(maximal_block_systems(G))


def transversal_system(F: ImprimitiveFrame) -> BlockSystem | None:
    """A block system with m cells each meeting every frame cell exactly once."""
    lookup = F.block_of()
    for B in all_block_systems(F.ambient):
        if B.num_blocks != F.m:
            continue
        if all(len({lookup[x] for x in cell}) == F.d for cell in B.blocks):
            return B
    return None


def direct_product_embedding(F: ImprimitiveFrame) -> bool:
    """True iff G sits in U x V acting on cells x blocks.

    A transversal block system B gives the second coordinate; the combined
    action on (cell of B, cell of F) is faithful because each point is the
    unique intersection.  The action on B must embed in U.
    """
    B = transversal_system(F)
    if B is None:
        return False
    W = PermGroup(B.num_blocks, [B.block_action(g) for g in F.ambient.raw_generators])
    U = F.U_model
    if U.order() % W.order():
        return False
    # the restriction of the B-action to any frame cell identifies the two labellings
    cell = F.blocks.blocks[0]
    lookup = B.block_of()
    relabel = [lookup[x] for x in cell]
    inv = {b: a for a, b in enumerate(relabel)}
    for w in W.raw_generators:
        local = tuple(inv[w[relabel[a]]] for a in range(F.m))
        if local not in U:
            return False
    return True


def _center(G: PermGroup) -> PermGroup:
    gens = G.raw_generators
    return PermGroup(G.degree, [z for z in G.elements()
                                if all(pmul(z, g) == pmul(g, z) for g in gens)])


@dataclass
class SnTpCase:
    case: str  # "i", "ii", "iii", "iv", "none"
    witness: dict

    def __str__(self):
        return self.case


def _orientation_quotient(F: ImprimitiveFrame, cs: Sequence[tuple]) -> PermGroup:
    """G acting on the 2d socle generators c_k^{+-1}: faithful on G modulo Gamma meet C_p^d."""
    keys = list(cs) + [pinv(c) for c in cs]
    idx = {c: i for i, c in enumerate(keys)}
    return PermGroup(len(keys), [tuple(idx[pconj(c, g)] for c in keys)
                                 for g in F.ambient.raw_generators])


def snTp_case(F: ImprimitiveFrame) -> SnTpCase:
    U, V = F.U_model, F.V_model
    n = F.d
    s = _socle_generator(U)
    if s is None:
        raise HypothesisViolated("block group must be C_p or D_p")
    p = porder(s)
    if U.order() not in (p, 2 * p) or U.degree != p:
        raise HypothesisViolated("block group must be C_p or D_p of degree p")
    if n < 4 or V.order() not in (math.factorial(n), math.factorial(n) // 2):
        raise HypothesisViolated("blocks image must be A_n or S_n with n >= 4")
    gamma = block_kernel(F)
    sm = socle_module(F, gamma)
    if sm.module.dim >= n - 1:
        return SnTpCase("i", {"socle_dim": sm.module.dim})
    if direct_product_embedding(F):
        return SnTpCase("ii", {"transversal": [list(b) for b in transversal_system(F).blocks]})
    if n == 4:
        H = F.ambient if p == 2 else _orientation_quotient(F, F.transport_local(s))
        if H.order() in (24, 48):
            Z = _center(H)
            if Z.order() == 2 and is_split_extension(H, Z).status == "nonsplit":
                return SnTpCase("iii", {"order": H.order(),
                                        "label": "SL_2(3)" if H.order() == 24 else "GL_2(3)"})
    if n == 6:
        G = F.ambient
        if G.order() == 3 * V.order():
            Z = _center(G)
            if Z.order() == 3 and is_split_extension(G, Z).status == "nonsplit":
                return SnTpCase("iv", {"order": G.order()})
    return SnTpCase("none", {"socle_dim": sm.module.dim})


# ---------------------------------------------------------------------------
# iterated wreath products of dihedral groups

@dataclass
class IteratedWreathBounds:
    p: int
    n: int
    kernel_lower: int
    ambient_order: int
    hausdorff_expr: sympy.Expr
    hausdorff_lower: float
    level_ratio: float

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "kernel_lower": self.kernel_lower,
                "ambient_order": self.ambient_order, "hausdorff_expr": str(self.hausdorff_expr),
                "hausdorff_lower": self.hausdorff_lower, "level_ratio": self.level_ratio}


def hausdorff_bound(p: int) -> sympy.Expr:
    L = sympy.log(2) / sympy.log(p)
    return 1 - L / (p * (1 + L))


def iterated_wreath_bounds(p: int, n: int, digits: int = 30) -> IteratedWreathBounds:
    """Order bounds for n-fold compositions with dihedral monodromy of degree p.

    kernel_lower = p^(1+p+...+p^(n-1)) * 2^(p^(n-1)), the order bound for the
    level-n monodromy group; ambient = |[D_p]^n| = (2p)^(1+...+p^(n-1)).
    """
    if p < 3 or not sympy.isprime(p) or n < 1:
        raise HypothesisViolated("needs an odd prime p and n >= 1")
    s = sum(p ** k for k in range(n))
    low = p ** s * 2 ** (p ** (n - 1))
    amb = (2 * p) ** s
    expr = hausdorff_bound(p)
    return IteratedWreathBounds(p, n, low, amb, expr, float(expr.evalf(digits)),
                                math.log(low) / math.log(amb))


# ---------------------------------------------------------------------------
# commutator closure engines

def comm(a: tuple, b: tuple) -> tuple:
    """[a, b] = a b a^-1 b^-1."""
    return pmul(pmul(a, b), pmul(pinv(a), pinv(b)))


@dataclass(frozen=True)
class ModuleFrame:
    """An elementary abelian normal subgroup W of the block group, in coordinates.

    ``basis`` are commuting local permutations of order p on m points; W is
    the group they generate and coordinates are exponent vectors.
    """

    p: int
    m: int
    basis: tuple[tuple, ...]

    @property
    def k(self) -> int:
        return len(self.basis)

    def table(self) -> dict[tuple, tuple[int, ...]]:
        out = {}
        for vec in iproduct(range(self.p), repeat=self.k):
            out[self.element(vec)] = vec
        if len(out) != self.p ** self.k:
            raise HypothesisViolated("basis elements are not independent")
        return out

    def element(self, vec: Sequence[int]) -> tuple:
        x = pid(self.m)
        for b, e in zip(self.basis, vec):
            x = pmul(ppow(b, e % self.p), x)
        return x


@dataclass
class ClosureInstance:
    frame: ImprimitiveFrame
    W: ModuleFrame
    W_decomposition: list[FpSubmodule]
    witnesses: list[tuple]
    focus_index: int
    diagonal: FpSubmodule | None = None  # D inside W for the heart variant
    depth: int = 6


@dataclass
class ClosureResult:
    module: FpSubmodule  # inside F_p^(k*d), block-major coordinates
    certified_elements: list[tuple]
    steps: list[str]
    target: FpSubmodule
    contains_target: bool
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"dim": self.module.dim, "target_dim": self.target.dim,
                "contains_target": self.contains_target, "steps": self.steps,
                "certified": len(self.certified_elements)}


class _WCoords:
    """Reads W^d coordinates of elements preserving every cell (standard labelling)."""

    def __init__(self, F: ImprimitiveFrame, W: ModuleFrame):
        self.F, self.W = F, W
        self.table = W.table()
        self.p, self.k, self.d = W.p, W.k, F.d

    def component(self, x: tuple, l: int) -> tuple | None:
        """Coordinates of the l-th component if it lies in W, else None."""
        return self.table.get(self.F.local(x, l))

    def vector(self, x: tuple) -> tuple[int, ...] | None:
        out = []
        for l in range(self.d):
            c = self.component(x, l)
            if c is None:
                return None
            out.extend(c)
        return tuple(out)

    def element(self, vec: Sequence[int]) -> tuple:
        parts = [self.W.element(vec[l * self.k:(l + 1) * self.k]) for l in range(self.d)]
        x = pid(self.F.degree)
        for l, part in enumerate(parts):
            x = pmul(self.F.embed(part, l), x)
        return x

    def act(self, g: tuple, vec: Sequence[int]) -> tuple[int, ...]:
        v = self.vector(pconj(self.element(vec), g))
        assert v is not None, "W^d must be normalized by the ambient group"
        return v

    def local_action(self, u: tuple, w: Sequence[int]) -> tuple[int, ...]:
        """Conjugation u w u^-1 on a single block's coordinates."""
        r = self.table.get(pconj(self.W.element(w), u))
        if r is None:
            raise HypothesisViolated("W is not normalized by the block group")
        return r


def _span_under(coords: _WCoords, gens: Sequence[tuple], vecs: Iterable[Sequence[int]]) -> FpSubmodule:
    p, N = coords.p, coords.k * coords.d
    basis = rref([tuple(v) for v in vecs], p, N)
    frontier = list(basis)
    while frontier:
        new = []
        for b in frontier:
            for g in gens:
                w = coords.act(g, b)
                ext = rref(list(basis) + [w], p, N)
                if ext != basis:
                    basis = ext
                    new.append(w)
        frontier = new
    return FpSubmodule(p, N, basis)


def _acts_nontrivially(coords: _WCoords, u: tuple, Wj: FpSubmodule, D: FpSubmodule | None) -> bool:
    for b in Wj.basis:
        img = coords.local_action(u, b)
        diff = tuple((a - c) % coords.p for a, c in zip(img, b))
        if any(diff) and (D is None or not D.contains_vector(diff)):
            return True
    return False


def _in_Wj(vec, Wj: FpSubmodule, D: FpSubmodule | None) -> bool:
    if vec is None or not Wj.contains_vector(vec) or not any(vec):
        return False
    return D is None or not D.contains_vector(vec)


def _component_supports(coords: _WCoords, x: tuple, Wj: FpSubmodule, D) -> set[int]:
    return {l for l in range(coords.d) if _acts_nontrivially(coords, coords.F.local(x, l), Wj, D)}


def _conjugate_search(z: tuple, gens: Sequence[tuple], accept: Callable[[tuple], bool],
                      depth: int, cap: int = 20000) -> tuple | None:
    """Breadth-first search over conjugates g z g^-1 by words of bounded length."""
    seen = {z}
    layer = [z]
    if accept(z):
        return z
    for _ in range(depth):
        nxt = []
        for y in layer:
            for g in gens:
                for h in (g, pinv(g)):
                    w = pconj(y, h)
                    if w in seen:
                        continue
                    if accept(w):
                        return w
                    seen.add(w)
                    nxt.append(w)
                    if len(seen) > cap:
                        return None
        layer = nxt
    return None


def _gamma_with_component_in_W(F: ImprimitiveFrame, gamma: PermGroup, coords: _WCoords,
                               cells: Sequence[int]) -> PermGroup:
    """Elements of Gamma whose components on the given cells lie in W.

    Valid because W is a faithful module for the block group: a component lies
    in W iff it centralizes W, which is the kernel of conjugation on W-copies.
    """
    n = F.degree
    keys = []
    for l in cells:
        for vec in iproduct(range(coords.p), repeat=coords.k):
            if any(vec):
                keys.append(F.embed(coords.W.element(vec), l))
    idx = {x: i for i, x in enumerate(keys)}
    gens = list(gamma.raw_generators)
    extra = [tuple(idx[pconj(x, g)] for x in keys) for g in gens]
    kg, _ = kernel_of_action(n, gens, extra)
    return PermGroup(n, kg)


def closure_lower_bound(inst: ClosureInstance) -> ClosureResult:
    """Commutator iteration for the full-socle lemma and its heart variant.

    Claim 1 shrinks the U-support of an element with focus component in W_j
    by commutators with the witnesses; Claim 2 repeats this inside
    Delta = Gamma meet W^d until the support is the focus cell alone.  The
    G-module generated by the final elements is returned, with every element
    on the way re-verified by membership.
    """
    F, W = inst.frame, inst.W
    coords = _WCoords(F, W)
    p, k, d = W.p, W.k, F.d
    gamma = block_kernel(F)
    D = inst.diagonal
    i = inst.focus_index
    steps: list[str] = []
    for x in inst.witnesses:
        if not in_kernel(F, x):
            raise HypothesisViolated("witness outside the block kernel")
    for Wj in inst.W_decomposition:
        for b in Wj.basis:
            for g in gamma.raw_generators:
                if not Wj.contains_vector(coords.local_action(F.local(g, i), b)):
                    raise HypothesisViolated("W_j is not invariant under the kernel's block group")
    gamma_gens = list(gamma.raw_generators)
    amb_gens = list(F.ambient.raw_generators)
    certified: list[tuple] = []
    generated: list[tuple[int, ...]] = []
    target_rows = []
    for j, Wj in enumerate(inst.W_decomposition):
        sup = [_component_supports(coords, x, Wj, D) for x in inst.witnesses]
        inter = set.intersection(*sup) if sup else set(range(d))
        if not inter <= {i}:
            raise HypothesisViolated(f"supports of the witnesses on W_{j} meet outside the focus")
        if inter != {i}:
            steps.append(f"W_{j}: support intersection empty, not covered")
            continue
        for l in range(d):
            for b in Wj.basis:
                row = [0] * (k * d)
                row[l * k:(l + 1) * k] = b
                target_rows.append(row)
        # base case: an element of Gamma with focus component in W_j outside D
        sub = _gamma_with_component_in_W(F, gamma, coords, [i])
        z = None
        rng = random.Random(0)
        for cand in list(sub.raw_generators) + [sub.random_element(rng) for _ in range(200)]:
            if _in_Wj(coords.component(cand, i), Wj, D):
                z = cand
                break
        if z is None:
            raise HypothesisViolated(f"no kernel element with focus component in W_{j}")
        steps.append(f"W_{j}: start element found")
        # Claim 1
        for m_idx, x in enumerate(inst.witnesses):
            xi = F.local(x, i)

            def ok1(y, xi=xi):
                c = coords.component(y, i)
                return _in_Wj(c, Wj, D) and _acts_nontrivially(coords, xi, FpSubmodule.span(p, k, [c]), D)

            zt = _conjugate_search(z, gamma_gens, ok1, inst.depth)
            if zt is None:
                raise HypothesisViolated(f"claim 1: no suitable conjugate for witness {m_idx}")
            z = comm(zt, x)
            assert z in F.ambient and in_kernel(F, z)
            assert _in_Wj(coords.component(z, i), Wj, D)
            certified.append(z)
            steps.append(f"claim 1 step {m_idx}: U-support "
                         f"{sorted(l for l in range(d) if coords.component(z, l) is None)}")
        if coords.vector(z) is None:
            raise HypothesisViolated("claim 1 did not land in Delta")
        # Claim 2
        for m_idx, x in enumerate(inst.witnesses):
            xi = F.local(x, i)

            def ok2(y, xi=xi):
                c = coords.component(y, i)
                return (coords.vector(y) is not None and _in_Wj(c, Wj, D)
                        and _acts_nontrivially(coords, xi, FpSubmodule.span(p, k, [c]), D))

            zt = _conjugate_search(z, gamma_gens, ok2, inst.depth)
            if zt is None:
                raise HypothesisViolated(f"claim 2: no suitable conjugate for witness {m_idx}")
            z = comm(zt, x)
            assert z in F.ambient and coords.vector(z) is not None
            certified.append(z)
            v = coords.vector(z)
            steps.append(f"claim 2 step {m_idx}: W-support "
                         f"{sorted(l for l in range(d) if any(v[l * k:(l + 1) * k]))}")
        v = coords.vector(z)
        if any(any(v[l * k:(l + 1) * k]) for l in range(d) if l != i):
            raise HypothesisViolated("claim 2 did not isolate the focus cell")
        generated.append(v)
    module = _span_under(coords, amb_gens, generated)
    for b in module.basis:
        if coords.element(b) not in F.ambient:
            raise AssertionError("closure produced a non-member")
    target = FpSubmodule.span(p, k * d, target_rows)
    return ClosureResult(module, certified, steps, target, module.contains(target))


def indecomposable_closure(F: ImprimitiveFrame, W: ModuleFrame, focus: int = 0,
                           depth: int = 6) -> ClosureResult:
    """Commutator construction for an indecomposable module W over U'.

    Builds [[z, x], y] with rho(x), rho(y) supported on the focus cell and z
    ranging over kernel elements with focus component in W; these are
    supported on the focus cell with entries spanning W_2 = [[W,H'],H'].
    Adds [z, x] elements, whose images modulo W_2^d give the support-two
    element.  Returns the ambient module generated; the target is W_2^d.
    """
    coords = _WCoords(F, W)
    p, k, d = W.p, W.k, F.d
    gamma = block_kernel(F)
    others = [l for l in range(d) if l != focus]
    steps = []
    # x, y with U-part trivial off the focus cell
    local_U = _gamma_with_component_in_W(F, gamma, coords, others)
    xs = [x for x in local_U.raw_generators if coords.component(x, focus) is None]
    if not xs:
        raise HypothesisViolated("no kernel element with U-part supported on the focus cell")
    zs = list(_gamma_with_component_in_W(F, gamma, coords, [focus]).raw_generators)
    zs = [z for z in zs if any(coords.component(z, focus))]
    if not zs:
        raise HypothesisViolated("no kernel element with a nonzero focus component in W")
    steps.append(f"{len(xs)} focus-supported U-elements, {len(zs)} W-elements at the focus")
    certified = []
    vecs = []
    level1 = []
    for z in zs:
        for x in xs:
            zx = comm(z, x)
            level1.append(zx)
            for y in xs:
                e = comm(zx, y)
                v = coords.vector(e)
                if v is None:
                    raise AssertionError("double commutator left Delta")
                if any(any(v[l * k:(l + 1) * k]) for l in others):
                    raise AssertionError("double commutator not supported on the focus")
                if any(v):
                    certified.append(e)
                    vecs.append(v)
    amb_gens = list(F.ambient.raw_generators)
    W2 = _span_under(coords, amb_gens, vecs)
    steps.append(f"W_2^d part: dimension {W2.dim}")
    extra = [coords.vector(e) for e in level1 if coords.vector(e) is not None]
    M = _span_under(coords, amb_gens, vecs + extra)
    steps.append(f"with first commutators: dimension {M.dim}")
    for b in M.basis:
        if coords.element(b) not in F.ambient:
            raise AssertionError("closure produced a non-member")
    # W_2 inside a single block: [[W, H'], H'] from the focus projections
    proj = [F.local(g, focus) for g in gamma.raw_generators]
    local_rows = []
    for b in range(k):
        unit_v = [0] * k
        unit_v[b] = 1
        for u in proj:
            w1 = tuple((a - c) % p for a, c in zip(coords.local_action(u, unit_v), unit_v))
            local_rows.append(w1)
    W1_local = _close_local(coords, proj, local_rows)
    rows2 = []
    for b in W1_local.basis:
        for u in proj:
            rows2.append(tuple((a - c) % p for a, c in zip(coords.local_action(u, b), b)))
    W2_local = _close_local(coords, proj, rows2)
    target = FpSubmodule.span(p, k * d, [tuple([0] * (l * k)) + b + tuple([0] * ((d - l - 1) * k))
                                         for l in range(d) for b in W2_local.basis])
    W1_full = FpSubmodule.span(p, k * d, [tuple([0] * (l * k)) + b + tuple([0] * ((d - l - 1) * k))
                                          for l in range(d) for b in W1_local.basis])
    return ClosureResult(M, certified, steps, target, M.contains(target),
                         {"W1_local": W1_local, "W2_local": W2_local, "W1_power": W1_full,
                          "inside_W1_power": W1_full.contains(M),
                          "codim_in_W1_power": W1_full.dim - M.dim})


def _close_local(coords: _WCoords, us: Sequence[tuple], rows) -> FpSubmodule:
    p, k = coords.p, coords.k
    basis = rref(rows, p, k)
    changed = True
    while changed:
        changed = False
        for b in list(basis):
            for u in us:
                w = coords.local_action(u, b)
                ext = rref(list(basis) + [w], p, k)
                if ext != basis:
                    basis = ext
                    changed = True
    return FpSubmodule(p, k, basis)


def delta_module(F: ImprimitiveFrame, W: ModuleFrame) -> FpSubmodule:
    """Delta = Gamma meet W^d computed directly, as the reference for the engines."""
    coords = _WCoords(F, W)
    gamma = block_kernel(F)
    sub = _gamma_with_component_in_W(F, gamma, coords, range(F.d))
    vecs = [coords.vector(x) for x in sub.raw_generators]
    return FpSubmodule.span(W.p, W.k * F.d, vecs)
