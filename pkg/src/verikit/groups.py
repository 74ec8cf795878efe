"""Concrete permutation models of the small primitive groups used by the suites."""

from __future__ import annotations

import itertools
import re

from .errors import OutOfScope
from .perm_core import PermGroup, alternating_group, cyclic_group, dihedral_group, symmetric_group


def _projective_line_group(q: int, maps) -> PermGroup:
    pts = list(range(q)) + [None]
    idx = {p: i for i, p in enumerate(pts)}
    return PermGroup(q + 1, [tuple(idx[f(p)] for p in pts) for f in maps])


def _affine(a: int, b: int, q: int):
    return lambda x: None if x is None else (a * x + b) % q


def _neg_inverse(q: int):
    return lambda x: 0 if x is None else (None if x == 0 else (-pow(x, -1, q)) % q)


def _primitive_root(q: int) -> int:
    for g in range(2, q):
        if len({pow(g, k, q) for k in range(1, q)}) == q - 1:
            return g
    return 1


def pgl2(q: int) -> PermGroup:
    """PGL_2(q) on the projective line, q prime."""
    return _projective_line_group(q, [_affine(1, 1, q), _affine(_primitive_root(q), 0, q), _neg_inverse(q)])


def psl2(q: int) -> PermGroup:
    """PSL_2(q) on the projective line, q an odd prime."""
    r = _primitive_root(q)
    return _projective_line_group(q, [_affine(1, 1, q), _affine(r * r % q, 0, q), _neg_inverse(q)])


def psl3_2() -> PermGroup:
    """GL_3(2) on the seven nonzero vectors of F_2^3."""
    vecs = [v for v in itertools.product(range(2), repeat=3) if any(v)]

    def act(M):
        return tuple(vecs.index(tuple(sum(M[i][j] * v[j] for j in range(3)) % 2 for i in range(3)))
                     for v in vecs)

    return PermGroup(7, [act([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), act([[0, 0, 1], [1, 0, 0], [0, 1, 0]])])


def named_group(name: str) -> PermGroup:
    """Names: S<n>, A<n>, C<n>, D<p> (degree p), PGL2(q), PSL2(q), PSL3(2)."""
    s = name.replace(" ", "").replace("_", "")
    if s == "PSL3(2)":
        return psl3_2()
    m = re.fullmatch(r"P(G|S)L2\((\d+)\)", s)
    if m:
        q = int(m.group(2))
        return pgl2(q) if m.group(1) == "G" else psl2(q)
    m = re.fullmatch(r"([SACD])(\d+)", s)
    if m:
        n = int(m.group(2))
        return {"S": symmetric_group, "A": alternating_group, "C": cyclic_group,
                "D": dihedral_group}[m.group(1)](n)
    raise OutOfScope(f"no model for group {name!r}")
