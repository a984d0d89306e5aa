"""Finite matrix groups over cyclotomic fields: closure, conjugacy classes, weights."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .cyclotomic import (
    CycNum,
    determinant,
    identity_matrix,
    kernel_dimension,
    mat_mul,
    root_of_unity,
)

DEFAULT_CAP = 10000

Mat = tuple  # tuple of tuples of CycNum, all of one conductor


class GroupError(ValueError):
    pass


class GroupTooLargeError(GroupError):
    pass


def _normalize(m: Sequence[Sequence], conductor: int) -> Mat:
    out = []
    for row in m:
        r = []
        for x in row:
            if not isinstance(x, CycNum):
                x = CycNum.rational(x, conductor)
            r.append(x.embed(conductor))
        out.append(tuple(r))
    return tuple(out)


def mat_key(m: Mat) -> tuple:
    return tuple(x.coeffs for row in m for x in row)


def mat_str(m: Mat) -> str:
    return "[" + "; ".join(", ".join(str(x) for x in row) for row in m) + "]"


@dataclass(frozen=True)
class GroupSpec:
    n: int
    root_order: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(_normalize(g, self.root_order) for g in self.generators)
        for g in gens:
            if len(g) != self.n or any(len(r) != self.n for r in g):
                raise GroupError(f"generator is not {self.n}x{self.n}")
            if determinant(g).is_zero():
                raise GroupError("generator is not invertible")
        object.__setattr__(self, "generators", gens)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "root_order": self.root_order,
            "generators": [[[[str(c) for c in x.coeffs] for x in row] for row in g] for g in self.generators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GroupSpec":
        n, d = int(data["n"]), int(data["root_order"])
        gens = []
        for g in data["generators"]:
            gens.append(tuple(tuple(CycNum.from_json(x, d) for x in row) for row in g))
        return cls(n, d, tuple(gens))


@dataclass(frozen=True)
class ConjClass:
    representative: Mat
    rep_index: int
    size: int
    members: tuple[int, ...]
    exponents: tuple[int, ...]
    weight: Fraction


class Group:
    """A finite matrix group given by its full element list.

    ``elements[0]`` is the identity. Products are memoized by index pairs.
    """

    def __init__(self, n: int, root_order: int, elements: list, generators: Sequence[int] = ()):
        self.n = n
        self.root_order = root_order
        self.elements = list(elements)
        self.index = {mat_key(m): i for i, m in enumerate(self.elements)}
        self.generator_indices = tuple(generators) or tuple(range(len(self.elements)))
        self._products: dict = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def mode(self) -> str:
        one = CycNum.one(self.root_order)
        dets = (determinant(self.elements[i]) for i in self.generator_indices)
        return "SL" if all(d == one for d in dets) else "GL"

    def index_of(self, m: Mat) -> int:
        key = mat_key(_normalize(m, self.root_order))
        try:
            return self.index[key]
        except KeyError:
            raise GroupError("element is not in the group") from None

    def _idx(self, g) -> int:
        return g if isinstance(g, int) else self.index_of(g)

    def mul(self, i: int, j: int) -> int:
        k = self._products.get((i, j))
        if k is None:
            prod = mat_mul(self.elements[i], self.elements[j])
            k = self.index.get(mat_key(prod))
            if k is None:
                raise GroupError("group is not closed under multiplication")
            self._products[(i, j)] = k
        return k

    def element_order(self, g) -> int:
        i = self._idx(g)
        k, cur = 1, i
        while cur != 0:
            cur = self.mul(cur, i)
            k += 1
        return k

    def inverse(self, g) -> int:
        i = self._idx(g)
        prev, cur = 0, i
        while cur != 0:
            prev, cur = cur, self.mul(cur, i)
        return prev

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(self.element_order(i) for i in range(self.order)))

    @cached_property
    def _class_members(self) -> list[tuple[int, ...]]:
        gens = self.generator_indices
        inv = {g: self.inverse(g) for g in gens}
        seen = [False] * self.order
        classes = []
        for start in range(self.order):
            if seen[start]:
                continue
            orbit = [start]
            seen[start] = True
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for g in gens:
                    y = self.mul(self.mul(g, x), inv[g])
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
                        queue.append(y)
            classes.append(tuple(sorted(orbit)))
        return classes

    def class_of(self, g) -> tuple[int, ...]:
        i = self._idx(g)
        return next(c for c in self._class_members if i in c)

    def conjugate(self, g, by) -> int:
        i, s = self._idx(g), self._idx(by)
        return self.mul(self.mul(s, i), self.inverse(s))

    def __repr__(self):
        return f"Group(n={self.n}, order={self.order}, mode={self.mode})"


def generate_group(spec: GroupSpec, cap: int = DEFAULT_CAP) -> Group:
    """Breadth-first closure of the generators under multiplication."""
    ident = identity_matrix(spec.n, spec.root_order)
    elements = [ident]
    index = {mat_key(ident): 0}
    gen_idx = []
    for g in spec.generators:
        k = mat_key(g)
        if k not in index:
            index[k] = len(elements)
            elements.append(g)
        gen_idx.append(index[k])
    queue = deque(range(len(elements)))
    while queue:
        x = elements[queue.popleft()]
        for g in spec.generators:
            y = mat_mul(x, g)
            k = mat_key(y)
            if k not in index:
                if len(elements) >= cap:
                    raise GroupTooLargeError(f"group too large or infinite (more than {cap} elements)")
                index[k] = len(elements)
                elements.append(y)
                queue.append(index[k])
    return Group(spec.n, spec.root_order, elements, gen_idx or [0])


def eigen_exponents(g: Group, gamma, d: int | None = None) -> tuple[int, ...]:
    """Exponents e in [1, d] with xi_d^e running over the eigenvalues of gamma.

    Multiplicities are kernel dimensions of gamma - xi_d^e I. Only e with
    (xi_d^e)^ord(gamma) = 1 can occur, so only those are tested; the kernel is
    computed in the smallest cyclotomic field holding gamma and the candidate
    eigenvalue, which gives the same dimension as over Q(xi_d).
    """
    i = g._idx(gamma)
    d = g.order if d is None else d
    o = g.element_order(i)
    if d % o:
        raise GroupError(f"element order {o} does not divide {d}")
    m = g.elements[i]
    cond = math.lcm(g.root_order, o)
    mat = [[x.embed(cond) for x in row] for row in m]
    out: list[int] = []
    for e in range(d // o, d + 1, d // o):
        lam = root_of_unity(o, e * o // d).embed(cond)
        shifted = [[x - lam if r == c else x for c, x in enumerate(row)] for r, row in enumerate(mat)]
        k = kernel_dimension(shifted)
        out.extend([e] * k)
        if len(out) >= g.n:
            break
    if len(out) != g.n:
        raise AssertionError(f"eigenvalue multiplicities sum to {len(out)}, expected {g.n}")
    return tuple(sorted(out))


def weight(g: Group, gamma, d: int | None = None) -> Fraction:
    """Sum of the eigenvalue exponents divided by d (default |G|)."""
    d = g.order if d is None else d
    return Fraction(sum(eigen_exponents(g, gamma, d)), d)


def conjugacy_classes(g: Group) -> list[ConjClass]:
    out = []
    for members in g._class_members:
        rep = members[0]
        exps = eigen_exponents(g, rep)
        out.append(
            ConjClass(
                representative=g.elements[rep],
                rep_index=rep,
                size=len(members),
                members=members,
                exponents=exps,
                weight=Fraction(sum(exps), g.order),
            )
        )
    return out


def centralizer(g: Group, gamma) -> Group:
    i = g._idx(gamma)
    idx = [s for s in range(g.order) if g.mul(s, i) == g.mul(i, s)]
    return Group(g.n, g.root_order, [g.elements[s] for s in idx])


# -- catalog ------------------------------------------------------------------------

def _diag(entries, conductor):
    n = len(entries)
    z = CycNum.zero(conductor)
    return tuple(tuple(entries[i] if i == j else z for j in range(n)) for i in range(n))


def _quaternion(a, b, c, d, conductor):
    """2x2 complex matrix of a + b i + c j + d k; coefficients are CycNums."""
    i = root_of_unity(4).embed(conductor)
    return ((a + b * i, c + d * i), (-c + d * i, a - b * i))


def cyclic_spec(d: int, weights: Sequence[int] | None = None) -> GroupSpec:
    if d < 1:
        raise GroupError(f"cyclic order must be positive, got {d}")
    if weights is None:
        weights = (1, d - 1)
    gen = _diag([root_of_unity(d, a) for a in weights], d)
    return GroupSpec(len(weights), d, (gen,))


def binary_dihedral_spec(m: int) -> GroupSpec:
    """Binary dihedral group of order 4m."""
    if m < 2:
        raise GroupError("binary-dihedral needs m >= 2")
    cond = math.lcm(2 * m, 4)
    z, one = CycNum.zero(cond), CycNum.one(cond)
    a = _diag([root_of_unity(2 * m, 1).embed(cond), root_of_unity(2 * m, -1).embed(cond)], cond)
    b = ((z, one), (-one, z))
    return GroupSpec(2, cond, (a, b))


def _tetra_gens(cond):
    h = CycNum.rational(Fraction(1, 2), cond)
    z = CycNum.zero(cond)
    i_q = _quaternion(z, CycNum.one(cond), z, z, cond)
    w = _quaternion(h, h, h, h, cond)
    return [i_q, w]


def binary_tetrahedral_spec() -> GroupSpec:
    return GroupSpec(2, 4, tuple(_tetra_gens(4)))


def binary_octahedral_spec() -> GroupSpec:
    gens = _tetra_gens(8)
    gens.append(_diag([root_of_unity(8, 1), root_of_unity(8, -1)], 8))
    return GroupSpec(2, 8, tuple(gens))


def binary_icosahedral_spec() -> GroupSpec:
    cond = 20
    z5 = root_of_unity(5).embed(cond)
    inv_phi = z5 + z5 ** 4  # golden ratio minus one
    phi = inv_phi + 1
    h = Fraction(1, 2)
    gens = _tetra_gens(cond)
    gens.append(_quaternion(phi * h, inv_phi * h, CycNum.rational(h, cond), CycNum.zero(cond), cond))
    return GroupSpec(2, cond, tuple(gens))


def trivial_spec(n: int) -> GroupSpec:
    return GroupSpec(n, 1, (identity_matrix(n, 1),))


CATALOG_HELP = (
    "cyclic:d, cyclic:d:a1,...,an, binary-dihedral:m, binary-tetrahedral, "
    "binary-octahedral, binary-icosahedral, trivial:n"
)


def catalog_spec(name: str) -> GroupSpec:
    parts = name.strip().split(":")
    kind = parts[0]
    try:
        if kind == "cyclic" and len(parts) == 2:
            return cyclic_spec(int(parts[1]))
        if kind == "cyclic" and len(parts) == 3:
            return cyclic_spec(int(parts[1]), [int(a) for a in parts[2].split(",")])
        if kind == "binary-dihedral" and len(parts) == 2:
            return binary_dihedral_spec(int(parts[1]))
        if kind == "trivial" and len(parts) == 2:
            return trivial_spec(int(parts[1]))
    except ValueError as exc:
        raise GroupError(f"bad catalog identifier {name!r}: {exc}") from None
    if len(parts) == 1:
        simple = {
            "binary-tetrahedral": binary_tetrahedral_spec,
            "binary-octahedral": binary_octahedral_spec,
            "binary-icosahedral": binary_icosahedral_spec,
        }
        if kind in simple:
            return simple[kind]()
    raise GroupError(f"unknown catalog identifier {name!r}; known: {CATALOG_HELP}")


def summarize(g: Group) -> dict:
    return {"order": g.order, "n": g.n, "mode": g.mode, "classes": len(conjugacy_classes(g))}
