"""Resolution side: Gorenstein measures from exceptional-divisor strata, and catalog data."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from . import motivic
from .groups import (
    Group,
    GroupSpec,
    binary_dihedral_spec,
    binary_icosahedral_spec,
    binary_octahedral_spec,
    binary_tetrahedral_spec,
    cyclic_spec,
)
from .mckay import orbifold_sum
from .motivic import ONE, ZERO, L, MotivicExpr


class ResolutionError(ValueError):
    pass


class NotCrepantError(ResolutionError):
    pass


def _check_polynomial_class(expr: MotivicExpr) -> None:
    for t in expr.terms:
        if t.factors or t.exponent.denominator != 1 or t.exponent < 0:
            raise ResolutionError(f"stratum class must be a polynomial in L, got {expr}")


@dataclass(frozen=True)
class ResolutionData:
    """Discrepancy data nu_i and the classes of the strata E_I^o over the chosen W.

    ``strata`` maps a tuple of component ids (in component order) to a class;
    missing subsets have class 0.
    """

    dim: int
    components: tuple[tuple[Hashable, int], ...]
    strata: tuple[tuple[tuple, MotivicExpr], ...]

    def __post_init__(self):
        ids = [c for c, _ in self.components]
        if len(set(ids)) != len(ids):
            raise ResolutionError("duplicate component id")
        for cid, nu in self.components:
            if not isinstance(nu, int) or nu < 1:
                raise ResolutionError(f"component {cid!r}: nu must be an integer >= 1, got {nu!r}")
        pos = {c: i for i, c in enumerate(ids)}
        seen = set()
        norm = []
        for subset, cls in self.strata:
            for c in subset:
                if c not in pos:
                    raise ResolutionError(f"stratum references unknown component {c!r}")
            key = tuple(sorted(set(subset), key=pos.__getitem__))
            if len(key) != len(subset):
                raise ResolutionError(f"repeated id in stratum {subset!r}")
            if key in seen:
                raise ResolutionError(f"stratum {key!r} listed twice")
            seen.add(key)
            _check_polynomial_class(cls)
            norm.append((key, cls))
        object.__setattr__(self, "strata", tuple(norm))

    @classmethod
    def build(cls, dim: int, nus: Mapping[Hashable, int], strata: Mapping[Iterable, MotivicExpr]) -> "ResolutionData":
        return cls(dim, tuple(nus.items()), tuple((tuple(k), v) for k, v in strata.items()))

    @property
    def nu(self) -> dict:
        return dict(self.components)

    @property
    def crepant(self) -> bool:
        return all(nu == 1 for _, nu in self.components)

    def with_nu(self, cid, nu: int) -> "ResolutionData":
        comps = tuple((c, nu if c == cid else v) for c, v in self.components)
        return ResolutionData(self.dim, comps, self.strata)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "components": [{"id": c, "nu": nu} for c, nu in self.components],
            "strata": [{"subset": list(k), "class": motivic.to_json(v)} for k, v in self.strata],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "ResolutionData":
        try:
            comps = tuple((c["id"], c["nu"]) for c in data["components"])
            strata = tuple((tuple(s["subset"]), motivic.from_json(s["class"])) for s in data["strata"])
            return cls(int(data["dim"]), comps, strata)
        except (KeyError, TypeError) as exc:
            raise ResolutionError(f"malformed resolution data: {exc}") from None


def gorenstein_measure(res: ResolutionData) -> MotivicExpr:
    """L^-dim * sum_I [E_I^o] * prod_{i in I} (L-1)/(L^nu_i - 1)."""
    nu = res.nu
    total = ZERO
    for subset, cls in res.strata:
        term = cls
        for c in subset:
            term = term * MotivicExpr.factor(nu[c])
        total = total + term
    return MotivicExpr.lpow(-res.dim) * total


@dataclass(frozen=True)
class McKayCheck:
    holds: bool
    lhs: MotivicExpr
    rhs: MotivicExpr


def check_mckay_identity(res: ResolutionData, g: Group) -> McKayCheck:
    if res.dim != g.n:
        raise ResolutionError(f"dimension mismatch: resolution has dim {res.dim}, group acts on A^{g.n}")
    if g.mode != "SL":
        raise ResolutionError("the resolution formula is only available for subgroups of SL_n")
    lhs = gorenstein_measure(res)
    rhs = orbifold_sum(g)
    return McKayCheck(motivic.expr_eq(lhs, rhs), lhs, rhs)


def crepant_fiber_class(res: ResolutionData) -> MotivicExpr:
    if not res.crepant:
        raise NotCrepantError("resolution not crepant")
    total = ZERO
    for _, cls in res.strata:
        total = total + cls
    return total


def tree_resolution(n_vertices: int, edges: Iterable[tuple[int, int]]) -> ResolutionData:
    """Crepant surface resolution whose fiber over 0 is a tree of P^1's (ids 1..n)."""
    edges = [tuple(sorted(e)) for e in edges]
    deg = {v: 0 for v in range(1, n_vertices + 1)}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    strata: dict = {(): ZERO}
    for v in range(1, n_vertices + 1):
        strata[(v,)] = L + (1 - deg[v])
    for e in edges:
        strata[e] = ONE
    return ResolutionData.build(2, {v: 1 for v in deg}, strata)


def toric_cyclic_2d(d: int) -> ResolutionData:
    """Minimal resolution of A^2/Z_d, d >= 2: a chain of d-1 rational curves."""
    if d < 2:
        raise ResolutionError("d must be at least 2")
    return tree_resolution(d - 1, [(i, i + 1) for i in range(1, d - 1)])


def _dynkin_d(r: int):
    edges = [(i, i + 1) for i in range(1, r - 2)]
    edges += [(r - 2, r - 1), (r - 2, r)]
    return r, edges


def _dynkin_e(r: int):
    edges = [(i, i + 1) for i in range(1, r - 1)]
    edges.append((3, r))
    return r, edges


def p2_fiber_resolution() -> ResolutionData:
    """Crepant resolution of A^3/Z_3 (1,1,1): the exceptional divisor is a single P^2."""
    return ResolutionData.build(3, {"E": 1}, {(): ZERO, ("E",): ONE + L + L * L})


ADE_HELP = "A:d (d >= 2), D:m (m >= 2, binary dihedral of order 4m), E6, E7, E8, cyclic:3:1,1,1"


def ade_catalog(name: str) -> tuple[GroupSpec, ResolutionData]:
    name = name.strip()
    kind, _, arg = name.partition(":")
    try:
        if kind == "A" and arg:
            d = int(arg)
            return cyclic_spec(d), toric_cyclic_2d(d)
        if kind == "D" and arg:
            m = int(arg)
            if m < 2:
                raise ResolutionError("D:m needs m >= 2")
            return binary_dihedral_spec(m), tree_resolution(*_dynkin_d(m + 2))
    except ValueError as exc:
        raise ResolutionError(f"bad catalog identifier {name!r}: {exc}") from None
    if name == "E6":
        return binary_tetrahedral_spec(), tree_resolution(*_dynkin_e(6))
    if name == "E7":
        return binary_octahedral_spec(), tree_resolution(*_dynkin_e(7))
    if name == "E8":
        return binary_icosahedral_spec(), tree_resolution(*_dynkin_e(8))
    if name in ("cyclic:3:1,1,1", "Z3:1,1,1"):
        return cyclic_spec(3, (1, 1, 1)), p2_fiber_resolution()
    raise ResolutionError(f"unknown catalog identifier {name!r}; known: {ADE_HELP}")


def catalog_names(max_a: int = 12, max_d: int = 6) -> list[str]:
    names = [f"A:{d}" for d in range(2, max_a + 1)]
    names += [f"D:{m}" for m in range(2, max_d + 1)]
    return names + ["E6", "E7", "E8"]
