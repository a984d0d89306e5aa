"""Group side of the correspondence: orbifold sums over conjugacy classes and arc classification."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import motivic
from .groups import ConjClass, Group, conjugacy_classes, mat_str, weight
from .motivic import HodgeExpr, MotivicExpr, MotivicTerm, euler_realize, hodge_realize

INDETERMINATE = "indeterminate"


def orbifold_sum(g: Group) -> MotivicExpr:
    """Sum of L^(-w) over conjugacy classes; grain |G| so GL weights fit."""
    terms = [MotivicTerm(Fraction(1), -c.weight) for c in conjugacy_classes(g)]
    return MotivicExpr(terms, grain=g.order if g.mode == "GL" else 1)


def fiber_sum(g: Group) -> MotivicExpr:
    terms = [MotivicTerm(Fraction(1), g.n - c.weight) for c in conjugacy_classes(g)]
    return MotivicExpr(terms, grain=g.order if g.mode == "GL" else 1)


def per_class_measure(g: Group, gamma) -> MotivicExpr:
    return MotivicExpr.lpow(-weight(g, gamma))


@dataclass
class McKayReport:
    order: int
    n: int
    mode: str
    classes: list[ConjClass]
    measure_sum: MotivicExpr
    fiber_sum: MotivicExpr
    euler: Fraction
    hodge: HodgeExpr
    point_count: dict = field(default_factory=dict)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def to_json(self) -> dict:
        out = {
            "group": {"order": self.order, "n": self.n, "mode": self.mode, "classes": self.num_classes},
            "classes": [
                {
                    "representative": mat_str(c.representative),
                    "size": c.size,
                    "exponents": list(c.exponents),
                    "weight": str(c.weight),
                }
                for c in self.classes
            ],
            "measure_sum": motivic.to_json(self.measure_sum),
            "measure_sum_text": str(self.measure_sum),
            "fiber_sum": motivic.to_json(self.fiber_sum),
            "fiber_sum_text": str(self.fiber_sum),
            "euler": str(self.euler),
            "hodge": str(self.hodge),
        }
        if self.point_count:
            out["point_count"] = {str(q): str(v) for q, v in self.point_count.items()}
        return out

    def to_text(self, hodge: bool = True, euler: bool = True) -> str:
        lines = [f"group: order {self.order}, n = {self.n}, mode {self.mode}, {self.num_classes} classes", ""]
        header = ("class", "size", "exponents", "weight", "representative")
        rows = [
            (str(k), str(c.size), ",".join(map(str, c.exponents)), str(c.weight), mat_str(c.representative))
            for k, c in enumerate(self.classes)
        ]
        widths = [max(len(r[i]) for r in rows + [header]) for i in range(4)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths) + "  {}"
        lines.append(fmt.format(*header))
        lines.extend(fmt.format(*r) for r in rows)
        lines.append("")
        lines.append(f"orbifold sum: {self.measure_sum}")
        lines.append(f"fiber sum:    {self.fiber_sum}")
        if euler:
            lines.append(f"euler:        {self.euler}")
        if hodge:
            lines.append(f"hodge:        {self.hodge}")
        for q, v in self.point_count.items():
            lines.append(f"point count (q={q}): {v}")
        return "\n".join(lines)


def analyze(g: Group, point_count: Sequence[int] = ()) -> McKayReport:
    classes = conjugacy_classes(g)
    fs = fiber_sum(g)
    ms = orbifold_sum(g)
    return McKayReport(
        order=g.order,
        n=g.n,
        mode=g.mode,
        classes=classes,
        measure_sum=ms,
        fiber_sum=fs,
        euler=euler_realize(fs),
        hodge=hodge_realize(fs),
        point_count={q: motivic.point_count_realize(ms, q) for q in point_count},
    )


# -- arcs on A^2 / Z_d with invariants u = x^d, v = y^d, w = xy ---------------------

def _trunc_mul(a, b, n, mod):
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    if mod:
        out = [c % mod for c in out]
    return out


def _pad(series, n, mod):
    s = [Fraction(c) if not mod else int(c) % mod for c in series]
    if len(s) > n + 1:
        s = s[: n + 1]
    return s + [0] * (n + 1 - len(s))


def classify_arc_cyclic(d: int, jet: Sequence[Sequence], level: int, modulus: int | None = None):
    """Conjugacy-class label e in [1, d] of an origin jet on uv = w^d, or INDETERMINATE.

    The jet (u, v, w) is truncated at t^(level+1); coefficients are rationals, or
    residues mod ``modulus``. An arc lifting to x = t^(e/d) f1, y = t^((d-e)/d) f2
    has ord_t(u) = e mod d, which labels the class of diag(xi, xi^-1)^e.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if len(jet) != 3:
        raise ValueError("jet must be a triple (u, v, w)")
    u, v, w = (_pad(s, level, modulus) for s in jet)
    if u[0] or v[0] or w[0]:
        raise ValueError("jet is not centered at the origin")
    lhs = _trunc_mul(u, v, level, modulus)
    rhs = [1] + [0] * level
    for _ in range(d):
        rhs = _trunc_mul(rhs, w, level, modulus)
    if any((a - b) % modulus if modulus else a - b for a, b in zip(lhs, rhs)):
        raise ValueError(f"jet does not satisfy uv = w^{d} modulo t^{level + 1}")
    order = next((i for i, c in enumerate(u) if c), None)
    if order is None:
        return INDETERMINATE
    e = order % d
    return e if e else d


# -- pullback of the volume form under x_i -> t^(e_i/d) x_i ----------------------------

def pullback_volume_order(exponents: Sequence[int], d: int) -> Fraction:
    """t-order of the dx_1^...^dx_n coefficient of the pulled-back volume form.

    Each dx_i pulls back to t^a dx_i + a t^(a-1) x_i dt with a = e_i/d; the
    wedge is expanded over the basis {dx_1, ..., dx_n, dt} term by term.
    """
    n = len(exponents)
    dt = n
    # k-form: {sorted basis tuple: {(t_exp, x_monomial): coeff}}
    form: dict = {(): {(Fraction(0), (0,) * n): Fraction(1)}}
    for i, e in enumerate(exponents):
        a = Fraction(e, d)
        xi = tuple(1 if j == i else 0 for j in range(n))
        one_form = {
            i: {(a, (0,) * n): Fraction(1)},
            dt: {(a - 1, xi): a},
        }
        new: dict = defaultdict(lambda: defaultdict(Fraction))
        for basis, poly in form.items():
            for b, mono in one_form.items():
                if b in basis:
                    continue
                sign = (-1) ** sum(1 for x in basis if x > b)
                key = tuple(sorted(basis + (b,)))
                for (t1, x1), c1 in poly.items():
                    for (t2, x2), c2 in mono.items():
                        if not c2:
                            continue
                        mk = (t1 + t2, tuple(p + r for p, r in zip(x1, x2)))
                        new[key][mk] += sign * c1 * c2
        form = {k: {m: c for m, c in v.items() if c} for k, v in new.items()}
    top = form.get(tuple(range(n)), {})
    if not top:
        raise AssertionError("volume form pulled back to zero")
    return min(t for (t, _), c in top.items() if c)
