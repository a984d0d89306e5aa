"""Brute-force jet counting over prime fields.

A level-n jet assigns to every ambient variable a polynomial of degree <= n over
F_q; it lies on X when every equation vanishes mod t^(n+1). Jets are built one
t-degree ("layer") at a time: the t^k coefficient of an equation only depends on
layers 0..k, so each layer is checked as soon as it is chosen.

Work is measured in candidate evaluations (one layer choice checked against all
equations); every entry point takes a ``budget`` on that count.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numba as nb
import numpy as np
import sympy

from .mckay import INDETERMINATE, classify_arc_cyclic

DEFAULT_PRIME_CAP = 5
DEFAULT_BUDGET = 10**8


class JetError(ValueError):
    pass


class JetBudgetError(JetError):
    pass


# -- problem description ------------------------------------------------------------

def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, math.isqrt(q) + 1))


def parse_equations(equations: Sequence[str], variables: Sequence[str] | None = None):
    """Parse polynomial strings into ({exponent tuple: int coeff}, ...) and the variable names."""
    exprs = [sympy.sympify(e.replace("^", "**")) for e in equations]
    if variables is None:
        variables = sorted({str(s) for e in exprs for s in e.free_symbols})
    syms = sympy.symbols(list(variables))
    if not isinstance(syms, (list, tuple)):
        syms = [syms]
    polys = []
    for e in exprs:
        p = sympy.Poly(e, *syms)
        terms = {}
        for mono, c in p.terms():
            if not c.is_integer:
                raise JetError(f"non-integer coefficient {c} in {e}")
            terms[tuple(int(a) for a in mono)] = int(c)
        polys.append(terms)
    return tuple(polys), tuple(variables)


@dataclass(frozen=True)
class JetProblem:
    equations: tuple  # of {exponent tuple: int}
    nvars: int
    q: int
    level: int
    origin_only: bool = True
    variables: tuple = ()
    dim: int | None = None
    prime_cap: int = DEFAULT_PRIME_CAP
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if not _is_prime(self.q):
            raise JetError(f"q = {self.q} is not prime")
        if self.q > self.prime_cap:
            raise JetError(f"q = {self.q} exceeds the prime cap {self.prime_cap}")
        if self.level < 0:
            raise JetError("level must be >= 0")
        for eq in self.equations:
            for mono in eq:
                if len(mono) != self.nvars:
                    raise JetError("monomial arity does not match the number of variables")
        if not self.variables:
            object.__setattr__(self, "variables", tuple(f"x{i}" for i in range(self.nvars)))

    @classmethod
    def from_strings(cls, equations: Sequence[str], q: int, level: int, variables=None, **kw) -> "JetProblem":
        polys, names = parse_equations(equations, variables)
        return cls(polys, len(names), q, level, variables=names, **kw)

    @property
    def ambient_dim(self) -> int:
        return self.nvars - len(self.equations) if self.dim is None else self.dim

    @property
    def free_coefficients(self) -> int:
        return self.nvars * (self.level if self.origin_only else self.level + 1)

    def at_level(self, level: int) -> "JetProblem":
        return replace(self, level=level)

    def to_json(self) -> dict:
        names = self.variables
        eqs = []
        for eq in self.equations:
            expr = sum(
                c * sympy.Mul(*[sympy.Symbol(v) ** a for v, a in zip(names, mono)]) for mono, c in eq.items()
            )
            eqs.append(str(sympy.expand(expr)).replace("**", "^"))
        out = {
            "equations": eqs,
            "variables": list(names),
            "q": self.q,
            "level": self.level,
            "origin_only": self.origin_only,
        }
        if self.dim is not None:
            out["dim"] = self.dim
        return out

    @classmethod
    def from_json(cls, data: dict, **overrides) -> "JetProblem":
        kw = {
            "q": int(data["q"]),
            "level": int(data.get("level", 0)),
            "origin_only": bool(data.get("origin_only", True)),
            "dim": data.get("dim"),
        }
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_strings(data["equations"], variables=data.get("variables"), **kw)

    def _arrays(self):
        monos, coefs, eqid = [], [], []
        for e, eq in enumerate(self.equations):
            for mono, c in eq.items():
                if c % self.q:
                    monos.append(mono)
                    coefs.append(c % self.q)
                    eqid.append(e)
        exps = np.array(monos, dtype=np.int64).reshape(len(monos), self.nvars)
        return exps, np.array(coefs, dtype=np.int64), np.array(eqid, dtype=np.int64), len(self.equations)


# -- compiled kernels -------------------------------------------------------------------

@nb.njit(cache=True)
def _layer_ok(X, k, exps, coefs, eqid, neq, q, acc, prod, tmp):
    """True iff the t^k coefficient of every equation vanishes mod q."""
    for e in range(neq):
        acc[e] = 0
    for mi in range(exps.shape[0]):
        for i in range(k + 1):
            prod[i] = 0
        prod[0] = 1
        for j in range(exps.shape[1]):
            for _ in range(exps[mi, j]):
                for i in range(k + 1):
                    s = 0
                    for l in range(i + 1):
                        s += prod[l] * X[j, i - l]
                    tmp[i] = s % q
                for i in range(k + 1):
                    prod[i] = tmp[i]
        acc[eqid[mi]] = (acc[eqid[mi]] + coefs[mi] * prod[k]) % q
    for e in range(neq):
        if acc[e] != 0:
            return False
    return True


@nb.njit(cache=True)
def _set_layer(X, k, choice, nv, q):
    for j in range(nv):
        X[j, k] = choice % q
        choice //= q


@nb.njit(cache=True)
def _extend_layer(parents, k, exps, coefs, eqid, neq, q, store):
    """Children of every parent at layer k; returns (children, survivors-per-parent)."""
    S, nv, K = parents.shape
    nch = q ** nv
    acc = np.zeros(max(neq, 1), np.int64)
    prod = np.zeros(K, np.int64)
    tmp = np.zeros(K, np.int64)
    X = np.zeros((nv, K), np.int64)
    ok = np.zeros(S * nch, np.bool_)
    total = 0
    for s in range(S):
        for j in range(nv):
            for i in range(K):
                X[j, i] = parents[s, j, i]
        for c in range(nch):
            _set_layer(X, k, c, nv, q)
            if _layer_ok(X, k, exps, coefs, eqid, neq, q, acc, prod, tmp):
                ok[s * nch + c] = True
                total += 1
    if not store:
        return np.zeros((0, nv, K), parents.dtype), total
    out = np.zeros((total, nv, K), parents.dtype)
    r = 0
    for s in range(S):
        for c in range(nch):
            if ok[s * nch + c]:
                for j in range(nv):
                    for i in range(K):
                        out[r, j, i] = parents[s, j, i]
                cc = c
                for j in range(nv):
                    out[r, j, k] = cc % q
                    cc //= q
                r += 1
    return out, total


@nb.njit(cache=True)
def _lifts(prefix, n, m, exps, coefs, eqid, neq, q, budget):
    """Depth-first search for an extension of a level-n jet to level m.

    Returns (found, work); work > budget means the search was abandoned.
    """
    nv = prefix.shape[0]
    X = np.zeros((nv, m + 1), np.int64)
    for j in range(nv):
        for i in range(n + 1):
            X[j, i] = prefix[j, i]
    if m == n:
        return True, 0
    nch = q ** nv
    acc = np.zeros(max(neq, 1), np.int64)
    prod = np.zeros(m + 1, np.int64)
    tmp = np.zeros(m + 1, np.int64)
    choice = np.zeros(m + 2, np.int64)
    depth = n + 1
    work = 0
    while depth > n:
        if depth > m:
            return True, work
        c = choice[depth]
        if c >= nch:
            for j in range(nv):
                X[j, depth] = 0
            depth -= 1
            if depth > n:
                choice[depth] += 1
            continue
        _set_layer(X, depth, c, nv, q)
        work += 1
        if work > budget:
            return False, work
        if _layer_ok(X, depth, exps, coefs, eqid, neq, q, acc, prod, tmp):
            depth += 1
            if depth <= m:
                choice[depth] = 0
        else:
            choice[depth] += 1
    return False, work


# -- enumeration ------------------------------------------------------------------------

def _check_budget(spent: int, needed: int, budget: int, what: str) -> None:
    if spent + needed > budget:
        raise JetBudgetError(
            f"{what} requires at least {spent + needed} candidate evaluations; budget is {budget}"
        )


def enumerate_jets(p: JetProblem, store_last: bool = True):
    """All level-n solutions as an int8 array (S, nvars, n+1), plus the work spent.

    With ``store_last=False`` the last layer is only counted and the returned
    array holds the parents of that layer.
    """
    exps, coefs, eqid, neq = p._arrays()
    nch = p.q ** p.nvars
    K = p.level + 1
    states = np.zeros((1, p.nvars, K), np.int8)
    spent = 0
    first = 1 if p.origin_only else 0
    count = 1
    for k in range(first, K):
        needed = len(states) * nch
        _check_budget(spent, needed, p.budget, f"level-{p.level} enumeration")
        spent += needed
        last = k == K - 1
        new, count = _extend_layer(states, k, exps, coefs, eqid, neq, p.q, store_last or not last)
        if store_last or not last:
            states = new
        if count == 0:
            states = states[:0]
            break
    return states, count, spent


def count_jets(p: JetProblem) -> int:
    """Number of level-n jets on X (origin jets only when ``origin_only``)."""
    _, count, _ = enumerate_jets(p, store_last=False)
    return count


def _lift_chunk(args):
    prefixes, n, m, arrays, q, budget = args
    exps, coefs, eqid, neq = arrays
    found = np.zeros(len(prefixes), bool)
    work = 0
    for i in range(len(prefixes)):
        ok, w = _lifts(prefixes[i].astype(np.int64), n, m, exps, coefs, eqid, neq, q, budget - work)
        work += w
        if work > budget:
            return found, work
        found[i] = ok
    return found, work


def liftable_mask(p: JetProblem, prefixes: np.ndarray, lift_level: int, budget: int, workers: int = 1):
    """Which level-n prefixes extend to level ``lift_level``; returns (mask, work)."""
    n = p.level
    if lift_level < n:
        raise JetError("lift level must be >= level")
    arrays = p._arrays()
    if lift_level == n or len(prefixes) == 0:
        return np.ones(len(prefixes), bool), 0
    if workers <= 1:
        mask, work = _lift_chunk((prefixes, n, lift_level, arrays, p.q, budget))
    else:
        # partition by the leading coefficient block (the layer-1 coefficients)
        first = 1 if p.origin_only and n >= 1 else 0
        lead = prefixes[:, :, first].astype(np.int64) @ (p.q ** np.arange(p.nvars))
        groups = [np.flatnonzero(lead == v) for v in np.unique(lead)]
        share = budget // max(len(groups), 1)
        jobs = [(prefixes[g], n, lift_level, arrays, p.q, share) for g in groups]
        mask = np.zeros(len(prefixes), bool)
        work = 0
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for g, (m_, w) in zip(groups, ex.map(_lift_chunk, jobs)):
                mask[g] = m_
                work += w
                if w > share:
                    work = budget + 1
    if work > budget:
        raise JetBudgetError(
            f"lifting level-{n} jets to level {lift_level} needs more than the budget of {budget} candidate evaluations"
        )
    return mask, work


def count_liftable_jets(p: JetProblem, lift_level: int, workers: int = 1) -> int:
    """Size of the image of level-m jets under truncation to level n."""
    prefixes, _, spent = enumerate_jets(p)
    mask, _ = liftable_mask(p, prefixes, lift_level, p.budget - spent, workers)
    return int(mask.sum())


@dataclass
class Saturation:
    converged: bool
    count: int | None
    stable_m: int | None
    counts: dict[int, int]
    work: int
    prefixes: np.ndarray = field(repr=False, default=None)
    mask: np.ndarray = field(repr=False, default=None)


NO_CONVERGENCE = "no-convergence"


def saturate(p: JetProblem, cap_m: int, workers: int = 1) -> Saturation:
    """Raise the lift level from n until two consecutive counts agree (or cap_m is hit).

    Liftable sets shrink as m grows, so each step only re-tests survivors.
    """
    prefixes, _, spent = enumerate_jets(p)
    mask = np.ones(len(prefixes), bool)
    counts = {p.level: len(prefixes)}
    m = p.level
    while m + 1 <= cap_m:
        alive = np.flatnonzero(mask)
        sub, w = liftable_mask(p, prefixes[alive], m + 1, p.budget - spent, workers)
        spent += w
        mask = np.zeros(len(prefixes), bool)
        mask[alive[sub]] = True
        counts[m + 1] = int(mask.sum())
        if counts[m + 1] == counts[m]:
            return Saturation(True, counts[m], m, counts, spent, prefixes, mask)
        m += 1
    return Saturation(False, None, None, counts, spent, prefixes, mask)


def cyclic_model(d: int, q: int, level: int, **kw) -> JetProblem:
    """Origin jets on uv = w^d (the A_{d-1} surface singularity)."""
    return JetProblem.from_strings([f"u*v - w^{d}"], q, level, variables=("u", "v", "w"), **kw)


def classify_prefixes(d: int, q: int, prefixes: np.ndarray) -> dict:
    counts: dict = {}
    for pref in prefixes:
        e = classify_arc_cyclic(d, [list(map(int, s)) for s in pref], pref.shape[1] - 1, modulus=q)
        counts[e] = counts.get(e, 0) + 1
    return counts


def class_partition_counts(d: int, q: int, level: int, cap_m: int | None = None, workers: int = 1, **kw) -> dict:
    """Saturated liftable origin jets on uv = w^d bucketed by arc class (plus 'indeterminate')."""
    p = cyclic_model(d, q, level, **kw)
    sat = saturate(p, cap_m if cap_m is not None else 2 * level + 2, workers)
    if not sat.converged:
        raise JetError(f"liftable jets at level {level} did not stabilize by m = {cap_m}")
    out = {e: 0 for e in range(1, d + 1)}
    out[INDETERMINATE] = 0
    out.update(classify_prefixes(d, q, sat.prefixes[sat.mask]))
    return out


# -- tables ---------------------------------------------------------------------------------

@dataclass
class JetRow:
    level: int
    lift_level: int | None
    raw_count: int
    liftable_count: int | None
    normalized: Fraction | None
    per_class_counts: dict = field(default_factory=dict)
    converged: bool = True
    work: int = 0

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "lift_level": self.lift_level,
            "raw_count": self.raw_count,
            "liftable_count": self.liftable_count,
            "normalized": None if self.normalized is None else str(self.normalized),
            "per_class_counts": {str(k): v for k, v in self.per_class_counts.items()},
            "converged": self.converged,
            "work": self.work,
        }


@dataclass
class JetCountTable:
    problem: dict
    rows: list[JetRow]

    def to_json(self) -> dict:
        return {"problem": self.problem, "table": [r.to_json() for r in self.rows]}

    def to_text(self) -> str:
        header = ("n", "m", "raw", "liftable", "normalized", "classes")
        lines = []
        for r in self.rows:
            lines.append((
                str(r.level),
                "-" if r.lift_level is None else str(r.lift_level),
                str(r.raw_count),
                NO_CONVERGENCE if not r.converged else str(r.liftable_count),
                "-" if r.normalized is None else str(r.normalized),
                " ".join(f"{k}:{v}" for k, v in r.per_class_counts.items()) or "-",
            ))
        widths = [max(len(x[i]) for x in lines + [header]) for i in range(len(header))]
        fmt = "  ".join(f"{{:>{w}}}" for w in widths)
        return "\n".join([fmt.format(*header)] + [fmt.format(*x) for x in lines])


def jet_table(
    p: JetProblem,
    levels: Sequence[int],
    cap_m: int | None = None,
    classify_d: int | None = None,
    workers: int = 1,
) -> JetCountTable:
    """One saturated row per level; a level that does not stabilize is kept with converged=False."""
    rows = []
    for n in levels:
        pn = p.at_level(n)
        cap = cap_m if cap_m is not None else 2 * n + 2
        sat = saturate(pn, cap, workers)
        raw = sat.counts[n]
        if sat.converged:
            norm = Fraction(sat.count, p.q ** (p.ambient_dim * (n + 1)))
            per_class = {}
            if classify_d is not None:
                per_class = {e: 0 for e in range(1, classify_d + 1)}
                per_class[INDETERMINATE] = 0
                per_class.update(classify_prefixes(classify_d, p.q, sat.prefixes[sat.mask]))
            rows.append(JetRow(n, sat.stable_m, raw, sat.count, norm, per_class, True, sat.work))
        else:
            rows.append(JetRow(n, max(sat.counts), raw, None, None, {}, False, sat.work))
    return JetCountTable(p.to_json(), rows)
