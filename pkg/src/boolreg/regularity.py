"""Constructive regularity decompositions with enforced depth and mass bounds.

``decompose`` repeatedly splits every leaf whose subfunction still has a
coordinate of noisy influence above eps, always on the argmax-influence
variable.  Each such pass raises the tree energy by more than
eps*delta*gamma while more than a gamma fraction of leaf mass is bad, and
the energy is capped by E[f^2] <= 1, so at most 1/(eps*delta*gamma) passes
can run.  ``decompose_homogeneous`` additionally forces every level of the
tree to query one fixed variable, at the price of a tower-type size bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .boolfn import BooleanFunction, norm2, wht
from .dtree import (
    DecisionTree,
    EnergyLedger,
    Leaf,
    leaves,
    singleton,
    split_all_leaves,
    split_leaf,
    tree_depth,
)
from .noise import INFLUENCE_SLACK, all_noisy_influences, expansion_influences, stability

# Guard band for the internal phi <= 1 sanity check; the energy is a sum of
# at most 2^n nonnegative doubles, so anything past this is a logic bug.
_PHI_GUARD = 1e-9


@dataclass(frozen=True)
class RegularityParams:
    """Influence threshold eps, noise rate delta, bad-mass allowance gamma."""

    eps: float
    delta: float
    gamma: float

    def __post_init__(self):
        if self.eps <= 0.0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if not math.isfinite(self.budget):
            raise ValueError("iteration budget 1/(eps*delta*gamma) must be finite")

    @property
    def budget(self) -> float:
        """Iteration and depth budget 1/(eps*delta*gamma)."""
        return 1.0 / (self.eps * self.delta * self.gamma)


@dataclass
class DecompositionResult:
    tree: DecisionTree
    iterations: int
    ledger: EnergyLedger
    bad_mass: float
    homogeneous_vars: list[int] = field(default_factory=list)
    exhausted: bool = False  # homogeneous variant ran out of var_cap


def _analyze(t: DecisionTree, eps: float, delta: float) -> tuple[float, list[tuple[Leaf, int]], float]:
    """One spectrum per leaf feeds both the energy and the bad-leaf scan.

    Returns (energy, [(bad leaf, its argmax-influence variable)], bad mass).
    """
    phi = 0.0
    bad: list[tuple[Leaf, int]] = []
    bad_mass = 0.0
    for leaf, depth in leaves(t):
        ghat = wht(leaf.fn)
        phi += 2.0 ** -depth * stability(ghat, 1.0 - delta)
        influences = expansion_influences(ghat, delta)
        worst = int(influences.argmax())
        if influences[worst] > eps + INFLUENCE_SLACK:
            bad.append((leaf, worst))
            bad_mass += 2.0 ** -depth
    return phi, bad, bad_mass


def _check_phi(phi: float, bound: float) -> None:
    if phi > bound + _PHI_GUARD:
        raise RuntimeError(f"internal error: energy {phi} exceeds bound {bound}")


def decompose(f: BooleanFunction, p: RegularityParams) -> DecompositionResult:
    """Split every bad leaf on its argmax-influence variable until at most a
    gamma fraction of leaf mass fails the (eps, delta)-small-influence test.

    The returned tree computes f exactly, has depth at most
    min(1/(eps*delta*gamma), n), and its ledger records the energy after
    every pass; each recorded gain exceeds eps*delta*gamma.
    """
    f.require_unit_mean_square()
    norm_bound = max(1.0, norm2(f))
    t = singleton(f)
    phi, bad, bad_mass = _analyze(t, p.eps, p.delta)
    _check_phi(phi, norm_bound)
    ledger = EnergyLedger(phi)
    ledger.record(0, phi, 0)
    iterations = 0
    while bad_mass > p.gamma:
        if tree_depth(t) + 1 > min(p.budget, float(t.n)):
            raise RuntimeError(
                "internal error: split would push depth past "
                f"min(budget={p.budget}, n={t.n}); the energy argument forbids this"
            )
        for leaf, worst_var in bad:
            t = split_leaf(t, leaf.id, worst_var)
        iterations += 1
        if iterations > p.budget:
            raise RuntimeError(f"internal error: iteration count passed budget {p.budget}")
        phi, bad, bad_mass = _analyze(t, p.eps, p.delta)
        _check_phi(phi, norm_bound)
        ledger.record(iterations, phi, tree_depth(t))
    return DecompositionResult(t, iterations, ledger, bad_mass)


def decompose_homogeneous(f: BooleanFunction, p: RegularityParams, var_cap: int) -> DecompositionResult:
    """Variant whose tree queries one fixed variable per level.

    Each pass collects the argmax-influence variables of all bad leaves and
    splits every leaf on all of them, so the leaves are exactly the
    restrictions of f on the query set.  When the next pass would push the
    query set past ``var_cap`` the partial tree is returned with
    ``exhausted`` set instead of an error: the guaranteed worst case is a
    tower-type size that no table-based run could reach anyway.
    """
    f.require_unit_mean_square()
    if not 0 <= var_cap <= f.n:
        raise ValueError(f"var_cap must lie in [0, n={f.n}], got {var_cap}")
    norm_bound = max(1.0, norm2(f))
    t = singleton(f)
    query_vars: list[int] = []
    phi, bad, bad_mass = _analyze(t, p.eps, p.delta)
    _check_phi(phi, norm_bound)
    ledger = EnergyLedger(phi)
    ledger.record(0, phi, 0)
    iterations = 0
    exhausted = False
    while bad_mass > p.gamma:
        new_vars = sorted({worst_var for _, worst_var in bad} - set(query_vars))
        if not new_vars:
            raise RuntimeError("internal error: bad leaf with no splittable variable")
        if len(query_vars) + len(new_vars) > var_cap:
            exhausted = True
            break
        for var in new_vars:
            t = split_all_leaves(t, var)
            query_vars.append(var)
        iterations += 1
        if iterations > p.budget:
            raise RuntimeError(f"internal error: iteration count passed budget {p.budget}")
        phi, bad, bad_mass = _analyze(t, p.eps, p.delta)
        _check_phi(phi, norm_bound)
        ledger.record(iterations, phi, len(query_vars))
    return DecompositionResult(t, iterations, ledger, bad_mass, query_vars, exhausted)


def tower(k: int) -> int | float:
    """Iterated exponential 2^^k, saturating to math.inf past the int64 range."""
    if k < 0:
        raise ValueError(f"tower height must be nonnegative, got {k}")
    value = 1
    for _ in range(k):
        if value > 63:
            return math.inf
        value = 2 ** value
    return value


def decomposition_report(result: DecompositionResult, p: RegularityParams,
                         homogeneous: bool) -> dict:
    """JSON-ready summary: params, energy trace, and per-leaf statistics."""
    leaf_rows = []
    for leaf, depth in leaves(result.tree):
        influences = all_noisy_influences(leaf.fn, p.delta)
        leaf_rows.append({
            "id": leaf.id,
            "depth": depth,
            "mass": 2.0 ** -depth,
            "mean": float(leaf.fn.values.mean()),
            "max_influence": float(influences.max()),
        })
    return {
        "params": {"eps": p.eps, "delta": p.delta, "gamma": p.gamma, "budget": p.budget},
        "homogeneous": homogeneous,
        "status": "budget_exceeded" if result.exhausted else "ok",
        "iterations": result.iterations,
        "energy_history": [[it, phi] for it, phi in result.ledger.history],
        "depth": tree_depth(result.tree),
        "bad_mass": result.bad_mass,
        "query_vars": [v + 1 for v in result.homogeneous_vars],
        "num_query_vars": len(result.homogeneous_vars),
        "leaves": leaf_rows,
    }
