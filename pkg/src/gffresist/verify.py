"""Theorem harness: machine-checks every step of both effective-resistance
superadditivity proofs (the minimum-energy power chain and the conditional-
entropy chain), the supporting conditional-variance lemma, and the concavity,
scaling, and monotonicity statements themselves.

Each check returns a VerificationReport listing the computed quantities and
one record per verified equality or inequality, with a signed margin so that
near-equality cases are visibly tight rather than silently passing.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .electric import (
    ResistiveNetwork,
    dissipated_power,
    effective_resistance,
    thomson_flow,
)
from .errors import DegenerateEntropyError, DimensionMismatchError, ValidationError
from .gaussian import (
    ConstraintSet,
    DegenerateEntropy,
    GaussianVector,
    condition_on_value,
    condition_on_zero,
    entropy_scalar,
    independent_gaussian,
    linear_functional_variance,
    sample,
)
from .gff import (
    build_free_field,
    potential_difference_functional,
    potential_difference_variance,
)
from .graph import Multigraph, build_multigraph, circuit_matrix, fundamental_circuits

DEFAULT_TOL = 1e-8
Z_LIMIT = 4.0
LOW_POWER_COUNT = 100


@dataclass(frozen=True)
class Inequality:
    """One verified relation between two labeled quantities.

    For ">=" and "<=" the margin is the slack (nonnegative when satisfied
    exactly) and holds means margin >= -tolerance; for "==" the margin is
    the signed difference lhs - rhs. Comparisons against a degenerate
    (point-mass) entropy carry a non-finite margin, serialized as null.
    """

    lhs: str
    rel: str
    rhs: str
    margin: float
    holds: bool


@dataclass(frozen=True)
class VerificationReport:
    """Named check outcome: ordered quantities plus verified relations."""

    name: str
    quantities: tuple
    inequalities: tuple
    tolerance: float

    def __post_init__(self):
        labels = {label for label, _ in self.quantities}
        for ineq in self.inequalities:
            if ineq.lhs not in labels or ineq.rhs not in labels:
                raise ValidationError(
                    f"inequality references unknown quantity in {self.name}")

    @property
    def passed(self) -> bool:
        return all(ineq.holds for ineq in self.inequalities)

    def quantity(self, label: str):
        for lab, value in self.quantities:
            if lab == label:
                return value
        raise KeyError(label)

    def margin(self, lhs: str, rhs: str) -> float:
        for ineq in self.inequalities:
            if ineq.lhs == lhs and ineq.rhs == rhs:
                return ineq.margin
        raise KeyError((lhs, rhs))

    def to_dict(self) -> dict:
        def jsonable(value):
            if isinstance(value, DegenerateEntropy):
                return None
            if isinstance(value, float) and not math.isfinite(value):
                return None
            return value

        return {
            "name": self.name,
            "quantities": {label: jsonable(v) for label, v in self.quantities},
            "inequalities": [
                {"lhs": iq.lhs, "rel": iq.rel, "rhs": iq.rhs,
                 "margin": jsonable(iq.margin), "holds": iq.holds}
                for iq in self.inequalities
            ],
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _geq(label_l, val_l, label_r, val_r, tol) -> Inequality:
    """val_l >= val_r within tol; degenerate entropies sit below all floats."""
    deg_l = isinstance(val_l, DegenerateEntropy)
    deg_r = isinstance(val_r, DegenerateEntropy)
    if deg_l and deg_r:
        return Inequality(label_l, ">=", label_r, 0.0, True)
    if deg_l or deg_r:
        margin = math.inf if deg_r else -math.inf
        return Inequality(label_l, ">=", label_r, margin, deg_r)
    margin = val_l - val_r
    return Inequality(label_l, ">=", label_r, margin, margin >= -tol)


def _leq(label_l, val_l, label_r, val_r, tol) -> Inequality:
    flipped = _geq(label_r, val_r, label_l, val_l, tol)
    return Inequality(label_l, "<=", label_r, flipped.margin, flipped.holds)


def _eq(label_l, val_l, label_r, val_r, abs_tol) -> Inequality:
    deg_l = isinstance(val_l, DegenerateEntropy)
    deg_r = isinstance(val_r, DegenerateEntropy)
    if deg_l and deg_r:
        return Inequality(label_l, "==", label_r, 0.0, True)
    if deg_l or deg_r:
        return Inequality(label_l, "==", label_r, math.nan, False)
    margin = val_l - val_r
    return Inequality(label_l, "==", label_r, margin, abs(margin) <= abs_tol)


def _rel_scale(*values) -> float:
    return max(1.0, *(abs(v) for v in values))


def check_superadditivity(graph: Multigraph, r, r_bar, a: int, b: int,
                          tol: float = DEFAULT_TOL) -> VerificationReport:
    """Effective resistance of the edgewise sum dominates the sum of parts."""
    r = np.asarray(r, dtype=float)
    r_bar = np.asarray(r_bar, dtype=float)
    reff_hat = effective_resistance(ResistiveNetwork(graph, r + r_bar), a, b)
    reff = effective_resistance(ResistiveNetwork(graph, r), a, b)
    reff_bar = effective_resistance(ResistiveNetwork(graph, r_bar), a, b)
    quantities = (
        ("reff_hat", reff_hat),
        ("reff", reff),
        ("reff_bar", reff_bar),
        ("reff_sum", reff + reff_bar),
    )
    ineqs = (_geq("reff_hat", reff_hat, "reff_sum", reff + reff_bar, tol),)
    return VerificationReport("superadditivity", quantities, ineqs, tol)


def check_concavity_segment(graph: Multigraph, r0, r1, grid_points: int,
                            a: int, b: int,
                            tol: float = DEFAULT_TOL) -> VerificationReport:
    """Concavity of the effective resistance along a resistance segment.

    Evaluates lambda -> Reff((1-lambda) r0 + lambda r1) on a uniform grid
    and requires every second difference to be at most tol; also checks the
    midpoint inequality directly.
    """
    if grid_points < 3:
        raise ValidationError("concavity grid needs at least 3 points")
    r0 = np.asarray(r0, dtype=float)
    r1 = np.asarray(r1, dtype=float)
    lams = np.linspace(0.0, 1.0, grid_points)
    f = np.array([
        effective_resistance(
            ResistiveNetwork(graph, (1.0 - lam) * r0 + lam * r1), a, b)
        for lam in lams
    ])
    second = f[:-2] - 2.0 * f[1:-1] + f[2:]
    mid = effective_resistance(ResistiveNetwork(graph, 0.5 * (r0 + r1)), a, b)
    endpoint_mean = 0.5 * (f[0] + f[-1])
    quantities = (
        ("reff_at_r0", float(f[0])),
        ("reff_at_r1", float(f[-1])),
        ("second_diff_max", float(np.max(second))),
        ("second_diff_min", float(np.min(second))),
        ("reff_midpoint", mid),
        ("endpoint_mean", endpoint_mean),
        ("zero", 0.0),
    )
    ineqs = (
        _leq("second_diff_max", float(np.max(second)), "zero", 0.0, tol),
        _geq("reff_midpoint", mid, "endpoint_mean", endpoint_mean, tol),
    )
    return VerificationReport("concavity_segment", quantities, ineqs, tol)


def melvin_chain(graph: Multigraph, r, r_bar, a: int, b: int,
                 tol: float = DEFAULT_TOL) -> VerificationReport:
    """Minimum-energy route to superadditivity, every chain step checked.

    The summed network's optimal flow dissipates its own effective
    resistance; splitting that dissipation across the two resistance
    assignments and re-optimizing each part separately can only lower it.
    """
    r = np.asarray(r, dtype=float)
    r_bar = np.asarray(r_bar, dtype=float)
    net = ResistiveNetwork(graph, r)
    net_bar = ResistiveNetwork(graph, r_bar)
    net_hat = ResistiveNetwork(graph, r + r_bar)

    flow_hat = thomson_flow(net_hat, a, b)
    flow = thomson_flow(net, a, b)
    flow_bar = thomson_flow(net_bar, a, b)

    reff_hat = effective_resistance(net_hat, a, b)
    hat_flow_power = (dissipated_power(net, flow_hat)
                      + dissipated_power(net_bar, flow_hat))
    own_flow_power = (dissipated_power(net, flow)
                      + dissipated_power(net_bar, flow_bar))
    reff_sum = (effective_resistance(net, a, b)
                + effective_resistance(net_bar, a, b))

    quantities = (
        ("reff_hat", reff_hat),
        ("hat_flow_power", hat_flow_power),
        ("own_flow_power", own_flow_power),
        ("reff_sum", reff_sum),
    )
    ineqs = (
        _eq("reff_hat", reff_hat, "hat_flow_power", hat_flow_power,
            tol * _rel_scale(reff_hat, hat_flow_power)),
        _geq("hat_flow_power", hat_flow_power,
             "own_flow_power", own_flow_power, tol),
        _eq("own_flow_power", own_flow_power, "reff_sum", reff_sum,
            tol * _rel_scale(own_flow_power, reff_sum)),
    )
    return VerificationReport("melvin_chain", quantities, ineqs, tol)


def entropy_chain(graph: Multigraph, r, r_bar, a: int, b: int,
                  tol: float = DEFAULT_TOL) -> VerificationReport:
    """Conditional-entropy route to superadditivity.

    Builds the three free fields plus the doubled-dimension joint Gaussian
    over (x, x_bar) and compares conditioning on the summed-field circuit
    constraints (rows acting on x + x_bar) against conditioning each block
    on its own circuit constraints. Coarser conditioning leaves at least as
    much entropy in the a-to-b potential difference.
    """
    r = np.asarray(r, dtype=float)
    r_bar = np.asarray(r_bar, dtype=float)
    net = ResistiveNetwork(graph, r)
    net_bar = ResistiveNetwork(graph, r_bar)
    net_hat = ResistiveNetwork(graph, r + r_bar)

    field = build_free_field(net)
    field_bar = build_free_field(net_bar)
    field_hat = build_free_field(net_hat)

    var_hat = potential_difference_variance(field_hat, a, b)
    var_sum = (potential_difference_variance(field, a, b)
               + potential_difference_variance(field_bar, a, b))

    cycles = circuit_matrix(graph, fundamental_circuits(graph))
    walk_vec = potential_difference_functional(field_hat, a, b)
    k, n_e = cycles.shape
    joint = independent_gaussian(np.concatenate([r, r_bar]))
    functional = np.concatenate([walk_vec, walk_vec])

    hat_rows = np.hstack([cycles, cycles])
    split_rows = scipy.linalg.block_diag(cycles, cycles) if k else \
        np.zeros((0, 2 * n_e))
    var_joint_hat = linear_functional_variance(
        condition_on_zero(joint, ConstraintSet(hat_rows)), functional)
    var_joint_split = linear_functional_variance(
        condition_on_zero(joint, ConstraintSet(split_rows)), functional)

    entropies = {
        "h_hat": entropy_scalar(var_hat),
        "h_joint_hat": entropy_scalar(var_joint_hat),
        "h_joint_split": entropy_scalar(var_joint_split),
        "h_sum": entropy_scalar(var_sum),
    }
    for label, h in entropies.items():
        if isinstance(h, DegenerateEntropy):
            raise DegenerateEntropyError(
                f"{label} collapsed to a point mass; malformed topology?")

    quantities = (
        ("h_hat", entropies["h_hat"]),
        ("h_joint_hat", entropies["h_joint_hat"]),
        ("h_joint_split", entropies["h_joint_split"]),
        ("h_sum", entropies["h_sum"]),
        ("var_hat", var_hat),
        ("var_joint_hat", var_joint_hat),
        ("var_joint_split", var_joint_split),
        ("var_sum", var_sum),
    )
    scale = tol * _rel_scale(*entropies.values())
    ineqs = (
        _eq("h_hat", entropies["h_hat"],
            "h_joint_hat", entropies["h_joint_hat"], scale),
        _geq("h_joint_hat", entropies["h_joint_hat"],
             "h_joint_split", entropies["h_joint_split"], tol),
        _eq("h_joint_split", entropies["h_joint_split"],
            "h_sum", entropies["h_sum"], scale),
    )
    return VerificationReport("entropy_chain", quantities, ineqs, tol)


def check_scaling(graph: Multigraph, r, t: float, a: int, b: int,
                  tol: float = DEFAULT_TOL) -> VerificationReport:
    """Scaling every resistance by t scales the effective resistance by t."""
    if t <= 0:
        raise ValidationError("scale factor must be positive")
    r = np.asarray(r, dtype=float)
    reff = effective_resistance(ResistiveNetwork(graph, r), a, b)
    reff_scaled = effective_resistance(ResistiveNetwork(graph, t * r), a, b)
    quantities = (
        ("reff", reff),
        ("scale_factor", float(t)),
        ("reff_scaled", reff_scaled),
        ("reff_times_t", t * reff),
    )
    ineqs = (_eq("reff_scaled", reff_scaled, "reff_times_t", t * reff,
                 tol * abs(t * reff)),)
    return VerificationReport("scaling", quantities, ineqs, tol)


def check_monotonicity(graph: Multigraph, r, edge: int, delta: float,
                       a: int, b: int,
                       tol: float = DEFAULT_TOL) -> VerificationReport:
    """Raising one edge resistance never lowers the effective resistance."""
    if delta <= 0:
        raise ValidationError("resistance bump must be positive")
    r = np.asarray(r, dtype=float)
    if not 0 <= edge < graph.n_edges:
        raise ValidationError(f"edge id {edge} out of range")
    bumped = r.copy()
    bumped[edge] += delta
    reff = effective_resistance(ResistiveNetwork(graph, r), a, b)
    reff_bumped = effective_resistance(ResistiveNetwork(graph, bumped), a, b)
    quantities = (
        ("reff", reff),
        ("reff_bumped", reff_bumped),
        ("edge", float(edge)),
        ("delta", float(delta)),
    )
    ineqs = (_geq("reff_bumped", reff_bumped, "reff", reff, tol),)
    return VerificationReport("monotonicity", quantities, ineqs, tol)


@dataclass(frozen=True)
class AppendixInstance:
    """Inputs for the conditional-variance lemma check.

    Two independent mean-zero Gaussian blocks w and w_bar of equal
    dimension, a scalar functional of the pair, and conditioning rows
    acting on the w-space: each row phi pins phi . (w + w_bar) on the
    coarse side versus phi . w and phi . w_bar separately on the fine side.
    """

    cov_w: np.ndarray
    cov_w_bar: np.ndarray
    functional: np.ndarray
    conditioning: np.ndarray

    def __post_init__(self):
        cov_w = np.asarray(self.cov_w, dtype=float)
        cov_w_bar = np.asarray(self.cov_w_bar, dtype=float)
        functional = np.asarray(self.functional, dtype=float)
        conditioning = np.atleast_2d(np.asarray(self.conditioning, dtype=float))
        n = cov_w.shape[0]
        if cov_w.shape != (n, n) or cov_w_bar.shape != (n, n):
            raise DimensionMismatchError("covariance blocks must be square and equal-size")
        if functional.shape != (2 * n,):
            raise DimensionMismatchError(
                f"functional must have length {2 * n}, got {functional.shape}")
        if conditioning.shape[1] != n:
            raise DimensionMismatchError(
                f"conditioning rows must have {n} columns")
        object.__setattr__(self, "cov_w", cov_w)
        object.__setattr__(self, "cov_w_bar", cov_w_bar)
        object.__setattr__(self, "functional", functional)
        object.__setattr__(self, "conditioning", conditioning)

    @property
    def dim(self) -> int:
        return self.cov_w.shape[0]


def random_appendix_instance(dim: int, seed: int) -> AppendixInstance:
    """Seeded random jointly-Gaussian instance for the lemma check."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim))
    a_bar = rng.standard_normal((dim, dim))
    k = int(rng.integers(1, dim + 1))
    return AppendixInstance(
        cov_w=a @ a.T,
        cov_w_bar=a_bar @ a_bar.T,
        functional=rng.standard_normal(2 * dim),
        conditioning=rng.standard_normal((k, dim)),
    )


def appendix_check(instance: AppendixInstance,
                   tol: float = DEFAULT_TOL) -> VerificationReport:
    """Conditioning on the sum leaves at least the variance of conditioning
    on the parts, and the conditional variance ignores the pinned value."""
    n = instance.dim
    phi = instance.conditioning
    joint = GaussianVector(
        np.zeros(2 * n),
        scipy.linalg.block_diag(instance.cov_w, instance.cov_w_bar))
    hat_rows = ConstraintSet(np.hstack([phi, phi]))
    split_rows = ConstraintSet(scipy.linalg.block_diag(phi, phi))

    cond_hat = condition_on_zero(joint, hat_rows)
    cond_split = condition_on_zero(joint, split_rows)
    var_hat = linear_functional_variance(cond_hat, instance.functional)
    var_split = linear_functional_variance(cond_split, instance.functional)
    h_hat = entropy_scalar(var_hat)
    h_split = entropy_scalar(var_split)

    # The conditional covariance formula has no dependence on the pinned
    # value; witness it at a second, reachable value.
    gram = hat_rows.rows @ joint.covariance @ hat_rows.rows.T
    alt_value = gram @ np.ones(phi.shape[0])
    cond_alt = condition_on_value(joint, hat_rows, alt_value)
    var_hat_alt = linear_functional_variance(cond_alt, instance.functional)

    quantities = (
        ("var_given_hat", var_hat),
        ("var_given_split", var_split),
        ("h_given_hat", h_hat),
        ("h_given_split", h_split),
        ("var_given_hat_alt", var_hat_alt),
    )
    ineqs = (
        _geq("var_given_hat", var_hat, "var_given_split", var_split, tol),
        _geq("h_given_hat", h_hat, "h_given_split", h_split, tol),
        _eq("var_given_hat", var_hat, "var_given_hat_alt", var_hat_alt,
            tol * _rel_scale(var_hat)),
    )
    return VerificationReport("appendix_lemma", quantities, ineqs, tol)


def monte_carlo_variance_check(graph: Multigraph, r, a: int, b: int,
                               count: int, seed: int) -> VerificationReport:
    """Statistical route: sampled potential-difference variance vs Reff."""
    net = ResistiveNetwork(graph, np.asarray(r, dtype=float))
    field = build_free_field(net)
    functional = potential_difference_functional(field, a, b)
    draws = sample(field.edge_field, count, seed) @ functional
    empirical = float(np.var(draws))
    reff = effective_resistance(net, a, b)
    z = abs(empirical - reff) / (reff * math.sqrt(2.0 / count))
    quantities = [
        ("reff", reff),
        ("empirical_variance", empirical),
        ("z_score", z),
        ("z_limit", Z_LIMIT),
        ("sample_count", float(count)),
    ]
    if count < LOW_POWER_COUNT:
        quantities.append(("low_power", 1.0))
    ineqs = (_leq("z_score", z, "z_limit", Z_LIMIT, 0.0),)
    return VerificationReport("monte_carlo_variance", tuple(quantities),
                              ineqs, 0.0)


# --- randomized desk-scale instance generation -----------------------------

R_LOW, R_HIGH = 0.1, 10.0
MAX_VERTICES, MAX_EDGES = 8, 16


def random_resistances(rng, n_edges: int,
                       low: float = R_LOW, high: float = R_HIGH) -> np.ndarray:
    """Log-uniform resistances on [low, high]."""
    return np.exp(rng.uniform(math.log(low), math.log(high), n_edges))


def random_network(rng, max_vertices: int = MAX_VERTICES,
                   max_edges: int = MAX_EDGES) -> ResistiveNetwork:
    """Random connected multigraph (parallel edges allowed) with log-uniform
    resistances; a random spanning tree guarantees connectivity."""
    n_v = int(rng.integers(2, max_vertices + 1))
    specs = [(int(rng.integers(0, v)), v) for v in range(1, n_v)]
    for _ in range(int(rng.integers(0, max_edges - (n_v - 1) + 1))):
        u = int(rng.integers(0, n_v))
        v = int(rng.integers(0, n_v - 1))
        if v >= u:
            v += 1
        specs.append((u, v))
    graph = build_multigraph(list(range(n_v)), specs)
    return ResistiveNetwork(graph, random_resistances(rng, graph.n_edges))


def random_pair(rng, n_vertices: int) -> tuple:
    a = int(rng.integers(0, n_vertices))
    b = int(rng.integers(0, n_vertices - 1))
    if b >= a:
        b += 1
    return a, b


def instance_rng(suite_seed: int, index: int):
    """Deterministic per-instance generator derived from (suite seed, index)."""
    return np.random.default_rng((suite_seed, index))


SUITE_CHECKS = ("superadditivity", "melvin_chain", "entropy_chain",
                "scaling", "monotonicity", "concavity")


def run_suite(seed: int, instances: int, tol: float = DEFAULT_TOL,
              grid_points: int = 11) -> dict:
    """Randomized property battery over desk-scale networks.

    Returns a summary mapping each check name to its failure count and the
    worst signed margin seen, plus an overall pass flag.
    """
    summary = {name: {"failures": 0, "worst_margin": math.inf}
               for name in SUITE_CHECKS}

    def absorb(name: str, report: VerificationReport):
        entry = summary[name]
        if not report.passed:
            entry["failures"] += 1
        for ineq in report.inequalities:
            margin = ineq.margin
            if isinstance(margin, float) and math.isnan(margin):
                margin = -math.inf
            if ineq.rel == "==":
                margin = -abs(margin)
            entry["worst_margin"] = min(entry["worst_margin"], margin)

    for i in range(instances):
        rng = instance_rng(seed, i)
        net = random_network(rng)
        graph, r = net.graph, net.resistances
        r_bar = random_resistances(rng, graph.n_edges)
        a, b = random_pair(rng, graph.n_vertices)
        edge = int(rng.integers(0, graph.n_edges))
        delta = float(rng.uniform(0.1, 2.0))

        absorb("superadditivity",
               check_superadditivity(graph, r, r_bar, a, b, tol))
        absorb("melvin_chain", melvin_chain(graph, r, r_bar, a, b, tol))
        absorb("entropy_chain", entropy_chain(graph, r, r_bar, a, b, tol))
        for t in (0.5, 2.0, 10.0):
            absorb("scaling", check_scaling(graph, r, t, a, b, tol))
        absorb("monotonicity",
               check_monotonicity(graph, r, edge, delta, a, b, tol))
        absorb("concavity",
               check_concavity_segment(graph, r, r_bar, grid_points, a, b, tol))

    overall = all(entry["failures"] == 0 for entry in summary.values())
    return {
        "name": "suite",
        "seed": seed,
        "instances": instances,
        "tolerance": tol,
        "checks": summary,
        "pass": overall,
    }
