"""
Verification suites: one seeded trial per call.

Every suite receives a Trial, draws its instance from the trial's generator,
records digests and observed quantities, and reports a mismatch string for
every property that fails. Suites never raise on a property failure.
"""

import math
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional

import networkx as nx

from app.expander.families import build_complete, build_gabber_galil, power, select_power_for_alpha
from app.harness.generators import (
    make_rng,
    planted_clique,
    random_3cnf,
    random_graph,
    random_lin3,
    random_partitioned,
    random_setcover,
    triangle_free,
)
from app.instances.dimacs import (
    emit_cnf,
    emit_graph,
    emit_lin3,
    emit_setcover,
    instance_digest,
    parse_cnf,
    parse_graph,
    parse_lin3,
    parse_setcover,
)
from app.instances.formulas import Assignment, count_satisfied
from app.instances.graph import Graph, complement, induced_subgraph
from app.models.schemas import TrialRecord, rational_str, stable_float
from app.oracles.assignments import max_lin, max_sat, min_sat
from app.oracles.bipartite import max_induced_bipartite
from app.oracles.clique import max_clique, max_independent_set, min_vertex_cover, subexp_approx_is
from app.oracles.domination import min_dominating_set_bounded, min_set_cover
from app.product.amplification import (
    amplify_gap,
    check_amplification,
    clique_bounds,
    select_amplification_params,
)
from app.product.walk_graph import derandomized_product, product_clique_number
from app.reductions.bipartite import cb_witness_to_is, is_to_cb, is_witness_to_cb
from app.reductions.dominating import (
    ds_to_setcover,
    ds_witness_to_is_witness,
    gadget_size,
    is_to_ds,
    is_witness_to_ds_witness,
)
from app.reductions.grouping import (
    GroupingParams,
    check_grouping_bound,
    groups_met_count,
    grouping_alpha_bounds,
    max3sat_to_is,
    vertex_bound,
)
from app.reductions.linear import (
    assignment_to_lin3_witness,
    lin3_to_vc,
    lin3_witness_to_assignment,
    minsat_assignment_to_vertex_cover,
    vc_to_minsat,
)
from app.spectral.eigen import PASS_TOLERANCE, second_eigenvalue

GG_LAMBDA_BOUND = 5 * math.sqrt(2)


class Trial:
    """Mutable per-trial state handed to a suite."""

    def __init__(self, index: int, seed: int, max_n: Optional[int] = None):
        self.index = index
        self.seed = seed
        self.max_n = max_n
        self.rng = make_rng(seed)
        self.digests: Dict[str, str] = {}
        self.observed: Dict[str, object] = {}
        self.mismatches: List[str] = []

    def size(self, low: int, high: int) -> int:
        """Random size in [low, high], with high clipped by --max-n."""
        if self.max_n is not None:
            high = max(low, min(high, self.max_n))
        return int(self.rng.integers(low, high + 1))

    def digest(self, name: str, instance) -> None:
        self.digests[name] = instance_digest(instance)

    def observe(self, **values) -> None:
        for key, value in values.items():
            if isinstance(value, Fraction):
                value = rational_str(value)
            elif isinstance(value, float):
                value = stable_float(value)
            self.observed[key] = value

    def expect(self, condition: bool, message: str) -> None:
        if not condition:
            self.mismatches.append(f"trial {self.index}: {message}")

    def record(self) -> TrialRecord:
        return TrialRecord(
            index=self.index,
            seed=self.seed,
            digests=self.digests,
            observed=self.observed,
            mismatches=self.mismatches,
        )


def _all_assignments(var_count: int):
    for code in range(2 ** var_count):
        yield Assignment.of([(code >> (var_count - 1 - v)) & 1 for v in range(var_count)])


def suite_roundtrip(trial: Trial) -> None:
    rng = trial.rng
    g = random_graph(trial.size(1, 12), float(rng.uniform(0.1, 0.9)), rng)
    f = random_3cnf(trial.size(3, 8), trial.size(1, 8), rng)
    system = random_lin3(trial.size(3, 8), trial.size(1, 8), rng)
    cover = random_setcover(trial.size(1, 10), trial.size(1, 6), rng)
    codecs = [
        ("graph", g, emit_graph, parse_graph),
        ("cnf", f, emit_cnf, parse_cnf),
        ("lin3", system, emit_lin3, parse_lin3),
        ("setcover", cover, emit_setcover, parse_setcover),
    ]
    for name, instance, emit, parse in codecs:
        text = emit(instance)
        trial.digest(name, text)
        again = parse(text)
        trial.expect(again == instance, f"{name} changed after emit/parse")
        trial.expect(emit(again) == text, f"{name} text is not canonical")


def suite_spectral_gg(trial: Trial) -> None:
    k = 2 + trial.index % 11
    h = build_gabber_galil(k)
    report = second_eigenvalue(h)
    trial.observe(k=k, lambda_hat=report.lambda_hat, alpha_observed=report.alpha_observed)
    trial.expect(report.lambda_hat <= GG_LAMBDA_BOUND + PASS_TOLERANCE,
                 f"GG_{k} lambda_hat {report.lambda_hat} exceeds 5*sqrt(2)")
    relabelled = second_eigenvalue(h.relabel(trial.rng.permutation(h.n))).lambda_hat
    trial.expect(abs(relabelled - report.lambda_hat) <= PASS_TOLERANCE * h.d,
                 f"GG_{k} lambda_hat moved to {relabelled} under relabelling")


def suite_powering(trial: Trial) -> None:
    bases = [("gg3", build_gabber_galil(3)), ("k5", build_complete(5))]
    name, h = bases[trial.index % 2]
    p = 1 + (trial.index // 2) % 3
    base_lambda = second_eigenvalue(h).lambda_hat
    powered = second_eigenvalue(power(h, p))
    gap = abs(powered.lambda_hat - base_lambda ** p)
    trial.observe(base=name, p=p, lambda_power=powered.lambda_hat, gap=gap)
    trial.expect(gap <= PASS_TOLERANCE * h.d ** p, f"{name}^{p}: |lambda(H^p) - lambda(H)^p| = {gap}")
    for alpha, expected in ((0.9, 1), (0.5, 6), (0.1, 19)):
        got = select_power_for_alpha(alpha)
        trial.expect(got == expected, f"select_power_for_alpha({alpha}) = {got}, expected {expected}")


def suite_product_sandwich(trial: Trial) -> None:
    rng = trial.rng
    n = trial.size(8, 12)
    g = planted_clique(n, int(rng.integers(7, n + 1)), 0.3, rng)
    trial.digest("graph", g)
    omega = max_clique(g).value
    b = Fraction(omega, n)
    alpha = Fraction(1, n - 1)
    if not b > 6 * alpha:
        trial.observe(n=n, omega=omega, skipped=True)
        return
    walks = derandomized_product(g, build_complete(n), 2)
    omega_product, _ = product_clique_number(walks)
    low, high = clique_bounds(b, alpha, 2, walks.N)
    trial.observe(n=n, omega=omega, N=walks.N, omega_product=omega_product, skipped=False)
    trial.expect(low <= omega_product <= high,
                 f"omega(G'_2) = {omega_product} outside [{float(low):.3f}, {float(high):.3f}]")
    if walks.N <= 200:
        direct = max_clique(walks.graph).value
        trial.expect(direct == omega_product, f"walk counting gives {omega_product}, clique search {direct}")


def suite_amplify(trial: Trial) -> None:
    rng = trial.rng
    n = 12 if trial.max_n is None else min(12, trial.max_n)
    r = Fraction(4, 5) if trial.index % 2 == 0 else Fraction(1, 2)
    planted = (trial.index // 2) % 2 == 0
    g = planted_clique(n, n, 0.0, rng) if planted else triangle_free(n, 0.5, rng)
    trial.digest("graph", g)
    params = select_amplification_params(1, Fraction(1, 2), r, n=n)
    result = amplify_gap(g, params)
    check = check_amplification(g, result)
    trial.observe(r=r, t=params.t, N=result.N, ratio=result.b_r / result.a_r, **check)
    trial.expect(result.b_r / result.a_r <= r, f"b_r/a_r = {result.b_r / result.a_r} exceeds {r}")
    trial.expect(check["holds"] is True, f"{check['case']} bound not confirmed: omega(G_r) = {check['omega_output']}")


def _grouping_instance(trial: Trial, equal_groups: bool):
    rng = trial.rng
    K = int(rng.integers(2, 4))
    if equal_groups:
        m = K * int(rng.integers(1, 8 // K + 1))
    else:
        m = int(rng.integers(K, 9))
    f = random_3cnf(trial.size(3, 8), m, rng)
    lam = Fraction(3, 4) if rng.random() < 0.5 else Fraction(1)
    return f, GroupingParams.balanced(m, K, lam)


def suite_grouping_alpha(trial: Trial) -> None:
    f, params = _grouping_instance(trial, equal_groups=False)
    trial.digest("formula", f)
    grouped = max3sat_to_is(f, params)
    alpha = max_independent_set(grouped.graph, vertex_cap=max(grouped.graph.n, 1)).value
    assignment_side = max(groups_met_count(f, params, a) for a in _all_assignments(f.var_count))
    opt = max_sat(f).value
    lower, upper = grouping_alpha_bounds(params, opt)
    trial.observe(K=params.K, m=params.m, lam=params.lam, vertices=grouped.graph.n, alpha=alpha, opt=opt)
    trial.expect(alpha == assignment_side, f"alpha(G_I) = {alpha}, best group count = {assignment_side}")
    trial.expect(alpha <= params.K, f"alpha(G_I) = {alpha} exceeds K = {params.K}")
    bound = vertex_bound(f, params)
    trial.expect(grouped.graph.n <= bound, f"G_I has {grouped.graph.n} vertices, above K*2^max(s_i) = {bound}")
    trial.expect(lower <= alpha <= upper, f"alpha(G_I) = {alpha} outside [{lower}, {upper}]")


def suite_grouping_bound(trial: Trial) -> None:
    f, params = _grouping_instance(trial, equal_groups=True)
    trial.digest("formula", f)
    violations = 0
    for a in _all_assignments(f.var_count):
        verdict = check_grouping_bound(f, params, a)
        if not verdict.holds:
            violations += 1
    trial.observe(K=params.K, m=params.m, lam=params.lam, assignments=2 ** f.var_count)
    trial.expect(violations == 0, f"counting bound fails for {violations} assignments")


def suite_ds_gadget(trial: Trial) -> None:
    partitioned = random_partitioned(2, 3, 0.5, trial.rng)
    trial.digest("graph", partitioned.graph)
    gadget = is_to_ds(partitioned)
    K = gadget.K
    expected_size = gadget_size(partitioned.graph.n, K, len(gadget.cross_edges))
    independent = max_independent_set(partitioned.graph)
    dominating = min_dominating_set_bounded(gadget.graph, size_cap=2 * K)
    trial.observe(K=K, vertices=gadget.graph.n, alpha=independent.value, gamma=dominating.value)
    trial.expect(gadget.graph.n == expected_size, f"gadget has {gadget.graph.n} vertices, expected {expected_size}")
    trial.expect(dominating.found and independent.value + dominating.value == 2 * K,
                 f"alpha + gamma = {independent.value} + {dominating.value}, expected {2 * K}")
    if not dominating.found:
        return
    T = is_witness_to_ds_witness(gadget, independent.witness)
    trial.expect(len(T) == 2 * K - independent.value, f"translated dominating set has size {len(T)}")
    S = ds_witness_to_is_witness(gadget, dominating.witness)
    trial.expect(len(S) >= 2 * K - dominating.value, f"translated independent set has size {len(S)}")


def suite_setcover(trial: Trial) -> None:
    g = random_graph(trial.size(1, 12), float(trial.rng.uniform(0.1, 0.6)), trial.rng)
    trial.digest("graph", g)
    gamma = min_dominating_set_bounded(g).value
    cover = min_set_cover(ds_to_setcover(g)).value
    trial.observe(n=g.n, gamma=gamma, cover=cover)
    trial.expect(gamma == cover, f"gamma = {gamma}, set cover = {cover}")


def suite_cb(trial: Trial) -> None:
    g = random_graph(trial.size(1, 7), float(trial.rng.uniform(0.1, 0.9)), trial.rng)
    trial.digest("graph", g)
    alpha = max_independent_set(g)
    doubled = is_to_cb(g)
    mibs = max_induced_bipartite(doubled)
    trial.observe(n=g.n, alpha=alpha.value, mibs=mibs.value)
    trial.expect(mibs.value == 2 * alpha.value, f"MIBS = {mibs.value}, 2*alpha = {2 * alpha.value}")
    lifted = is_witness_to_cb(g, alpha.witness)
    trial.expect(doubled.is_bipartite_induced(lifted), "both copies of an independent set are not bipartite")
    back = cb_witness_to_is(g, mibs.witness)
    trial.expect(2 * len(back) >= mibs.value, f"color class of size {len(back)} from MIBS {mibs.value}")


def suite_lin3_vc(trial: Trial) -> None:
    system = random_lin3(trial.size(3, 8), trial.size(1, 8), trial.rng)
    trial.digest("system", system)
    lin = lin3_to_vc(system)
    alpha = max_independent_set(lin.graph)
    best = max_lin(system)
    cover = min_vertex_cover(lin.graph)
    trial.observe(m=system.m, vertices=lin.graph.n, alpha=alpha.value, max_lin=best.value)
    trial.expect(lin.graph.n == 4 * system.m, f"{lin.graph.n} vertices for {system.m} equations")
    trial.expect(all(lin.graph.is_clique(range(4 * q, 4 * q + 4)) for q in range(system.m)),
                 "an equation's quadruple is not a clique")
    trial.expect(alpha.value == best.value, f"alpha = {alpha.value}, max-3lin = {best.value}")
    trial.expect(cover.value == 4 * system.m - best.value, f"vertex cover {cover.value}")
    assignment = lin3_witness_to_assignment(lin, alpha.witness)
    witness = assignment_to_lin3_witness(lin, Assignment.of(best.witness))
    trial.expect(len(witness) == best.value, "optimal assignment maps to a smaller independent set")
    trial.expect(count_satisfied(system, assignment) >= alpha.value,
                 "independent set maps to an assignment satisfying too few equations")


def suite_minsat(trial: Trial) -> None:
    rng = trial.rng
    g = random_graph(trial.size(2, 8), float(rng.uniform(0.2, 0.6)), rng)
    edges = g.sorted_edges()[:16]
    g = induced_subgraph(Graph(n=g.n, edges=frozenset(edges)), {v for e in edges for v in e})
    trial.digest("graph", g)
    if g.n == 0:
        trial.observe(n=0, skipped=True)
        return
    reduction = vc_to_minsat(g)
    minsat = min_sat(reduction.formula)
    cover = min_vertex_cover(g)
    trial.observe(n=g.n, edges=g.m, minsat=minsat.value, mvc=cover.value, skipped=False)
    trial.expect(minsat.value == cover.value, f"MinSAT = {minsat.value}, MVC = {cover.value}")
    back = minsat_assignment_to_vertex_cover(reduction, Assignment.of(minsat.witness))
    trial.expect(len(back) == cover.value, f"MinSAT witness gives a cover of size {len(back)}")


def suite_subexp_approx(trial: Trial) -> None:
    g = random_graph(trial.size(1, 12), float(trial.rng.uniform(0.1, 0.9)), trial.rng)
    c = 1 + trial.index % 4
    trial.digest("graph", g)
    alpha = max_independent_set(g).value
    value = subexp_approx_is(g, c).value
    trial.observe(n=g.n, c=c, alpha=alpha, value=value)
    trial.expect(value == min(alpha, c), f"scheme found {value}, expected min({alpha}, {c})")


def _brute_force(g: Graph, accept: Callable[[tuple], bool], largest: bool) -> int:
    sizes = range(g.n, -1, -1) if largest else range(g.n + 1)
    for size in sizes:
        if any(accept(s) for s in combinations(range(g.n), size)):
            return size
    return 0


def suite_oracles_exhaustive(trial: Trial) -> None:
    g = random_graph(trial.size(1, 6), float(trial.rng.uniform(0.0, 1.0)), trial.rng)
    trial.digest("graph", g)
    nxg = g.to_networkx()
    expected = {
        "is": _brute_force(g, g.is_independent, True),
        "clique": _brute_force(g, g.is_clique, True),
        "ds": _brute_force(g, g.dominates, False),
        "mibs": _brute_force(g, lambda s: nx.is_bipartite(nxg.subgraph(s)), True),
    }
    got = {
        "is": max_independent_set(g).value,
        "clique": max_clique(g).value,
        "ds": min_dominating_set_bounded(g).value,
        "mibs": max_induced_bipartite(g).value,
    }
    trial.observe(n=g.n, **{f"{k}_value": v for k, v in got.items()})
    for problem, value in expected.items():
        trial.expect(got[problem] == value, f"{problem}: oracle {got[problem]}, exhaustive {value}")
    through_complement = max_independent_set(complement(g)).value
    trial.expect(got["clique"] == through_complement, f"omega = {got['clique']}, alpha(complement) = {through_complement}")


SUITES: Dict[str, Callable[[Trial], None]] = {
    "roundtrip": suite_roundtrip,
    "spectral-gg": suite_spectral_gg,
    "powering": suite_powering,
    "theorem3-sandwich": suite_product_sandwich,
    "amplify": suite_amplify,
    "grouping-alpha": suite_grouping_alpha,
    "claim1": suite_grouping_bound,
    "ds-gadget": suite_ds_gadget,
    "setcover": suite_setcover,
    "cb": suite_cb,
    "lin3-vc": suite_lin3_vc,
    "minsat": suite_minsat,
    "subexp-approx": suite_subexp_approx,
    "oracles-exhaustive": suite_oracles_exhaustive,
}

SUITE_ALIASES: Dict[str, str] = {
    "product-sandwich": "theorem3-sandwich",
    "grouping-bound": "claim1",
}


def resolve_suite(name: str) -> str:
    """Registered suite name for `name`, following aliases."""
    return SUITE_ALIASES.get(name, name)
