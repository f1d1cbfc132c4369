"""
Linear-size gap amplification for the clique number.

Given a > b, the pipeline turns G into G_r with
    omega(G) <= b n  =>  omega(G_r) <= b_r N
    omega(G) >= a n  =>  omega(G_r) >= a_r N
and b_r / a_r <= r, with N linear in n. All threshold arithmetic is exact.

When isolated padding alone cannot bring n within a factor (1 - epsilon) of the
expander member's size (always the case at desk scale), the graph is first
blown up by clique substitution, which keeps omega(G)/n exactly.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from app.config import get_settings
from app.expander.families import ExpanderSpec, Rational, select_power_for_alpha, to_fraction
from app.expander.rotation import RotationGraph
from app.instances.graph import Graph
from app.models.schemas import AmplifyCertificate, rational_str
from app.oracles.clique import max_clique
from app.product.walk_graph import (WalkGraph, clique_blowup, derandomized_product, pad_isolated,
                                    product_clique_number)
from app.utils.exceptions import ExpanderException, ParameterException, SizeCapException
from app.utils.logger import logger

STRICTNESS = Fraction(1) - Fraction(1, 10 ** 9)


class AmplifyParams(BaseModel):
    """Parameters steering the amplification pipeline."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Fraction
    b: Fraction
    r: Fraction
    epsilon: Fraction
    alpha: Fraction
    t: int
    family: ExpanderSpec
    input_vertices: int
    member_degree: int
    blowup: int = 1
    allow_blowup: bool = True

    @model_validator(mode="after")
    def _check_invariants(self):
        if not self.alpha < self.b / 6:
            raise ValueError(f"alpha {self.alpha} must be below b/6")
        if not self.yes_base > self.no_base:
            raise ValueError("a(1-eps) - 2 alpha must exceed b + 2 alpha")
        if not self.ratio ** self.t <= self.r:
            raise ValueError(f"t = {self.t} does not reach ratio {self.r}")
        return self

    @property
    def yes_base(self) -> Fraction:
        return self.a * (1 - self.epsilon) - 2 * self.alpha

    @property
    def no_base(self) -> Fraction:
        return self.b + 2 * self.alpha

    @property
    def ratio(self) -> Fraction:
        return self.no_base / self.yes_base

    @property
    def a_r(self) -> Fraction:
        return self.yes_base ** self.t

    @property
    def b_r(self) -> Fraction:
        return self.no_base ** self.t

    @property
    def member_vertices(self) -> int:
        return self.family.vertex_count

    @property
    def output_vertices(self) -> int:
        return self.member_vertices * self.member_degree ** (self.t - 1)


@dataclass(frozen=True, eq=False)
class AmplifyResult:
    graph: Graph
    walks: WalkGraph
    a_r: Fraction
    b_r: Fraction
    params: AmplifyParams

    @property
    def N(self) -> int:
        return self.graph.n


def _complete_min_size(alpha_target: Fraction) -> int:
    """Smallest n' with 1/(n'-1) strictly below alpha_target."""
    return max(3, math.floor(1 / alpha_target) + 2)


def _choose_blowup(spec: ExpanderSpec, n: int, epsilon: Fraction,
                   allow_blowup: bool) -> Tuple[int, ExpanderSpec]:
    """Smallest blow-up s whose fitted member keeps s*n / n' >= 1 - epsilon."""
    limit = 1 if not allow_blowup else 64 + spec.vertex_count * 4 // max(n, 1)
    for s in range(1, limit + 1):
        try:
            member = spec.sized_for(s * n)
        except ExpanderException:
            break
        if Fraction(s * n, member.vertex_count) >= 1 - epsilon:
            return s, member
    raise ParameterException(
        f"A {n}-vertex graph cannot be padded to a {spec.family} member within ratio {1 - epsilon}"
        + ("" if allow_blowup else "; enable clique blow-up or use a larger input")
    )


def select_amplification_params(a: Rational, b: Rational, r: Rational, family: str = "complete",
                                n: Optional[int] = None, external: Optional[RotationGraph] = None,
                                alpha_claim: Optional[Rational] = None, allow_blowup: bool = True,
                                port_cap: Optional[int] = None) -> AmplifyParams:
    """Choose epsilon, the expander member and t for the requested ratio."""
    a, b, r = to_fraction(a), to_fraction(b), to_fraction(r)
    if not 0 < b < a <= 1:
        raise ParameterException(f"Need 0 < b < a <= 1, got a={a}, b={b}")
    if not 0 < r < 1:
        raise ParameterException(f"Target ratio must lie in (0, 1), got {r}")

    epsilon = (a - b) / (8 * a)
    alpha_target = min(b / 6 * STRICTNESS, (a - b) / 16)

    if family == "complete":
        base = ExpanderSpec(family="complete", size=_complete_min_size(alpha_target))
    elif family == "gabber_galil":
        base = ExpanderSpec(family="gabber_galil", size=2, power=select_power_for_alpha(alpha_target))
    elif family == "external":
        if external is None or alpha_claim is None:
            raise ParameterException("external family needs a rotation graph and an alpha claim")
        claim = to_fraction(alpha_claim)
        if claim > alpha_target:
            raise ParameterException(f"External claim {claim} exceeds the required alpha {alpha_target}")
        base = ExpanderSpec(family="external", size=external.n, alpha_claim=rational_str(claim))
        try:
            base.instantiate(n or external.n, external=external, port_cap=port_cap)
        except ExpanderException as e:
            raise ParameterException(f"External member rejected: {e}") from e
    else:
        raise ParameterException(f"Unknown expander family {family!r}")

    if n is None:
        blowup, spec = 1, base
    else:
        blowup, spec = _choose_blowup(base, n, epsilon, allow_blowup)

    if spec.family == "gabber_galil":
        cap = port_cap or get_settings().port_cap
        if spec.vertex_count * spec.degree > cap:
            raise SizeCapException(
                f"Gabber-Galil needs power {spec.power} (degree 8^{spec.power}) to reach alpha {alpha_target}; "
                f"{spec.vertex_count} x 8^{spec.power} ports exceed cap {cap}"
            )

    alpha = spec.alpha_bound
    if not alpha <= alpha_target:
        raise ParameterException(f"Family member reaches alpha {alpha}, above the target {alpha_target}")
    ratio = (b + 2 * alpha) / (a * (1 - epsilon) - 2 * alpha)
    t, value = 1, ratio
    while value > r:
        t += 1
        value *= ratio

    params = AmplifyParams(
        a=a, b=b, r=r, epsilon=epsilon, alpha=alpha, t=t, family=spec,
        input_vertices=n if n is not None else spec.vertex_count,
        member_degree=spec.degree if spec.degree is not None else external.d,
        blowup=blowup, allow_blowup=allow_blowup,
    )
    logger.info(f"Amplification parameters: eps={epsilon}, alpha={alpha}, t={t}, "
                f"member={spec.family}({spec.size}), blowup={blowup}")
    return params


def amplify_gap(g: Graph, params: AmplifyParams, external: Optional[RotationGraph] = None,
                vertex_cap: Optional[int] = None) -> AmplifyResult:
    """Blow up (if needed), pad, and take the derandomized product with the family member."""
    if g.n != params.input_vertices:
        raise ParameterException(f"Parameters were selected for n={params.input_vertices}, graph has n={g.n}")
    blown = clique_blowup(g, params.blowup)
    member = params.member_vertices
    if Fraction(blown.n, member) < 1 - params.epsilon:
        raise ParameterException(
            f"Padding ratio {blown.n}/{member} is below 1 - epsilon = {1 - params.epsilon}"
        )
    padded = pad_isolated(blown, member)
    h = params.family.build(external=external)
    walks = derandomized_product(padded, h, params.t, vertex_cap=vertex_cap)
    a_r, b_r = params.a_r, params.b_r
    if b_r / a_r > params.r:
        raise ParameterException(f"b_r/a_r = {b_r / a_r} exceeds r = {params.r}")
    logger.info(f"Amplified n={g.n} -> N={walks.N} (b_r/a_r={float(b_r / a_r):.4f})")
    return AmplifyResult(graph=walks.graph, walks=walks, a_r=a_r, b_r=b_r, params=params)


def amplification_size_constant(params: AmplifyParams) -> Fraction:
    """C with N = C n for the input size the parameters were chosen for."""
    return Fraction(params.output_vertices, params.input_vertices)


def clique_bounds(b: Fraction, alpha: Fraction, t: int, N: int) -> Tuple[Fraction, Fraction]:
    """((b - 2 alpha)^t N, (b + 2 alpha)^t N): the two sides of the product bound."""
    return (b - 2 * alpha) ** t * N, (b + 2 * alpha) ** t * N


def certificate(result: AmplifyResult, check: Optional[dict] = None) -> AmplifyCertificate:
    params = result.params
    degree = result.walks.expander.d
    return AmplifyCertificate(
        a=rational_str(params.a),
        b=rational_str(params.b),
        ratio=rational_str(params.r),
        epsilon=rational_str(params.epsilon),
        alpha=rational_str(params.alpha),
        t=params.t,
        family=params.family.family,
        input_vertices=params.input_vertices,
        blowup=params.blowup,
        member_vertices=params.member_vertices,
        degree=degree,
        output_vertices=result.N,
        a_r=rational_str(result.a_r),
        b_r=rational_str(result.b_r),
        b_r_over_a_r=rational_str(result.b_r / result.a_r),
        size_constant=rational_str(amplification_size_constant(params)),
        check=check,
    )


def check_amplification(g: Graph, result: AmplifyResult) -> dict:
    """Exact clique numbers on both sides and whichever guarantee applies."""
    params = result.params
    omega_input = max_clique(g).value
    omega_output, _ = product_clique_number(result.walks)
    n, N = g.n, result.N
    if omega_input >= params.a * n:
        case, holds = "yes", omega_output >= result.a_r * N
    elif omega_input <= params.b * n:
        case, holds = "no", omega_output <= result.b_r * N
    else:
        case, holds = "gap", None
    if holds is False:
        logger.error(f"Amplification guarantee violated: case={case}, omega={omega_output}, N={N}")
    return {"case": case, "holds": holds, "omega_input": omega_input, "omega_output": omega_output}
