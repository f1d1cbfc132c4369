"""
Explicit expander families and graph powering.

Built-in families:
  gabber_galil  8-regular graph on Z_k x Z_k, expansion 5*sqrt(2)/8
  complete      K_n, expansion exactly 1/(n-1)
  external      any user-supplied rotation graph with a checked claim
"""

import math
from fractions import Fraction
from typing import Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import get_settings
from app.expander.rotation import RotationGraph
from app.spectral.eigen import verify_expander
from app.utils.exceptions import ExpanderException, SizeCapException
from app.utils.logger import logger

# (5*sqrt(2)/8)^2, so (5*sqrt(2)/8)^p <= alpha  iff  (25/32)^p <= alpha^2
GG_ALPHA_SQUARED = Fraction(25, 32)
GG_DEGREE = 8

Rational = Union[Fraction, int, float, str]


def to_fraction(value: Rational) -> Fraction:
    """Exact rational from a Fraction, int, decimal string or float (read by its decimal repr)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def gg_alpha_upper(p: int, bits: int = 64) -> Fraction:
    """Rational upper bound on (5*sqrt(2)/8)^p, exact for even p."""
    half, odd = divmod(p, 2)
    bound = GG_ALPHA_SQUARED ** half
    if odd:
        scaled = GG_ALPHA_SQUARED.numerator * 4 ** bits // GG_ALPHA_SQUARED.denominator
        root = math.isqrt(scaled)
        if root * root < scaled:
            root += 1
        bound *= Fraction(root, 2 ** bits)
    return bound


def build_gabber_galil(k: int) -> RotationGraph:
    """Degree-8 Margulis-Gabber-Galil graph on Z_k x Z_k.

    Vertex (x, y) has index x*k + y. Port 2m applies map T_{m+1}, port 2m+1
    its inverse, so rot(v, 2m) = (T(v), 2m+1) and rot(v, 2m+1) = (T^-1(v), 2m).
    """
    if k < 2:
        raise ExpanderException(f"Gabber-Galil graph needs k >= 2, got {k}")
    x, y = np.divmod(np.arange(k * k, dtype=np.int64), k)
    images = [
        ((x + y) % k, y), ((x - y) % k, y),
        ((x + y + 1) % k, y), ((x - y - 1) % k, y),
        (x, (y + x) % k), (x, (y - x) % k),
        (x, (y + x + 1) % k), (x, (y - x - 1) % k),
    ]
    vertices = np.stack([ix * k + iy for ix, iy in images], axis=1)
    ports = np.tile(np.array([1, 0, 3, 2, 5, 4, 7, 6], dtype=np.int64), (k * k, 1))
    return RotationGraph(k * k, GG_DEGREE, vertices, ports)


def build_complete(n: int) -> RotationGraph:
    """K_n; port i of v leads to the i-th other vertex in ascending order."""
    if n < 3:
        raise ExpanderException(f"Complete-graph expander needs n >= 3, got {n}")
    v = np.arange(n, dtype=np.int64)[:, None]
    i = np.arange(n - 1, dtype=np.int64)[None, :]
    vertices = np.where(i < v, i, i + 1)
    ports = np.where(v < vertices, v, v - 1)
    return RotationGraph(n, n - 1, vertices, ports)


def power(h: RotationGraph, p: int, port_cap: Optional[int] = None) -> RotationGraph:
    """h^p by rotation-map composition.

    Port of h^p = base-d digits (i_1, ..., i_p), i_1 most significant. The
    walk returns the paired ports in reverse order, which keeps the map an
    involution; the adjacency matrix is M^p.
    """
    if p < 1:
        raise ExpanderException(f"Power must be >= 1, got {p}")
    if p == 1:
        return h
    cap = port_cap or get_settings().port_cap
    degree = h.d ** p
    if h.n * degree > cap:
        logger.warning(f"Refusing power {p} of degree-{h.d} graph: {h.n * degree} ports > cap {cap}")
        raise SizeCapException(f"h^{p} would have {h.n * degree} ports, cap is {cap}")
    ports = np.arange(degree, dtype=np.int64)[None, :]
    current = np.repeat(np.arange(h.n, dtype=np.int64)[:, None], degree, axis=1)
    back = np.zeros((h.n, degree), dtype=np.int64)
    for step in range(p):
        digit = np.broadcast_to((ports // h.d ** (p - 1 - step)) % h.d, current.shape)
        back += h.port_table[current, digit] * h.d ** step
        current = h.vertex_table[current, digit]
    logger.info(f"Built power {p}: n={h.n}, d={degree}")
    return RotationGraph(h.n, degree, current, back)


def select_power_for_alpha(alpha_target: Rational) -> int:
    """Smallest p with (5*sqrt(2)/8)^p <= alpha_target, decided in exact arithmetic."""
    alpha = to_fraction(alpha_target)
    if not 0 < alpha < 1:
        raise ExpanderException(f"alpha_target must lie in (0, 1), got {alpha}")
    target = alpha * alpha
    p, value = 1, GG_ALPHA_SQUARED
    while value > target:
        p += 1
        value *= GG_ALPHA_SQUARED
    return p


class ExpanderSpec(BaseModel):
    """A family member: which family, its size parameter, and the power taken."""
    model_config = ConfigDict(frozen=True)

    family: Literal["gabber_galil", "complete", "external"]
    size: int = Field(ge=1, description="k for gabber_galil, n otherwise")
    power: int = Field(default=1, ge=1)
    alpha_claim: Optional[str] = None

    @model_validator(mode="after")
    def _check_claim(self):
        if self.family == "external":
            if self.alpha_claim is None:
                raise ValueError("external expanders need an alpha claim")
            if not 0 < Fraction(self.alpha_claim) < 1:
                raise ValueError("alpha claim must lie in (0, 1)")
        return self

    @property
    def vertex_count(self) -> int:
        return self.size * self.size if self.family == "gabber_galil" else self.size

    @property
    def alpha_bound(self) -> Fraction:
        """Certified upper bound on the expansion of the member."""
        if self.family == "gabber_galil":
            return gg_alpha_upper(self.power)
        if self.family == "complete":
            return Fraction(1, self.size - 1) ** self.power
        return Fraction(self.alpha_claim) ** self.power

    @property
    def alpha_bound_float(self) -> float:
        if self.family == "gabber_galil":
            return (5 * math.sqrt(2) / 8) ** self.power
        return float(self.alpha_bound)

    @property
    def degree(self) -> Optional[int]:
        """Degree of the member; external members carry their own."""
        if self.family == "external":
            return None
        base = GG_DEGREE if self.family == "gabber_galil" else self.size - 1
        return base ** self.power

    def build(self, external: Optional[RotationGraph] = None, port_cap: Optional[int] = None) -> RotationGraph:
        if self.family == "gabber_galil":
            base = build_gabber_galil(self.size)
        elif self.family == "complete":
            base = build_complete(self.size)
        else:
            if external is None or external.n != self.size:
                raise ExpanderException("external family needs the rotation graph it describes")
            base = external
        return power(base, self.power, port_cap=port_cap)

    def sized_for(self, min_vertices: int) -> "ExpanderSpec":
        """Smallest member of the same family with at least min_vertices vertices.

        Complete members never shrink below their current size, which fixes alpha.
        """
        if self.family == "gabber_galil":
            size = max(2, math.isqrt(max(min_vertices, 1) - 1) + 1)
        elif self.family == "complete":
            size = max(3, self.size, min_vertices)
        else:
            if min_vertices > self.size:
                raise ExpanderException(f"External member has {self.size} vertices, need {min_vertices}")
            return self
        return self.model_copy(update={"size": size})

    def instantiate(self, min_vertices: int, external: Optional[RotationGraph] = None,
                    port_cap: Optional[int] = None) -> Tuple[RotationGraph, Fraction]:
        """Build the smallest fitting member and its certified expansion bound.

        External members only count once their claim survives verify_expander.
        """
        spec = self.sized_for(min_vertices)
        h = spec.build(external=external, port_cap=port_cap)
        if spec.family == "external":
            if not verify_expander(h, spec.alpha_bound).passed:
                raise ExpanderException(f"External expander does not meet its claim {spec.alpha_claim}")
        return h, spec.alpha_bound
