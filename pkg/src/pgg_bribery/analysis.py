"""Population-level analysis of the replicator dynamics.

For a well-mixed infinite population with cooperator fraction ``x`` the
dynamics are ``dx/dt = G(x) = x (1 - x) Q(x)``, driven by the selection
polynomial ``Q``.  Writing ``S(y) = y + y^2 + ... + y^(n-1)``,

    Q(x) = f*c/n - c + bribery_offset + beta*tau*r_p
           - 2*A - A*S(1 - x) + B*S(x)

with cooperator-fine scale ``A = beta*alpha*tau*r_p`` and defector-fine
scale ``B = beta*(1 - alpha)*tau*r_p``.  Q is strictly increasing on
(0, 1) whenever ``beta*tau*r_p > 0``, so the phase line is a trichotomy
controlled by the pool multiplier: defection dominant below ``f_min``
(where Q(1) = 0), bistable with a unique unstable interior equilibrium
between ``f_min`` and ``f_max``, cooperation dominant above ``f_max``
(where Q(0) = 0).

``avg_payoff`` is the exact binomial average of the per-group payoffs
and is the quantity estimated by the Monte Carlo oracles.  Its
cooperator/defector difference equals Q plus the two boundary-mass
terms ``A*(1-x)^(n-1) - B*x^(n-1)``: Q keeps the count-cancelled fine
shares even on the compositions where the focal player has no same-type
co-player, which is what makes it a polynomial with fixed sign structure.
All threshold, root and stability computations use Q.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb
from typing import Callable

from .games import BriberyParams, Model, core_of, group_payoff, GroupComposition

__all__ = [
    "KnifeEdgeError",
    "RegimeKind",
    "Regime",
    "Thresholds",
    "KNIFE_EDGE_TOL",
    "EQUILIBRIUM_TOL",
    "ROOT_TOL",
    "bribery_offset",
    "avg_payoff",
    "binomial_avg_payoff",
    "q_function",
    "gradient_of_selection",
    "thresholds",
    "classify_regime",
    "interior_root",
    "stability_at",
]

KNIFE_EDGE_TOL = 1e-9
EQUILIBRIUM_TOL = 1e-12
ROOT_TOL = 1e-12


class KnifeEdgeError(ValueError):
    """The pool multiplier sits on a classification boundary.

    Raised instead of silently binning a model whose ``f`` is within
    ``KNIFE_EDGE_TOL`` of ``f_min`` or ``f_max``; sweeps catch this and
    carry it as a per-point report.
    """

    def __init__(self, f: float, threshold: float, name: str):
        self.f = f
        self.threshold = threshold
        self.threshold_name = name
        super().__init__(
            f"f={f} is within {KNIFE_EDGE_TOL} of {name}={threshold}; "
            "the regime is not classified on the boundary"
        )


class RegimeKind(enum.Enum):
    DEFECTION_DOMINANT = "defection_dominant"
    BISTABLE = "bistable"
    COOPERATION_DOMINANT = "cooperation_dominant"


@dataclass(frozen=True)
class Regime:
    """Phase-line classification with boundary stability labels.

    ``x_star`` is present exactly for the bistable kind.  ``degenerate``
    flags models with ``beta*tau*r_p = 0`` where Q is constant in x and
    only the two-way classification by its sign is meaningful.
    """

    kind: RegimeKind
    x_star: float | None = None
    degenerate: bool = False

    def __post_init__(self):
        if (self.kind is RegimeKind.BISTABLE) != (self.x_star is not None):
            raise ValueError("x_star is carried by the bistable regime only")
        if self.x_star is not None and not 0 < self.x_star < 1:
            raise ValueError(f"interior equilibrium must lie in (0, 1), got {self.x_star}")

    @property
    def stable_at_zero(self) -> bool:
        return self.kind is not RegimeKind.COOPERATION_DOMINANT

    @property
    def stable_at_one(self) -> bool:
        return self.kind is not RegimeKind.DEFECTION_DOMINANT

    @property
    def token(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class Thresholds:
    """Pool-multiplier pair bracketing the bistable window.

    ``f_max - f_min = n (n - 1) beta tau r_p / c`` in both model
    variants, so the pair collapses exactly when punishment is inert.
    """

    f_min: float
    f_max: float


def _check_x(x: float) -> None:
    if not 0 <= x <= 1:
        raise ValueError(f"cooperator fraction x must be in [0, 1], got {x}")


def _geom_sum(y: float, terms: int) -> float:
    # sum_{k=1..terms} y**k in Horner form; exact at y = 0 and y = 1
    s = 0.0
    for _ in range(terms):
        s = y * (1.0 + s)
    return s


def _geom_sum_derivative(y: float, terms: int) -> float:
    # d/dy sum_{k=1..terms} y**k = sum_{k=1..terms} k y**(k-1)
    s = 0.0
    for k in range(terms, 0, -1):
        s = s * y + k
    return s


def bribery_offset(model: Model) -> float:
    """Constant added to Q by bribery: (n-1) gamma h (q - p) / n, else 0."""
    if isinstance(model, BriberyParams):
        n = model.core.n
        return (n - 1) * model.gamma * model.h * (model.q - model.p) / n
    return 0.0


def _fine_scales(model: Model) -> tuple[float, float]:
    core = core_of(model)
    pressure = core.beta * core.tau * core.r_p
    return core.alpha * pressure, (1.0 - core.alpha) * pressure


def _q_coefficients(model: Model) -> tuple[int, float, float, float]:
    core = core_of(model)
    fine_c, fine_d = _fine_scales(model)
    constant = (
        core.f * core.c / core.n
        - core.c
        + bribery_offset(model)
        + core.beta * core.tau * core.r_p
        - 2.0 * fine_c
    )
    return core.n, constant, fine_c, fine_d


def q_callable(model: Model) -> Callable[[float], float]:
    """Fast closure evaluating Q; used by root finding and integration."""
    n, constant, fine_c, fine_d = _q_coefficients(model)
    terms = n - 1

    def q(x: float) -> float:
        return (
            constant
            - fine_c * _geom_sum(1.0 - x, terms)
            + fine_d * _geom_sum(x, terms)
        )

    return q


def q_function(model: Model, x: float) -> float:
    """Selection polynomial Q(x), the payoff advantage of cooperation."""
    _check_x(x)
    return q_callable(model)(x)


def gradient_of_selection(model: Model, x: float) -> float:
    """G(x) = x (1 - x) Q(x), the replicator right-hand side."""
    _check_x(x)
    return x * (1.0 - x) * q_function(model, x)


def avg_payoff(model: Model, x: float, strategy: str) -> float:
    """Exact population-average payoff of a strategy at fraction ``x``.

    Closed form of the binomial mixture of the per-group payoffs over
    co-player compositions, finite at x = 0 and x = 1.
    """
    _check_x(x)
    if strategy not in ("C", "D"):
        raise ValueError(f"strategy must be 'C' or 'D', got {strategy!r}")
    core = core_of(model)
    n = core.n
    fine_c, fine_d = _fine_scales(model)
    if strategy == "C":
        # own-type leader share requires a cooperator co-player to exist,
        # hence the missing (1-x)^(n-1) mass
        fines = fine_c * (1.0 - (1.0 - x) ** (n - 1) + _geom_sum(1.0 - x, n - 1))
        value = (
            core.b
            + core.f * core.c * ((n - 1) * x + 1.0) / n
            - core.c
            - core.tau
            - fines
        )
    else:
        fines = fine_d * (1.0 - x ** (n - 1) + _geom_sum(x, n - 1))
        value = core.b + core.f * core.c * (n - 1) * x / n - core.tau - fines
    if isinstance(model, BriberyParams):
        accepted = model.gamma * model.h
        income = (n - 1) * accepted * (model.p * x + model.q * (1.0 - x)) / n
        offer_prob = model.p if strategy == "C" else model.q
        value += income - (1.0 - 1.0 / n) * offer_prob * accepted
    return value


def binomial_avg_payoff(model: Model, x: float, strategy: str) -> float:
    """Average payoff as an explicit binomial sum over compositions.

    Independent oracle for :func:`avg_payoff`: n_c among the n - 1
    co-players is Binomial(n - 1, x).
    """
    _check_x(x)
    n = core_of(model).n
    total = 0.0
    for n_c in range(n):
        weight = comb(n - 1, n_c) * x**n_c * (1.0 - x) ** (n - 1 - n_c)
        total += weight * group_payoff(model, strategy, GroupComposition(n_c, n - 1 - n_c))
    return total


def thresholds(model: Model) -> Thresholds:
    """Pool-multiplier values where Q(1) and Q(0) change sign."""
    core = core_of(model)
    n = core.n
    fine_c, fine_d = _fine_scales(model)
    base = core.c - bribery_offset(model) - core.beta * core.tau * core.r_p
    f_min = n * (base + 2.0 * fine_c - fine_d * (n - 1)) / core.c
    f_max = n * (base + fine_c * (n + 1)) / core.c
    return Thresholds(f_min, f_max)


def _bisect_root(model: Model) -> float:
    """Unique zero of the strictly increasing Q on (0, 1) by bisection."""
    q = q_callable(model)
    lo, hi = 1e-15, 1.0 - 1e-15
    while hi - lo > ROOT_TOL:
        mid = 0.5 * (lo + hi)
        if q(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def classify_regime(model: Model) -> Regime:
    """Three-way phase-line classification of the model.

    Raises :class:`KnifeEdgeError` when ``f`` is within ``KNIFE_EDGE_TOL``
    of either threshold.  When ``beta*tau*r_p = 0`` the thresholds
    coincide, Q is constant, and the result carries ``degenerate=True``.
    """
    th = thresholds(model)
    f = core_of(model).f
    if abs(f - th.f_min) <= KNIFE_EDGE_TOL:
        raise KnifeEdgeError(f, th.f_min, "f_min")
    if abs(f - th.f_max) <= KNIFE_EDGE_TOL:
        raise KnifeEdgeError(f, th.f_max, "f_max")
    core = core_of(model)
    degenerate = core.beta * core.tau * core.r_p == 0.0
    if f < th.f_min:
        return Regime(RegimeKind.DEFECTION_DOMINANT, degenerate=degenerate)
    if f > th.f_max:
        return Regime(RegimeKind.COOPERATION_DOMINANT, degenerate=degenerate)
    return Regime(RegimeKind.BISTABLE, x_star=_bisect_root(model))


def interior_root(model: Model) -> float:
    """The unstable interior equilibrium x* of a bistable model."""
    regime = classify_regime(model)
    if regime.kind is not RegimeKind.BISTABLE:
        raise ValueError(
            f"interior root requires the bistable regime, model is {regime.token}"
        )
    return regime.x_star


def stability_at(model: Model, point: float) -> bool:
    """True when the equilibrium ``point`` is stable (dG/dx < 0 there).

    ``point`` must satisfy G(point) = 0 within ``EQUILIBRIUM_TOL``; the
    derivative is evaluated from the closed polynomial form, giving
    Q(0) at x = 0, -Q(1) at x = 1 and x(1-x)Q'(x) at an interior root.
    """
    if abs(gradient_of_selection(model, point)) > EQUILIBRIUM_TOL:
        raise ValueError(f"x={point} is not an equilibrium of the selection gradient")
    n, _, fine_c, fine_d = _q_coefficients(model)
    q = q_function(model, point)
    q_prime = fine_c * _geom_sum_derivative(1.0 - point, n - 1) + fine_d * _geom_sum_derivative(point, n - 1)
    slope = (1.0 - 2.0 * point) * q + point * (1.0 - point) * q_prime
    if slope == 0.0:
        raise ValueError(f"marginal equilibrium at x={point}: dG/dx vanishes")
    return slope < 0.0
