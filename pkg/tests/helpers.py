"""Shared parameter sets and random-instance helpers for the test suite."""

from __future__ import annotations

import numpy as np

from pgg_bribery import (
    BriberyParams,
    CoreParams,
    KnifeEdgeError,
    RegimeKind,
    classify_regime,
    thresholds,
    with_parameter,
)

# Reference parameter sets: the three IPGG regimes ...
IPGG_WEAK = CoreParams(n=5, b=12, c=1, tau=1, f=2, alpha=0.5, beta=0.2, r_p=1.4)
IPGG_BISTABLE = CoreParams(n=5, b=12, c=1, tau=1, f=3, alpha=0.5, beta=0.2, r_p=2)
IPGG_STRONG = CoreParams(n=5, b=12, c=1, tau=1, f=4.7, alpha=0.15, beta=0.2, r_p=4)

# ... and the three bribery-game regimes.  "defector bribes" means q > p.
BG_DEFECTOR_BRIBES = BriberyParams(
    CoreParams(n=5, b=12, c=1, tau=1, f=1.5, alpha=0.6, beta=0.2, r_p=1.4),
    h=1, gamma=0.6, p=0.3, q=0.8,
)
BG_COOP_BRIBES = BriberyParams(
    CoreParams(n=5, b=12, c=1, tau=1, f=2, alpha=0.6, beta=0.2, r_p=4),
    h=1, gamma=0.6, p=0.6, q=0.5,
)
BG_STRONG = BriberyParams(
    CoreParams(n=5, b=12, c=1, tau=1, f=4, alpha=0.15, beta=0.2, r_p=4),
    h=1, gamma=0.6, p=0.3, q=0.8,
)

# Base set for the basin sign-flip grids (q > p); f and r_p get swept.
BG_GRID_BASE = BriberyParams(
    CoreParams(n=5, b=12, c=1, tau=1, f=2, alpha=0.6, beta=0.2, r_p=2.5),
    h=1, gamma=0.6, p=0.3, q=0.8,
)


def draw_bistable_instance(rng: np.random.Generator, bribery: bool):
    """Random bistable model with a comfortably interior equilibrium.

    Parameter magnitudes are chosen so the selection gradient is neither
    stiff for a 0.05 integration step nor so weak that convergence to the
    boundaries crawls.
    """
    while True:
        core = CoreParams(
            n=int(rng.integers(4, 7)),
            b=10.0,
            c=rng.uniform(0.6, 1.5),
            tau=rng.uniform(0.7, 1.2),
            f=2.0,
            alpha=rng.uniform(0.15, 0.85),
            beta=rng.uniform(0.25, 0.6),
            r_p=rng.uniform(0.9, 2.0),
        )
        if bribery:
            model = BriberyParams(
                core,
                h=rng.uniform(0.0, 1.5),
                gamma=rng.uniform(0.0, 1.0 - core.beta),
                p=rng.uniform(0.0, 1.0),
                q=rng.uniform(0.0, 1.0),
            )
        else:
            model = core
        th = thresholds(model)
        f = th.f_min + rng.uniform(0.25, 0.75) * (th.f_max - th.f_min)
        if f <= 0.05:
            continue
        model = with_parameter(model, "f", f)
        try:
            regime = classify_regime(model)
        except KnifeEdgeError:
            continue
        if regime.kind is not RegimeKind.BISTABLE:
            continue
        if not 0.05 < regime.x_star < 0.95:
            continue
        return model, regime.x_star
