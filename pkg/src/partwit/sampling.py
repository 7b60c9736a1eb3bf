"""Desk-scale simulation of the projective partition-label measurement.

Exact outcome probabilities p_lam = tr(Pi_lam rho), multinomial shot sampling
with a counter-based RNG, and Hoeffding-bounded detection decisions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log, sqrt

import numpy as np

from .partitions import enumerate_partitions
from . import tensorops
from .witness import AlphaResult, Witness, separability_partition


@dataclass
class SchurDistribution:
    n: int
    d: int
    probabilities: np.ndarray  # canonical order over partitions with <= d rows

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        basis = enumerate_partitions(self.n, self.d)
        if p.shape != (len(basis),):
            raise ValueError(f"expected {len(basis)} probabilities")
        if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-9:
            raise ValueError("not a probability vector")
        self.probabilities = p.clip(min=0.0)


@dataclass
class ShotRecord:
    counts: np.ndarray
    total: int
    seed: int
    stream: int = 0


@dataclass
class EstimateReport:
    estimate: float
    radius: float
    detected: bool
    alpha: float
    alpha_provenance: str
    total: int
    delta: float
    seed: int

    def to_json(self, witness: Witness | None = None, kappa=None) -> dict:
        out = {
            "schema": "pw/1",
            "alpha": self.alpha,
            "alpha_provenance": self.alpha_provenance,
            "N": self.total,
            "delta": self.delta,
            "estimate": self.estimate,
            "radius": self.radius,
            "detected": self.detected,
            "seed": self.seed,
        }
        if witness is not None:
            out["witness"] = witness.to_json()
        if kappa is not None:
            out["kappa"] = "|".join(str(k) for k in kappa)
        return out


def schur_probabilities(rho: np.ndarray, d: int, n: int,
                        projectors: tensorops.ProjectorSet | None = None,
                        cache_dir: str | None = "./cache") -> SchurDistribution:
    """Outcome distribution p_lam = tr(Pi_lam rho) of the label measurement."""
    if projectors is None:
        projectors = tensorops.all_projectors(d, n, cache_dir=cache_dir)
    if abs(rho.trace().real - 1.0) > 1e-8:
        raise ValueError("state must have unit trace")
    p = np.array([float((mat @ rho).trace().real) for _, mat in projectors.supported])
    return SchurDistribution(n=n, d=d, probabilities=p / p.sum())


def sample(p: SchurDistribution, total: int, seed: int, stream: int = 0) -> ShotRecord:
    """Multinomial draw of ``total`` shots, reproducible per (seed, stream)."""
    if total < 1:
        raise ValueError("need at least one shot")
    rng = np.random.Generator(np.random.Philox(key=(seed, stream)))
    counts = rng.multinomial(total, p.probabilities)
    return ShotRecord(counts=counts, total=total, seed=seed, stream=stream)


def estimate_and_decide(rec: ShotRecord, w: Witness, alpha: float, delta: float,
                        alpha_provenance: str = "closed-form") -> EstimateReport:
    """Point estimate of sum (c_lam - alpha) p_lam with a Hoeffding radius.

    DETECTED means the upper confidence bound at level 1 - delta is negative,
    certifying the state outside the structure alpha was computed for.
    """
    if rec.total < 1:
        raise ValueError("empty shot record")
    basis = enumerate_partitions(w.n, w.d)
    if rec.counts.shape != (len(basis),):
        raise ValueError("shot record does not match the outcome space")
    shifted = np.array([w.coefficient(lam) - alpha for lam in basis])
    estimate = float(shifted @ rec.counts) / rec.total
    span = float(shifted.max() - shifted.min())
    radius = span * sqrt(log(2.0 / delta) / (2.0 * rec.total))
    return EstimateReport(
        estimate=estimate,
        radius=radius,
        detected=bool(estimate + radius < 0.0),
        alpha=alpha,
        alpha_provenance=alpha_provenance,
        total=rec.total,
        delta=delta,
        seed=rec.seed,
    )


def alpha_for_structure(w: Witness, kappa, seed: int = 0, restarts: int = 50,
                        cache_dir: str | None = "./cache") -> tuple[float, str]:
    """Exact alpha when a closed form covers kappa, else a seesaw upper bound.

    A seesaw alpha makes detection claims heuristic: it is an upper bound on
    the true minimum, so apparent detections need independent confirmation.
    """
    from . import seplab
    from .witness import (
        alpha_semisep,
        alpha_tripartite_bisep,
        alpha_tripartite_fullsep,
    )

    kappa = separability_partition(kappa, w.n)
    if kappa == (w.n - 1, 1):
        return alpha_semisep(w).value, "closed-form"
    if w.n == 3:
        c3, c21, c111 = (w.coefficient(lam) for lam in ((3,), (2, 1), (1, 1, 1)))
        if kappa == (2, 1):
            return alpha_tripartite_bisep(c3, c21, c111, w.d), "closed-form"
        if kappa == (1, 1, 1):
            return alpha_tripartite_fullsep(c3, c21, c111, w.d), "closed-form"
    result = seplab.seesaw_minimize(w, kappa, restarts=restarts, seed=seed,
                                    cache_dir=cache_dir)
    return result.value, "seesaw-heuristic"


def pipeline(rho: np.ndarray, w: Witness, kappa, total: int, delta: float,
             seed: int, cache_dir: str | None = "./cache",
             restarts: int = 50) -> EstimateReport:
    """Measurement-simulation pipeline: probabilities, shots, decision."""
    kappa = separability_partition(kappa, w.n)
    alpha, provenance = alpha_for_structure(w, kappa, seed=seed, restarts=restarts,
                                            cache_dir=cache_dir)
    if provenance != "closed-form":
        import logging

        logging.getLogger(__name__).warning(
            "SOUNDNESS: alpha for kappa=%s is a seesaw upper bound; "
            "detection claims are heuristic", kappa)
    dist = schur_probabilities(rho, w.d, w.n, cache_dir=cache_dir)
    rec = sample(dist, total, seed)
    return estimate_and_decide(rec, w, alpha, delta, alpha_provenance=provenance)
