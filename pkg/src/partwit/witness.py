"""Witness construction and minimum expectation values over product structures.

A witness is a real coefficient vector over partitions of n; its operator form
is sum_lam c_lam Pi_lam.  The semiseparable minimum (one site split from the
rest) has an exact closed form built from squared reduced Wigner coefficients;
the matching numeric oracle diagonalizes the site-1 compression of the same
operator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb, prod

import numpy as np

from .partitions import (
    Partition,
    addable_corners,
    check_partition,
    enumerate_partitions,
    hook_dimension,
    interlacings,
    pad,
    removable_corners,
    strip_zeros,
    weyl_dimension,
)
from . import tensorops

CLOSED_NUMERIC_AGREEMENT = 1e-6   # disagreement beyond this is a bug, not noise


def separability_partition(parts, n: int | None = None) -> Partition:
    """Validate and sort a separability structure kappa = [k_1|...|k_m]."""
    kappa = tuple(sorted((int(k) for k in parts), reverse=True))
    if not kappa or any(k < 1 for k in kappa):
        raise ValueError(f"invalid separability partition {parts!r}")
    if n is not None and sum(kappa) != n:
        raise ValueError(f"{kappa} does not partition n={n} sites")
    return kappa


@dataclass
class Witness:
    """Coefficients c_lam over partitions of n, evaluated at local dimension d.

    Coefficients for partitions with more than d rows are accepted but have no
    effect (their projectors vanish), so one definition serves multiple d.
    """

    n: int
    d: int
    coeffs: dict[Partition, float] = field(default_factory=dict)
    shift: float | None = None

    def __post_init__(self):
        self.coeffs = {check_partition(lam, self.n): float(c) for lam, c in self.coeffs.items()}
        if not any(c != 0.0 for c in self.coeffs.values()):
            raise ValueError("witness needs at least one nonzero coefficient")

    @classmethod
    def from_vector(cls, n: int, d: int, values, shift: float | None = None) -> "Witness":
        """Coefficients aligned with the canonical list of all partitions of n."""
        parts = enumerate_partitions(n, n)
        if len(values) == len(parts):
            basis = parts
        else:
            basis = enumerate_partitions(n, d)
            if len(values) != len(basis):
                raise ValueError(f"expected {len(parts)} or {len(basis)} coefficients")
        return cls(n=n, d=d, coeffs=dict(zip(basis, map(float, values))), shift=shift)

    def coefficient(self, lam) -> float:
        return self.coeffs.get(tuple(lam), 0.0)

    def vector(self) -> np.ndarray:
        """Coefficients over partitions with at most d rows, canonical order."""
        return np.array([self.coefficient(lam) for lam in enumerate_partitions(self.n, self.d)])

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "d": self.d,
            "coeffs": [
                {"partition": list(lam), "c": c} for lam, c in sorted(self.coeffs.items(), reverse=True)
            ],
        }
        if self.shift is not None:
            out["shift"] = self.shift
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Witness":
        coeffs = {tuple(entry["partition"]): float(entry["c"]) for entry in obj["coeffs"]}
        return cls(n=int(obj["n"]), d=int(obj["d"]), coeffs=coeffs, shift=obj.get("shift"))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)

    @classmethod
    def load(cls, path: str) -> "Witness":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


@dataclass
class AlphaResult:
    """A minimum expectation value plus the certificate achieving it."""

    value: float
    certificate: dict
    provenance: str

    def to_json(self) -> dict:
        cert = {}
        for key, val in self.certificate.items():
            if isinstance(val, np.ndarray):
                cert[key] = [[float(x.real), float(x.imag)] for x in val]
            elif isinstance(val, tuple):
                cert[key] = list(val)
            else:
                cert[key] = val
        return {"value": self.value, "certificate": cert, "provenance": self.provenance}


@dataclass
class WignerWeight:
    mu: Partition
    nu: Partition
    k: int
    weight: float


def wigner_weight(mu, nu, k: int, d: int) -> WignerWeight:
    """Squared reduced Wigner coefficient x^lam_{mu,nu} for lam = mu + e_k.

    ``mu`` is padded to d parts and ``nu`` to d-1; ``k`` is the 1-based row of
    the addable corner.  Weights over the corners of a fixed (mu, nu) sum to 1.
    """
    mu_p = pad(strip_zeros(mu), d)
    nu_p = tuple(nu) + (0,) * (d - 1 - len(nu))
    if len(nu_p) != d - 1:
        raise ValueError(f"nu {nu} needs at most d-1={d-1} parts")
    for i in range(d - 1):
        if not (mu_p[i] >= nu_p[i] >= mu_p[i + 1]):
            raise ValueError(f"nu {nu} does not interlace mu {mu}")
    corners = dict(addable_corners(strip_zeros(mu), d))
    if k not in corners:
        raise ValueError(f"row {k} is not an addable corner of {mu} at d={d}")
    lam_k = mu_p[k - 1] + 1
    num = prod(nu_p[i - 1] - i - lam_k + k for i in range(1, d))
    den = prod(mu_p[i - 1] - i - mu_p[k - 1] + k for i in range(1, d + 1) if i != k)
    w = num / den
    if not -1e-12 <= w <= 1 + 1e-12:
        raise AssertionError(f"weight {w} outside [0,1] for mu={mu}, nu={nu}, k={k}")
    return WignerWeight(mu=tuple(mu), nu=tuple(nu), k=k, weight=min(max(w, 0.0), 1.0))


def witness_operator(w: Witness, projectors: "tensorops.ProjectorSet | None" = None,
                     cache_dir: str | None = "./cache") -> np.ndarray:
    if projectors is None:
        projectors = tensorops.all_projectors(w.d, w.n, cache_dir=cache_dir)
    dim = w.d**w.n
    out = np.zeros((dim, dim), dtype=np.complex128)
    for lam, mat in projectors.supported:
        c = w.coefficient(lam)
        if c != 0.0:
            out += c * mat
    return out


def detect_inseparability(p, w: Witness, alpha: float) -> tuple[float, bool]:
    """Detection rule: sum_lam (c_lam - alpha) p_lam < 0 certifies kappa-inseparability.

    ``p`` is the outcome distribution over partitions with at most d rows in
    canonical order.  Returns (value, detected).
    """
    p = np.asarray(p, dtype=float)
    basis = enumerate_partitions(w.n, w.d)
    if p.shape != (len(basis),):
        raise ValueError(f"expected {len(basis)} probabilities, got {p.shape}")
    if abs(p.sum() - 1.0) > 1e-9 or p.min() < -1e-12:
        raise ValueError("not a normalized probability vector")
    value = float(sum((w.coefficient(lam) - alpha) * pi for lam, pi in zip(basis, p)))
    return value, value < -1e-9


def _semisep_candidates(w: Witness):
    for mu in enumerate_partitions(w.n - 1, w.d):
        corners = addable_corners(mu, w.d)
        if not any(w.coefficient(lam) != 0.0 for _, lam in corners):
            # all children carry zero coefficient: the block contributes 0
            yield 0.0, mu, None
            continue
        for nu in interlacings(mu, w.d):
            val = sum(
                w.coefficient(lam) * wigner_weight(mu, nu, k, w.d).weight
                for k, lam in corners
            )
            yield val, mu, nu


def alpha_semisep_closed(w: Witness) -> AlphaResult:
    """Exact minimum of <W> over states with one site split from the rest.

    Minimizes sum_k c_{mu+e_k} x^{mu+e_k}_{mu,nu} over partitions mu of n-1
    (at most d rows) and interlacing nu.
    """
    if w.n < 2:
        raise ValueError("semiseparable structure needs n >= 2")
    best, best_mu, best_nu = min(_semisep_candidates(w), key=lambda t: t[0])
    return AlphaResult(
        value=float(best),
        certificate={"mu": best_mu, "nu": best_nu},
        provenance="closed-form",
    )


def alpha_semisep_numeric(w: Witness, cache_dir: str | None = None) -> AlphaResult:
    """Spectral oracle: min eigenvalue of sum_lam c_lam X^lam on n-1 sites."""
    if w.n < 2:
        raise ValueError("semiseparable structure needs n >= 2")
    tensorops.check_budget(w.d, w.n)
    dim = w.d ** (w.n - 1)
    op = np.zeros((dim, dim))
    for lam in enumerate_partitions(w.n, w.d):
        c = w.coefficient(lam)
        if c != 0.0:
            op += c * tensorops.compressed_projector(lam, w.d, w.n)
    if dim > tensorops._DENSE_EIG_LIMIT:
        value = tensorops.min_eigenvalue(op)
        vec = None
    else:
        vals, vecs = np.linalg.eigh(op)
        value, vec = float(vals[0]), vecs[:, 0]
    cert: dict = {"structure": (w.n - 1, 1)}
    if vec is not None:
        single = np.zeros(w.d, dtype=np.complex128)
        single[w.d - 1] = 1.0
        cert["factors"] = [vec.astype(np.complex128), single]
    return AlphaResult(value=float(value), certificate=cert, provenance="numeric")


def alpha_semisep(w: Witness) -> AlphaResult:
    """Tightest of the closed form and the spectral oracle; they must agree."""
    closed = alpha_semisep_closed(w)
    numeric = alpha_semisep_numeric(w)
    if abs(closed.value - numeric.value) > CLOSED_NUMERIC_AGREEMENT:
        raise AssertionError(
            f"closed form {closed.value} and oracle {numeric.value} disagree"
        )
    return closed if closed.value <= numeric.value else numeric


def projected_spectrum(lam, d: int, n: int) -> list[tuple[float, int]]:
    """Closed-form spectrum of X^lam with multiplicities, zero block included.

    Eigenvalue x^lam_{lam-r,nu} carries multiplicity d_{lam-r} * m_nu(d-1) for
    each removable corner r and interlacing nu.
    """
    lam = check_partition(lam, n)
    out: dict[float, int] = {}
    total = 0
    if len(lam) <= d:
        for k, mu in removable_corners(lam):
            if len(mu) > d:
                continue
            d_mu = hook_dimension(mu)
            for nu in interlacings(mu, d):
                if k not in dict(addable_corners(mu, d)):
                    continue
                x = wigner_weight(mu, nu, k, d).weight
                mult = d_mu * weyl_dimension(strip_zeros(nu), d - 1) if d > 1 else d_mu
                key = round(x, 12)
                out[key] = out.get(key, 0) + mult
                total += mult
    dim = d ** (n - 1)
    if total < dim:
        out[0.0] = out.get(0.0, 0) + dim - total
    return sorted(out.items())


def alpha_tripartite_bisep(c3: float, c21: float, c111: float, d: int) -> float:
    """Minimum of <W> over biseparable tripartite states, closed form."""
    if d < 2:
        raise ValueError("need d >= 2")
    candidates = [c3, c21]
    if d > 2:
        candidates.append(2.0 / 3.0 * c21 + 1.0 / 3.0 * c111)
    return min(candidates)


def alpha_tripartite_fullsep(c3: float, c21: float, c111: float, d: int) -> float:
    """Minimum of <W> over fully separable tripartite states, closed form."""
    if d < 2:
        raise ValueError("need d >= 2")
    candidates = [c3, 0.25 * c3 + 0.75 * c21]
    if d > 2:
        candidates.append(2.0 / 3.0 * c21 + c3 / 6.0 + c111 / 6.0)
    return min(candidates)


def hook_family_witness(k: int, n: int, d: int) -> tuple[Witness, float]:
    """Hook-shaped witness pair with its exact semiseparable minimum.

    W = Pi_{(n-k,1^k)}/C(n-1,k)^2 - Pi_{(n-k-1,1^{k+1})}/C(n-1,k+1)^2, whose
    minimum over one-site-split states is independent of d.
    """
    if k < 0 or d < k + 2 or n < k + 2:
        raise ValueError(f"need k >= 0, d >= k+2, n >= k+2; got k={k}, n={n}, d={d}")
    lam_top = (n - k,) + (1,) * k
    lam_bot = (n - k - 1,) + (1,) * (k + 1)
    coeffs = {
        lam_top: 1.0 / comb(n - 1, k) ** 2,
        strip_zeros(lam_bot): -1.0 / comb(n - 1, k + 1) ** 2,
    }
    if k <= n - 3:
        alpha = -1.0 / comb(n - 1, k + 1) ** 2
    else:  # n == k + 2
        alpha = -k / ((k + 1) * (k + 2))
    return Witness(n=n, d=d, coeffs=coeffs), alpha


def two_row_dimension(n: int, r: int) -> int:
    """Standard-tableau count C(n,r) - C(n,r-1) for the two-row shape (n-r, r)."""
    return comb(n, r) - (comb(n, r - 1) if r >= 1 else 0)


def two_row_qubit_witness(a: int, b: int, k: int) -> tuple[Witness, float]:
    """Two-row qubit witness Pi_(a,b)/d^2 - Pi_(a-k,b+k)/d^2 with exact minimum.

    The minimum over one-site-split states follows a three-case split on the
    row gap a - b relative to the shift 2k.
    """
    n = a + b
    if not (a >= b >= 0) or not (a - b >= 2 * k > 0):
        raise ValueError(f"need a >= b >= 0 and a-b >= 2k > 0; got a={a}, b={b}, k={k}")
    d_top = two_row_dimension(n, b)
    d_bot = two_row_dimension(n, b + k)
    coeffs = {
        strip_zeros((a, b)): 1.0 / d_top**2,
        strip_zeros((a - k, b + k)): -1.0 / d_bot**2,
    }
    delta = a - b
    if delta >= 2 * k + 1:
        alpha = -1.0 / d_bot**2
    elif delta == 2 * k and k > 1:
        alpha = -1.0 / (2 * d_bot**2)
    else:  # delta == 2, k == 1
        d_mid = two_row_dimension(n, b + 1)
        alpha = 0.5 * (1.0 / d_top**2 - 1.0 / d_mid**2)
    return Witness(n=n, d=2, coeffs=coeffs), alpha


def even_qubit_witness(n: int) -> tuple[Witness, float]:
    """Even-n qubit witness p_(n) - p_(n/2,n/2)/D^2 with its detection shift.

    D = C(n,n/2) - C(n,n/2-1); the witness detects states where no single
    qubit is split from the rest once shifted by 1/(2 D^2).
    """
    if n % 2 != 0 or n < 4:
        raise ValueError("need even n >= 4")
    big_d = two_row_dimension(n, n // 2)
    coeffs = {(n,): 1.0, (n // 2, n // 2): -1.0 / big_d**2}
    shift = 1.0 / (2 * big_d**2)
    return Witness(n=n, d=2, coeffs=coeffs, shift=shift), shift
