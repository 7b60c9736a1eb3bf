"""Numeric separability machinery.

Seesaw product-state minimization, full-PPT checks, classification of
permutation/unitary-invariant states, the four-ququart polytope verification,
first-order certified shifts for indecomposable witnesses, and the seven-qubit
consistency sweep.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .partitions import Partition, enumerate_partitions
from . import tensorops
from .tables import (
    EPSILON_SDP_VALUES,
    FPPT_FACETS_D4,
    FPPT_VERTICES_D4,
    INDECOMPOSABLE_ROWS_D4,
)
from .witness import AlphaResult, Witness, separability_partition, witness_operator

log = logging.getLogger(__name__)

FPPT_EIG_TOL = -1e-9


# ---------------------------------------------------------------------------
# Symmetric states
# ---------------------------------------------------------------------------

def symmetric_state(q, d: int, n: int,
                    projectors: tensorops.ProjectorSet | None = None,
                    cache_dir: str | None = "./cache") -> np.ndarray:
    """Density matrix sum_lam q_lam Pi_lam / tr Pi_lam for weights q >= 0.

    ``q`` follows the canonical order of partitions with at most d rows.
    """
    if projectors is None:
        projectors = tensorops.all_projectors(d, n, cache_dir=cache_dir)
    q = np.asarray(q, dtype=float)
    basis = enumerate_partitions(n, d)
    if q.shape != (len(basis),):
        raise ValueError(f"expected {len(basis)} weights, got {q.shape}")
    if q.min() < -1e-12 or abs(q.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be nonnegative and sum to 1")
    dim = d**n
    rho = np.zeros((dim, dim), dtype=np.complex128)
    sup = dict(projectors.supported)
    for weight, lam in zip(q, basis):
        if weight != 0.0:
            mat = sup[lam]
            rho += weight * mat / mat.trace().real
    return rho


def fppt_check(rho: np.ndarray, d: int, n: int,
               cut_sizes=None) -> tuple[bool, dict[int, float]]:
    """Minimum eigenvalue of rho^{T_s} for each cut size s; PASS iff all >= -1e-9.

    For permutation-invariant states only cut sizes matter, so the transposed
    sites are always the first s.
    """
    if cut_sizes is None:
        cut_sizes = range(1, n // 2 + 1)
    if not tensorops.is_hermitian(rho):
        raise ValueError("state must be Hermitian")
    mins: dict[int, float] = {}
    for s in cut_sizes:
        pt = tensorops.partial_transpose(rho, d, n, range(1, s + 1))
        mins[int(s)] = float(np.linalg.eigvalsh(pt)[0])
    return all(v >= FPPT_EIG_TOL for v in mins.values()), mins


# ---------------------------------------------------------------------------
# Tripartite classification
# ---------------------------------------------------------------------------

@dataclass
class ClassificationLabel:
    label: str
    criteria: dict[str, float]


def tripartite_criteria(q, d: int) -> dict[str, float]:
    """The three linear criteria deciding kappa-separability of invariant
    tripartite states: two for full separability, one for biseparability."""
    basis = enumerate_partitions(3, d)
    p = dict(zip(basis, q))
    p3 = p.get((3,), 0.0)
    p21 = p.get((2, 1), 0.0)
    p111 = p.get((1, 1, 1), 0.0)
    return {
        "sep_1": p21 - 4 * p111,
        "sep_2": 3 * p3 - p21 + p111,
        "bisep": p21 - 2 * p111,
    }


def classify_tripartite(q, d: int,
                        projectors: tensorops.ProjectorSet | None = None,
                        cache_dir: str | None = "./cache") -> ClassificationLabel:
    crit = tripartite_criteria(q, d)
    rho = symmetric_state(q, d, 3, projectors=projectors, cache_dir=cache_dir)
    ppt_ok, mins = fppt_check(rho, d, 3)
    crit["ppt_min_eig"] = min(mins.values())
    if crit["sep_1"] >= 0 and crit["sep_2"] >= 0:
        label = "FULL-SEP"
    elif ppt_ok:
        label = "BOUND-ENTANGLED"
    elif crit["bisep"] >= 0:
        label = "[2,1]-SEP-NOT-FULL"
    else:
        label = "GME"
    return ClassificationLabel(label=label, criteria=crit)


def classify_werner_family(resolution: int = 201, d: int = 3,
                           cache_dir: str | None = "./cache") -> dict:
    """Scan the one-parameter family q = (p, 1-p, 0) and locate its boundaries.

    Reports the full-separability boundary (closed form from the criteria),
    the PPT boundary (bisection on the minimum PT eigenvalue), the resulting
    bound-entangled window, and a note on the tabulated interval, which is
    inconsistent as printed.
    """
    if d < 3:
        raise ValueError("the family needs d >= 3 so that all three projectors exist")
    projectors = tensorops.all_projectors(d, 3, cache_dir=cache_dir)

    def weights(p):
        return np.array([p, 1.0 - p, 0.0])

    def sep_margin(p):
        crit = tripartite_criteria(weights(p), d)
        return min(crit["sep_1"], crit["sep_2"])

    def ppt_margin(p):
        rho = symmetric_state(weights(p), d, 3, projectors=projectors)
        _, mins = fppt_check(rho, d, 3)
        return min(mins.values()) - FPPT_EIG_TOL

    def bisect(fn, lo, hi, tol=1e-9):
        flo, fhi = fn(lo), fn(hi)
        if flo > 0 and fhi > 0:
            return lo
        if flo < 0 and fhi < 0:
            return hi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if hi - lo <= tol:
                break
            if (fn(mid) < 0) == (flo < 0):
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    sep_boundary = bisect(sep_margin, 0.0, 1.0)
    ppt_boundary = bisect(ppt_margin, 0.0, 1.0)
    grid = np.linspace(0.0, 1.0, resolution)
    sweep = []
    for p in grid:
        crit = tripartite_criteria(weights(p), d)
        sweep.append({"p": float(p), **{k: float(v) for k, v in crit.items()},
                      "ppt_margin": float(ppt_margin(p))})
    bisep_ok = all(row["bisep"] >= -1e-12 for row in sweep)
    return {
        "d": d,
        "sep_boundary": float(sep_boundary),
        "ppt_boundary": float(ppt_boundary),
        "bound_entangled_window": [float(ppt_boundary), float(sep_boundary)],
        "bisep_everywhere": bisep_ok,
        "tabulated_ppt_boundary": 0.2,
        "note": (
            "derived: fully separable for p >= sep_boundary, bound entangled for "
            "ppt_boundary <= p < sep_boundary; the tabulated intervals "
            "(bound entangled for 1/4<p<=1/5, fully separable for 1/5<p<=1) are "
            "empty/inconsistent as printed and are reported for comparison only"
        ),
        "sweep": sweep,
    }


# ---------------------------------------------------------------------------
# Seesaw
# ---------------------------------------------------------------------------

@dataclass
class ProductState:
    """Pure product state with factor r on the k_r sites following factor r-1."""

    structure: Partition
    factors: list[np.ndarray]
    d: int

    def assemble(self) -> np.ndarray:
        out = np.array([1.0 + 0j])
        for v in self.factors:
            out = np.kron(out, v)
        return out

    def expectation(self, op: np.ndarray) -> float:
        v = self.assemble()
        return float((v.conj() @ op @ v).real)


def random_product_state(structure, d: int, rng: np.random.Generator) -> ProductState:
    structure = separability_partition(structure)
    factors = []
    for k in structure:
        v = rng.standard_normal(d**k) + 1j * rng.standard_normal(d**k)
        factors.append(v / np.linalg.norm(v))
    return ProductState(structure=structure, factors=factors, d=d)


def _factor_embedding(factors, i: int, d: int, structure) -> np.ndarray:
    """Isometry |pre> x I x |post| mapping factor i's space into the chain."""
    pre = np.array([1.0 + 0j])
    for j in range(i):
        pre = np.kron(pre, factors[j])
    post = np.array([1.0 + 0j])
    for j in range(i + 1, len(factors)):
        post = np.kron(post, factors[j])
    dim_i = d ** structure[i]
    return np.kron(np.kron(pre[:, None], np.eye(dim_i)), post[:, None])


def seesaw_minimize(w: Witness, kappa, restarts: int = 50, max_iters: int = 500,
                    tol: float = 1e-10, seed: int = 0,
                    projectors: tensorops.ProjectorSet | None = None,
                    cache_dir: str | None = "./cache",
                    threads: int = 1) -> AlphaResult:
    """Upper bound on alpha_kappa by alternating local eigenvector updates.

    Each sweep replaces one factor with the minimal eigenvector of the witness
    contracted against the remaining factors, so the objective never increases;
    the best over Haar-random restarts is returned with its product state.
    """
    kappa = separability_partition(kappa, w.n)
    op = witness_operator(w, projectors=projectors, cache_dir=cache_dir)

    def one_restart(r: int) -> tuple[float, ProductState, bool]:
        rng = np.random.default_rng([seed, r])
        state = random_product_state(kappa, w.d, rng)
        factors = state.factors
        prev = np.inf
        converged = False
        value = state.expectation(op)
        for _ in range(max_iters):
            for i in range(len(factors)):
                emb = _factor_embedding(factors, i, w.d, kappa)
                local = emb.conj().T @ op @ emb
                vals, vecs = np.linalg.eigh(local)
                factors[i] = vecs[:, 0]
                new_value = float(vals[0])
                if new_value > value + 1e-10 * max(1.0, abs(value)):
                    raise AssertionError("seesaw objective increased")
                value = new_value
            if abs(prev - value) <= tol:
                converged = True
                break
            prev = value
        return value, ProductState(structure=kappa, factors=factors, d=w.d), converged

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(one_restart, range(restarts)))
    else:
        outcomes = [one_restart(r) for r in range(restarts)]
    value, state, converged = min(outcomes, key=lambda t: t[0])
    if not converged:
        log.warning("seesaw did not converge within %d sweeps; best-so-far returned", max_iters)
    return AlphaResult(
        value=value,
        certificate={"structure": kappa, "factors": state.factors, "converged": converged},
        provenance="seesaw",
    )


# ---------------------------------------------------------------------------
# Four-ququart polytope
# ---------------------------------------------------------------------------

def verify_polytope_tables(projectors: tensorops.ProjectorSet | None = None,
                           cache_dir: str | None = "./cache") -> dict:
    """Check the tabulated FPPT vertices, facets, and separability certificates.

    (a) every vertex row realizes an FPPT state on cuts {1, 2};
    (b) every facet is nonnegative on all vertices and tight on at least 4;
    (c) the product kets reproduce their rows exactly.
    """
    if projectors is None:
        projectors = tensorops.all_projectors(4, 4, cache_dir=cache_dir)
    basis = enumerate_partitions(4, 4)
    failures: list[str] = []

    vertex_eigs = []
    for i, vert in enumerate(FPPT_VERTICES_D4):
        q = np.array(vert["coords"], dtype=float) / vert["norm"]
        rho = symmetric_state(q, 4, 4, projectors=projectors)
        ok, mins = fppt_check(rho, 4, 4, cut_sizes=(1, 2))
        vertex_eigs.append(mins)
        if not ok:
            failures.append(f"vertex {i + 1} not FPPT: {mins}")

    facet_values = {}
    for name, row in FPPT_FACETS_D4.items():
        vals = []
        for vert in FPPT_VERTICES_D4:
            q = np.array(vert["coords"], dtype=float) / vert["norm"]
            vals.append(float(np.dot(row, q)))
        facet_values[name] = vals
        if min(vals) < -1e-8:
            failures.append(f"facet {name} negative on a vertex: {vals}")
        if sum(1 for v in vals if abs(v) <= 1e-8) < 4:
            failures.append(f"facet {name} tight on fewer than 4 vertices: {vals}")

    for i, vert in enumerate(FPPT_VERTICES_D4):
        if not vert["separable"]:
            continue
        ket = np.zeros(4**4)
        ket[np.ravel_multi_index(vert["ket"], (4,) * 4)] = 1.0
        p = np.array([float((ket @ mat @ ket).real) for _, mat in projectors.supported])
        expected = np.array(vert["coords"], dtype=float) / vert["norm"]
        if np.abs(p - expected).max() > 1e-9:
            failures.append(f"certificate for vertex {i + 1} off: {p} vs {expected}")

    return {
        "vertices": len(FPPT_VERTICES_D4),
        "facets": len(FPPT_FACETS_D4),
        "vertex_min_eigs": vertex_eigs,
        "facet_values": facet_values,
        "failures": failures,
        "passed": not failures,
    }


def extreme_point_search(seed: int = 0, trials: int = 200,
                         projectors: tensorops.ProjectorSet | None = None,
                         cache_dir: str | None = "./cache",
                         mineig_tol: float = 5e-11,
                         cluster_tol: float = 1e-6) -> dict:
    """Sample extreme points of the symmetric FPPT set by cutting planes.

    Maximizes random linear functionals of the projector weights q over
    {q >= 0, sum q = 1, rho(q)^{T_s} >= 0}; PSD violations enter as linear
    cuts through their eigenvectors.  Optima are clustered into vertices.
    """
    from scipy.optimize import linprog

    if projectors is None:
        projectors = tensorops.all_projectors(4, 4, cache_dir=cache_dir)
    sup = projectors.supported
    normalized = [mat / mat.trace().real for _, mat in sup]
    pt_blocks = {
        s: [tensorops.partial_transpose(mat, 4, 4, range(1, s + 1)) for mat in normalized]
        for s in (1, 2)
    }
    rng = np.random.default_rng(seed)
    nvar = len(sup)
    optima = []
    for _ in range(trials):
        f = rng.standard_normal(nvar)
        cuts: list[np.ndarray] = []
        q = None
        for _ in range(400):
            res = linprog(
                -f,
                A_ub=-np.array(cuts) if cuts else None,
                b_ub=np.zeros(len(cuts)) if cuts else None,
                A_eq=np.ones((1, nvar)),
                b_eq=[1.0],
                bounds=[(0, 1)] * nvar,
                method="highs",
            )
            if not res.success:
                raise RuntimeError(f"cut generation produced an infeasible LP: {res.message}")
            q = res.x
            worst_val, worst_cut = 0.0, None
            for s in (1, 2):
                mat = sum(qq * blk for qq, blk in zip(q, pt_blocks[s]))
                vals, vecs = np.linalg.eigh(mat)
                if vals[0] < worst_val:
                    v = vecs[:, 0]
                    worst_val = vals[0]
                    worst_cut = np.array([float((v.conj() @ blk @ v).real) for blk in pt_blocks[s]])
            if worst_val >= -mineig_tol:
                break
            cuts.append(worst_cut)
        optima.append(q)

    clusters: list[np.ndarray] = []
    counts: list[int] = []
    for q in optima:
        for i, c in enumerate(clusters):
            if np.abs(q - c).max() <= cluster_tol:
                counts[i] += 1
                break
        else:
            clusters.append(q)
            counts.append(1)

    matches = []
    for c in clusters:
        hit = None
        for i, vert in enumerate(FPPT_VERTICES_D4):
            expected = np.array(vert["coords"], dtype=float) / vert["norm"]
            if np.abs(c - expected).max() <= cluster_tol:
                hit = i + 1
                break
        matches.append(hit)
    return {
        "seed": seed,
        "trials": trials,
        "clusters": [c.tolist() for c in clusters],
        "cluster_counts": counts,
        "matched_vertices": matches,
        "n_clusters": len(clusters),
    }


# ---------------------------------------------------------------------------
# Certified shifts for indecomposable witnesses
# ---------------------------------------------------------------------------

def _psd_project(mat: np.ndarray) -> np.ndarray:
    mat = 0.5 * (mat + mat.conj().T)
    vals, vecs = np.linalg.eigh(mat)
    if vals[0] >= 0:
        return mat
    pos = vals.clip(min=0.0)
    return (vecs * pos) @ vecs.conj().T


def _pt3(mat: np.ndarray, site: int) -> np.ndarray:
    return tensorops.partial_transpose(mat, 4, 3, [site])


def _dykstra_feasible(x: np.ndarray, sweeps: int = 25) -> np.ndarray:
    """Dykstra projection onto {PSD} ∩ {PSD under each single-site PT} ∩ {tr=1}."""
    dim = x.shape[0]
    projections = [lambda m: _psd_project(m)]
    for site in (1, 2, 3):
        projections.append(lambda m, s=site: _pt3(_psd_project(_pt3(m, s)), s))
    projections.append(lambda m: m + (1.0 - m.trace().real) / dim * np.eye(dim))
    increments = [np.zeros_like(x) for _ in projections]
    for _ in range(sweeps):
        for i, proj in enumerate(projections):
            y = proj(x + increments[i])
            increments[i] = x + increments[i] - y
            x = y
    return x


@dataclass
class EpsilonResult:
    epsilon: float            # certified shift (from the dual bound)
    primal: float             # best feasible objective found
    dual: float               # certified lower bound on the minimum
    gap: float
    certified: bool
    iterations: int


def epsilon_certify(w: Witness, max_outer: int = 60, dual_iters: int = 400,
                    projectors: tensorops.ProjectorSet | None = None,
                    cache_dir: str | None = "./cache") -> EpsilonResult:
    """Certified shift for a four-ququart witness via the compressed relaxation.

    Minimizes tr(C X) with C the site-1 compression of the trace-normalized
    witness against its first basis state, over X that are PSD, PSD under each
    single-site partial transpose, and unit trace.  A projected-gradient /
    Dykstra loop produces the primal iterate; a supergradient ascent on
    Z -> mineig(C - sum_i Z_i^{T_i}) over PSD Z_i produces the certified dual
    bound.  The certificate is the dual bound, never the primal value.
    """
    if (w.n, w.d) != (4, 4):
        raise ValueError("the certified-shift relaxation is specified for n = d = 4")
    op = witness_operator(w, projectors=projectors, cache_dir=cache_dir)
    op = op / op.trace().real
    c = tensorops.compress_first_site(op, 4, 4, level=0).copy()
    dim = c.shape[0]
    scale = float(np.abs(np.linalg.eigvalsh(c)).max())

    # primal: projected gradient with Dykstra feasibility restoration
    x = np.eye(dim, dtype=np.complex128) / dim
    best_primal = float((c @ x).trace().real)
    step = 0.5 / max(scale, 1e-12)
    for it in range(max_outer):
        x = _dykstra_feasible(x - step * c, sweeps=20)
        val = float((c @ x).trace().real)
        best_primal = min(best_primal, val)
        step *= 0.92

    # dual: maximize mineig(C - sum Z_i^{T_i}) over PSD Z_i
    zs = [np.zeros((dim, dim), dtype=np.complex128) for _ in range(3)]
    best_dual = -np.inf
    for k in range(1, dual_iters + 1):
        m = c.copy()
        for site, z in zip((1, 2, 3), zs):
            m -= _pt3(z, site)
        vals, vecs = np.linalg.eigh(m)
        g = float(vals[0])
        best_dual = max(best_dual, g)
        v = vecs[:, 0]
        vv = np.outer(v, v.conj())
        grads = [_pt3(vv, site) for site in (1, 2, 3)]
        # Polyak-style step towards the primal estimate, with a safeguard cap
        gap_est = max(best_primal - g, 1e-14)
        norm2 = sum(float(np.linalg.norm(gr) ** 2) for gr in grads)
        t = min(gap_est / max(norm2, 1e-14), 10.0 * scale / np.sqrt(k))
        zs = [_psd_project(z - t * gr) for z, gr in zip(zs, grads)]

    if best_dual > best_primal + 1e-9:
        raise AssertionError(f"weak duality violated: dual {best_dual} > primal {best_primal}")
    epsilon = max(0.0, -best_dual)
    gap = best_primal - best_dual
    certified = gap <= 0.1 * max(abs(epsilon), 1e-12) or epsilon == 0.0
    if not certified:
        log.warning("duality gap %.3e above 10%% of eps=%.3e: UNCERTIFIED", gap, epsilon)
    return EpsilonResult(
        epsilon=epsilon,
        primal=float(best_primal),
        dual=float(best_dual),
        gap=float(gap),
        certified=certified,
        iterations=max_outer + dual_iters,
    )


def indecomposable_row_witness(name: str) -> Witness:
    row = INDECOMPOSABLE_ROWS_D4[name]
    return Witness.from_vector(4, 4, row)


# ---------------------------------------------------------------------------
# Decomposability identity
# ---------------------------------------------------------------------------

def decomposability_identity_check(d: int, cache_dir: str | None = "./cache") -> dict[str, float]:
    """Residuals of the explicit partial-transpose decomposition of W_+/W_-.

    W_+ = 4 Pi_(3) - Pi_(2,1) and W_- = Pi_(2,1) - 4 Pi_(1,1,1) each equal a
    sum over sites of partial transposes of manifestly positive operators,
    which makes them decomposable witnesses.
    """
    n = 3
    projectors = tensorops.all_projectors(d, n, cache_dir=cache_dir)
    sup = dict(projectors.supported)
    p3 = sup[(3,)]
    p21 = sup[(2, 1)]
    p111 = sup.get((1, 1, 1), np.zeros_like(p3))
    eye = np.eye(d**n)

    def swap_op(i, j):
        pi = list(range(n))
        pi[i], pi[j] = pi[j], pi[i]
        return tensorops.permutation_operator(tuple(pi), d)

    out = {}
    for sign, target, name in ((+1, 4 * p3 - p21, "W+"), (-1, p21 - 4 * p111, "W-")):
        rhs = np.zeros_like(target)
        for site in range(3):
            m, l = (site + 1) % 3, (site + 2) % 3
            q = 0.5 * (eye + sign * swap_op(m, l))
            epr = tensorops.partial_transpose(swap_op(site, m), d, n, [site + 1])
            pos = q @ epr @ q
            if np.linalg.eigvalsh(pos)[0] < -1e-10:
                raise AssertionError("decomposition part is not positive")
            rhs += (4.0 / 3.0) * tensorops.partial_transpose(pos, d, n, [site + 1])
        out[name] = float(np.abs(target - rhs).max())
    return out


def random_fppt_symmetric_states(count: int, d: int, n: int, seed: int,
                                 projectors: tensorops.ProjectorSet | None = None,
                                 cache_dir: str | None = "./cache") -> list[np.ndarray]:
    """Rejection-sample projector-weight vectors whose states are fully PPT."""
    if projectors is None:
        projectors = tensorops.all_projectors(d, n, cache_dir=cache_dir)
    rng = np.random.default_rng(seed)
    basis = enumerate_partitions(n, d)
    out = []
    while len(out) < count:
        q = rng.dirichlet(np.ones(len(basis)))
        rho = symmetric_state(q, d, n, projectors=projectors)
        ok, _ = fppt_check(rho, d, n)
        if ok:
            out.append(q)
    return out


# ---------------------------------------------------------------------------
# Seven-qubit consistency
# ---------------------------------------------------------------------------

def seven_qubit_consistency(samples: int = 10_000, seed: int = 0,
                            cache_dir: str | None = "./cache") -> dict:
    """Random-product-state sweep of the shifted seven-qubit witness.

    Checks tr(W' rho) >= -1e-6 with W' = 196 Pi_(7) - (1 - a) Pi_(4,3),
    a = 24/C(33,5), on [5|1|1]- and [3|3|1]-structured product states.  This
    is a necessary-condition consistency sweep, not a derivation of a.
    """
    d, n = 2, 7
    projectors = tensorops.all_projectors(d, n, cache_dir=cache_dir)
    sup = dict(projectors.supported)
    alpha = 24 / comb(33, 5)
    wmat = 14**2 * sup[(7,)] + (alpha - 1.0) * sup[(4, 3)]
    report = {"alpha": alpha, "samples": samples, "seed": seed, "structures": {}}
    for structure in ((5, 1, 1), (3, 3, 1)):
        rng = np.random.default_rng([seed, structure[0]])
        worst = np.inf
        violations = 0
        batch = 500
        done = 0
        while done < samples:
            b = min(batch, samples - done)
            kets = np.empty((b, 2**n), dtype=np.complex128)
            for i in range(b):
                kets[i] = random_product_state(structure, d, rng).assemble()
            vals = np.einsum("bi,ij,bj->b", kets.conj(), wmat, kets).real
            worst = min(worst, float(vals.min()))
            violations += int((vals < -1e-6).sum())
            done += b
        report["structures"]["|".join(map(str, structure))] = {
            "worst": worst,
            "violations": violations,
        }
    report["violations"] = sum(v["violations"] for v in report["structures"].values())
    return report
