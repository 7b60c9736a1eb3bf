"""Immanants of PSD matrices and their dictionary with symmetric witnesses.

The immanant imm_lam(G) = sum_pi chi_lam(pi) prod_i G_{i,pi(i)} generalizes
the determinant (lam = 1^n) and permanent (lam = (n)).  For Gram matrices it
equals (n!/d_lam) tr(Pi_lam rho_v) with rho_v the product state of the Gram
vectors, which converts inequalities between immanants into entanglement
witnesses and back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations as _permutations
from math import factorial

import numpy as np

from .partitions import (
    Partition,
    character,
    cycle_type,
    enumerate_partitions,
    hook_dimension,
)
from . import tensorops
from .witness import Witness

MAX_DIRECT_N = 8  # direct S_n enumeration bound


@lru_cache(maxsize=None)
def _sn_tables(n: int):
    """Permutation index array (n!, n) and per-partition character vectors."""
    perms = np.array(list(_permutations(range(n))), dtype=np.intp)
    chi = {}
    for lam in enumerate_partitions(n, n):
        chi[lam] = np.array([character(lam, cycle_type(tuple(p))) for p in perms], dtype=float)
    return perms, chi


def _perm_products(gs: np.ndarray) -> np.ndarray:
    """prod_i G[i, pi(i)] for a batch of matrices; shape (batch, n!)."""
    n = gs.shape[-1]
    perms, _ = _sn_tables(n)
    rows = np.arange(n)[None, :]
    return gs[:, rows, perms].prod(axis=2)


def immanant(lam, g: np.ndarray) -> complex:
    """imm_lam(G) by direct enumeration of S_n (n <= 8)."""
    g = np.asarray(g)
    n = g.shape[0]
    if g.shape != (n, n):
        raise ValueError("G must be square")
    if n > MAX_DIRECT_N:
        raise ValueError(f"direct enumeration capped at n = {MAX_DIRECT_N}")
    _, chi = _sn_tables(n)
    lam = tuple(lam)
    if lam not in chi:
        raise ValueError(f"{lam} is not a partition of {n}")
    prods = _perm_products(g[None, :, :])[0]
    return complex(chi[lam] @ prods)


def immanant_vector(g: np.ndarray) -> dict[Partition, complex]:
    """All immanants of G keyed by partition, canonical order."""
    g = np.asarray(g)
    n = g.shape[0]
    _, chi = _sn_tables(n)
    prods = _perm_products(g[None, :, :])[0]
    return {lam: complex(vec @ prods) for lam, vec in chi.items()}


def immanants_batch(gs: np.ndarray) -> np.ndarray:
    """Immanants for a batch of matrices: shape (batch, #partitions), real part.

    Intended for Hermitian input, where every immanant is real.
    """
    gs = np.asarray(gs)
    n = gs.shape[-1]
    _, chi = _sn_tables(n)
    prods = _perm_products(gs)
    chimat = np.stack([chi[lam] for lam in enumerate_partitions(n, n)], axis=1)
    return (prods @ chimat).real


def random_psd(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return a @ a.conj().T


def gram_vectors(g: np.ndarray, tol: float = 1e-9) -> list[np.ndarray]:
    """Vectors v_i in C^r with <v_i|v_j> = G_ij; r is the numerical rank."""
    g = np.asarray(g, dtype=np.complex128)
    if not tensorops.is_hermitian(g, tol=1e-12):
        raise ValueError("G must be Hermitian")
    vals, vecs = np.linalg.eigh(g)
    scale = max(vals[-1], 1.0)
    if vals[0] < -1e-9 * scale:
        raise ValueError(f"G is not PSD (min eigenvalue {vals[0]})")
    keep = vals > tol * scale
    root = np.sqrt(vals[keep])
    # v_i[k] = sqrt(s_k) conj(U_ik) reproduces <v_i|v_j> = G_ij
    factors = root[:, None] * vecs[:, keep].conj().T
    return [factors[:, i].copy() for i in range(g.shape[0])]


def bridge_identity_check(a: dict[Partition, float], g: np.ndarray,
                          cache_dir: str | None = None) -> float:
    """|sum a_lam imm_lam(G) - sum (n! a_lam / d_lam) tr(Pi_lam rho_v)|.

    rho_v is the (unnormalized) product state of the Gram vectors of G, built
    in local dimension r = rank(G); both sides then scale identically.
    """
    g = np.asarray(g, dtype=np.complex128)
    n = g.shape[0]
    if n > 6:
        raise ValueError("bridge check capped at n = 6")
    vs = gram_vectors(g)
    r = len(vs[0]) if vs else 1
    if r > 4:
        raise ValueError(f"rank {r} exceeds the supported local dimension 4")
    if r == 0:
        r = 1
        vs = [np.zeros(1, dtype=np.complex128) for _ in range(n)]
    imms = immanant_vector(g)
    lhs = sum(a.get(lam, 0.0) * imms[lam].real for lam in imms)
    w = np.array([1.0 + 0j])
    for v in vs:
        w = np.kron(w, v)
    projectors = tensorops.all_projectors(r, n, cache_dir=cache_dir)
    rhs = 0.0
    for lam, mat in projectors.supported:
        c = a.get(lam, 0.0)
        if c != 0.0:
            rhs += factorial(n) * c / hook_dimension(lam) * float((w.conj() @ mat @ w).real)
    # partitions beyond r rows contribute zero on both sides
    return abs(lhs - rhs)


def witness_to_inequality(w: Witness) -> dict[Partition, float]:
    """Coefficients a_lam = c_lam d_lam of the matching immanant inequality."""
    return {lam: c * hook_dimension(lam) for lam, c in w.coeffs.items()}


def inequality_to_witness(a: dict[Partition, float], n: int, d: int) -> Witness:
    """Witness c_lam = a_lam / d_lam whose nonnegativity matches the inequality."""
    coeffs = {tuple(lam): val / hook_dimension(lam) for lam, val in a.items()}
    return Witness(n=n, d=d, coeffs=coeffs)


# --- named inequality families -------------------------------------------------

def _hooks(n: int) -> list[Partition]:
    return [(n - k,) + (1,) * k for k in range(n)]


@dataclass
class Margin:
    inequality: str
    value: float
    scale: float

    @property
    def violated(self) -> bool:
        return self.value < -1e-8 * self.scale


def inequality_suite(g: np.ndarray) -> list[Margin]:
    """Margins of every named immanant inequality applicable to G.

    Hook rule and Schur/permanent orderings at any size up to 6; the
    identity-tight cubic at size 3; the facet and indecomposable-row
    inequalities at size 4.
    """
    g = np.asarray(g)
    n = g.shape[0]
    if n > 6:
        raise ValueError("suite capped at n = 6")
    imms = {lam: v.real for lam, v in immanant_vector(g).items()}
    norm = {lam: imms[lam] / hook_dimension(lam) for lam in imms}
    per, det = imms[(n,)], imms[(1,) * n]
    out = []
    hooks = _hooks(n)
    for top, bot in zip(hooks, hooks[1:]):
        out.append(Margin(
            inequality=f"hook:{top}>={bot}",
            value=norm[top] - norm[bot],
            scale=abs(norm[top]) + abs(norm[bot]),
        ))
    for lam in imms:
        out.append(Margin(f"schur:{lam}", norm[lam] - det, abs(norm[lam]) + abs(det)))
        out.append(Margin(f"permanent-dominance:{lam}", per - norm[lam], abs(per) + abs(norm[lam])))
    if n == 3:
        val = 3 * per - 2 * imms[(2, 1)] + det
        out.append(Margin("cubic-3x3", val, 3 * abs(per) + 2 * abs(imms[(2, 1)]) + abs(det)))
    if n == 4:
        from .tables import FPPT_FACETS_D4, INDECOMPOSABLE_ROWS_D4

        parts = enumerate_partitions(4, 4)
        dims = np.array([hook_dimension(lam) for lam in parts], dtype=float)
        vec = np.array([imms[lam] for lam in parts])
        for name, row in list(FPPT_FACETS_D4.items()) + list(INDECOMPOSABLE_ROWS_D4.items()):
            coeff = np.asarray(row, dtype=float) * dims
            out.append(Margin(f"fourparty:{name}", float(coeff @ vec), float(np.abs(coeff * vec).sum())))
    return out


def fuzz_report(sizes, samples: int, seed: int) -> dict:
    """Randomized sweep of the inequality suite; returns worst margins.

    Matrices are random PSD with mixed rank.  The batched immanant path keeps
    10^4 matrices per size within the time budget.
    """
    results: dict[str, dict] = {}
    for n in sizes:
        rng = np.random.default_rng([seed, n])
        parts = enumerate_partitions(n, n)
        dims = np.array([hook_dimension(lam) for lam in parts], dtype=float)
        idx = {lam: i for i, lam in enumerate(parts)}
        chunk = max(1, 4000 // factorial(n) * 64)
        done = 0
        while done < samples:
            b = min(chunk, samples - done)
            ranks = rng.integers(1, n + 1, size=b)
            gs = np.empty((b, n, n), dtype=np.complex128)
            for i in range(b):
                gs[i] = random_psd(n, int(ranks[i]), rng)
            imm = immanants_batch(gs)
            normed = imm / dims[None, :]
            per = imm[:, idx[(n,)]]
            det = imm[:, idx[(1,) * n]]

            def record(name, vals, scales):
                slot = results.setdefault(name, {"min_margin": np.inf, "violations": 0, "samples": 0})
                slot["min_margin"] = min(slot["min_margin"], float(vals.min()))
                slot["violations"] += int((vals < -1e-8 * scales).sum())
                slot["samples"] += len(vals)

            hooks = _hooks(n)
            for top, bot in zip(hooks, hooks[1:]):
                vals = normed[:, idx[top]] - normed[:, idx[bot]]
                record(f"hook:n={n}:{top}>={bot}", vals,
                       np.abs(normed[:, idx[top]]) + np.abs(normed[:, idx[bot]]))
            for lam in parts:
                record(f"schur:n={n}:{lam}", normed[:, idx[lam]] - det,
                       np.abs(normed[:, idx[lam]]) + np.abs(det))
                record(f"permanent-dominance:n={n}:{lam}", per - normed[:, idx[lam]],
                       np.abs(per) + np.abs(normed[:, idx[lam]]))
            if n == 3:
                vals = 3 * per - 2 * imm[:, idx[(2, 1)]] + det
                record("cubic-3x3", vals,
                       3 * np.abs(per) + 2 * np.abs(imm[:, idx[(2, 1)]]) + np.abs(det))
            if n == 4:
                from .tables import FPPT_FACETS_D4, INDECOMPOSABLE_ROWS_D4

                for name, row in list(FPPT_FACETS_D4.items()) + list(INDECOMPOSABLE_ROWS_D4.items()):
                    coeff = np.asarray(row, dtype=float) * dims
                    vals = imm @ coeff
                    record(f"fourparty:{name}", vals, np.abs(imm) @ np.abs(coeff))
            done += b
    total_viol = sum(slot["violations"] for slot in results.values())
    return {"seed": seed, "per_inequality": results, "violations": total_viol}
