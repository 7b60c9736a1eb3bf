"""Dense operator algebra on (C^d)^(x n) and the persistent Young-projector cache.

Operators are plain complex128 numpy arrays of shape (d^n, d^n), row-major,
with site 1 as the most significant tensor factor.  Projectors are built from
the character sum over S_n with permutations applied as index maps, so the
cost is O(n! d^n) instead of O(n! d^{2n}).
"""

from __future__ import annotations

import logging
import os
import struct
import tempfile
from dataclasses import dataclass
from itertools import permutations as _permutations
from math import factorial

import numpy as np

from .partitions import (
    Partition,
    character,
    cycle_type,
    enumerate_partitions,
    hook_dimension,
    weyl_dimension,
)

log = logging.getLogger(__name__)

SIZE_BUDGET = 16384          # largest allowed d^n
HERMITIAN_TOL = 1e-12        # max-entry tolerance for the Hermitian flag
PSD_EIG_TOL = -1e-9          # ">= 0" threshold for eigenvalue tests
_DENSE_EIG_LIMIT = 2048      # above this, min_eigenvalue tries ARPACK first


def check_budget(d: int, n: int) -> int:
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    dim = d**n
    if dim > SIZE_BUDGET:
        raise ValueError(f"d^n = {dim} exceeds the size budget {SIZE_BUDGET}")
    return dim


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    scale = max(1.0, np.abs(a).max())
    return np.abs(a - a.conj().T).max() <= tol * scale


def _digit_table(d: int, n: int) -> np.ndarray:
    """Array of shape (n, d^n): row k holds the site-(k+1) digit of each index."""
    return np.array(np.unravel_index(np.arange(d**n), (d,) * n))


def permuted_index(pi, d: int, n: int) -> np.ndarray:
    """Index map J with eta(pi) e_I = e_{J[I]} for the 0-based one-line ``pi``."""
    digits = _digit_table(d, n)
    inv = np.argsort(np.asarray(pi))
    return np.ravel_multi_index(tuple(digits[inv]), (d,) * n)


def permutation_operator(pi, d: int) -> np.ndarray:
    """0/1 matrix sending |i_1 ... i_n> to |i_{pi^-1(1)} ... i_{pi^-1(n)}>."""
    n = len(pi)
    dim = check_budget(d, n)
    out = np.zeros((dim, dim), dtype=np.complex128)
    out[permuted_index(pi, d, n), np.arange(dim)] = 1.0
    return out


def _class_characters(lam: Partition, n: int) -> dict[Partition, int]:
    return {cls: character(lam, cls) for cls in enumerate_partitions(n, n)}


def young_projector(lam, d: int, n: int) -> np.ndarray:
    """Young projector onto the ``lam`` isotypic component of (C^d)^(x n).

    Built as (d_lam/n!) sum_pi chi_lam(pi) eta_d(pi).  Zero matrix when
    ``lam`` has more than ``d`` rows.
    """
    lam = tuple(lam)
    if sum(lam) != n:
        raise ValueError(f"{lam} is not a partition of {n}")
    dim = check_budget(d, n)
    out = np.zeros((dim, dim))
    if len(lam) > d:
        return out.astype(np.complex128)
    chi = _class_characters(lam, n)
    digits = _digit_table(d, n)
    cols = np.arange(dim)
    shape = (d,) * n
    for pi in _permutations(range(n)):
        c = chi[cycle_type(pi)]
        if c == 0:
            continue
        rows = np.ravel_multi_index(tuple(digits[np.argsort(pi)]), shape)
        out[rows, cols] += c
    out *= hook_dimension(lam) / factorial(n)
    return out.astype(np.complex128)


def compressed_projector(lam, d: int, n: int, level: int | None = None) -> np.ndarray:
    """X^lam = (<level| x I) Pi_lam (|level> x I) on d^{n-1} dims, built directly.

    Avoids materializing Pi_lam, which matters at the top of the size budget.
    ``level`` defaults to the last basis state of site 1.
    """
    lam = tuple(lam)
    if sum(lam) != n or n < 2:
        raise ValueError(f"need a partition of n >= 2 sites, got {lam} for n={n}")
    check_budget(d, n)
    if level is None:
        level = d - 1
    dim = d ** (n - 1)
    out = np.zeros((dim, dim))
    if len(lam) > d:
        return out
    chi = _class_characters(lam, n)
    digits = np.vstack(
        [np.full(dim, level, dtype=np.intp), _digit_table(d, n - 1)]
    )
    cols = np.arange(dim)
    shape = (d,) * (n - 1)
    for pi in _permutations(range(n)):
        c = chi[cycle_type(pi)]
        if c == 0:
            continue
        moved = digits[np.argsort(pi)]
        mask = moved[0] == level
        rows = np.ravel_multi_index(tuple(moved[1:, mask]), shape)
        out[rows, cols[mask]] += c
    out *= hook_dimension(lam) / factorial(n)
    return out


def partial_transpose(a: np.ndarray, d: int, n: int, sites) -> np.ndarray:
    """Transpose the listed tensor factors (sites are 1-based)."""
    sites = sorted(set(int(s) for s in sites))
    if sites and (sites[0] < 1 or sites[-1] > n):
        raise ValueError(f"sites {sites} outside 1..{n}")
    axes = list(range(2 * n))
    for s in sites:
        axes[s - 1], axes[n + s - 1] = axes[n + s - 1], axes[s - 1]
    return a.reshape((d,) * (2 * n)).transpose(axes).reshape(a.shape)


def compress_first_site(a: np.ndarray, d: int, n: int, level: int | None = None) -> np.ndarray:
    """(<level| x I) A (|level> x I): the d^{n-1}-dim compression on site 1."""
    if n < 2:
        raise ValueError("compression needs n >= 2 sites")
    if level is None:
        level = d - 1
    dim = d ** (n - 1)
    return a[level * dim:(level + 1) * dim, level * dim:(level + 1) * dim]


def eigenvalues(a: np.ndarray) -> np.ndarray:
    """Real spectrum, ascending.  Rejects non-Hermitian input."""
    if not is_hermitian(a):
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(a)


def min_eigenvalue(a: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix.

    Large matrices go through ARPACK with a residual check and a dense
    fallback; the returned value always satisfies ||Av - xv|| <= 1e-8 ||A||.
    """
    if not is_hermitian(a):
        raise ValueError("matrix is not Hermitian")
    if a.shape[0] > _DENSE_EIG_LIMIT:
        from scipy.sparse.linalg import eigsh

        try:
            vals, vecs = eigsh(a, k=1, which="SA", maxiter=5000)
            v = vecs[:, 0]
            resid = np.linalg.norm(a @ v - vals[0] * v)
            if resid <= 1e-8 * np.linalg.norm(a, ord="fro"):
                return float(vals[0])
        except Exception:  # pragma: no cover - ARPACK hiccups fall through
            pass
    return float(np.linalg.eigvalsh(a)[0])


# ---------------------------------------------------------------------------
# Projector sets and the on-disk cache
# ---------------------------------------------------------------------------

_MAGIC = b"YPRJ1"

_CRC64_POLY = 0xC96C5795D7870F42  # reflected ECMA-182


def _crc64_table():
    table = []
    for byte in range(256):
        crc = byte
        for _ in range(8):
            crc = (crc >> 1) ^ _CRC64_POLY if crc & 1 else crc >> 1
        table.append(crc)
    return table


_CRC64_TABLE = _crc64_table()


def crc64(data: bytes) -> int:
    crc = 0xFFFFFFFFFFFFFFFF
    for byte in data:
        crc = _CRC64_TABLE[(crc ^ byte) & 0xFF] ^ (crc >> 8)
    return crc ^ 0xFFFFFFFFFFFFFFFF


@dataclass
class ProjectorSet:
    """All Young projectors for one (d, n), in canonical partition order.

    ``partitions`` lists every partition of n; entries with more than d rows
    carry zero matrices (recorded so cache files are self-describing).
    """

    d: int
    n: int
    partitions: list[Partition]
    matrices: list[np.ndarray]

    @property
    def supported(self) -> list[tuple[Partition, np.ndarray]]:
        """(partition, projector) pairs for partitions with at most d rows."""
        return [
            (lam, mat)
            for lam, mat in zip(self.partitions, self.matrices)
            if len(lam) <= self.d
        ]

    def matrix(self, lam) -> np.ndarray:
        return self.matrices[self.partitions.index(tuple(lam))]

    def traces(self) -> dict[Partition, float]:
        return {lam: float(mat.trace().real) for lam, mat in zip(self.partitions, self.matrices)}

    def validate(self, tol: float = 1e-10) -> dict[str, float]:
        """Max deviations for orthogonality, idempotence, completeness, traces."""
        sup = self.supported
        dim = self.d**self.n
        total = sum(mat for _, mat in sup)
        completeness = float(np.abs(total - np.eye(dim)).max())
        idem = max(float(np.abs(m @ m - m).max()) for _, m in sup)
        ortho = 0.0
        for i in range(len(sup)):
            for j in range(i + 1, len(sup)):
                ortho = max(ortho, float(np.abs(sup[i][1] @ sup[j][1]).max()))
        trace_dev = max(
            abs(float(m.trace().real) - hook_dimension(lam) * weyl_dimension(lam, self.d))
            for lam, m in sup
        )
        report = {
            "orthogonality": ortho,
            "idempotence": idem,
            "completeness": completeness,
            "trace": trace_dev,
        }
        worst = max(ortho, idem, completeness)
        if worst > tol or trace_dev > 1e-8:
            raise ValueError(f"projector set invariants violated: {report}")
        return report


def compute_projectors(d: int, n: int) -> ProjectorSet:
    parts = enumerate_partitions(n, n)
    mats = [young_projector(lam, d, n) for lam in parts]
    return ProjectorSet(d=d, n=n, partitions=parts, matrices=mats)


def cache_path(cache_dir: str, d: int, n: int) -> str:
    return os.path.join(cache_dir, f"proj_d{d}_n{n}.bin")


def save_projectors(ps: ProjectorSet, path: str) -> None:
    """Write atomically (temp file + rename) under an exclusive lock."""
    payload = bytearray()
    payload += _MAGIC
    payload += struct.pack("<III", ps.d, ps.n, len(ps.partitions))
    for lam in ps.partitions:
        payload += struct.pack("<I", len(lam))
        payload += struct.pack(f"<{len(lam)}I", *lam)
    for mat in ps.matrices:
        payload += np.ascontiguousarray(mat, dtype=np.complex128).tobytes()
    payload += struct.pack("<Q", crc64(bytes(payload)))

    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    lock_path = path + ".lock"
    lock_fd = os.open(lock_path, os.O_CREAT | os.O_RDWR)
    try:
        import fcntl

        fcntl.flock(lock_fd, fcntl.LOCK_EX)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    finally:
        os.close(lock_fd)


def load_projectors(path: str, d: int, n: int) -> ProjectorSet | None:
    """Load and checksum-verify a cache file; None when missing or corrupt."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError:
        return None
    if len(blob) < len(_MAGIC) + 12 + 8 or blob[: len(_MAGIC)] != _MAGIC:
        log.warning("projector cache %s: bad header, recomputing", path)
        return None
    (stored_crc,) = struct.unpack("<Q", blob[-8:])
    if crc64(blob[:-8]) != stored_crc:
        log.warning("projector cache %s: checksum mismatch, recomputing", path)
        return None
    off = len(_MAGIC)
    fd, fn, count = struct.unpack_from("<III", blob, off)
    off += 12
    if (fd, fn) != (d, n):
        return None
    parts: list[Partition] = []
    for _ in range(count):
        (length,) = struct.unpack_from("<I", blob, off)
        off += 4
        parts.append(struct.unpack_from(f"<{length}I", blob, off))
        off += 4 * length
    dim = d**n
    mats = []
    span = dim * dim * 16
    for _ in range(count):
        mats.append(
            np.frombuffer(blob, dtype=np.complex128, count=dim * dim, offset=off)
            .reshape(dim, dim)
            .copy()
        )
        off += span
    return ProjectorSet(d=d, n=n, partitions=parts, matrices=mats)


def all_projectors(d: int, n: int, cache_dir: str | None = "./cache",
                   policy: str = "use") -> ProjectorSet:
    """Projector set for (d, n), served from the file cache when valid.

    ``policy``: "use" reads a valid cache entry or computes and writes one;
    "refresh" always recomputes and overwrites; "off" never touches disk.
    """
    check_budget(d, n)
    if policy not in ("use", "refresh", "off"):
        raise ValueError(f"unknown cache policy {policy!r}")
    if cache_dir is None or policy == "off":
        return compute_projectors(d, n)
    path = cache_path(cache_dir, d, n)
    if policy == "use":
        ps = load_projectors(path, d, n)
        if ps is not None:
            log.info("projector cache hit: %s", path)
            return ps
    ps = compute_projectors(d, n)
    save_projectors(ps, path)
    log.info("projector cache written: %s", path)
    return ps
