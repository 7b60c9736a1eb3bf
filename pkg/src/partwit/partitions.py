"""Integer partitions, symmetric-group characters, and Young-diagram moves.

Everything here is exact integer combinatorics.  Partitions are plain tuples
of non-increasing positive ints; padded forms (explicit trailing zeros up to
a length bound) appear only at the interlacing/corner interfaces that need
them.  The canonical ordering used by every partition-indexed vector in the
package is lexicographically decreasing, as produced by
:func:`enumerate_partitions`.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial


Partition = tuple[int, ...]


def is_partition(parts) -> bool:
    """True when ``parts`` is non-increasing with strictly positive entries."""
    return all(p >= 1 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1)
    )


def check_partition(parts, n: int | None = None) -> Partition:
    lam = tuple(int(p) for p in parts)
    if not is_partition(lam):
        raise ValueError(f"not a partition: {parts!r}")
    if n is not None and sum(lam) != n:
        raise ValueError(f"{lam} is not a partition of {n}")
    return lam


def strip_zeros(parts) -> Partition:
    return tuple(int(p) for p in parts if p > 0)


def pad(lam, d: int) -> Partition:
    """Pad with trailing zeros to exactly ``d`` entries."""
    lam = tuple(lam)
    if len(lam) > d:
        raise ValueError(f"partition {lam} longer than d={d}")
    return lam + (0,) * (d - len(lam))


def enumerate_partitions(n: int, d: int) -> list[Partition]:
    """All partitions of ``n`` with at most ``d`` parts, lexicographically decreasing.

    This order is the canonical index for every partition-indexed vector
    (witness coefficients, outcome distributions, projector sets).
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")

    def gen(remaining, max_part, slots):
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(remaining, max_part), 0, -1):
            for rest in gen(remaining - first, first, slots - 1):
                yield (first,) + rest

    return list(gen(n, n, d))


def conjugate(lam) -> Partition:
    lam = tuple(lam)
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def hook_dimension(lam) -> int:
    """Number of standard Young tableaux of shape ``lam`` (hook-length formula)."""
    lam = check_partition(lam)
    n = sum(lam)
    conj = conjugate(lam)
    denom = 1
    for i, row in enumerate(lam):
        for j in range(row):
            denom *= row - j + conj[j] - i - 1
    return factorial(n) // denom


def weyl_dimension(lam, d: int) -> int:
    """Dimension of the unitary-group irrep labelled by ``lam`` on C^d.

    Equals the number of semistandard Young tableaux of shape ``lam`` with
    entries in {1..d}.
    """
    lam = check_partition(lam)
    if len(lam) > d:
        raise ValueError(f"partition {lam} needs more than d={d} rows")
    padded = pad(lam, d)
    a = [padded[i] - i for i in range(d)]
    num, den = 1, 1
    for i in range(d):
        for j in range(i + 1, d):
            num *= a[i] - a[j]
            den *= j - i
    return num // den


def cycle_type(perm) -> Partition:
    """Cycle type of a permutation given as 0-based one-line images."""
    n = len(perm)
    seen = [False] * n
    cycles = []
    for i in range(n):
        if not seen[i]:
            length, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            cycles.append(length)
    return tuple(sorted(cycles, reverse=True))


def class_size(cls) -> int:
    """Size of the conjugacy class with the given cycle type."""
    cls = check_partition(cls)
    n = sum(cls)
    counts: dict[int, int] = {}
    for c in cls:
        counts[c] = counts.get(c, 0) + 1
    denom = 1
    for length, mult in counts.items():
        denom *= length**mult * factorial(mult)
    return factorial(n) // denom


@lru_cache(maxsize=None)
def _character(lam: Partition, cls: Partition) -> int:
    # Murnaghan-Nakayama on first-column hook lengths (beta numbers):
    # removing a border strip of length t maps beta -> beta - t, sign
    # (-1)^{#betas strictly inside the jump}.
    if not lam:
        return 1
    t, rest = cls[0], cls[1:]
    length = len(lam)
    beta = [lam[i] + length - 1 - i for i in range(length)]
    beta_set = set(beta)
    total = 0
    for b in beta:
        low = b - t
        if low < 0 or low in beta_set:
            continue
        height = sum(1 for x in beta if low < x < b)
        new_beta = sorted((x for x in beta if x != b), reverse=True)
        new_beta.append(low)
        new_beta.sort(reverse=True)
        m = len(new_beta)
        mu = strip_zeros(new_beta[i] - (m - 1 - i) for i in range(m))
        total += (-1) ** height * _character(mu, rest)
    return total


def character(lam, cls) -> int:
    """Exact symmetric-group character chi_lam at the conjugacy class ``cls``."""
    lam = check_partition(lam)
    cls = check_partition(cls)
    if sum(lam) != sum(cls):
        raise ValueError(f"{lam} and {cls} are partitions of different integers")
    return _character(lam, cls)


def addable_corners(mu, d: int) -> list[tuple[int, Partition]]:
    """Rows (1-based) where a box can be added to ``mu`` keeping length <= d.

    Returns ``(k, mu + e_k)`` pairs in increasing ``k``.
    """
    mu = check_partition(mu)
    if len(mu) > d:
        raise ValueError(f"partition {mu} longer than d={d}")
    padded = pad(mu, d)
    out = []
    for k in range(1, d + 1):
        above = padded[k - 2] if k >= 2 else None
        if above is not None and padded[k - 1] + 1 > above:
            continue
        out.append((k, strip_zeros(padded[: k - 1] + (padded[k - 1] + 1,) + padded[k:])))
    return out


def removable_corners(lam) -> list[tuple[int, Partition]]:
    """Rows (1-based) whose last box can be removed leaving a valid partition."""
    lam = check_partition(lam)
    out = []
    for k in range(1, len(lam) + 1):
        below = lam[k] if k < len(lam) else 0
        if lam[k - 1] - 1 >= below:
            out.append((k, strip_zeros(lam[: k - 1] + (lam[k - 1] - 1,) + lam[k:])))
    return out


def interlacings(mu, d: int) -> list[Partition]:
    """All length-(d-1) integer tuples nu with mu_1 >= nu_1 >= mu_2 >= ... >= mu_d.

    ``mu`` is padded to ``d`` parts; the returned tuples keep explicit zeros.
    """
    padded = pad(tuple(mu), d)
    out: list[Partition] = [()]
    for i in range(d - 1):
        hi, lo = padded[i], padded[i + 1]
        out = [nu + (v,) for nu in out for v in range(hi, lo - 1, -1)]
    return out
