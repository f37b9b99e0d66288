"""Exact counting of cycle templates ("pictures").

A turbo picture of length ``k`` is a cyclic sequence of edge labels read from
a distinguished vertex: ``X`` for a cross edge, ``F``/``B`` for a chain edge
walked forward/backward. It has an even, positive number ``m`` of ``X``
edges, no two ``X`` edges adjacent (cyclically), and every maximal run of
chain edges walks a single direction. A picture and its reversal describe
the same cycles, so only one of the pair is counted.

All arithmetic is on Python integers. Binomials with an argument out of range
evaluate to 0, which makes every closed form total on its domain.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb

from .errors import InvalidParameterError

__all__ = [
    "binomial",
    "path_choices",
    "cycle_choices",
    "picture_count",
    "total_pictures",
    "Picture",
    "enumerate_pictures",
    "ldpc_picture_count",
    "NonIntegralCountWarning",
]

K_LIMIT = 64
ORACLE_K_RANGE = (4, 16)


def binomial(x: int, y: int) -> int:
    if y < 0 or x < 0 or y > x:
        return 0
    return comb(x, y)


def path_choices(a: int, b: int) -> int:
    """Ways to pick ``b`` pairwise non-adjacent edges on a path of ``a`` edges."""
    return binomial(a - b + 1, b)


def cycle_choices(a: int, b: int) -> int:
    """Ways to pick ``b`` pairwise non-adjacent edges on an ``a``-cycle with a distinguished vertex."""
    return binomial(a - b - 1, b - 1) + binomial(a - b, b)


def _check_km(k: int, m: int) -> None:
    if k > K_LIMIT:
        raise InvalidParameterError(f"k={k} exceeds the supported limit {K_LIMIT}")
    if m <= 0 or m % 2 or 2 * m > k:
        raise InvalidParameterError(f"need even m > 0 with 2m <= k, got k={k}, m={m}")


def picture_count(k: int, m: int) -> int:
    """Number of distinct pictures of length ``k`` with ``m`` cross edges.

    Equals ``2**(m-1) * k/(k-m) * C(k-m, m)``; evaluated as
    ``2**(m-1) * cycle_choices(k, m)`` so it stays in integers.
    """
    _check_km(k, m)
    return 2 ** (m - 1) * cycle_choices(k, m)


def total_pictures(k: int) -> int:
    """All pictures of length ``k``, summed over every admissible ``m``; roughly ``2**(k-2)``."""
    if k < 4:
        raise InvalidParameterError(f"pictures need k >= 4, got {k}")
    return sum(picture_count(k, m) for m in range(2, k // 2 + 1, 2))


@dataclass(frozen=True)
class Picture:
    edges: tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.edges)

    @property
    def m(self) -> int:
        return self.edges.count("X")

    def reversed(self) -> "Picture":
        swap = {"F": "B", "B": "F", "X": "X"}
        return Picture(tuple(swap[e] for e in reversed(self.edges)))

    def is_valid(self) -> bool:
        e, k = self.edges, len(self.edges)
        if k < 4 or self.m == 0 or self.m % 2 or any(x not in "FBX" for x in e):
            return False
        for i in range(k):
            a, b = e[i], e[(i + 1) % k]
            if a == "X" and b == "X":
                return False
            if a != "X" and b != "X" and a != b:
                return False
        return True

    def __str__(self) -> str:
        return "".join(self.edges)


def enumerate_pictures(k: int) -> list[Picture]:
    """Every picture of length ``k``, one per reversal pair, built constructively.

    Cross-edge positions are drawn from all ``m``-subsets of the ``k`` slots;
    each run of chain edges then gets a direction. This is an enumeration
    oracle for the closed forms above, limited to ``4 <= k <= 16``.
    """
    lo, hi = ORACLE_K_RANGE
    if not lo <= k <= hi:
        raise InvalidParameterError(f"enumeration supports {lo} <= k <= {hi}, got {k}")
    seen: set[tuple[str, ...]] = set()
    out: list[Picture] = []
    for m in range(2, k // 2 + 1, 2):
        for cross in combinations(range(k), m):
            if any((c + 1) % k in cross for c in cross):
                continue
            # runs of chain edges between consecutive cross edges
            runs = [[j % k for j in range(a + 1, a + (b - a) % k)]
                    for a, b in zip(cross, cross[1:] + cross[:1])]
            if any(not run for run in runs):
                continue
            for dirs in product("FB", repeat=m):
                labels = ["X"] * k
                for run, d in zip(runs, dirs):
                    for j in run:
                        labels[j] = d
                pic = Picture(tuple(labels))
                key = min(pic.edges, pic.reversed().edges)
                if key not in seen:
                    seen.add(key)
                    out.append(Picture(key))
    return out


class NonIntegralCountWarning(UserWarning):
    """An LDPC picture count came out fractional."""


def ldpc_picture_count(m: int, d_v: int, d_c: int) -> int | Fraction:
    """Pictures of length ``2m`` in a ``(d_v, d_c)`` LDPC graph: ``(d_c*d_v)**m / 2``.

    Returned as an exact :class:`~fractions.Fraction` with a
    :class:`NonIntegralCountWarning` when ``(d_c*d_v)**m`` is odd.
    """
    if m < 2:
        raise InvalidParameterError(f"LDPC pictures need m >= 2, got {m}")
    value = Fraction(d_c**m * d_v**m, 2)
    if value.denominator != 1:
        warnings.warn(
            f"LDPC picture count for m={m}, d_v={d_v}, d_c={d_c} is not an integer ({value})",
            NonIntegralCountWarning,
            stacklevel=2,
        )
        return value
    return int(value)
