"""Analytic estimates of P(no simple cycle of length <= k) at a random node.

The turbo estimate treats every picture as an independent embedding trial,
with success probability equal to the mean of the upper and lower bounds on
the embedding probability, and multiplies the per-length no-cycle
probabilities over lengths ``4..k``. Products of many near-one factors are
accumulated as sums of ``log1p`` terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, TextIO

from .errors import InvalidParameterError
from .pictures import ldpc_picture_count, picture_count

__all__ = [
    "EmbedBounds",
    "TheoryCurve",
    "VARIANTS",
    "embed_prob_bounds",
    "prob_no_cycle_exact_len",
    "prob_no_cycle_leq",
    "prob_no_cycle_leq_closed",
    "k_half",
    "prob_no_cycle_exact_len_with_u",
    "prob_no_cycle_leq_with_u",
    "ldpc_embed_prob",
    "ldpc_prob_no_cycle_leq",
    "theory_curve",
    "write_theory_csv",
    "read_theory_csv",
]

VARIANTS = ("turbo", "turbo-with-u", "turbo-closed-form", "ldpc")


@dataclass(frozen=True)
class EmbedBounds:
    lower: float
    upper: float

    @property
    def mean(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def ratio(self) -> float:
        return self.upper / self.lower if self.lower > 0 else math.inf


def _clamped(x: float) -> float:
    return x if x > 0.0 else 0.0


def embed_prob_bounds(n: int, k: int, m: int) -> EmbedBounds:
    """Bounds on the chance that one picture (length ``k``, ``m`` cross edges) embeds at a random node.

    Both bounds share the closing factor ``1/(n - m/2)``; the product index
    ``s`` runs over ``0..m/2`` inclusive. A factor that would go negative
    (only possible when ``n`` is barely larger than ``k``) clamps that
    bound to 0.
    """
    if not n > k:
        raise InvalidParameterError(f"need n > k, got n={n}, k={k}")
    if m <= 0 or m % 2 or 2 * m > k:
        raise InvalidParameterError(f"need even m > 0 with 2m <= k, got k={k}, m={m}")
    slack = k - 2 * m
    lower = upper = 1.0 / (n - m / 2)
    for s in range(m // 2 + 1):
        lo = _clamped(1 - (s + slack) / (n - s)) * _clamped(1 - (s + 1) / (n - (2 * s + slack)))
        hi = _clamped(1 - s / (n - s)) * _clamped(1 - 1 / (n - 2 * s))
        lower *= lo * lo
        upper *= hi * hi
    return EmbedBounds(min(lower, 1.0), min(upper, 1.0))


def _log_no_embed(p: float, count: int) -> float:
    if p >= 1.0:
        return -math.inf
    return count * math.log1p(-p)


def _check_turbo(n: int, k: int, k_min: int = 4) -> None:
    if k < k_min:
        raise InvalidParameterError(f"need k >= {k_min}, got {k}")
    if not n > k:
        raise InvalidParameterError(f"estimator needs n > k, got n={n}, k={k}")


def _log_exact_len(n: int, k: int) -> float:
    return sum(
        _log_no_embed(embed_prob_bounds(n, k, m).mean, picture_count(k, m))
        for m in range(2, k // 2 + 1, 2)
    )


def prob_no_cycle_exact_len(n: int, k: int) -> float:
    """Independence estimate of P(no simple cycle of length exactly ``k``)."""
    _check_turbo(n, k)
    return math.exp(_log_exact_len(n, k))


def prob_no_cycle_leq(n: int, k: int) -> float:
    """Independence estimate of P(no simple cycle of length ``<= k``), random permuter."""
    _check_turbo(n, k)
    return math.exp(sum(_log_exact_len(n, i) for i in range(4, k + 1)))


def prob_no_cycle_leq_closed(n: int, k: int) -> float:
    """Large-``n`` closed form ``exp(-(2**(k-1) - 4) / n)``."""
    if k < 4 or n < 1:
        raise InvalidParameterError(f"need k >= 4 and n >= 1, got n={n}, k={k}")
    return math.exp(-(2.0 ** (k - 1) - 4.0) / n)


def k_half(n: float) -> float:
    """Length at which the closed form crosses 0.5: ``log2(n ln 2 + 4) + 1``."""
    if n < 1:
        raise InvalidParameterError(f"need n >= 1, got {n}")
    return math.log2(n * math.log(2) + 4) + 1


def _log_exact_len_with_u(n: int, k: int) -> float:
    # m counts cross edges at length 2 each; the underlying turbo cycle has
    # m/2 cross edges and k - m/2 edges
    total = 0.0
    for m in range(4, (2 * k) // 3 + 1, 4):
        k_turbo, m_turbo = k - m // 2, m // 2
        total += _log_no_embed(embed_prob_bounds(n, k_turbo, m_turbo).mean, picture_count(k_turbo, m_turbo))
    return total


def prob_no_cycle_exact_len_with_u(n: int, k: int) -> float:
    _check_turbo(n, k)
    return math.exp(_log_exact_len_with_u(n, k))


def prob_no_cycle_leq_with_u(n: int, k: int) -> float:
    """As :func:`prob_no_cycle_leq`, in the decoding graph that keeps the information nodes.

    Each cross edge then has length 2, so the shortest cycle has length 6 and
    the value is exactly 1 for ``k < 6``.
    """
    _check_turbo(n, k)
    return math.exp(sum(_log_exact_len_with_u(n, i) for i in range(6, k + 1)))


def ldpc_embed_prob(n: int, w: int, d_v: int, d_c: int, m: int) -> float:
    """Probability that one LDPC picture of length ``2m`` embeds at a random node."""
    if m < 2 or not n > m or not w > m:
        raise InvalidParameterError(f"need m >= 2, n > m, w > m; got n={n}, w={w}, m={m}")
    if d_v < 1 or d_c < 1:
        raise InvalidParameterError("degrees must be positive")
    p = (1 - 1 / d_c) ** m * (1 - 1 / d_v) ** (m - 1) / (n - 1)
    for i in range(m - 1):
        p *= (1 - i / (n - 1)) * (1 - i / (w - 1))
    return p


def _ldpc_log_exact_len(n: int, w: int, d_v: int, d_c: int, i: int) -> float:
    m = i // 2
    count = ldpc_picture_count(m, d_v, d_c)
    return float(count) * math.log1p(-ldpc_embed_prob(n, w, d_v, d_c, m))


def ldpc_prob_no_cycle_leq(n: int, d_v: int, d_c: int, k: int) -> float:
    """Independence estimate of P(no cycle of length ``<= k``) in a regular LDPC graph.

    Only even lengths occur, so odd ``k`` gives the value at ``k - 1``.
    """
    if k < 4:
        raise InvalidParameterError(f"need k >= 4, got {k}")
    if min(n, d_v, d_c) < 1 or (n * d_v) % d_c:
        raise InvalidParameterError(f"d_c={d_c} must divide n*d_v={n * d_v}")
    w = n * d_v // d_c
    return math.exp(sum(_ldpc_log_exact_len(n, w, d_v, d_c, i) for i in range(4, k + 1, 2)))


@dataclass
class TheoryCurve:
    """P(no cycle of length <= k) for each ``k`` in ``k_min..k_max``."""

    n: int
    variant: str
    values: dict[int, float] = field(default_factory=dict)
    d_v: int | None = None
    d_c: int | None = None

    @property
    def k_range(self) -> range:
        ks = sorted(self.values)
        return range(ks[0], ks[-1] + 1)


def theory_curve(variant: str, n: int, k_max: int, k_min: int = 4,
                 d_v: int | None = None, d_c: int | None = None) -> TheoryCurve:
    if variant not in VARIANTS:
        raise InvalidParameterError(f"unknown variant {variant!r}; choose from {', '.join(VARIANTS)}")
    if k_min < 4 or k_max < k_min:
        raise InvalidParameterError(f"need 4 <= k_min <= k_max, got {k_min}..{k_max}")
    fn: Callable[[int], float]
    if variant == "turbo":
        fn = lambda k: prob_no_cycle_leq(n, k)  # noqa: E731
    elif variant == "turbo-with-u":
        fn = lambda k: prob_no_cycle_leq_with_u(n, k)  # noqa: E731
    elif variant == "turbo-closed-form":
        fn = lambda k: prob_no_cycle_leq_closed(n, k)  # noqa: E731
    else:
        if d_v is None or d_c is None:
            raise InvalidParameterError("the ldpc variant needs d_v and d_c")
        fn = lambda k: ldpc_prob_no_cycle_leq(n, d_v, d_c, k)  # noqa: E731
    values = {k: fn(k) for k in range(k_min, k_max + 1)}
    return TheoryCurve(n, variant, values, d_v if variant == "ldpc" else None,
                       d_c if variant == "ldpc" else None)


def write_theory_csv(curve: TheoryCurve, fh: TextIO) -> None:
    """CSV ``k,p_no_cycle_leq_k,variant,n[,dv,dc]`` with probabilities to 6 decimals."""
    ldpc = curve.variant == "ldpc"
    fh.write("k,p_no_cycle_leq_k,variant,n" + (",dv,dc" if ldpc else "") + "\n")
    for k, p in sorted(curve.values.items()):
        row = f"{k},{p:.6f},{curve.variant},{curve.n}"
        if ldpc:
            row += f",{curve.d_v},{curve.d_c}"
        fh.write(row + "\n")


def read_theory_csv(fh: TextIO) -> TheoryCurve:
    lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("k,p_no_cycle_leq_k,variant,n"):
        raise InvalidParameterError("not a theory-curve CSV")
    values: dict[int, float] = {}
    variant, n, d_v, d_c = "", 0, None, None
    try:
        for line in lines[1:]:
            cells = line.split(",")
            values[int(cells[0])] = float(cells[1])
            variant, n = cells[2], int(cells[3])
            if len(cells) >= 6:
                d_v, d_c = int(cells[4]), int(cells[5])
    except (IndexError, ValueError):
        raise InvalidParameterError(f"malformed theory-curve row: {line!r}") from None
    if not values:
        raise InvalidParameterError("theory-curve CSV has no rows")
    return TheoryCurve(n, variant, values, d_v, d_c)
