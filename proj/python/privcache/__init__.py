"""Demand-private multi-demand coded caching: scheme simulation, privacy
audits and memory-rate tradeoff bounds, backed by a C++ core."""

import json
from fractions import Fraction

from . import _core
from ._core import BudgetExceeded

__all__ = [
    "BudgetExceeded",
    "binomial",
    "simulate",
    "ptilde_law",
    "ptilde_invariance",
    "mutual_information",
    "tradeoff",
    "converse_line",
    "envelope_value",
    "gap_certificate",
    "gap_sweep",
]


def _exact(value):
    if isinstance(value, dict):
        if set(value) == {"num", "den"}:
            return Fraction(int(value["num"]), int(value["den"]))
        return {k: _exact(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_exact(v) for v in value]
    return value


def _load(text):
    return _exact(json.loads(text))


def binomial(n, k):
    return int(_core.binomial(n, k))


def simulate(N, K, L, r, q=257, packet_size=1, seed=0, demand=None, decoder="linear"):
    """One full run; returns the trace with M and R as Fractions."""
    return _load(_core.simulate(N, K, L, r, q, packet_size, seed, demand, decoder))


def ptilde_law(N, K, L, demand, slots, observer=0, **mutations):
    return _load(_core.ptilde_law(N, K, L, demand, observer, slots, **mutations))


def ptilde_invariance(N, K, L, demands, slots, observer=0, **mutations):
    return _load(_core.ptilde_invariance(N, K, L, demands, observer, slots, **mutations))


def mutual_information(N, K, L, r, q=2, packet_size=1, observer=0, own_demand=False,
                       identity_permutation=False, fixed_slots=False, cap=20_000_000):
    return _load(_core.mutual_information(N, K, L, r, q, packet_size, observer, own_demand,
                                          identity_permutation, fixed_slots, str(cap)))


def tradeoff(N, K, L):
    return _load(_core.tradeoff(N, K, L))


def converse_line(N, K, L, s, lam):
    return _load(_core.converse_line(N, K, L, s, str(Fraction(lam))))


def envelope_value(N, K, L, M, achievable=True):
    return _load(_core.envelope_value(N, K, L, str(Fraction(M)), achievable))


def gap_certificate(N, K, L):
    return _load(_core.gap_certificate(N, K, L))


def gap_sweep(max_files=8, max_users=4, threads=1):
    return _load(_core.gap_sweep(max_files, max_users, threads))
