"""Seeded random polynomial pluriharmonic maps with controlled dilatation."""

from __future__ import annotations

import itertools

import numpy as np

from .mapping import MapModel, PolynomialModel


def _multi_indices(n: int, lo: int, hi: int):
    for beta in itertools.product(range(hi + 1), repeat=n):
        if lo <= sum(beta) <= hi:
            yield beta


def _random_part(rng, n, lo, hi, budget):
    """Polynomial with ``sum_beta |beta| ||c_beta|| = budget`` over degrees ``lo..hi``.

    On the unit ball this bounds the Frobenius norm of its jacobian by
    ``budget``.
    """
    betas = list(_multi_indices(n, lo, hi))
    raw = rng.standard_normal((len(betas), n)) + 1j * rng.standard_normal((len(betas), n))
    weight = sum(sum(b) * np.linalg.norm(c) for b, c in zip(betas, raw))
    scale = budget / weight if weight > 0 else 0.0
    return {b: scale * c for b, c in zip(betas, raw)}


def random_polynomial_map(n: int, rng: np.random.Generator, degree: int = 3,
                          h_perturbation: float = 0.3, g_size: float = 0.3,
                          g_from_degree: int = 1) -> MapModel:
    """``h = z + (degree 2..degree terms)``, ``g`` of degree ``g_from_degree..degree``.

    ``||Dh(z) - I|| <= h_perturbation`` and ``||Dg(z)|| <= g_size`` on the
    ball, so the dilatation norm stays below
    ``g_size / (1 - h_perturbation)``.
    """
    hc = _random_part(rng, n, 2, degree, h_perturbation) if degree >= 2 else {}
    for j in range(n):
        e = tuple(int(i == j) for i in range(n))
        hc[e] = hc.get(e, 0) + np.eye(n)[j]
    gc = _random_part(rng, n, g_from_degree, degree, g_size)
    return MapModel(PolynomialModel(n, hc), PolynomialModel(n, gc), {"source": "random", "degree": degree})


def random_normalized_holomorphic(n: int, rng: np.random.Generator, degree: int = 3,
                                  perturbation: float = 0.3) -> PolynomialModel:
    """``h(z) = z + higher-order terms`` with ``h(0) = 0`` and ``Dh(0) = I``."""
    return random_polynomial_map(n, rng, degree, perturbation, 0.0).h
