"""Stability scan for bivariate polynomials on the bidisk.

A polynomial is stable when it has no zeros in the open bidisk; zeros on the
boundary are allowed and do not disqualify the StableOpen verdict.  The scan
fixes one variable on torus and interior-disk sample grids and finds the roots
of the remaining univariate slice, in both variable orders.  This is a
sampling certificate: verdicts are exact about the witnesses they report and
honest (Inconclusive) when a candidate zero cannot be confirmed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import roots_univariate
from .poly2 import BivariatePolynomial
from .serialize import FORMAT_TAG, complex_to_pair

STABLE_OPEN = "StableOpen"
STABLE_CLOSED_STRICT = "StableClosedStrict"
ZERO_FOUND = "ZeroFound"
INCONCLUSIVE = "Inconclusive"


@dataclass
class StabilityReport:
    verdict: str
    witness: tuple[complex, complex] | None
    min_modulus: float
    min_root_modulus: float
    torus_grid: int
    disk_grid: int
    tolerance: float

    @property
    def stable(self) -> bool:
        return self.verdict in (STABLE_OPEN, STABLE_CLOSED_STRICT)

    def to_json(self) -> dict:
        return {
            "format": FORMAT_TAG,
            "verdict": self.verdict,
            "witness": None if self.witness is None else [
                complex_to_pair(self.witness[0]),
                complex_to_pair(self.witness[1]),
            ],
            "min_modulus": self.min_modulus,
            # infinity means no slice had any root at all; JSON gets null
            "min_root_modulus": (
                float(self.min_root_modulus)
                if np.isfinite(self.min_root_modulus)
                else None
            ),
            "torus_grid": self.torus_grid,
            "disk_grid": self.disk_grid,
            "tolerance": self.tolerance,
        }


def _fixed_samples(torus_grid: int, disk_grid: int) -> np.ndarray:
    torus = np.exp(2j * np.pi * np.arange(torus_grid) / torus_grid)
    k = np.arange(disk_grid)
    radii = 0.999 * np.sqrt((k + 0.5) / disk_grid)
    angles = np.exp(2j * np.pi * np.arange(disk_grid) / disk_grid)
    interior = np.concatenate([[0.0 + 0.0j], np.outer(radii, angles).ravel()])
    return np.concatenate([torus, interior])


def check_stability(
    p: BivariatePolynomial,
    torus_grid: int = 512,
    disk_grid: int = 64,
    tol: float = 1e-9,
) -> StabilityReport:
    """Scan for zeros of p in the bidisk; see the module docstring."""
    if torus_grid < 4 or disk_grid < 2:
        raise ValueError("grids are too coarse")
    coeff_scale = float(np.max(np.abs(p.coeffs)))
    if coeff_scale == 0.0:
        raise ValueError("the zero polynomial is identically zero on the bidisk")

    samples = _fixed_samples(torus_grid, disk_grid)
    degen_tol = tol * coeff_scale
    min_root_modulus = np.inf
    pending_witness = None  # candidate zero that failed the confirmation check

    for swap in (False, True):
        coeff_grid = p.coeffs.T if swap else p.coeffs
        # slice_coeffs[s, k] is the coefficient of w**k in p(fixed_s, w)
        powers = samples.reshape(-1, 1) ** np.arange(coeff_grid.shape[0])
        slice_coeffs = powers @ coeff_grid
        for fixed, row in zip(samples, slice_coeffs):
            if np.max(np.abs(row)) <= degen_tol:
                witness = (0.0 + 0.0j, fixed) if swap else (fixed, 0.0 + 0.0j)
                return _confirmed(p, witness, samples, torus_grid, disk_grid, tol,
                                  min_root_modulus)
            roots = roots_univariate(row, lead_tol=1e-13)
            if roots.size == 0:
                continue
            moduli = np.abs(roots)
            min_root_modulus = min(min_root_modulus, float(moduli.min()))
            inside = moduli < 1.0 - tol
            if np.any(inside):
                root = roots[np.argmin(moduli)]
                witness = (root, fixed) if swap else (fixed, root)
                if abs(p(*witness)) <= tol * max(1.0, coeff_scale):
                    return _confirmed(p, witness, samples, torus_grid, disk_grid, tol,
                                      min_root_modulus)
                pending_witness = witness

    min_modulus = _torus_min_modulus(p, torus_grid)
    if pending_witness is not None:
        verdict = INCONCLUSIVE
        witness = pending_witness
    elif min_root_modulus > 1.0 + tol and min_modulus > tol:
        verdict = STABLE_CLOSED_STRICT
        witness = None
    else:
        verdict = STABLE_OPEN
        witness = None
    return StabilityReport(
        verdict=verdict,
        witness=witness,
        min_modulus=min_modulus,
        min_root_modulus=float(min_root_modulus),
        torus_grid=torus_grid,
        disk_grid=disk_grid,
        tolerance=tol,
    )


def _confirmed(p, witness, samples, torus_grid, disk_grid, tol, min_root_modulus):
    value = abs(p(*witness))
    coeff_scale = float(np.max(np.abs(p.coeffs)))
    verdict = ZERO_FOUND if value <= tol * max(1.0, coeff_scale) else INCONCLUSIVE
    return StabilityReport(
        verdict=verdict,
        witness=(complex(witness[0]), complex(witness[1])),
        min_modulus=_torus_min_modulus(p, torus_grid),
        min_root_modulus=float(min_root_modulus),
        torus_grid=torus_grid,
        disk_grid=disk_grid,
        tolerance=tol,
    )


def _torus_min_modulus(p: BivariatePolynomial, torus_grid: int) -> float:
    torus = np.exp(2j * np.pi * np.arange(torus_grid) / torus_grid)
    z1, z2 = np.meshgrid(torus, torus, indexing="ij")
    return float(np.min(np.abs(p(z1, z2))))
