"""Fixed points in the last variable of a Schur-class map, and their graphs.

A map F(z, w) sending the polydisk (z in D^n, w in D) into the closed disk
has, for each frozen z, a distinguished fixed point in w whenever the slice
w -> F(z, w) is not a disk automorphism.  This module finds those fixed
points with Newton iteration, classifies them by the slice derivative,
and continues them across a grid into a graph w = f(z), recording slice
positivity diagnostics along the way.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateContinuationError, InconsistencyError
from .moebius import detect_automorphism
from .numerics import eig_hermitian
from .pick import pick_matrix
from .sampling import disk_points, random_disk, random_polydisk
from .serialize import complex_to_pair, matrix_to_pairs, pair_to_complex

CLASS_INTERIOR = "interior"
CLASS_AUTOMORPHISM = "automorphism"
CLASS_BOUNDARY = "boundary"

IDENTITY_IN_W = "identity"
UNIQUE_GRAPH = "unique_graph"
NO_FIXED_POINTS = "no_fixed_points"


class SchurMap:
    """Map F(z, w) with z in the polydisk D^n and w in the disk.

    The map may be given as a rational map in n + 1 variables (w last),
    which yields exact partial derivatives, or as a raw callable
    ``fn(z, w)`` in which case derivatives fall back to central
    differences with the given step.
    """

    def __init__(self, n, fn=None, rational=None, step=1e-6, name=None):
        self.n = int(n)
        if self.n < 1:
            raise ValueError("the map needs at least one z variable")
        if rational is not None and rational.nvars != self.n + 1:
            raise ValueError(
                "rational map must use %d variables (z..., w)" % (self.n + 1)
            )
        if fn is None and rational is None:
            raise ValueError("provide a callable or a rational map")
        self.fn = fn
        self.rational = rational
        self.step = float(step)
        self.name = name
        self._partial_cache = {}

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex).reshape(self.n)
        warr = np.asarray(w, dtype=complex)
        if self.rational is not None:
            pts = np.empty(warr.shape + (self.n + 1,), dtype=complex)
            pts[..., : self.n] = z
            pts[..., self.n] = warr
            values = np.asarray(self.rational.evaluate(pts), dtype=complex)
        else:
            flat = warr.ravel()
            values = np.array(
                [complex(self.fn(z, complex(wv))) for wv in flat], dtype=complex
            ).reshape(warr.shape)
        if warr.ndim == 0:
            return complex(values[()])
        return values

    def _partial_map(self, index):
        if index not in self._partial_cache:
            self._partial_cache[index] = self.rational.partial(index)
        return self._partial_cache[index]

    def _partial(self, index, z, w):
        z = np.asarray(z, dtype=complex).reshape(self.n)
        warr = np.asarray(w, dtype=complex)
        if self.rational is not None:
            pmap = self._partial_map(index)
            pts = np.empty(warr.shape + (self.n + 1,), dtype=complex)
            pts[..., : self.n] = z
            pts[..., self.n] = warr
            values = np.asarray(pmap.evaluate(pts), dtype=complex)
        else:
            h = self.step
            if index == self.n:
                plus = self(z, warr + h)
                minus = self(z, warr - h)
            else:
                zp = z.copy()
                zp[index] += h
                zm = z.copy()
                zm[index] -= h
                plus = self(zp, warr)
                minus = self(zm, warr)
            values = (np.asarray(plus, dtype=complex) - np.asarray(minus, dtype=complex)) / (2.0 * h)
        if warr.ndim == 0:
            return complex(np.asarray(values)[()])
        return values

    def partial_w(self, z, w):
        """dF/dw at (z, w)."""
        return self._partial(self.n, z, w)

    def partial_z(self, index, z, w):
        """dF/dz_index at (z, w)."""
        index = int(index)
        if not 0 <= index < self.n:
            raise ValueError("z-variable index out of range")
        return self._partial(index, z, w)

    def check_schur(self, samples=200, seed=11, radius=0.95, tol=1e-9):
        """Sample |F| over the polydisk and report the worst modulus."""
        rng = np.random.default_rng(seed)
        zs = random_polydisk(rng, samples, self.n, radius)
        ws = random_disk(rng, samples, radius)
        worst = 0.0
        witness = None
        for z, w in zip(zs, ws):
            mod = abs(self(z, w))
            if mod > worst:
                worst = mod
                witness = (z, w)
        report = {
            "max_modulus": float(worst),
            "samples": int(samples),
            "radius": float(radius),
            "tol": float(tol),
            "passed": bool(worst <= 1.0 + tol),
        }
        if witness is not None:
            report["witness"] = {
                "z": [complex_to_pair(v) for v in witness[0]],
                "w": complex_to_pair(witness[1]),
            }
        return report

    def to_json(self):
        if self.rational is None:
            raise ValueError("a map built from a raw callable cannot be serialized")
        payload = {"n": self.n}
        payload.update(self.rational.to_json())
        if self.name:
            payload["name"] = str(self.name)
        return payload

    @classmethod
    def from_json(cls, payload):
        from .multipoly import MultiPoly, RationalMap

        if "rational" in payload:
            rational = RationalMap.from_json(payload["rational"])
        else:
            numerator = MultiPoly.from_json(payload["numerator"])
            denominator = None
            if "denominator" in payload:
                denominator = MultiPoly.from_json(payload["denominator"])
            rational = RationalMap(numerator, denominator)
        return cls(int(payload["n"]), rational=rational, name=payload.get("name"))


@dataclass
class FixedPointRecord:
    """One solution of F(z, w) = w with its slice-derivative classification."""

    z: tuple
    w: complex
    derivative: complex
    classification: str
    residual: float
    iterations: int

    def to_json(self):
        return {
            "z": [complex_to_pair(v) for v in self.z],
            "w": complex_to_pair(self.w),
            "derivative": complex_to_pair(self.derivative),
            "classification": self.classification,
            "residual": float(self.residual),
            "iterations": int(self.iterations),
        }

    @classmethod
    def from_json(cls, payload):
        return cls(
            z=tuple(pair_to_complex(v) for v in payload["z"]),
            w=pair_to_complex(payload["w"]),
            derivative=pair_to_complex(payload["derivative"]),
            classification=str(payload["classification"]),
            residual=float(payload["residual"]),
            iterations=int(payload["iterations"]),
        )


def _newton_w(smap, z, start, tol=1e-12, max_iter=50):
    """Newton iteration on F(z, w) - w, damped to stay inside the disk."""
    w = complex(start)
    for iteration in range(1, max_iter + 1):
        g = smap(z, w) - w
        if abs(g) <= tol:
            return w, iteration, True
        dg = smap.partial_w(z, w) - 1.0
        if abs(dg) < 1e-14:
            return w, iteration, False
        step = g / dg
        new = w - step
        scale = 1.0
        while abs(new) >= 1.0 and scale > 1e-4:
            scale *= 0.5
            new = w - scale * step
        if abs(new) >= 1.0:
            new = new / abs(new) * 0.999999
        w = new
    return w, max_iter, abs(smap(z, w) - w) <= tol


def find_fixed_w(smap, z, seeds=None, tol=1e-12, dedup_tol=1e-8, deriv_tol=1e-6):
    """All fixed points of w -> F(z, w) found from a spread of seeds.

    Each converged solution is classified by the modulus of the slice
    derivative: well below 1 is an interior (attracting) point, within
    deriv_tol of 1 is the automorphism case.  A modulus above 1 + 1e-8 is
    impossible for a disk self-map and raises InconsistencyError, as do
    two distinct interior fixed points on one slice.
    """
    z = np.asarray(z, dtype=complex).reshape(smap.n)
    if seeds is None:
        seeds = np.concatenate([np.zeros(1, dtype=complex), disk_points(12, 0.9)])
    found = []
    for seed in np.asarray(seeds, dtype=complex):
        w, iterations, ok = _newton_w(smap, z, seed, tol=tol)
        if not ok or abs(w) > 1.0 + 1e-9:
            continue
        if any(abs(w - prev) <= dedup_tol for prev, _ in found):
            continue
        found.append((w, iterations))

    records = []
    for w, iterations in found:
        deriv = smap.partial_w(z, w)
        mod = abs(deriv)
        if mod > 1.0 + 1e-8:
            raise InconsistencyError(
                "slice derivative modulus %.6e at a fixed point exceeds 1; "
                "the map does not send the disk into itself" % mod
            )
        if abs(w) >= 1.0 - 1e-8:
            classification = CLASS_BOUNDARY
        elif mod <= 1.0 - deriv_tol:
            classification = CLASS_INTERIOR
        else:
            classification = CLASS_AUTOMORPHISM
        residual = abs(smap(z, w) - w)
        records.append(
            FixedPointRecord(
                z=tuple(complex(v) for v in z),
                w=complex(w),
                derivative=complex(deriv),
                classification=classification,
                residual=float(residual),
                iterations=int(iterations),
            )
        )

    interior = [r for r in records if r.classification == CLASS_INTERIOR]
    for i in range(len(interior)):
        for j in range(i + 1, len(interior)):
            if abs(interior[i].w - interior[j].w) > 1e-6:
                raise InconsistencyError(
                    "two distinct interior fixed points on one slice; a "
                    "Schur-class slice admits at most one"
                )
    records.sort(key=lambda r: (round(r.w.real, 9), round(r.w.imag, 9)))
    return records


def detect_w_automorphism(smap, z_center=None, tol=1e-8, check_slices=20, seed=307):
    """Moebius form of the w-slices, or None.

    If the slice at the base point is a disk automorphism, every other
    slice must be the same automorphism; a holomorphic family cannot leave
    the automorphism group at one parameter and match it at another.  A
    mismatch therefore raises InconsistencyError rather than returning a
    partial answer.
    """
    if z_center is None:
        z_center = np.zeros(smap.n, dtype=complex)
    z_center = np.asarray(z_center, dtype=complex).reshape(smap.n)
    phi = detect_automorphism(lambda w: smap(z_center, w), tol=tol)
    if phi is None:
        return None
    rng = np.random.default_rng(seed)
    bases = random_polydisk(rng, check_slices, smap.n, 0.8)
    probes = disk_points(12, 0.85)
    expected = phi(probes)
    for base in bases:
        values = smap(base, probes)
        if np.max(np.abs(values - expected)) > max(10.0 * tol, 1e-7):
            raise InconsistencyError(
                "the w-slice at one base point is a disk automorphism but "
                "another slice differs from it"
            )
    return phi


def _chain_order(nodes, start_value):
    """Greedy nearest-neighbor ordering of axis nodes, starting near a value."""
    remaining = list(range(len(nodes)))
    current = min(remaining, key=lambda i: abs(nodes[i] - start_value))
    order = [current]
    remaining.remove(current)
    while remaining:
        last = nodes[order[-1]]
        nxt = min(remaining, key=lambda i: abs(nodes[i] - last))
        order.append(nxt)
        remaining.remove(nxt)
    return np.array(order, dtype=int)


def _track_segment(smap, z_from, w_from, z_to, tol=1e-12, max_depth=3, depth=0):
    """Follow the fixed point along a straight segment in z.

    A tangent predictor from the implicit function theorem seeds Newton at
    the far end; on failure the segment is bisected up to max_depth times.
    """
    z_from = np.asarray(z_from, dtype=complex).reshape(smap.n)
    z_to = np.asarray(z_to, dtype=complex).reshape(smap.n)
    denom = 1.0 - smap.partial_w(z_from, w_from)
    if abs(denom) < 1e-8:
        raise DegenerateContinuationError(
            "slice derivative pins the fixed-point equation (|1 - dF/dw| < 1e-8)",
            location=tuple(complex(v) for v in z_from),
        )
    delta = z_to - z_from
    slope = sum(
        smap.partial_z(i, z_from, w_from) * delta[i] for i in range(smap.n)
    )
    w_pred = w_from + slope / denom
    if abs(w_pred) >= 1.0:
        w_pred = w_from
    w, _, ok = _newton_w(smap, z_to, w_pred, tol=tol)
    if ok and abs(w) <= 1.0 + 1e-9:
        return w
    if depth >= max_depth:
        raise DegenerateContinuationError(
            "fixed-point tracking failed after repeated step bisection",
            location=tuple(complex(v) for v in z_to),
        )
    z_mid = 0.5 * (z_from + z_to)
    w_mid = _track_segment(smap, z_from, w_from, z_mid, tol, max_depth, depth + 1)
    return _track_segment(smap, z_mid, w_mid, z_to, tol, max_depth, depth + 1)


@dataclass
class GraphFunction:
    """Graph w = f(z) stored on a grid, with residuals and provenance.

    axes holds one node array per z variable; values and residuals are
    arrays over the Cartesian product of the axes.  Evaluation at a new
    point either delegates to an attached evaluator callable or reruns
    Newton seeded from the nearest grid node, which keeps the query on the
    same solution branch as the stored data.
    """

    axes: tuple
    values: np.ndarray
    residuals: np.ndarray
    provenance: dict = field(default_factory=dict)
    smap: SchurMap | None = None
    evaluator: object | None = None

    @property
    def max_residual(self):
        arr = np.asarray(self.residuals, dtype=float)
        if arr.size == 0:
            return 0.0
        return float(np.max(arr))

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex).reshape(-1)
        if self.evaluator is not None:
            return complex(self.evaluator(z))
        if self.smap is None:
            raise InconsistencyError("graph has no evaluator and no map attached")
        if z.size != len(self.axes):
            raise ValueError("point dimension does not match the graph axes")
        idx = tuple(
            int(np.argmin(np.abs(ax - zi))) for ax, zi in zip(self.axes, z)
        )
        start = complex(np.asarray(self.values)[idx])
        w, _, ok = _newton_w(self.smap, z, start)
        if not ok:
            raise DegenerateContinuationError(
                "fixed-point refinement failed at a query point",
                location=tuple(complex(v) for v in z),
            )
        return complex(w)

    @classmethod
    def constant(cls, value, axes=(), provenance=None):
        shape = tuple(len(ax) for ax in axes)
        values = np.full(shape, complex(value), dtype=complex)
        residuals = np.zeros(shape, dtype=float)
        prov = {"method": "constant"}
        if provenance:
            prov.update(provenance)
        return cls(
            axes=tuple(np.asarray(ax, dtype=complex) for ax in axes),
            values=values,
            residuals=residuals,
            provenance=prov,
            evaluator=lambda _z, _c=complex(value): _c,
        )

    def to_json(self):
        return {
            "axes": [[complex_to_pair(v) for v in ax] for ax in self.axes],
            "values": matrix_to_pairs(self.values),
            "residuals": np.asarray(self.residuals, dtype=float).tolist(),
            "provenance": dict(self.provenance),
        }


def local_graph(smap, record, points, tol=1e-12, max_bisect=3):
    """Fixed-point values at scattered z points, seeded from solved neighbors.

    Points are processed outward from the anchor record; each new point is
    tracked from the nearest already-solved point so the branch never jumps.
    Returns (values, residuals) aligned with the input points.
    """
    if record.classification != CLASS_INTERIOR:
        raise InconsistencyError(
            "graph continuation needs an interior fixed point, got %r"
            % record.classification
        )
    pts = np.asarray(points, dtype=complex).reshape(-1, smap.n)
    anchor_z = np.asarray(record.z, dtype=complex)
    order = np.argsort(np.linalg.norm(pts - anchor_z, axis=1), kind="stable")
    values = np.zeros(len(pts), dtype=complex)
    residuals = np.zeros(len(pts), dtype=float)
    solved = []
    for idx in order:
        z = pts[idx]
        if solved:
            nearest = min(solved, key=lambda s: np.linalg.norm(pts[s] - z))
            z_from, w_from = pts[nearest], values[nearest]
        else:
            z_from, w_from = anchor_z, record.w
        w = _track_segment(smap, z_from, w_from, z, tol=tol, max_depth=max_bisect)
        values[idx] = w
        residuals[idx] = abs(smap(z, w) - w)
        solved.append(int(idx))
    return values, residuals


def continue_graph(
    smap,
    record,
    radius=0.9,
    grid=20,
    axes=None,
    tol=1e-12,
    seed=1914,
    pick_slices=4,
    pick_nodes=8,
    perturb=0.01,
    max_perturb=5,
):
    """Continue an interior fixed point into a graph over a product grid.

    Marches axis by axis with a tangent predictor and Newton correction,
    then validates the result: residuals are recomputed at every node, the
    slice derivative bound max |dF/dw| is recorded, and a Pick matrix test
    on a few w-slices checks Schur-class positivity.  All diagnostics land
    in the returned GraphFunction's provenance.
    """
    if record.classification != CLASS_INTERIOR:
        raise InconsistencyError(
            "graph continuation needs an interior fixed point, got %r"
            % record.classification
        )
    phi = detect_w_automorphism(smap, z_center=record.z)
    if phi is not None:
        raise InconsistencyError(
            "the anchor w-slice is a disk automorphism; its fixed point does "
            "not continue to a unique graph"
        )

    anchor_z = np.asarray(record.z, dtype=complex).reshape(smap.n)
    anchor_w = complex(record.w)
    rng = np.random.default_rng(seed)
    perturbations = 0
    while abs(1.0 - smap.partial_w(anchor_z, anchor_w)) < 1e-8:
        if perturbations >= max_perturb:
            raise DegenerateContinuationError(
                "anchor slice derivative stays within 1e-8 of 1 after "
                "repeated perturbation",
                location=tuple(complex(v) for v in anchor_z),
            )
        step = perturb * (
            rng.standard_normal(smap.n) + 1j * rng.standard_normal(smap.n)
        )
        candidate = anchor_z + step
        candidate = np.where(np.abs(candidate) >= 0.999, anchor_z, candidate)
        w_cand, _, ok = _newton_w(smap, candidate, anchor_w, tol=tol)
        perturbations += 1
        if ok and abs(w_cand) < 1.0 - 1e-8:
            anchor_z, anchor_w = candidate, w_cand

    if axes is None:
        base = disk_points(grid, radius)
        axes = tuple(base.copy() for _ in range(smap.n))
    else:
        axes = tuple(np.asarray(ax, dtype=complex).ravel() for ax in axes)
        if len(axes) != smap.n:
            raise ValueError("need one axis per z variable")

    ordered = []
    for i, ax in enumerate(axes):
        ordered.append(ax[_chain_order(ax, anchor_z[i])])
    axes = tuple(ordered)

    shape = tuple(len(ax) for ax in axes)
    values = np.zeros(shape, dtype=complex)
    first = tuple(0 for _ in shape)
    z_first = np.array([ax[0] for ax in axes])
    values[first] = _track_segment(smap, anchor_z, anchor_w, z_first, tol=tol)
    for idx in np.ndindex(*shape):
        if idx == first:
            continue
        last_nz = max(i for i, v in enumerate(idx) if v > 0)
        prev = list(idx)
        prev[last_nz] -= 1
        prev = tuple(prev)
        z_prev = np.array([axes[i][prev[i]] for i in range(smap.n)])
        z_cur = np.array([axes[i][idx[i]] for i in range(smap.n)])
        values[idx] = _track_segment(smap, z_prev, values[prev], z_cur, tol=tol)

    residuals = np.zeros(shape, dtype=float)
    max_deriv = 0.0
    max_modulus = 0.0
    for idx in np.ndindex(*shape):
        z_cur = np.array([axes[i][idx[i]] for i in range(smap.n)])
        w = values[idx]
        residuals[idx] = abs(smap(z_cur, w) - w)
        max_deriv = max(max_deriv, abs(smap.partial_w(z_cur, w)))
        max_modulus = max(max_modulus, abs(w))

    pick_min_eig = np.inf
    w_nodes = disk_points(pick_nodes, 0.7)
    slice_bases = [anchor_z]
    flat_indices = rng.choice(
        int(np.prod(shape)), size=min(pick_slices, int(np.prod(shape))), replace=False
    )
    for flat in flat_indices:
        idx = np.unravel_index(int(flat), shape)
        slice_bases.append(np.array([axes[i][idx[i]] for i in range(smap.n)]))
    for base in slice_bases:
        slice_values = smap(base, w_nodes)
        eigs, _ = eig_hermitian(pick_matrix(w_nodes, slice_values))
        pick_min_eig = min(pick_min_eig, float(eigs[0]))

    provenance = {
        "method": "continuation",
        "radius": float(radius),
        "grid": [int(s) for s in shape],
        "anchor_z": [complex_to_pair(v) for v in anchor_z],
        "anchor_w": complex_to_pair(anchor_w),
        "anchor_perturbations": int(perturbations),
        "max_w_derivative": float(max_deriv),
        "max_value_modulus": float(max_modulus),
        "max_residual": float(np.max(residuals)) if residuals.size else 0.0,
        "slice_pick_min_eig": float(pick_min_eig),
        "slice_pick_nodes": int(pick_nodes),
        "tol": float(tol),
        "seed": int(seed),
    }
    return GraphFunction(
        axes=axes,
        values=values,
        residuals=residuals,
        provenance=provenance,
        smap=smap,
    )


def uniqueness_check(smap, samples=10, seed=2024, radius=0.8, tol=1e-10):
    """Trichotomy for the fixed-point structure of the w-slices.

    Returns "identity" when F(z, w) = w identically, "unique_graph" when
    every sampled slice carries an attracting interior fixed point, and
    "no_fixed_points" when some slice has none (the attractor sits on the
    boundary or the slice is an automorphism).
    """
    rng = np.random.default_rng(seed)
    zs = random_polydisk(rng, samples, smap.n, radius)
    identity = True
    for z in zs:
        probes = random_disk(rng, 4, radius)
        if any(abs(smap(z, complex(w)) - complex(w)) > tol for w in probes):
            identity = False
            break
    if identity:
        return IDENTITY_IN_W
    for z in zs:
        records = find_fixed_w(smap, z)
        if not any(r.classification == CLASS_INTERIOR for r in records):
            return NO_FIXED_POINTS
    return UNIQUE_GRAPH
