"""Normal forms of holomorphic retracts of the polydisk.

A retract here is an idempotent holomorphic self-map rho of D^n.  Up to a
permutation of coordinates and a Moebius change of variable in each, such
a map is equivalent to one of the shape

    v  ->  (v_1, ..., v_k,  v_{e_1}, ..., v_{e_m},  f_1(v'), ..., f_r(v'))

with k free coordinates, m plain copies of free coordinates, and r graph
components (functions of the free block v' = (v_1, ..., v_k), constants
included).  This module verifies idempotence, classifies components,
peels off graph components one at a time through fixed-point reduction
in the last variable, and assembles the conjugation chain plus residual
diagnostics for the resulting normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateContinuationError, DomainError, InconsistencyError
from .fixedgraph import (
    CLASS_INTERIOR,
    GraphFunction,
    SchurMap,
    continue_graph,
    find_fixed_w,
)
from .moebius import MoebiusAutomorphism, detect_automorphism
from .multipoly import MultiPoly, RationalMap
from .sampling import disk_points, random_polydisk
from .serialize import complex_to_pair

ROLE_IDENTITY = "identity"
ROLE_COPY = "copy"
ROLE_CONSTANT = "constant"
ROLE_GENERIC = "generic"


class RetractMap:
    """Self-map of D^n given componentwise.

    Components may be MultiPoly or RationalMap instances (exact, and
    serializable) or plain callables taking the full coordinate vector.
    """

    def __init__(self, n, components, name=None):
        self.n = int(n)
        if self.n < 1:
            raise ValueError("the map needs at least one variable")
        components = tuple(components)
        if len(components) != self.n:
            raise ValueError("need exactly one component per coordinate")
        for comp in components:
            if isinstance(comp, (MultiPoly, RationalMap)) and comp.nvars != self.n:
                raise ValueError("component variable count does not match the map")
        self.components = components
        self.name = name

    @classmethod
    def identity(cls, n):
        return cls(n, tuple(MultiPoly.variable(n, i) for i in range(n)))

    def component_value(self, index, z):
        comp = self.components[index]
        z = np.asarray(z, dtype=complex).reshape(self.n)
        if isinstance(comp, (MultiPoly, RationalMap)):
            return complex(comp.evaluate(z))
        return complex(comp(z))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex).reshape(self.n)
        return np.array(
            [self.component_value(j, z) for j in range(self.n)], dtype=complex
        )

    def evaluate_batch(self, points):
        pts = np.asarray(points, dtype=complex).reshape(-1, self.n)
        out = np.empty((len(pts), self.n), dtype=complex)
        for j, comp in enumerate(self.components):
            if isinstance(comp, (MultiPoly, RationalMap)):
                out[:, j] = comp.evaluate(pts)
            else:
                out[:, j] = [complex(comp(p)) for p in pts]
        return out

    def to_json(self):
        comps = []
        for comp in self.components:
            if isinstance(comp, MultiPoly):
                comps.append({"type": "polynomial", "data": comp.to_json()})
            elif isinstance(comp, RationalMap):
                comps.append({"type": "rational", "data": comp.to_json()})
            else:
                raise ValueError("callable components cannot be serialized")
        payload = {"n": self.n, "components": comps}
        if self.name:
            payload["name"] = str(self.name)
        return payload

    @classmethod
    def from_json(cls, payload):
        comps = []
        for entry in payload["components"]:
            if "type" in entry:
                kind = entry["type"]
                if kind == "polynomial":
                    comps.append(MultiPoly.from_json(entry["data"]))
                elif kind == "rational":
                    comps.append(RationalMap.from_json(entry["data"]))
                else:
                    raise ValueError("unknown component type %r" % kind)
            elif "numerator" in entry:
                comps.append(RationalMap.from_json(entry))
            elif "terms" in entry:
                comps.append(MultiPoly.from_json(entry))
            else:
                raise ValueError("unrecognized component encoding")
        return cls(int(payload["n"]), tuple(comps), name=payload.get("name"))

    def __repr__(self):
        return "RetractMap(n=%d)" % self.n


def verify_idempotent(rho, samples=400, seed=7, radius=0.9, tol=1e-9):
    """Sample rho(rho(z)) - rho(z) over the polydisk and report the defect."""
    rng = np.random.default_rng(seed)
    pts = random_polydisk(rng, samples, rho.n, radius)
    first = rho.evaluate_batch(pts)
    max_modulus = float(np.max(np.abs(first))) if first.size else 0.0
    report = {
        "samples": int(samples),
        "radius": float(radius),
        "tol": float(tol),
        "max_modulus": max_modulus,
    }
    if max_modulus > 1.0 + tol:
        report["max_defect"] = float("inf")
        report["passed"] = False
        report["reason"] = "the map leaves the closed polydisk"
        return report
    second = rho.evaluate_batch(first)
    defect = float(np.max(np.abs(second - first))) if first.size else 0.0
    report["max_defect"] = defect
    report["passed"] = bool(defect <= tol)
    if not report["passed"]:
        report["reason"] = "rho(rho) differs from rho"
    return report


@dataclass
class ComponentRole:
    """Classification of one output component of a candidate retract."""

    kind: str
    source: int | None = None
    moebius: MoebiusAutomorphism | None = None
    value: complex | None = None

    def to_json(self):
        payload = {"kind": self.kind}
        if self.source is not None:
            payload["source"] = int(self.source)
        if self.moebius is not None:
            payload["moebius"] = self.moebius.to_json()
        if self.value is not None:
            payload["value"] = complex_to_pair(self.value)
        return payload


def _active_variables(rho, j, bases, tol=1e-9):
    probes = (0.31 + 0.17j, -0.42 - 0.05j)
    active = []
    for i in range(rho.n):
        changed = False
        for base in bases:
            ref = rho.component_value(j, base)
            for repl in probes:
                trial = np.array(base, dtype=complex)
                trial[i] = repl
                if abs(rho.component_value(j, trial) - ref) > tol:
                    changed = True
                    break
            if changed:
                break
        if changed:
            active.append(i)
    return active


def classify_components(rho, samples=60, seed=97, radius=0.85, tol=1e-9):
    """Role of each component: identity, copy of a variable, constant, generic.

    A copy is a component of the form phi(z_i) for a disk automorphism phi
    and a single input variable i.  Idempotence forces structure on these
    roles: a component that is an automorphism of its own variable must be
    the identity, and the source variable of any copy must itself be an
    identity coordinate.  Violations raise InconsistencyError.
    """
    rng = np.random.default_rng(seed)
    pts = random_polydisk(rng, samples, rho.n, radius)
    vals = rho.evaluate_batch(pts)
    bases = random_polydisk(rng, 3, rho.n, 0.8)

    roles = []
    for j in range(rho.n):
        col = vals[:, j]
        mean = complex(col.mean())
        if np.max(np.abs(col - mean)) <= max(tol, 1e-9):
            if abs(mean) >= 1.0:
                raise DomainError(
                    "constant component %d lies outside the open disk" % j
                )
            roles.append(ComponentRole(ROLE_CONSTANT, value=mean))
            continue
        if np.max(np.abs(col - pts[:, j])) <= tol:
            roles.append(ComponentRole(ROLE_IDENTITY, source=j))
            continue
        active = _active_variables(rho, j, bases, tol=tol)
        role = ComponentRole(ROLE_GENERIC)
        if len(active) == 1:
            i = active[0]

            def slice_fn(w, _j=j, _i=i):
                point = np.zeros(rho.n, dtype=complex)
                point[_i] = w
                return rho.component_value(_j, point)

            phi = detect_automorphism(slice_fn, tol=1e-8)
            if phi is not None:
                check = disk_points(10, 0.8)
                base = bases[0].copy()
                observed = np.array(
                    [
                        rho.component_value(
                            j, _with_coordinate(base, i, w)
                        )
                        for w in check
                    ],
                    dtype=complex,
                )
                if np.max(np.abs(observed - phi(check))) <= 1e-7:
                    if i == j:
                        if not phi.is_identity(1e-8):
                            raise InconsistencyError(
                                "component %d is a non-identity automorphism of "
                                "its own variable; no idempotent map does that"
                                % j
                            )
                        role = ComponentRole(ROLE_IDENTITY, source=j)
                    else:
                        role = ComponentRole(ROLE_COPY, source=i, moebius=phi)
        roles.append(role)

    for j, role in enumerate(roles):
        if role.kind == ROLE_COPY and roles[role.source].kind != ROLE_IDENTITY:
            raise InconsistencyError(
                "component %d copies variable %d through a Moebius map, but "
                "component %d is not the identity; idempotence is violated"
                % (j, role.source, role.source)
            )
    return roles


def _with_coordinate(base, index, value):
    out = np.array(base, dtype=complex)
    out[index] = value
    return out


@dataclass(frozen=True)
class MoebiusStep:
    """Chain step applying a disk automorphism to one coordinate."""

    index: int
    phi: MoebiusAutomorphism

    def apply(self, z):
        out = np.array(z, dtype=complex)
        out[self.index] = self.phi(complex(out[self.index]))
        return out

    def invert(self, z):
        out = np.array(z, dtype=complex)
        out[self.index] = self.phi.inverse()(complex(out[self.index]))
        return out

    def lifted(self, dim):
        return self

    def to_json(self):
        return {"kind": "moebius", "index": int(self.index), "map": self.phi.to_json()}


@dataclass(frozen=True)
class PermStep:
    """Chain step reordering coordinates; position i reads old position order[i]."""

    order: tuple

    def apply(self, z):
        z = np.asarray(z, dtype=complex)
        return z[np.array(self.order, dtype=int)]

    def invert(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.empty_like(z)
        for i, src in enumerate(self.order):
            out[src] = z[i]
        return out

    def lifted(self, dim):
        tail = tuple(range(len(self.order), dim))
        return PermStep(tuple(self.order) + tail)

    def to_json(self):
        return {"kind": "permute", "order": [int(i) for i in self.order]}


class ConjugationChain:
    """Composition of coordinate permutations and per-coordinate Moebius maps."""

    def __init__(self, steps=()):
        self.steps = tuple(steps)

    def apply(self, z):
        out = np.asarray(z, dtype=complex)
        for step in self.steps:
            out = step.apply(out)
        return out

    def apply_inverse(self, z):
        out = np.asarray(z, dtype=complex)
        for step in reversed(self.steps):
            out = step.invert(out)
        return out

    def lifted(self, dim):
        return ConjugationChain(tuple(step.lifted(dim) for step in self.steps))

    def to_json(self):
        return {"steps": [step.to_json() for step in self.steps]}

    @classmethod
    def from_json(cls, payload):
        steps = []
        for entry in payload["steps"]:
            if entry["kind"] == "moebius":
                steps.append(
                    MoebiusStep(
                        int(entry["index"]),
                        MoebiusAutomorphism.from_json(entry["map"]),
                    )
                )
            elif entry["kind"] == "permute":
                steps.append(PermStep(tuple(int(i) for i in entry["order"])))
            else:
                raise ValueError("unknown chain step %r" % entry["kind"])
        return cls(tuple(steps))

    def __len__(self):
        return len(self.steps)


class _PermutedComponent:
    """Component j of P . rho . P^{-1} for callable components."""

    def __init__(self, rho, order, j):
        self.rho = rho
        self.order = tuple(order)
        self.j = int(j)

    def __call__(self, v):
        v = np.asarray(v, dtype=complex).reshape(self.rho.n)
        z = np.empty_like(v)
        for i, src in enumerate(self.order):
            z[src] = v[i]
        return self.rho.component_value(self.order[self.j], z)


def _permute_map(rho, order):
    """P . rho . P^{-1}; polynomial and rational components stay exact."""
    n = rho.n
    inv = [0] * n
    for i, src in enumerate(order):
        inv[src] = i
    comps = []
    for j in range(n):
        comp = rho.components[order[j]]
        if isinstance(comp, MultiPoly):
            comps.append(comp.embed(n, inv))
        elif isinstance(comp, RationalMap):
            comps.append(
                RationalMap(
                    comp.numerator.embed(n, inv), comp.denominator.embed(n, inv)
                )
            )
        else:
            comps.append(_PermutedComponent(rho, order, j))
    return RetractMap(n, tuple(comps))


class _ReducedComponent:
    """Component i of the reduced map z' -> rho_head(z', f(z'))."""

    def __init__(self, rho, index, graph):
        self.rho = rho
        self.index = int(index)
        self.graph = graph

    def __call__(self, zhat):
        zhat = np.asarray(zhat, dtype=complex).reshape(self.rho.n - 1)
        w = self.graph.evaluate(zhat)
        full = np.append(zhat, w)
        return self.rho.component_value(self.index, full)


def _schur_from_last(rho):
    comp = rho.components[-1]
    head = rho.n - 1
    if isinstance(comp, RationalMap):
        return SchurMap(head, rational=comp)
    if isinstance(comp, MultiPoly):
        return SchurMap(head, rational=RationalMap(comp))

    def fn(zhat, w, _rho=rho):
        full = np.append(np.asarray(zhat, dtype=complex), w)
        return _rho.component_value(_rho.n - 1, full)

    return SchurMap(head, fn=fn)


def reduce_dimension(rho, grid=12, radius=0.85, newton_tol=1e-12, seed=5005):
    """Split the last component off as a fixed-point graph.

    Returns (reduced, graph): the graph solves w = rho_last(z', w), and the
    reduced map is z' -> rho_head(z', f(z')), an idempotent self-map of
    D^{n-1}.  The image of the origin under rho seeds the anchor fixed
    point, so no search is needed.
    """
    if rho.n < 2:
        raise ValueError("reduction needs at least two variables")
    smap = _schur_from_last(rho)
    q = rho(np.zeros(rho.n, dtype=complex))
    q_head = q[:-1]
    records = find_fixed_w(smap, q_head, seeds=[complex(q[-1])], tol=newton_tol)
    if not records:
        raise DegenerateContinuationError(
            "could not refine the seed fixed point at the image of the origin",
            location=tuple(complex(v) for v in q_head),
        )
    record = records[0]
    if record.classification != CLASS_INTERIOR:
        raise DegenerateContinuationError(
            "the seed fixed point is not an attracting interior point "
            "(classification %r)" % record.classification,
            location=tuple(complex(v) for v in q_head),
        )
    graph = continue_graph(
        smap, record, radius=radius, grid=grid, tol=newton_tol, seed=seed
    )
    head_comps = tuple(
        _ReducedComponent(rho, i, graph) for i in range(rho.n - 1)
    )
    reduced = RetractMap(rho.n - 1, head_comps)
    return reduced, graph


@dataclass
class _CoreForm:
    """Intermediate result of the normalization recursion."""

    k: int
    e_sources: list
    tail: list  # ("const", value) or ("graph", evaluator, GraphFunction)
    chain: ConjugationChain

    def image_vector(self, x):
        x = np.asarray(x, dtype=complex).reshape(self.k)
        parts = [complex(v) for v in x]
        parts.extend(complex(x[s]) for s in self.e_sources)
        for item in self.tail:
            if item[0] == "const":
                parts.append(complex(item[1]))
            else:
                parts.append(complex(item[1](x)))
        return np.array(parts, dtype=complex)


def _graph_evaluator(core, graph):
    def evaluate(x):
        head = core.image_vector(np.asarray(x, dtype=complex).reshape(core.k))
        zhat = core.chain.apply_inverse(head)
        return graph.evaluate(zhat)

    return evaluate


def _normalize(rho, opts, depth=0):
    d = rho.n
    roles = classify_components(
        rho,
        samples=opts["scan_samples"],
        seed=opts["seed"] + 17 * depth,
        radius=opts["scan_radius"],
        tol=opts["role_tol"],
    )
    generic = [j for j, role in enumerate(roles) if role.kind == ROLE_GENERIC]

    if d == 1:
        role = roles[0]
        if role.kind == ROLE_IDENTITY:
            return _CoreForm(1, [], [], ConjugationChain())
        if role.kind == ROLE_CONSTANT:
            return _CoreForm(
                0, [], [("const", role.value)], ConjugationChain([PermStep((0,))])
            )
        raise InconsistencyError(
            "a one-variable idempotent self-map of the disk must be the "
            "identity or a point; this one is neither"
        )

    if generic:
        g = generic[0]
        order = tuple(list(range(g)) + list(range(g + 1, d)) + [g])
        step = PermStep(order)
        rho_p = _permute_map(rho, order)
        reduced, graph = reduce_dimension(
            rho_p,
            grid=opts["grid"],
            radius=opts["radius"],
            newton_tol=opts["newton_tol"],
            seed=opts["seed"] + 29 * depth,
        )
        core = _normalize(reduced, opts, depth + 1)
        chain = ConjugationChain((step,) + core.chain.lifted(d).steps)
        tail = list(core.tail) + [("graph", _graph_evaluator(core, graph), graph)]
        return _CoreForm(core.k, list(core.e_sources), tail, chain)

    ids = [j for j, role in enumerate(roles) if role.kind == ROLE_IDENTITY]
    copies = [j for j, role in enumerate(roles) if role.kind == ROLE_COPY]
    consts = [j for j, role in enumerate(roles) if role.kind == ROLE_CONSTANT]
    steps = []
    for j in copies:
        phi = roles[j].moebius
        if phi is not None and not phi.is_identity(1e-9):
            steps.append(MoebiusStep(j, phi.inverse()))
    steps.append(PermStep(tuple(ids + copies + consts)))
    rank = {src: pos for pos, src in enumerate(ids)}
    e_sources = [rank[roles[j].source] for j in copies]
    tail = [("const", roles[j].value) for j in consts]
    return _CoreForm(len(ids), e_sources, tail, ConjugationChain(steps))


@dataclass
class NormalForm:
    """Normalized retract: free block, copy block, graph block.

    normalized_map is Phi . rho . Phi^{-1} for the stored conjugation Phi; on
    image points assembled by image_point it agrees with the identity up
    to the recorded residuals.
    """

    n: int
    k: int
    e_sources: tuple
    f_components: list
    conjugation: ConjugationChain
    normalized_map: object
    diagnostics: dict = field(default_factory=dict)

    @property
    def copy_count(self):
        return len(self.e_sources)

    @property
    def graph_count(self):
        return len(self.f_components)

    def image_point(self, x):
        x = np.asarray(x, dtype=complex).reshape(self.k)
        parts = [complex(v) for v in x]
        parts.extend(complex(x[s]) for s in self.e_sources)
        for comp in self.f_components:
            parts.append(comp.evaluate(x))
        return np.array(parts, dtype=complex)

    def to_json(self):
        return {
            "n": int(self.n),
            "k": int(self.k),
            "e_sources": [int(s) for s in self.e_sources],
            "f_components": [comp.to_json() for comp in self.f_components],
            "conjugation": self.conjugation.to_json(),
            "diagnostics": dict(self.diagnostics),
        }


def normal_form(
    rho,
    tol=1e-9,
    grid=12,
    radius=0.85,
    seed=23,
    samples=400,
    newton_tol=1e-12,
):
    """Normal form of an idempotent self-map of the polydisk.

    Verifies idempotence first (InconsistencyError on failure), classifies
    components, conjugates twisted copies to plain ones, peels generic
    components off as fixed-point graphs, and materializes every graph
    component over a grid on the free block together with the residual
    ||rho_norm(v) - v||_inf at each node.
    """
    report = verify_idempotent(
        rho, samples=samples, seed=seed, radius=min(radius + 0.05, 0.95), tol=tol
    )
    if not report["passed"]:
        raise InconsistencyError(
            "map is not idempotent to tolerance %.1e (defect %.3e, max modulus %.6f)"
            % (report["tol"], report["max_defect"], report["max_modulus"])
        )

    opts = {
        "grid": int(grid),
        "radius": float(radius),
        "seed": int(seed),
        "newton_tol": float(newton_tol),
        "scan_samples": 60,
        "scan_radius": min(float(radius), 0.85),
        "role_tol": max(float(tol), 1e-9),
    }
    core = _normalize(rho, opts)
    chain = core.chain

    def normalized_map(v, _rho=rho, _chain=chain, _n=rho.n):
        v = np.asarray(v, dtype=complex).reshape(_n)
        return _chain.apply(_rho(_chain.apply_inverse(v)))

    k = core.k
    m = len(core.e_sources)
    axes = tuple(disk_points(int(grid), float(radius)) for _ in range(k))
    shape = tuple(len(ax) for ax in axes)
    defect_grid = np.zeros(shape, dtype=float)
    value_grids = [np.zeros(shape, dtype=complex) for _ in core.tail]
    for idx in np.ndindex(*shape):
        x = np.array([axes[i][idx[i]] for i in range(k)], dtype=complex)
        v = core.image_vector(x)
        w = normalized_map(v)
        defect_grid[idx] = float(np.max(np.abs(w - v))) if v.size else 0.0
        for t in range(len(core.tail)):
            value_grids[t][idx] = v[k + m + t]

    f_components = []
    for t, item in enumerate(core.tail):
        if item[0] == "const":
            prov = {"method": "constant", "position": k + m + t}
            evaluator = (lambda _z, _c=complex(item[1]): _c)
        else:
            prov = {
                "method": "fixed_point_composition",
                "position": k + m + t,
                "source": dict(item[2].provenance),
            }
            evaluator = item[1]
        f_components.append(
            GraphFunction(
                axes=axes,
                values=value_grids[t],
                residuals=defect_grid.copy(),
                provenance=prov,
                evaluator=evaluator,
            )
        )

    diagnostics = {
        "idempotence": report,
        "normal_form_residual": float(np.max(defect_grid)) if defect_grid.size else 0.0,
        "free_count": int(k),
        "copy_count": int(m),
        "graph_count": len(core.tail),
        "grid": int(grid),
        "radius": float(radius),
        "seed": int(seed),
    }
    return NormalForm(
        n=rho.n,
        k=k,
        e_sources=tuple(core.e_sources),
        f_components=f_components,
        conjugation=chain,
        normalized_map=normalized_map,
        diagnostics=diagnostics,
    )
