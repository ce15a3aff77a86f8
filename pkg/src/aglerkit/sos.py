"""Sum-of-squares certificates for rational inner functions on the bidisk.

For stable p of bidegree (n, m) with reflection p~ there are vector
polynomials A = (A_1..A_r), bidegrees at most (n-1, m), and B = (B_1..B_s),
bidegrees at most (n, m-1), with

    p(z) conj(p(w)) - p~(z) conj(p~(w))
        = (1 - z1 conj(w1)) * sum_j A_j(z) conj(A_j(w))
        + (1 - z2 conj(w2)) * sum_j B_j(z) conj(B_j(w)).

Matching coefficients of z1^a z2^b conj(w1)^c conj(w2)^d turns this into an
affine constraint system on the Gram matrices G_A = sum a_j a_j*,
G_B = sum b_j b_j* over the monomial bases {z1^a z2^b : a <= n-1, b <= m} and
{a <= n, b <= m-1}.  solve_gram finds a PSD pair satisfying the constraints:
a global phase of alternating projections with outer-normal correction on the
PSD cone (Dykstra), plus a rank-truncated Gauss-Newton polish on the spectral
factors, which restores fast local convergence when the feasible set touches
the cone boundary (as it does whenever p has boundary zeros).

Certificates are scale-free: p is normalized to unit coefficient norm
internally and the reported residual is relative to ||p||^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError
from .numerics import eig_hermitian, hermitize, project_psd, psd_factor, AffineProjector
from .poly2 import BivariatePolynomial
from .serialize import FORMAT_TAG, matrix_to_pairs, pairs_to_matrix

SQRT2 = float(np.sqrt(2.0))


# ----------------------------------------------------------------------
# coefficient tensors
# ----------------------------------------------------------------------

def sos_target_tensor(p: BivariatePolynomial) -> np.ndarray:
    """Coefficient tensor T[a, b, c, d] of p(z) conj(p(w)) - p~(z) conj(p~(w))."""
    pc = p.coeffs
    rc = p.reflect().coeffs
    return np.einsum("ab,cd->abcd", pc, pc.conj()) - np.einsum("ab,cd->abcd", rc, rc.conj())


def gram_pair_tensor(gram_a: np.ndarray, gram_b: np.ndarray, n: int, m: int) -> np.ndarray:
    """Coefficient tensor of the right-hand side for the given Gram pair."""
    out = np.zeros((n + 1, m + 1, n + 1, m + 1), dtype=complex)
    if gram_a.size:
        a4 = gram_a.reshape(n, m + 1, n, m + 1)
        out[:n, :, :n, :] += a4
        out[1:, :, 1:, :] -= a4
    if gram_b.size:
        b4 = gram_b.reshape(n + 1, m, n + 1, m)
        out[:, :m, :, :m] += b4
        out[:, 1:, :, 1:] -= b4
    return out


def gram_from_factors(polys: list[BivariatePolynomial], n: int, m: int) -> np.ndarray:
    """Gram matrix sum_j a_j a_j* from factor polynomials over the (n, m) basis."""
    order = (n + 1) * (m + 1)
    gram = np.zeros((order, order), dtype=complex)
    for poly in polys:
        vec = poly.padded((n, m)).coeffs.ravel()
        gram += np.outer(vec, vec.conj())
    return gram


def factors_from_gram(gram: np.ndarray, degrees: tuple) -> list[BivariatePolynomial]:
    """Spectral factor polynomials of a Hermitian Gram matrix.

    Inverse of gram_from_factors up to unitary mixing: the returned list
    satisfies sum_k a_k a_k* = PSD part of gram.  Negative eigenvalues are
    clipped at zero, so a corrupted matrix yields factors whose sum of
    squares no longer matches it and downstream identity checks flag the
    discrepancy instead of crashing here.
    """
    n_b, m_b = degrees
    order = (n_b + 1) * (m_b + 1)
    g = np.asarray(gram, dtype=complex)
    if g.shape != (order, order):
        raise ValueError(
            "Gram matrix of shape %s does not match basis bidegree (%d, %d)"
            % (g.shape, n_b, m_b)
        )
    g = 0.5 * (g + g.conj().T)
    vals, vecs = np.linalg.eigh(g)
    cutoff = 1e-14 * max(float(vals[-1]) if vals.size else 0.0, 1.0)
    polys = []
    for lam, column in zip(vals, vecs.T):
        if lam <= cutoff:
            continue
        coeffs = (np.sqrt(lam) * column).reshape(n_b + 1, m_b + 1)
        polys.append(BivariatePolynomial(coeffs))
    return polys


def sos_residual(
    p: BivariatePolynomial,
    a_polys: list[BivariatePolynomial],
    b_polys: list[BivariatePolynomial],
) -> float:
    """Max coefficient mismatch of the decomposition identity (absolute)."""
    n, m = p.bidegree
    gram_a = gram_from_factors(a_polys, n - 1, m) if n > 0 else np.zeros((0, 0), complex)
    gram_b = gram_from_factors(b_polys, n, m - 1) if m > 0 else np.zeros((0, 0), complex)
    diff = gram_pair_tensor(gram_a, gram_b, n, m) - sos_target_tensor(p)
    return float(np.max(np.abs(diff)))


# ----------------------------------------------------------------------
# real parametrization of Hermitian pairs
# ----------------------------------------------------------------------

def herm_to_vec(mat: np.ndarray) -> np.ndarray:
    """Isometric real parametrization: diagonal, then sqrt(2) * upper triangle."""
    order = mat.shape[0]
    iu = np.triu_indices(order, 1)
    return np.concatenate([
        mat.diagonal().real,
        SQRT2 * mat[iu].real,
        SQRT2 * mat[iu].imag,
    ])


def vec_to_herm(vec: np.ndarray, order: int) -> np.ndarray:
    mat = np.zeros((order, order), dtype=complex)
    mat[np.diag_indices(order)] = vec[:order]
    k = order * (order - 1) // 2
    re = vec[order:order + k] / SQRT2
    im = vec[order + k:order + 2 * k] / SQRT2
    iu = np.triu_indices(order, 1)
    mat[iu] = re + 1j * im
    mat[iu[1], iu[0]] = re - 1j * im
    return mat


class _Parametrization:
    """Split/join between (G_A, G_B) and the stacked real parameter vector."""

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        self.order_a = n * (m + 1)
        self.order_b = (n + 1) * m
        self.len_a = self.order_a ** 2
        self.len_b = self.order_b ** 2
        self.length = self.len_a + self.len_b

    def pack(self, gram_a, gram_b) -> np.ndarray:
        return np.concatenate([herm_to_vec(gram_a), herm_to_vec(gram_b)])

    def unpack(self, vec) -> tuple[np.ndarray, np.ndarray]:
        return (
            vec_to_herm(vec[: self.len_a], self.order_a),
            vec_to_herm(vec[self.len_a:], self.order_b),
        )

    def tensor(self, vec) -> np.ndarray:
        gram_a, gram_b = self.unpack(vec)
        return gram_pair_tensor(gram_a, gram_b, self.n, self.m)


def build_constraints(p: BivariatePolynomial) -> tuple[np.ndarray, np.ndarray, "_Parametrization"]:
    """Real linear system E theta = d equivalent to the coefficient matching.

    Columns are probed through the (linear) Gram-to-tensor map, one per real
    parameter of the Hermitian pair; rows stack real and imaginary parts of
    every coefficient equation.
    """
    n, m = p.bidegree
    par = _Parametrization(n, m)
    target = sos_target_tensor(p)
    d_vec = np.concatenate([target.real.ravel(), target.imag.ravel()])
    e_mat = np.zeros((d_vec.size, par.length))
    probe = np.zeros(par.length)
    for k in range(par.length):
        probe[k] = 1.0
        tens = par.tensor(probe)
        e_mat[:, k] = np.concatenate([tens.real.ravel(), tens.imag.ravel()])
        probe[k] = 0.0
    return e_mat, d_vec, par


# ----------------------------------------------------------------------
# certificate container
# ----------------------------------------------------------------------

@dataclass
class SosCertificate:
    p: BivariatePolynomial
    p_tilde: BivariatePolynomial
    gram_a: np.ndarray
    gram_b: np.ndarray
    a_polys: list[BivariatePolynomial]
    b_polys: list[BivariatePolynomial]
    residual: float  # max coefficient mismatch, relative to ||p||_2^2
    iterations: int
    seed: int
    tol: float
    polish_iterations: int = 0
    residual_trace: np.ndarray | None = field(default=None, repr=False)

    @property
    def rank_a(self) -> int:
        return len(self.a_polys)

    @property
    def rank_b(self) -> int:
        return len(self.b_polys)

    def to_json(self) -> dict:
        return {
            "format": FORMAT_TAG,
            "p": self.p.to_json(),
            "p_tilde": self.p_tilde.to_json(),
            "G_A": matrix_to_pairs(self.gram_a),
            "G_B": matrix_to_pairs(self.gram_b),
            "A_polys": [q.to_json() for q in self.a_polys],
            "B_polys": [q.to_json() for q in self.b_polys],
            "residual": self.residual,
            "iterations": self.iterations,
            "polish_iterations": self.polish_iterations,
            "seed": self.seed,
            "tol": self.tol,
        }

    @classmethod
    def from_json(cls, obj) -> "SosCertificate":
        return cls(
            p=BivariatePolynomial.from_json(obj["p"]),
            p_tilde=BivariatePolynomial.from_json(obj["p_tilde"]),
            gram_a=pairs_to_matrix(obj["G_A"]) if obj["G_A"] else np.zeros((0, 0), complex),
            gram_b=pairs_to_matrix(obj["G_B"]) if obj["G_B"] else np.zeros((0, 0), complex),
            a_polys=[BivariatePolynomial.from_json(q) for q in obj["A_polys"]],
            b_polys=[BivariatePolynomial.from_json(q) for q in obj["B_polys"]],
            residual=float(obj["residual"]),
            iterations=int(obj["iterations"]),
            seed=int(obj["seed"]),
            tol=float(obj["tol"]),
            polish_iterations=int(obj.get("polish_iterations", 0)),
        )


# ----------------------------------------------------------------------
# Gauss-Newton polish on spectral factors
# ----------------------------------------------------------------------

def _factor_residual(par, target, x_fac, y_fac):
    gram_a = x_fac @ x_fac.conj().T if x_fac.size else np.zeros((par.order_a, par.order_a), complex)
    gram_b = y_fac @ y_fac.conj().T if y_fac.size else np.zeros((par.order_b, par.order_b), complex)
    diff = gram_pair_tensor(gram_a, gram_b, par.n, par.m) - target
    return np.concatenate([diff.real.ravel(), diff.imag.ravel()])


def _factor_jacobian(par, x_fac, y_fac):
    """Real Jacobian of the factor residual; columns follow Re/Im of each entry."""
    cols = []

    def push(block, order, is_a):
        rows, rank = block.shape
        for j in range(rank):
            for u in range(rows):
                for real_part in (True, False):
                    unit = np.zeros((rows, rank), dtype=complex)
                    unit[u, j] = 1.0 if real_part else 1.0j
                    dg = unit @ block.conj().T + block @ unit.conj().T
                    if is_a:
                        tens = gram_pair_tensor(dg, np.zeros((par.order_b, par.order_b), complex),
                                                par.n, par.m)
                    else:
                        tens = gram_pair_tensor(np.zeros((par.order_a, par.order_a), complex), dg,
                                                par.n, par.m)
                    cols.append(np.concatenate([tens.real.ravel(), tens.imag.ravel()]))

    if x_fac.size:
        push(x_fac, par.order_a, True)
    if y_fac.size:
        push(y_fac, par.order_b, False)
    return np.stack(cols, axis=1) if cols else np.zeros((2 * (par.n + 1) ** 2 * (par.m + 1) ** 2, 0))


def _apply_step(x_fac, y_fac, step, scale):
    na = x_fac.size
    dx = (step[:2 * na:2] + 1j * step[1:2 * na:2]) if na else np.zeros(0)
    dy = (step[2 * na::2] + 1j * step[2 * na + 1::2]) if y_fac.size else np.zeros(0)
    x_new = x_fac + scale * dx.reshape(x_fac.shape, order="F") if na else x_fac
    y_new = y_fac + scale * dy.reshape(y_fac.shape, order="F") if y_fac.size else y_fac
    return x_new, y_new


def _gauss_newton(par, target, x_fac, y_fac, tol, max_iter=40):
    """Local refinement of the factor pair; returns (x, y, iterations) or None.

    Iterates past the acceptance tolerance while steps keep improving, down
    to a floor well below it, and hands back the best iterate seen.
    """
    floor = max(tol * 1e-4, 1e-14)
    best = (np.inf, x_fac, y_fac, 0)
    for it in range(max_iter):
        res = _factor_residual(par, target, x_fac, y_fac)
        norm_inf = float(np.max(np.abs(res), initial=0.0))
        if norm_inf < best[0]:
            best = (norm_inf, x_fac, y_fac, it)
        if norm_inf <= floor:
            return x_fac, y_fac, it
        jac = _factor_jacobian(par, x_fac, y_fac)
        if jac.shape[1] == 0:
            break
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        improved = False
        for scale in (1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125):
            x_new, y_new = _apply_step(x_fac, y_fac, step, scale)
            res_new = _factor_residual(par, target, x_new, y_new)
            if float(np.max(np.abs(res_new), initial=0.0)) < norm_inf:
                x_fac, y_fac = x_new, y_new
                improved = True
                break
        if not improved:
            break
    res = _factor_residual(par, target, x_fac, y_fac)
    norm_inf = float(np.max(np.abs(res), initial=0.0))
    if norm_inf < best[0]:
        best = (norm_inf, x_fac, y_fac, max_iter)
    if best[0] <= tol:
        return best[1], best[2], best[3]
    return None


def _rank_candidates(gram, thresholds):
    w, _ = eig_hermitian(gram)
    if w.size == 0:
        return [0]
    top = max(float(w[-1]), 0.0)
    ranks = []
    for rel in thresholds:
        r = int(np.sum(w > rel * top)) if top > 0 else 0
        if r not in ranks:
            ranks.append(r)
    if w.size not in ranks:
        ranks.append(int(w.size))
    return ranks


def _truncated_factor(gram, rank):
    if rank == 0:
        return np.zeros((gram.shape[0], 0), dtype=complex)
    w, v = eig_hermitian(gram)
    w = np.clip(w, 0.0, None)
    idx = np.argsort(w)[::-1][:rank]
    return v[:, idx] * np.sqrt(w[idx])


def _attempt_polish(par, target, gram_a, gram_b, tol):
    thresholds = (1e-2, 1e-4, 1e-8)
    for ra, rb in zip(_rank_candidates(gram_a, thresholds), _rank_candidates(gram_b, thresholds)):
        x0 = _truncated_factor(gram_a, ra)
        y0 = _truncated_factor(gram_b, rb)
        result = _gauss_newton(par, target, x0, y0, tol)
        if result is not None:
            return result
    # last resort: full-rank factors
    x0 = _truncated_factor(gram_a, gram_a.shape[0])
    y0 = _truncated_factor(gram_b, gram_b.shape[0])
    return _gauss_newton(par, target, x0, y0, tol)


# ----------------------------------------------------------------------
# solver
# ----------------------------------------------------------------------

_POLISH_CHECKPOINTS = (500, 1500, 4000, 10000, 25000, 60000, 150000)


def solve_gram(
    p: BivariatePolynomial,
    tol: float = 1e-9,
    max_iter: int = 200000,
    seed: int = 42,
    rank_tol: float = 1e-9,
    polish: bool = True,
) -> SosCertificate:
    """Find a PSD Gram pair certifying the decomposition identity for p.

    Stability of p is the caller's responsibility (gate with check_stability);
    for unstable p the PSD constraint is infeasible and the solver raises
    InfeasibleError with the best residual reached.
    """
    scale = p.coeff_norm()
    if scale == 0.0:
        raise ValueError("cannot decompose the zero polynomial")
    p_norm = p.scale(1.0 / scale)
    n, m = p.bidegree

    e_mat, d_vec, par = build_constraints(p_norm)
    target = sos_target_tensor(p_norm)
    projector = AffineProjector(e_mat, d_vec)
    scale_free = 1.0 + float(np.max(np.abs(d_vec), initial=0.0))
    if projector.consistency_defect > 1e-10 * scale_free:
        raise InfeasibleError(
            "coefficient constraints are inconsistent",
            residual=projector.consistency_defect, iterations=0,
        )

    rng = np.random.default_rng(seed)

    def random_hermitian(order):
        if order == 0:
            return np.zeros((0, 0), dtype=complex)
        raw = rng.standard_normal((order, order)) + 1j * rng.standard_normal((order, order))
        return hermitize(raw)

    x_vec = projector.project(par.pack(random_hermitian(par.order_a),
                                       random_hermitian(par.order_b)))
    correction = np.zeros_like(x_vec)

    trace = []
    best_res = np.inf
    best_pair = None
    converged = False
    polish_out = None
    iterations = 0

    for k in range(max_iter):
        iterations = k + 1
        gram_a, gram_b = par.unpack(x_vec + correction)
        psd_a = project_psd(gram_a)
        psd_b = project_psd(gram_b)
        y_vec = par.pack(psd_a, psd_b)
        correction = (x_vec + correction) - y_vec

        res = float(np.max(np.abs(gram_pair_tensor(psd_a, psd_b, n, m) - target)))
        trace.append(res)
        if res < best_res:
            best_res = res
            best_pair = (psd_a, psd_b)
        if res <= tol:
            converged = True
            break
        if polish and (iterations in _POLISH_CHECKPOINTS):
            polish_out = _attempt_polish(par, target, psd_a, psd_b, tol)
            if polish_out is not None:
                break
        x_vec = projector.project(y_vec)

    if not converged and polish_out is None and polish and best_pair is not None:
        polish_out = _attempt_polish(par, target, best_pair[0], best_pair[1], tol)

    polish_iterations = 0
    if polish_out is not None:
        x_fac, y_fac, polish_iterations = polish_out
        gram_a = x_fac @ x_fac.conj().T if x_fac.size else np.zeros((par.order_a,) * 2, complex)
        gram_b = y_fac @ y_fac.conj().T if y_fac.size else np.zeros((par.order_b,) * 2, complex)
        gram_a, gram_b = hermitize(gram_a), hermitize(gram_b)
        a_cols = [x_fac[:, j] for j in range(x_fac.shape[1])] if x_fac.size else []
        b_cols = [y_fac[:, j] for j in range(y_fac.shape[1])] if y_fac.size else []
    elif converged:
        gram_a, gram_b = best_pair
        fac_a = psd_factor(gram_a, rank_tol) if gram_a.size else np.zeros((0, 0), complex)
        fac_b = psd_factor(gram_b, rank_tol) if gram_b.size else np.zeros((0, 0), complex)
        a_cols = [fac_a[:, j] for j in range(fac_a.shape[1])]
        b_cols = [fac_b[:, j] for j in range(fac_b.shape[1])]
    else:
        raise InfeasibleError(
            f"no PSD Gram pair within tolerance {tol:.1e} "
            f"(best residual {best_res:.3e} after {iterations} iterations)",
            residual=best_res, iterations=iterations,
        )

    final_res = float(np.max(np.abs(gram_pair_tensor(gram_a, gram_b, n, m) - target)))
    if final_res > tol:
        raise InfeasibleError(
            f"refined residual {final_res:.3e} still above tolerance {tol:.1e}",
            residual=final_res, iterations=iterations,
        )

    def col_to_poly(col, rows, cols_):
        return BivariatePolynomial((col * scale).reshape(rows, cols_))

    a_polys = [col_to_poly(c, n, m + 1) for c in a_cols] if n > 0 else []
    b_polys = [col_to_poly(c, n + 1, m) for c in b_cols] if m > 0 else []

    return SosCertificate(
        p=p,
        p_tilde=p.reflect(),
        gram_a=gram_a * scale ** 2,
        gram_b=gram_b * scale ** 2,
        a_polys=a_polys,
        b_polys=b_polys,
        residual=final_res,
        iterations=iterations,
        seed=seed,
        tol=tol,
        polish_iterations=polish_iterations,
        residual_trace=np.asarray(trace),
    )


# ----------------------------------------------------------------------
# symmetrization
# ----------------------------------------------------------------------

@dataclass
class SymmetrizedVectors:
    """Reflection-closed factor vectors, scaled so the Gram sums are unchanged.

    The list a holds (1/sqrt(2)) * [A_1..A_r, A~_1..A~_r] with reflections at
    bidegree (n-1, m); likewise b at bidegree (n, m-1).  Componentwise
    reflection permutes each list, so |a(z)| = |a~(z)| pointwise, which is
    what the Cauchy-Schwarz bound between the difference and Pick kernels
    needs.
    """

    a: list[BivariatePolynomial]
    b: list[BivariatePolynomial]
    a_degrees: tuple[int, int]
    b_degrees: tuple[int, int]

    def a_reflected(self) -> list[BivariatePolynomial]:
        return [q.reflect(self.a_degrees) for q in self.a]

    def b_reflected(self) -> list[BivariatePolynomial]:
        return [q.reflect(self.b_degrees) for q in self.b]


def symmetrize(cert: SosCertificate) -> SymmetrizedVectors:
    if cert.residual > cert.tol:
        raise ValueError("certificate residual exceeds its tolerance")
    n, m = cert.p.bidegree
    a_deg, b_deg = (n - 1, m), (n, m - 1)
    inv = 1.0 / SQRT2
    a_half = [q.padded(a_deg).scale(inv) for q in cert.a_polys]
    b_half = [q.padded(b_deg).scale(inv) for q in cert.b_polys]
    return SymmetrizedVectors(
        a=a_half + [q.reflect(a_deg) for q in a_half],
        b=b_half + [q.reflect(b_deg) for q in b_half],
        a_degrees=a_deg,
        b_degrees=b_deg,
    )
