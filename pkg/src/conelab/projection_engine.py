"""Euclidean projections onto cone specifications and convex hulls.

Closed forms are used wherever they exist (orthant clipping, halfspaces,
subspaces, the second-order cone, PSD eigenvalue clipping). Finitely generated
cones go through nonnegative least squares, which is an exact active-set
method. Intersections run Dykstra's alternating scheme, and hulls of sampled
point clouds run a projected-gradient phase followed by an active-set polish
with a Frank-Wolfe style optimality certificate.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np
from scipy.optimize import lsq_linear

from .cone_algebra import (
    ConeSpec,
    ConicHull,
    GallerySet,
    Halfspace,
    IntersectionCone,
    LinearImageCone,
    LinearSubspace,
    NonnegativeOrthant,
    PolyhedralCone,
    ProductCone,
    PsdCone,
    SecondOrderCone,
    UnsupportedVariantError,
)
from .linalg_core import DEFAULT_TOL, Tolerance, vec_to_sym, sym_to_vec

__all__ = [
    "ProjectionResult",
    "MoreauSplit",
    "project",
    "moreau_decompose",
    "dykstra_intersection",
    "dykstra_projectors",
    "project_hull",
    "project_conic_generators",
    "NonConvergenceError",
]


class NonConvergenceError(RuntimeError):
    """An iterative projection failed to reach its stopping rule."""

    def __init__(self, message: str, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"{message} (iterations={iterations}, residual={residual:.3e})")


@dataclass(frozen=True)
class ProjectionResult:
    """Projection answer: the nearest point found, its distance from the input,
    which method family produced it, the iteration count, and a nonnegative
    optimality certificate (zero for closed forms)."""

    point: np.ndarray
    distance: float
    method: str  # closed_form | eigen_clip | dykstra | hull_qp
    iterations: int = 0
    certificate_gap: float = 0.0


_METHOD_RANK = {"closed_form": 0, "eigen_clip": 1, "hull_qp": 2, "dykstra": 3}


def _result(x: np.ndarray, p: np.ndarray, method: str, iters: int = 0, gap: float = 0.0) -> ProjectionResult:
    return ProjectionResult(p, float(np.linalg.norm(np.asarray(x) - p)), method, iters, gap)


# ---------------------------------------------------------------------------
# Atomic closed forms
# ---------------------------------------------------------------------------


def _project_soc(x: np.ndarray) -> np.ndarray:
    y, t = x[:-1], float(x[-1])
    ny = float(np.linalg.norm(y))
    if ny <= t:
        return x.copy()
    if ny <= -t:
        return np.zeros_like(x)
    c = (ny + t) / 2.0
    out = np.empty_like(x)
    out[:-1] = (c / ny) * y
    out[-1] = c
    return out


def _project_psd(x: np.ndarray) -> np.ndarray:
    w, U = np.linalg.eigh(vec_to_sym(x))
    wp = np.maximum(w, 0.0)
    return sym_to_vec((U * wp) @ U.T)


def project_scaled_soc(x: np.ndarray, slope: float) -> np.ndarray:
    """Project onto {(v, h) : ||v|| <= slope * h} in closed form."""
    v, h = x[:-1], float(x[-1])
    nv = float(np.linalg.norm(v))
    if nv <= slope * h:
        return x.copy()
    if slope * nv <= -h:
        return np.zeros_like(x)
    hstar = (slope * nv + h) / (slope * slope + 1.0)
    out = np.empty_like(x)
    out[:-1] = (slope * hstar / nv) * v
    out[-1] = hstar
    return out


def project_conic_generators(generators: np.ndarray, x: np.ndarray):
    """Exact projection onto cone{rows of generators}.

    Active-set support growth: solve the bounded least-squares subproblem on
    the current support, then add the generator pairing most positively with
    the residual until none violates the optimality condition
    <g_i, x - p> <= 0. The subproblem objective strictly decreases whenever a
    violator is added, so the loop terminates; a one-shot solve over all
    columns backs it up. Returns (point, weights, kkt_gap)."""
    G = np.asarray(generators, dtype=float)
    x = np.asarray(x, dtype=float)
    n = G.shape[0]
    lam = np.zeros(n)
    scale = max(1.0, float(np.linalg.norm(x)))
    scores = G @ x if n else np.zeros(0)
    if n == 0 or float(scores.max(initial=-np.inf)) <= 0.0:
        # the origin is optimal: every generator points away from x
        gap = float(max(0.0, scores.max(initial=0.0)))
        return np.zeros_like(x), lam, gap
    support = {int(np.argmax(scores))}
    for _ in range(200):
        idx = np.fromiter(support, dtype=int)
        idx.sort()
        sol = lsq_linear(
            G[idx].T, x, bounds=(0.0, np.inf), method="bvls",
            max_iter=max(300, 3 * idx.size),
        )
        lam_s = np.maximum(sol.x, 0.0)
        p = G[idx].T @ lam_s
        pair = G @ (x - p)
        j = int(np.argmax(pair))
        if pair[j] <= 1e-10 * scale:
            lam[:] = 0.0
            lam[idx] = lam_s
            gap = float(max(0.0, pair[j])) + abs(float(lam_s @ pair[idx]))
            return p, lam, gap
        support = {int(i) for i, w in zip(idx, lam_s) if w > 0.0}
        support.add(j)
    sol = lsq_linear(
        G.T, x, bounds=(0.0, np.inf), method="bvls", max_iter=max(1000, 3 * n)
    )
    lam = np.maximum(sol.x, 0.0)
    p = G.T @ lam
    pair = G @ (x - p)
    gap = float(max(0.0, pair.max(initial=0.0))) + abs(float(lam @ pair))
    return p, lam, gap


# hull-point cache for ConicHull specs (sampling can be expensive)
_HULL_POINTS: "weakref.WeakKeyDictionary[ConicHull, np.ndarray]" = weakref.WeakKeyDictionary()


def hull_points(K: ConicHull) -> np.ndarray:
    pts = _HULL_POINTS.get(K)
    if pts is None:
        pts = np.asarray(K.slice_spec.sampler(K.density), dtype=float)
        _HULL_POINTS[K] = pts
    return pts


# ---------------------------------------------------------------------------
# project
# ---------------------------------------------------------------------------


def project(K: ConeSpec, x, tol: Tolerance = DEFAULT_TOL) -> ProjectionResult:
    """Euclidean projection of x onto the spec K."""
    x = K._check_point(x)

    if isinstance(K, GallerySet):
        if K.project_fn is not None:
            return K.project_fn(x)
        if K.inner is not None:
            return project(K.inner, x, tol)
        raise UnsupportedVariantError(f"gallery object {K.name!r} has no projector")

    if isinstance(K, NonnegativeOrthant):
        return _result(x, np.maximum(x, 0.0), "closed_form")

    if isinstance(K, Halfspace):
        v = float(K.normal @ x) - K.offset
        p = x - max(v, 0.0) * K.normal
        return _result(x, p, "closed_form")

    if isinstance(K, LinearSubspace):
        p = (x @ K.basis.T) @ K.basis if K.subspace_dim else np.zeros_like(x)
        return _result(x, p, "closed_form")

    if isinstance(K, SecondOrderCone):
        return _result(x, _project_soc(x), "closed_form")

    if isinstance(K, PsdCone):
        return _result(x, _project_psd(x), "eigen_clip")

    if isinstance(K, PolyhedralCone):
        if K.generators is not None:
            p, lam, gap = project_conic_generators(K.generators, x)
            return _result(x, p, "hull_qp", int(np.count_nonzero(lam)), gap)
        # inequality representation: Moreau with the dual cone's generators,
        # proj_K(x) = x + proj_{K*}(-x) for K = {x : Ax >= 0}, K* = cone{A^T}.
        q, lam, gap = project_conic_generators(K.inequalities, -x)
        return _result(x, x + q, "hull_qp", int(np.count_nonzero(lam)), gap)

    if isinstance(K, ProductCone):
        rl = project(K.left, x[: K.left.dim], tol)
        rr = project(K.right, x[K.left.dim :], tol)
        method = max(rl.method, rr.method, key=_METHOD_RANK.__getitem__)
        return ProjectionResult(
            np.concatenate([rl.point, rr.point]),
            float(np.hypot(rl.distance, rr.distance)),
            method,
            rl.iterations + rr.iterations,
            rl.certificate_gap + rr.certificate_gap,
        )

    if isinstance(K, IntersectionCone):
        return dykstra_intersection(K.parts, x, tol=tol)

    if isinstance(K, LinearImageCone):
        return _project_linear_image(K, x, tol)

    if isinstance(K, ConicHull):
        p, lam, gap = project_conic_generators(hull_points(K), x)
        return _result(x, p, "hull_qp", int(np.count_nonzero(lam)), gap)

    raise UnsupportedVariantError(f"projection not implemented for {type(K).__name__}")


def _project_linear_image(K: LinearImageCone, x: np.ndarray, tol: Tolerance) -> ProjectionResult:
    A = K.matrix
    if K.orthonormal_columns:
        # image of the inner cone under an isometry: push down, project, push up
        u = A.T @ x
        inner = project(K.inner, u, tol)
        p = A @ inner.point
        # distance accounts for the component of x off the column span
        return ProjectionResult(
            p, float(np.linalg.norm(x - p)), inner.method, inner.iterations, inner.certificate_gap
        )
    # general full-column-rank map: accelerated projected gradient on
    # min_z ||A z - x||^2 over z in inner; tagged with the QP family label.
    L = float(np.linalg.norm(A, 2) ** 2)
    z = np.linalg.lstsq(A, x, rcond=None)[0]
    z = project(K.inner, z, tol).point
    zp = z.copy()
    t_acc = 1.0
    last = None
    max_iter = 5000
    for it in range(1, max_iter + 1):
        y = z + ((t_acc - 1) / (t_acc + 2)) * (z - zp)
        g = A.T @ (A @ y - x)
        znew = project(K.inner, y - g / L, tol).point
        zp, z = z, znew
        t_acc += 1.0
        step = float(np.linalg.norm(z - zp))
        scale = max(1.0, float(np.linalg.norm(z)))
        if step <= 1e-12 * scale:
            last = step
            break
        last = step
    p = A @ z
    return ProjectionResult(p, float(np.linalg.norm(x - p)), "hull_qp", it, float(last or 0.0))


# ---------------------------------------------------------------------------
# Moreau decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MoreauSplit:
    """x = cone_part + polar_part with the parts orthogonal; residual is the
    orthogonality defect |<cone_part, polar_part>|."""

    original: np.ndarray
    cone_part: np.ndarray
    polar_part: np.ndarray
    residual: float


def moreau_decompose(K: ConeSpec, x, tol: Tolerance = DEFAULT_TOL) -> MoreauSplit:
    """Split x into its projection onto K and onto the polar cone -K*."""
    x = np.asarray(x, dtype=float)
    p = project(K, x, tol).point
    q = x - p
    return MoreauSplit(x, p, q, abs(float(p @ q)))


# ---------------------------------------------------------------------------
# Dykstra
# ---------------------------------------------------------------------------


def dykstra_projectors(
    projectors,
    x: np.ndarray,
    max_iter: int = 50000,
    tol_change: float = 1e-10,
    method: str = "dykstra",
) -> ProjectionResult:
    """Dykstra's alternating projection scheme over arbitrary closed convex
    sets given as projector callables. Converges to the intersection's
    projection; the convergence metric is the largest change of any
    correction vector over one full sweep."""
    x = np.asarray(x, dtype=float)
    m = len(projectors)
    if m == 0:
        raise ValueError("need at least one projector")
    y = x.copy()
    corrections = [np.zeros_like(x) for _ in range(m)]
    change = np.inf
    for sweep in range(1, max_iter + 1):
        change = 0.0
        for i, proj in enumerate(projectors):
            prev = corrections[i]
            target = y + prev
            p = proj(target)
            newcorr = target - p
            change = max(change, float(np.linalg.norm(newcorr - prev)))
            corrections[i] = newcorr
            y = p
        if change < tol_change:
            return ProjectionResult(y, float(np.linalg.norm(x - y)), method, sweep, change)
    raise NonConvergenceError("Dykstra did not converge", max_iter, change)


def dykstra_intersection(
    parts,
    x,
    max_iter: int = 50000,
    tol_change: float = 1e-10,
    tol: Tolerance = DEFAULT_TOL,
) -> ProjectionResult:
    """Projection onto the intersection of cone specs via Dykstra."""
    projs = [(lambda v, p=p: project(p, v, tol).point) for p in parts]
    x = np.asarray(x, dtype=float)
    return dykstra_projectors(projs, x, max_iter=max_iter, tol_change=tol_change)


# ---------------------------------------------------------------------------
# Convex-hull projection (simplex-constrained QP)
# ---------------------------------------------------------------------------


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho = np.nonzero(u > css / np.arange(1, v.size + 1))[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _fw_gap(points: np.ndarray, x: np.ndarray, y: np.ndarray):
    """Frank-Wolfe duality gap of min ||x - conv(points)|| at the feasible y,
    plus the most violating vertex index."""
    scores = 2.0 * (points - y) @ (x - y)
    j = int(np.argmax(scores))
    return max(0.0, float(scores[j])), j


def project_hull(
    points,
    x,
    gap_tol: float = 1e-10,
    max_iter: int = 20000,
    return_weights: bool = False,
):
    """Exact nearest point of conv(rows of points) from x.

    A short projected-gradient phase with Armijo backtracking produces a good
    support estimate; an active-set polish then solves the equality-constrained
    least-squares system on the support, dropping negative weights and adding
    the most violating vertex until the Frank-Wolfe gap certifies optimality.
    """
    P = np.asarray(points, dtype=float)
    x = np.asarray(x, dtype=float)
    m = P.shape[0]
    if m == 0:
        raise ValueError("empty point set")
    if m == 1:
        y = P[0].copy()
        res = ProjectionResult(y, float(np.linalg.norm(x - y)), "hull_qp", 0, 0.0)
        return (res, np.ones(1)) if return_weights else res

    # phase 1: projected gradient on the simplex
    lam = np.zeros(m)
    lam[int(np.argmin(np.linalg.norm(P - x, axis=1)))] = 1.0
    y = lam @ P
    f = float((x - y) @ (x - y))
    step = 1.0 / max(1.0, float(np.linalg.norm(P, 2) ** 2))
    iters = 0
    for _ in range(120):
        iters += 1
        grad = 2.0 * (P @ (y - x))
        eta = step * m
        for _ in range(30):
            cand = _project_simplex(lam - eta * grad)
            ycand = cand @ P
            fcand = float((x - ycand) @ (x - ycand))
            if fcand <= f - 1e-4 * eta * float(grad @ (lam - cand)) or fcand < f:
                break
            eta *= 0.5
        if fcand >= f - 1e-14 * max(1.0, f):
            if fcand < f:
                lam, y, f = cand, ycand, fcand
            break
        lam, y, f = cand, ycand, fcand
        gap, _ = _fw_gap(P, x, y)
        if gap <= max(gap_tol, 1e-6 * f):
            break

    # phase 2: active-set polish
    support = list(np.nonzero(lam > 1e-12)[0])
    if not support:
        support = [int(np.argmin(np.linalg.norm(P - x, axis=1)))]
    # Caratheodory: an optimal support needs at most d+1 vertices, so a wide
    # phase-1 support is pruned to its heaviest members; the add step below
    # restores anything that still matters.
    cap = max(8, 4 * (P.shape[1] + 1))
    if len(support) > cap:
        order = np.argsort(lam[support])[::-1][:cap]
        support = sorted(support[i] for i in order)
    lam_s = lam[support]
    ssum = lam_s.sum()
    lam_s = lam_s / ssum if ssum > 0 else np.full(len(support), 1.0 / len(support))

    def solve_support(idx):
        Ps = P[idx]
        k = len(idx)
        # KKT system of min ||x - Ps^T mu||^2 subject to sum(mu) = 1
        M = np.zeros((k + 1, k + 1))
        M[:k, :k] = 2.0 * (Ps @ Ps.T)
        M[:k, k] = 1.0
        M[k, :k] = 1.0
        rhs = np.concatenate([2.0 * (Ps @ x), [1.0]])
        sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
        return sol[:k]

    gap = np.inf
    for _ in range(max_iter):
        iters += 1
        mu = solve_support(support)
        if mu.min() < -1e-12:
            # Wolfe drop step: move from lam_s toward mu until a weight hits zero
            d = mu - lam_s
            mask = d < -1e-15
            with np.errstate(divide="ignore", invalid="ignore"):
                steps = -lam_s[mask] / d[mask]
            t_star = float(np.min(steps))
            lam_s = lam_s + min(1.0, t_star) * d
            lam_s = np.maximum(lam_s, 0.0)
            keep = lam_s > 1e-14
            if not np.any(keep):
                keep[int(np.argmax(lam_s))] = True
            support = [s for s, k_ in zip(support, keep) if k_]
            lam_s = lam_s[keep]
            lam_s /= lam_s.sum()
            continue
        lam_s = np.maximum(mu, 0.0)
        lam_s /= lam_s.sum()
        y = lam_s @ P[support]
        gap, j = _fw_gap(P, x, y)
        if gap <= gap_tol:
            break
        if j in support:
            # numerically stuck: the most violating vertex is already active
            break
        support.append(j)
        lam_s = np.append(lam_s, 0.0)

    y = lam_s @ P[support]
    gap, _ = _fw_gap(P, x, y)
    res = ProjectionResult(y, float(np.linalg.norm(x - y)), "hull_qp", iters, float(gap))
    if return_weights:
        full = np.zeros(m)
        full[support] = lam_s
        return res, full
    return res
