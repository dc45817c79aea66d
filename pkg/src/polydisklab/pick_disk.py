"""One-variable Pick interpolation: solvability, minimal norms, Blaschke
construction, and the infinitesimal l1 extremality test at the origin.

Value data uses the classical Pick matrix
(1 - w_i conj(w_j)) / (1 - lambda_i conj(lambda_j)); first-derivative
constraints extend it with the mixed Wirtinger derivatives of the same
kernel.  Minimal norms come from bisection over positive semidefiniteness,
Blaschke interpolants from the Schur reduction, and the origin test from
an iteratively reweighted least-squares l1 minimizer with an LP
cross-check.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from scipy.optimize import linprog

from .disk_geometry import BlaschkeProduct, check_disk_point
from .errors import (
    ConditioningError,
    DegenerateDataError,
    DomainError,
    InfeasibleConstraintsError,
)

# Eigenvalues above this threshold count as nonnegative.
PSD_TOL = -1e-11

# Window above zero inside which the smallest eigenvalue marks extremality.
SINGULAR_WINDOW = 1e-8

# Bisection bracket ceiling and absolute tolerance for minimal_norm.
NORM_BRACKET_HI = 1e3
NORM_TOL = 1e-10

# Interpolation residual allowed for constructed Blaschke products.
INTERP_TOL = 1e-8


@dataclasses.dataclass(frozen=True)
class DiskPickData:
    """Interpolation data on the disk: nodes, targets, and optional
    first-derivative constraints given as (node index, value) pairs."""

    nodes: tuple
    targets: tuple
    derivative_constraints: tuple = ()

    def __post_init__(self):
        nodes = tuple(check_disk_point(z) for z in self.nodes)
        targets = tuple(complex(w) for w in self.targets)
        if len(nodes) != len(targets):
            raise DomainError("need one target per node")
        if len(nodes) == 0:
            raise DegenerateDataError("empty interpolation data")
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if nodes[i] == nodes[j]:
                    raise DegenerateDataError(f"coincident nodes at index {i}, {j}")
        derivs = tuple(
            (int(i), complex(v)) for i, v in self.derivative_constraints
        )
        for i, _ in derivs:
            if not 0 <= i < len(nodes):
                raise DomainError(f"derivative constraint at bad index {i}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "derivative_constraints", derivs)

    @property
    def n(self):
        return len(self.nodes)


def _extended_pick(nodes, targets, derivs):
    """Pick matrix extended by first-derivative rows.

    Rows are all value constraints in node order, then one row per
    derivative constraint.  Entries are the mixed Wirtinger derivatives
    of K(x, y) = (1 - f(x) conj(f(y))) / (1 - x conj(y)).
    """
    n = len(nodes)
    lam = np.asarray(nodes, dtype=complex)
    w = np.asarray(targets, dtype=complex)
    idx = [i for i, _ in derivs]
    dv = np.asarray([v for _, v in derivs], dtype=complex)

    D = 1.0 - np.outer(lam, np.conj(lam))
    N = 1.0 - np.outer(w, np.conj(w))
    m = n + len(idx)
    A = np.zeros((m, m), dtype=complex)
    A[:n, :n] = N / D

    for a, (i, vi) in enumerate(zip(idx, dv)):
        for j in range(n):
            d = D[i, j]
            A[n + a, j] = (-vi * np.conj(w[j])) / d + N[i, j] * np.conj(lam[j]) / d**2
    A[:n, n:] = np.conj(A[n:, :n]).T

    for a, (i, vi) in enumerate(zip(idx, dv)):
        for b, (j, vj) in enumerate(zip(idx, dv)):
            d = D[i, j]
            A[n + a, n + b] = (
                -vi * np.conj(vj) / d
                - vi * np.conj(w[j]) * lam[i] / d**2
                - w[i] * np.conj(vj) * np.conj(lam[j]) / d**2
                + N[i, j] / d**2
                + 2.0 * N[i, j] * lam[i] * np.conj(lam[j]) / d**3
            )
    return 0.5 * (A + np.conj(A.T))


def pick_matrix(data):
    """Hermitian Pick matrix of the data at norm level 1."""
    return _extended_pick(data.nodes, data.targets, data.derivative_constraints)


def _pick_at(data, t):
    targets = tuple(w / t for w in data.targets)
    derivs = tuple((i, v / t) for i, v in data.derivative_constraints)
    return _extended_pick(data.nodes, targets, derivs)


def solvable(data, t, psd_tol=PSD_TOL):
    """True iff the data scaled by 1/t admits a Schur-class interpolant."""
    if not t > 0:
        raise DomainError("norm level t must be positive")
    return float(np.linalg.eigvalsh(_pick_at(data, t)).min()) >= psd_tol


def _solvable_strict(data, t):
    # Bisection predicate with a scale-relative threshold.  The default
    # PSD_TOL = -1e-11 is fine for yes/no queries but biases the
    # bisection root by |PSD_TOL| / slope, which can exceed 1e-9 when
    # the smallest eigenvalue crosses zero slowly.
    M = _pick_at(data, t)
    floor = -1e-13 * max(1.0, float(np.linalg.norm(M)))
    return float(np.linalg.eigvalsh(M).min()) >= floor


def minimal_norm(data):
    """Smallest t with solvable(data, t), to 1e-9 absolute.

    Equals the sup norm of the minimal-norm interpolant.
    """
    wmax = max(abs(w) for w in data.targets)
    dmax = max((abs(v) for _, v in data.derivative_constraints), default=0.0)
    if wmax == 0.0 and dmax == 0.0:
        return 0.0
    lo = max(wmax, 1e-12)
    if _solvable_strict(data, lo):
        return lo
    hi = NORM_BRACKET_HI
    while not _solvable_strict(data, hi):
        hi *= 2.0
        if hi > 1e12:
            raise ConditioningError("no solvable level found below 1e12")
    while hi - lo > NORM_TOL:
        mid = 0.5 * (lo + hi)
        if _solvable_strict(data, mid):
            hi = mid
        else:
            lo = mid
    return hi


def is_extremal(data):
    """True iff the Pick matrix at level 1 is PSD and singular."""
    lam_min = float(np.linalg.eigvalsh(pick_matrix(data)).min())
    return PSD_TOL <= lam_min <= SINGULAR_WINDOW


def _poly_mul(p, q):
    return np.convolve(p, q)


def _schur_reduce(nodes, values):
    # returns ascending-coefficient (P, Q) with F = P/Q interpolating
    if len(nodes) == 1:
        return np.array([values[0]], dtype=complex), np.array([1.0], dtype=complex)
    alpha = values[0]
    base = nodes[0]
    if abs(alpha) >= 1.0 - 1e-12:
        spread = max(abs(v - alpha) for v in values)
        if spread > 1e-7:
            raise ConditioningError(
                "unimodular value with inconsistent remaining data"
            )
        return np.array([alpha], dtype=complex), np.array([1.0], dtype=complex)
    gvals = []
    for lam, u in zip(nodes[1:], values[1:]):
        num = (u - alpha) / (1.0 - np.conj(alpha) * u)
        den = (lam - base) / (1.0 - np.conj(base) * lam)
        g = num / den
        if abs(g) > 1.0 + 1e-6:
            raise ConditioningError(
                f"Schur step produced |g| = {abs(g):.9f} > 1; data is too "
                "close to the boundary of solvability"
            )
        gvals.append(g)
    P1, Q1 = _schur_reduce(nodes[1:], gvals)
    blo = np.array([-base, 1.0], dtype=complex)
    bhi = np.array([1.0, -np.conj(base)], dtype=complex)
    P = alpha * _poly_mul(bhi, Q1) + _poly_mul(blo, P1)
    Q = _poly_mul(bhi, Q1) + np.conj(alpha) * _poly_mul(blo, P1)
    return P, Q


def schur_construct(data):
    """Blaschke-product interpolant at the minimal norm level.

    Runs the Schur reduction on the data scaled to the Schur class, then
    extracts zeros and the unimodular constant from the resulting
    rational function.  Degree is at most n - 1; interpolation residual
    is verified to 1e-8.
    """
    if data.derivative_constraints:
        raise DomainError(
            "schur_construct supports value constraints only; derivative "
            "data is handled by the solvability tests"
        )
    t = minimal_norm(data)
    if t == 0.0:
        raise DegenerateDataError(
            "identically zero data has no Blaschke representation"
        )
    values = [w / t for w in data.targets]
    P, Q = _schur_reduce(list(data.nodes), values)

    scale = np.max(np.abs(P))
    if scale == 0.0:
        raise DegenerateDataError("constructed interpolant is identically zero")
    keep = len(P)
    while keep > 1 and abs(P[keep - 1]) <= 1e-10 * scale:
        keep -= 1
    P = P[:keep]

    if keep == 1:
        zeros = []
    else:
        zeros = list(np.roots(P[::-1]))
    # The recursion can leave a common factor in P and Q (extremal data
    # sampled at more nodes than the Blaschke degree); cancel any root
    # of P that Q also annihilates.  The final interpolation-residual
    # check below guards against over-cancellation.
    qscale = float(np.max(np.abs(Q)))
    survivors = []
    for z in zeros:
        qval = abs(np.polyval(Q[::-1], z))
        if qval > 1e-6 * qscale * max(1.0, abs(z)) ** (len(Q) - 1):
            survivors.append(z)
    zeros = survivors
    inside = [z for z in zeros if abs(z) < 1.0 - 1e-12]
    if len(inside) != len(zeros):
        raise ConditioningError(
            "interpolant zero on or outside the unit circle; nodes are too "
            "close to the boundary for a stable construction"
        )

    def b0(z):
        val = 1.0 + 0.0j
        for a in inside:
            val *= (z - a) / (1.0 - np.conj(a) * z)
        return val

    consts = []
    for lam, u in zip(data.nodes, values):
        denom = b0(lam)
        if abs(denom) > 1e-8:
            consts.append(u / denom)
    if not consts:
        raise ConditioningError("could not normalize the unimodular constant")
    c = consts[0]
    if abs(abs(c) - 1.0) > 1e-6:
        raise ConditioningError(
            f"constructed constant has modulus {abs(c):.9f}, not unimodular"
        )
    inside, c, s = _polish_blaschke(data.nodes, values, inside, c / abs(c))
    result = BlaschkeProduct(
        zeros=tuple(inside), unimodular_constant=c, scale=t * s
    )
    resid = max(
        abs(result(lam) - w) for lam, w in zip(data.nodes, data.targets)
    )
    if resid > INTERP_TOL * max(1.0, t):
        raise ConditioningError(
            f"interpolation residual {resid:.3e} exceeds {INTERP_TOL:.0e}"
        )
    return result


def _polish_blaschke(nodes, values, zeros, c):
    """Gauss-Newton refinement of Blaschke zeros, phase, and scale.

    The Schur recursion seeds the zeros well but can lose a few digits
    on clustered nodes, and the bisection error in the norm level is
    inconsistent with an exact fit (it amplifies into the recovered
    zeros).  Refining zeros, phase, and a free scale factor together
    makes the system square and restores machine precision.  Falls back
    to the seed on any failure.
    """
    lams = np.array(nodes, dtype=complex)
    vals = np.array(values, dtype=complex)
    a = np.array(zeros, dtype=complex)
    th = float(np.angle(c))
    ls = 0.0
    k = len(a)

    def model(a_, th_, ls_):
        out = np.exp(ls_ + 1j * th_) * np.ones_like(lams)
        for j in range(k):
            out = out * (lams - a_[j]) / (1.0 - np.conj(a_[j]) * lams)
        return out

    best = (a.copy(), th, ls)
    best_res = float(np.max(np.abs(model(a, th, ls) - vals)))
    if best_res < 1e-13 * max(1.0, float(np.max(np.abs(vals)))):
        return list(a), np.exp(1j * th), 1.0
    try:
        for _ in range(25):
            f = model(a, th, ls)
            r = f - vals
            res = float(np.max(np.abs(r)))
            if res < best_res:
                best = (a.copy(), th, ls)
                best_res = res
            if res < 1e-14:
                break
            cols = []
            with np.errstate(divide="ignore", invalid="ignore"):
                for j in range(k):
                    dx = f * (-1.0 / (lams - a[j])
                              + lams / (1.0 - np.conj(a[j]) * lams))
                    dy = f * (-1j / (lams - a[j])
                              - 1j * lams / (1.0 - np.conj(a[j]) * lams))
                    cols.extend([dx, dy])
            cols.append(1j * f)
            cols.append(f)
            J = np.array(cols).T
            if not np.all(np.isfinite(J)):
                break
            Jr = np.vstack([J.real, J.imag])
            rr = np.concatenate([r.real, r.imag])
            step, *_ = np.linalg.lstsq(Jr, -rr, rcond=None)
            damp = 1.0
            for _ in range(8):
                a_new = a + damp * (step[0:2 * k:2] + 1j * step[1:2 * k:2])
                th_new = th + damp * step[-2]
                ls_new = ls + damp * step[-1]
                if np.all(np.abs(a_new) < 1.0 - 1e-12) and abs(ls_new) < 0.5:
                    r_new = float(np.max(np.abs(model(a_new, th_new, ls_new) - vals)))
                    if r_new < res:
                        a, th, ls = a_new, th_new, ls_new
                        break
                damp *= 0.5
            else:
                break
    except (np.linalg.LinAlgError, FloatingPointError, ZeroDivisionError):
        pass
    if float(np.max(np.abs(model(a, th, ls) - vals))) > best_res:
        a, th, ls = best
    return list(a), np.exp(1j * th), float(np.exp(ls))


@dataclasses.dataclass(frozen=True)
class CPDataOrigin:
    """Infinitesimal data at the origin: directions v^k with prescribed
    derivative values u^k for a map psi with psi(0) = 0."""

    vectors: tuple
    targets: tuple

    def __post_init__(self):
        vecs = tuple(tuple(complex(x) for x in v) for v in self.vectors)
        targs = tuple(complex(u) for u in self.targets)
        if len(vecs) != len(targs):
            raise DomainError("need one target per direction vector")
        if len(vecs) == 0:
            raise DegenerateDataError("empty infinitesimal data")
        dims = {len(v) for v in vecs}
        if len(dims) != 1:
            raise DomainError("direction vectors have mixed dimensions")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "targets", targs)

    @property
    def d(self):
        return len(self.vectors[0])


def _irls_l1(V, u):
    """Minimize the l1 norm of complex c subject to V c = u.

    Equality-constrained iteratively reweighted least squares with
    epsilon smoothing swept from 1e-3 down to 1e-12.
    """
    K, d = V.shape
    c, *_ = np.linalg.lstsq(V, u, rcond=None)
    if np.linalg.norm(V @ c - u) > 1e-9 * max(1.0, np.linalg.norm(u)):
        raise InfeasibleConstraintsError("constraint system V c = u has no solution")
    if np.linalg.matrix_rank(V, tol=1e-12) == d:
        return c
    for eps in np.geomspace(1e-3, 1e-12, 60):
        for _ in range(3):
            wts = 1.0 / np.sqrt(np.abs(c) ** 2 + eps**2)
            Winv = 1.0 / wts
            M = (V * Winv[None, :]) @ np.conj(V.T)
            mu = np.linalg.lstsq(M, u, rcond=None)[0]
            c = Winv * (np.conj(V.T) @ mu)
    return c


def _l1_minimum_lp(V, u, phases=32):
    """Coarse LP relaxation of the same l1 problem.

    Approximates |c_r| by the maximum of Re(exp(-i phi) c_r) over a phase
    grid, giving a lower bound within a factor cos(pi / phases).  Used as
    an independent check on the IRLS path.
    """
    K, d = V.shape
    nv = 3 * d  # x_r, y_r, t_r
    cost = np.concatenate([np.zeros(2 * d), np.ones(d)])
    phis = 2.0 * np.pi * np.arange(phases) / phases
    A_ub = np.zeros((phases * d, nv))
    for s, phi in enumerate(phis):
        for r in range(d):
            row = s * d + r
            A_ub[row, r] = np.cos(phi)
            A_ub[row, d + r] = np.sin(phi)
            A_ub[row, 2 * d + r] = -1.0
    b_ub = np.zeros(phases * d)
    A_eq = np.zeros((2 * K, nv))
    A_eq[:K, :d] = V.real
    A_eq[:K, d : 2 * d] = -V.imag
    A_eq[K:, :d] = V.imag
    A_eq[K:, d : 2 * d] = V.real
    b_eq = np.concatenate([u.real, u.imag])
    bounds = [(None, None)] * (2 * d) + [(0, None)] * d
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds)
    if not res.success:
        raise InfeasibleConstraintsError(f"LP relaxation failed: {res.message}")
    return float(res.fun)


def infinitesimal_extremal_origin(data):
    """Minimal l1 coefficient norm matching the origin derivative data.

    Returns (norm_lower_bound, extremal, witness): the minimum of
    ||c||_1 over c with c . v^k = u^k, whether that minimum certifies
    extremality (>= 1 - 1e-9), and the attaining c.  A self-map of the
    polydisk fixing 0 with these derivatives exists iff the minimum is
    at most 1.
    """
    V = np.array(data.vectors, dtype=complex)
    u = np.array(data.targets, dtype=complex)
    c = _irls_l1(V, u)
    minimum = float(np.sum(np.abs(c)))
    # dual sanity bound: any multiplier vector gives a certified floor
    try:
        mu = np.linalg.lstsq(V @ np.conj(V.T), u, rcond=None)[0]
        row = np.conj(V.T) @ mu
        sup = np.max(np.abs(row))
        if sup > 0:
            floor = abs(np.vdot(mu, u)) / sup
            if floor > minimum + 1e-6 * max(1.0, minimum):
                raise ConditioningError(
                    "l1 duality gap inverted; minimizer did not converge"
                )
    except np.linalg.LinAlgError:
        pass
    extremal = minimum >= 1.0 - 1e-9
    return minimum, extremal, tuple(c)
