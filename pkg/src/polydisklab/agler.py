"""Polydisk Pick interpolation by Agler-decomposition feasibility.

At norm level t the data {lambda_i -> w_i} admits a decomposition
certificate when Hermitian PSD matrices Gamma^1..Gamma^d solve

    1 - (w_i / t) conj(w_j / t) = sum_r (1 - lambda_i^r conj(lambda_j^r)) Gamma^r_ij

entrywise.  Infeasibility is certified by a positive definite
unit-diagonal kernel K for which [(1 - (w_i/t) conj(w_j/t)) K_ij] has a
clearly negative eigenvalue while every [(1 - lambda_i^r conj(lambda_j^r)) K_ij]
stays PSD; both sides of the alternative are re-verified independently of
the solver that produced them.

The engine is alternating projections (Dykstra corrections) between the
affine reconstruction subspace and the PSD product cone.  Probes that
the projections leave undecided escalate to a barrier-Newton refiner on
the same feasibility program; its certificates pass through the same
verification.  Undecided remains a first-class outcome.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .disk_geometry import check_poly_point
from .errors import DegenerateDataError, DomainError, UndecidedError

# Alternating-projections defaults: iteration budget, how often to test
# for certificates, and the displacement-change threshold that declares
# a stall.
DYKSTRA_BUDGET = 200000
CHECK_EVERY = 25
STALL_TOL = 1e-13

# Certificate acceptance: PSD slack for decomposition factors, entrywise
# reconstruction residual, and the violation a dual kernel must exhibit.
GAMMA_PSD_TOL = -1e-9
RECON_TOL = 1e-7
VIOLATION_TOL = -1e-8

# Norm bisection tolerance.
NORM_TOL = 1e-5

# Largest point count the dense solvers accept.
MAX_NODES = 64

CAVEAT_D3 = "schur-agler-upper-bound"


@dataclasses.dataclass(frozen=True)
class PolyPickData:
    """Interpolation data on the d-dimensional polydisk."""

    d: int
    nodes: tuple
    targets: tuple

    def __post_init__(self):
        d = int(self.d)
        nodes = tuple(check_poly_point(p, d=d) for p in self.nodes)
        targets = tuple(complex(w) for w in self.targets)
        if len(nodes) != len(targets):
            raise DomainError("need one target per node")
        if len(nodes) == 0:
            raise DegenerateDataError("empty interpolation data")
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if nodes[i] == nodes[j]:
                    raise DegenerateDataError(f"coincident nodes at index {i}, {j}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)

    @property
    def n(self):
        return len(self.nodes)


@dataclasses.dataclass(frozen=True)
class AglerDecomposition:
    """Feasibility certificate: PSD factors and the level they certify."""

    gammas: tuple
    t: float

    def min_eigenvalue(self):
        return min(float(np.linalg.eigvalsh(g).min()) for g in self.gammas)

    def reconstruction_residual(self, data):
        M0, b0 = _make_problem(data.nodes, data.targets, self.t)
        total = np.sum(np.array(self.gammas) * M0, axis=0)
        return float(np.abs(total - b0).max())


@dataclasses.dataclass(frozen=True)
class DualKernel:
    """Infeasibility certificate: PD unit-diagonal kernel and the
    negative eigenvalue it exposes."""

    K: np.ndarray
    violation: float

    def __post_init__(self):
        K = np.asarray(self.K, dtype=complex)
        if np.abs(np.diag(K) - 1.0).max() > 1e-12:
            raise DomainError("dual kernel must have unit diagonal")
        if float(np.linalg.eigvalsh(K).min()) <= 0.0:
            raise DomainError("dual kernel must be positive definite")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "violation", float(self.violation))


@dataclasses.dataclass(frozen=True)
class Feasible:
    decomposition: AglerDecomposition


@dataclasses.dataclass(frozen=True)
class Infeasible:
    kernel: DualKernel


def _herm(X):
    return 0.5 * (X + np.conj(np.swapaxes(X, -1, -2)))


def _make_problem(nodes, targets, t):
    nodes = np.asarray(nodes, dtype=complex)
    if nodes.ndim == 1:
        nodes = nodes[:, None]
    wt = np.asarray(targets, dtype=complex) / t
    M0 = 1.0 - nodes.T[:, :, None] * np.conj(nodes.T[:, None, :])
    b0 = 1.0 - np.outer(wt, np.conj(wt))
    return M0, b0


def _szego_product_kernel(M0):
    # entrywise product of the coordinate Szego kernels; PD on distinct
    # nodes, and M^r o G stays PSD for every r
    return np.prod(1.0 / M0, axis=0)


def _polish_dual(M0, b0, N):
    """Repair a dual-multiplier candidate into a verified certificate.

    Measures the cone and positivity deficits of the Hermitized
    candidate and clears them with the smallest diagonal and
    Szego-kernel additions that work, then re-verifies everything from
    scratch.  Returns (K, violation) or None when the candidate cannot
    be repaired without losing the violation.
    """
    d, n, _ = M0.shape
    G = _szego_product_kernel(M0)
    Gn = G / np.sqrt(np.outer(np.diag(G).real, np.diag(G).real))
    lam_g = np.linalg.eigvalsh(Gn).min()
    min_mdiag = min(M0[r, i, i].real for r in range(d) for i in range(n))
    for sign in (+1.0, -1.0):
        K0 = sign * 0.5 * (np.conj(N) + N.T)
        dg = np.real(np.diag(K0))
        if np.any(dg <= 0):
            continue
        Dm = 1.0 / np.sqrt(dg)
        K0 = K0 * np.outer(Dm, Dm)
        cone0 = min(
            np.linalg.eigvalsh(_herm(M0[r] * K0)).min() for r in range(d)
        )
        c_eye = max(0.0, (-cone0 + 1e-13) / min_mdiag) if cone0 < 0 else 0.0
        K1 = K0 + c_eye * np.eye(n)
        lam1 = np.linalg.eigvalsh(K1).min()
        c_g = max(0.0, (-lam1 + 1e-10) / lam_g) if lam1 <= 1e-12 else 0.0
        for boost in (1.0, 4.0, 32.0):
            K = K0 + boost * c_eye * np.eye(n) + boost * c_g * Gn
            dgK = np.real(np.diag(K))
            if np.any(dgK <= 0):
                continue
            Ds = 1.0 / np.sqrt(dgK)
            K = K * np.outer(Ds, Ds)
            if np.linalg.eigvalsh(K).min() <= 1e-12:
                continue
            cone = min(
                np.linalg.eigvalsh(_herm(M0[r] * K)).min() for r in range(d)
            )
            if cone < -1e-12:
                continue
            viol = np.linalg.eigvalsh(_herm(b0 * K)).min()
            if viol <= VIOLATION_TOL:
                return K, viol
    return None


def _dykstra(M0, b0, max_iter, check_every=CHECK_EVERY):
    """Alternating projections with Dykstra correction.

    Projects between the affine reconstruction subspace and the PSD
    product cone; every check_every sweeps it tests the current iterate
    for a feasibility certificate and the displacement vector for an
    infeasibility certificate.  Returns one of
    ('feasible', Gammas, None), ('infeasible', K, viol),
    ('undecided', diagnostics, None).
    """
    d, n, _ = M0.shape
    denom = np.sum(np.abs(M0) ** 2, axis=0)
    Mc = np.conj(M0)

    def paff(X):
        r = np.sum(M0 * X, axis=0) - b0
        return X - Mc * (r / denom)[None, :, :]

    def ppsd(X):
        w, V = np.linalg.eigh(_herm(X))
        return (V * np.maximum(w, 0.0)[..., None, :]) @ np.conj(
            np.swapaxes(V, -1, -2)
        )

    X = paff(np.zeros((d, n, n), dtype=complex))
    P = np.zeros_like(X)
    prev_v = None
    last = {"min_eig": None, "recon": None}
    it = 0
    while it < max_iter:
        it += 1
        Y = ppsd(X + P)
        P = X + P - Y
        X = paff(Y)
        if it % check_every == 0 or it == 1:
            me = float(np.linalg.eigvalsh(_herm(X)).min())
            last["min_eig"] = me
            if me >= -2e-9:
                Gam = ppsd(X)
                recon = float(np.abs(np.sum(M0 * Gam, axis=0) - b0).max())
                last["recon"] = recon
                if recon <= RECON_TOL:
                    return ("feasible", Gam, None)
            v = X - Y
            cand = -np.conj(np.sum(v * M0, axis=0) / denom)
            pol = _polish_dual(M0, b0, cand)
            if pol is not None:
                return ("infeasible", pol[0], pol[1])
            if prev_v is not None and np.linalg.norm(v - prev_v) < STALL_TOL:
                break
            prev_v = v.copy()
    last["iterations"] = it
    return ("undecided", last, None)


def _herm_basis(n):
    mats = []
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1.0
        mats.append(E)
    s2 = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            S = np.zeros((n, n), dtype=complex)
            S[i, j] = S[j, i] = s2
            mats.append(S)
            A = np.zeros((n, n), dtype=complex)
            A[i, j] = 1j * s2
            A[j, i] = -1j * s2
            mats.append(A)
    return np.array(mats)


def _hvec(X, B):
    return np.real(np.einsum("ij,aji->a", X, B))


def _hunvec(v, B):
    return np.einsum("a,aij->ij", v, B)


def _solve_sdp(M0, b0, dec_tol=1e-9, mu_min=1e-12, extract_mu=None):
    """Barrier-Newton refiner for the same feasibility program.

    Maximizes the cone slack s subject to the reconstruction equalities
    and a trace cap.  Exits feasible as soon as a verified decomposition
    appears; attempts an infeasibility extraction whenever the slack is
    negative (restricted to barrier stages mu <= extract_mu when that is
    set, which yields a near-optimal dual kernel).  Returns
    ('feasible', Gammas), ('infeasible', K, viol), or ('undecided', s).
    """
    d, n, _ = M0.shape
    nb = n * n
    B = _herm_basis(n)
    D_tot = np.diag(np.sum(M0[:, np.arange(n), np.arange(n)].real, axis=0))

    Acols = []
    for r in range(d):
        MB = M0[r][None, :, :] * B
        Acols.append(np.real(np.einsum("aij,pji->pa", MB, B)))
    Amat = np.concatenate(Acols + [_hvec(D_tot, B)[:, None]], axis=1)
    rhs = _hvec(b0, B)

    denom = np.sum(np.abs(M0) ** 2, axis=0)
    G0 = np.conj(M0) * (b0 / denom)[None, :, :]
    G0 = _herm(G0)
    s = min(0.0, float(np.linalg.eigvalsh(G0).min())) - 1.0
    Theta = G0 - s * np.eye(n)[None, :, :]
    trace0 = np.sum([np.trace(T).real for T in Theta])
    R = trace0 + 20.0 * n * d * (abs(s) + 1.0) + 100.0
    znd = float(n * d)
    tau = _hvec(np.eye(n), B)

    x = np.concatenate([_hvec(Theta[r], B) for r in range(d)] + [[s]])
    nv = d * nb + 1

    def unpack(xv):
        Th = np.array([_hunvec(xv[r * nb : (r + 1) * nb], B) for r in range(d)])
        return Th, xv[-1]

    def barrier_val(xv):
        Th, sv = unpack(xv)
        u = R - sum(np.trace(T).real for T in Th) - sv * znd
        if u <= 0:
            return np.inf
        tot = -np.log(u)
        for r in range(d):
            try:
                L = np.linalg.cholesky(Th[r])
            except np.linalg.LinAlgError:
                return np.inf
            tot -= 2.0 * np.sum(np.log(np.real(np.diag(L))))
        return tot

    def make_gammas(xv):
        Th, sv = unpack(xv)
        Gam = Th + sv * np.eye(n)[None, :, :]
        resid = np.sum(M0 * Gam, axis=0) - b0
        Gam = Gam - np.conj(M0) * (resid / denom)[None, :, :]
        return _herm(Gam)

    mu = 1.0
    while True:
        for _inner in range(60):
            Th, sv = unpack(x)
            u = R - sum(np.trace(T).real for T in Th) - sv * znd
            g = np.zeros(nv)
            H = np.zeros((nv, nv))
            for r in range(d):
                W = np.linalg.inv(Th[r])
                W = 0.5 * (W + W.conj().T)
                g[r * nb : (r + 1) * nb] = -_hvec(W, B)
                T_a = np.einsum("ij,ajk,kl->ail", W, B, W)
                H[r * nb : (r + 1) * nb, r * nb : (r + 1) * nb] = np.real(
                    np.einsum("aij,bji->ab", T_a, B)
                )
            z = np.concatenate([np.tile(tau, d), [znd]])
            g += z / u
            H += np.outer(z, z) / (u * u)
            g[-1] -= 1.0 / mu

            KKT = np.zeros((nv + nb, nv + nb))
            KKT[:nv, :nv] = H + 1e-13 * np.eye(nv)
            KKT[:nv, nv:] = Amat.T
            KKT[nv:, :nv] = Amat
            rp = Amat @ x - rhs
            try:
                sol = np.linalg.solve(KKT, np.concatenate([-g, -rp]))
            except np.linalg.LinAlgError:
                return ("undecided", x[-1])
            dx = sol[:nv]
            lam2 = -g @ dx
            f0 = -x[-1] / mu + barrier_val(x)
            alpha = 1.0
            moved = False
            for _ls in range(60):
                xn = x + alpha * dx
                fn = -xn[-1] / mu + barrier_val(xn)
                if fn <= f0 - 0.25 * alpha * max(lam2, 0.0) + 1e-12 * abs(f0):
                    moved = True
                    break
                alpha *= 0.5
            if not moved:
                break
            x = xn
            if lam2 < max(0.01 * mu * mu, 1e-18):
                break
        s_cur = x[-1]
        if s_cur > max(dec_tol, 1e-9):
            Gam = make_gammas(x)
            me = float(np.linalg.eigvalsh(Gam).min())
            recon = float(np.abs(np.sum(M0 * Gam, axis=0) - b0).max())
            if me >= GAMMA_PSD_TOL and recon <= RECON_TOL:
                return ("feasible", Gam)
        # with Theta on the central path the dual slack is mu * inv(Theta^r),
        # which factors entrywise through conj(M^r); any block recovers a
        # dual-kernel candidate
        if s_cur < 0 and (extract_mu is None or mu <= extract_mu):
            Th, _ = unpack(x)
            cands = []
            for r in range(d):
                W = np.linalg.inv(Th[r])
                cands.append(W.T / M0[r])
            if d > 1:
                cands.append(np.mean(cands, axis=0))
            for cand in cands:
                pol = _polish_dual(M0, b0, np.conj(cand))
                if pol is not None:
                    return ("infeasible", pol[0], pol[1])
        if mu <= mu_min:
            return ("undecided", s_cur)
        mu = max(mu * 0.1, mu_min)


def _decide(M0, b0, budget, escalate, extract_mu=None):
    res = _dykstra(M0, b0, max_iter=budget)
    if res[0] != "undecided":
        return res
    diagnostics = res[1]
    if escalate:
        out = _solve_sdp(M0, b0, extract_mu=extract_mu)
        if out[0] == "feasible":
            return ("feasible", out[1], None)
        if out[0] == "infeasible":
            return ("infeasible", out[1], out[2])
        diagnostics = dict(diagnostics)
        diagnostics["slack_estimate"] = out[1]
    return ("undecided", diagnostics, None)


def agler_feasible(data, t, budget=DYKSTRA_BUDGET, escalate=True,
                   optimal_certificate=False):
    """Decide decomposition feasibility of the data at norm level t.

    Returns Feasible(AglerDecomposition) or Infeasible(DualKernel); both
    certificates are re-verified against their defining inequalities
    before being returned.  A stalled solve raises UndecidedError with
    the residual diagnostics.

    With optimal_certificate=True an infeasibility certificate is taken
    from the late barrier path, which makes the dual kernel nearly
    optimal rather than merely valid (used by the operator-theory
    pipeline, where the kernel's quality determines the exhibited
    violation).
    """
    if data.n > MAX_NODES:
        raise DomainError(f"at most {MAX_NODES} nodes supported, got {data.n}")
    if not t > 0:
        raise DomainError("norm level t must be positive")
    M0, b0 = _make_problem(data.nodes, data.targets, t)

    wmax = max(abs(w) for w in data.targets)
    if wmax > t:
        # trivially infeasible when a diagonal entry is already negative
        diag_viol = 1.0 - (wmax / t) ** 2
        if diag_viol <= VIOLATION_TOL:
            n = data.n
            K = np.eye(n, dtype=complex)
            viol = float(np.linalg.eigvalsh(_herm(b0 * K)).min())
            return Infeasible(DualKernel(K=K, violation=viol))

    if optimal_certificate:
        out = _solve_sdp(M0, b0, extract_mu=1e-10)
        if out[0] == "feasible":
            res = ("feasible", out[1], None)
        elif out[0] == "infeasible":
            res = ("infeasible", out[1], out[2])
        else:
            raise UndecidedError(
                "barrier refiner exhausted its path without a certificate",
                t=t,
                residuals={"slack_estimate": out[1]},
            )
    else:
        res = _decide(M0, b0, budget, escalate)

    if res[0] == "feasible":
        gammas = tuple(_herm(g) for g in res[1])
        dec = AglerDecomposition(gammas=gammas, t=float(t))
        if dec.min_eigenvalue() < GAMMA_PSD_TOL:
            raise UndecidedError(
                "decomposition failed independent PSD verification", t=t
            )
        if dec.reconstruction_residual(data) > RECON_TOL:
            raise UndecidedError(
                "decomposition failed independent reconstruction check", t=t
            )
        return Feasible(dec)
    if res[0] == "infeasible":
        return Infeasible(DualKernel(K=res[1], violation=res[2]))
    diag = res[1] or {}
    raise UndecidedError(
        "feasibility undecided within the iteration budget",
        t=t,
        iterations=diag.get("iterations", budget),
        residuals=diag,
    )


class SchurAglerNorm(float):
    """A float tagged with the d >= 3 caveat and bisection diagnostics."""

    def __new__(cls, value, caveat_flag=None, undecided_probes=0):
        obj = super().__new__(cls, value)
        obj.caveat_flag = caveat_flag
        obj.undecided_probes = undecided_probes
        return obj


def _pairwise_lower_bound(nodes, targets):
    """Largest two-point minimal norm over node pairs.

    For each pair the one-variable two-point problem with the pair's
    Kobayashi distance gives a closed-form lower bound: the largest root
    in t^2 of  delta^2 t^4 - (2 delta^2 Re(conj(b) a) + |a - b|^2) t^2
    + delta^2 |a b|^2.
    """
    nodes = np.asarray(nodes, dtype=complex)
    if nodes.ndim == 1:
        nodes = nodes[:, None]
    targets = np.asarray(targets, dtype=complex)
    lo = float(np.max(np.abs(targets)))
    n = len(targets)
    for i in range(n):
        for j in range(i + 1, n):
            delta = np.max(
                np.abs(nodes[i] - nodes[j])
                / np.abs(1.0 - np.conj(nodes[j]) * nodes[i])
            )
            a, b = targets[i], targets[j]
            if abs(a - b) < 1e-15 or delta < 1e-15:
                continue
            d2 = delta * delta
            Bq = 2.0 * d2 * np.real(np.conj(b) * a) + abs(a - b) ** 2
            disc = max(Bq * Bq - 4.0 * d2 * d2 * abs(a * b) ** 2, 0.0)
            lo = max(lo, float(np.sqrt((Bq + np.sqrt(disc)) / (2.0 * d2))))
    return lo


def schur_agler_norm(data, tol=NORM_TOL, probe_budget=1500):
    """Smallest level t at which the data is decomposition-feasible.

    Bisection over agler_feasible with a closed-form pairwise lower
    bound as the starting bracket.  The returned value is the smallest
    level confirmed feasible; probes left undecided move the lower end
    of the bracket and are counted on the result.  For d <= 2 this is
    the minimal extension norm; for d >= 3 it is an upper bound, and the
    result carries the caveat flag saying so.
    """
    if data.n > MAX_NODES:
        raise DomainError(f"at most {MAX_NODES} nodes supported, got {data.n}")
    caveat = CAVEAT_D3 if data.d >= 3 else None
    M0_cache = {}

    def probe(t):
        key = float(t)
        if key not in M0_cache:
            M0, b0 = _make_problem(data.nodes, data.targets, t)
            M0_cache[key] = _decide(M0, b0, probe_budget, escalate=True)[0]
        return M0_cache[key]

    wmax = max(abs(w) for w in data.targets)
    if wmax == 0.0:
        return SchurAglerNorm(0.0, caveat_flag=caveat)
    lo = max(_pairwise_lower_bound(data.nodes, data.targets), 1e-12)
    if probe(lo * (1.0 + 1e-9)) == "feasible":
        return SchurAglerNorm(lo * (1.0 + 1e-9), caveat_flag=caveat)
    hi = max(2.0 * lo, 1.0)
    while probe(hi) != "feasible":
        hi *= 2.0
        if hi > 1e6:
            raise UndecidedError("no feasible level found below 1e6", t=hi)
    undecided = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        status = probe(mid)
        if status == "feasible":
            hi = mid
        else:
            if status == "undecided":
                undecided += 1
            lo = mid
    return SchurAglerNorm(hi, caveat_flag=caveat, undecided_probes=undecided)


def _random_blaschke_factor(rng, max_degree=2):
    from .disk_geometry import BlaschkeProduct

    deg = int(rng.integers(0, max_degree + 1))
    zeros = tuple(
        rng.uniform(0.0, 0.9) * np.exp(2j * np.pi * rng.uniform())
        for _ in range(deg)
    )
    const = np.exp(2j * np.pi * rng.uniform())
    return BlaschkeProduct(zeros=zeros, unimodular_constant=const, scale=1.0)


def _random_transfer_function(rng, d, max_block=3):
    """Transfer-function realization from a random unitary colligation.

    phi(z) = A + B Delta(z) (I - D Delta(z))^{-1} C with Delta(z) the
    block-diagonal coordinate matrix; always in the Schur-Agler unit
    ball.
    """
    blocks = [int(rng.integers(1, max_block + 1)) for _ in range(d)]
    q = sum(blocks)
    Z = rng.normal(size=(q + 1, q + 1)) + 1j * rng.normal(size=(q + 1, q + 1))
    Q, Rm = np.linalg.qr(Z)
    Q = Q * (np.diag(Rm) / np.abs(np.diag(Rm)))[None, :]
    A = Q[0, 0]
    Bv = Q[0, 1:]
    Cv = Q[1:, 0]
    Dm = Q[1:, 1:]
    reps = np.concatenate([[r] * blocks[r] for r in range(d)])

    def phi(point):
        delta = np.array([point[r] for r in reps], dtype=complex)
        M = np.eye(q, dtype=complex) - Dm * delta[None, :]
        y = np.linalg.solve(M, Cv)
        return complex(A + np.dot(Bv * delta, y))

    return phi


def sample_schur_agler_function(rng, d):
    """One random member of the Schur-Agler unit ball.

    Draws are mixed across coordinate Blaschke products, their convex
    averages, and transfer-function realizations.
    """
    kind = int(rng.integers(0, 3))
    if kind == 0:
        factors = [_random_blaschke_factor(rng) for _ in range(d)]

        def phi(point):
            val = 1.0 + 0.0j
            for r in range(d):
                val *= factors[r](point[r])
            return val

        return phi
    if kind == 1:
        f1 = sample_schur_agler_function(rng, d)
        f2 = sample_schur_agler_function(rng, d)
        th = rng.uniform(0.0, 1.0)

        def phi(point):
            return th * f1(point) + (1.0 - th) * f2(point)

        return phi
    return _random_transfer_function(rng, d)


@dataclasses.dataclass(frozen=True)
class MembershipEvidence:
    """Sampled evidence that a kernel annihilates the Schur-Agler ball."""

    min_eigenvalue: float
    samples: int
    passed: bool
    worst_sample: int


def dual_kernel_membership_evidence(K, nodes, samples=1000, seed=0):
    """Test a dual kernel against random Schur-Agler-class functions.

    For each sampled phi the matrix [(1 - phi(l_i) conj(phi(l_j))) K_ij]
    must stay PSD; the report carries the most negative eigenvalue seen.
    This is sampled evidence over the Schur-Agler subclass, not a proof
    of cone membership.
    """
    if isinstance(K, DualKernel):
        K = K.K
    K = np.asarray(K, dtype=complex)
    if float(np.linalg.eigvalsh(K).min()) <= 0.0:
        raise DomainError("kernel must be positive definite")
    pts = [check_poly_point(p) for p in nodes]
    d = len(pts[0])
    rng = np.random.default_rng(seed)
    worst = np.inf
    worst_idx = -1
    for s in range(samples):
        phi = sample_schur_agler_function(rng, d)
        w = np.array([phi(p) for p in pts], dtype=complex)
        A = _herm((1.0 - np.outer(w, np.conj(w))) * K)
        me = float(np.linalg.eigvalsh(A).min())
        if me < worst:
            worst = me
            worst_idx = s
    return MembershipEvidence(
        min_eigenvalue=worst,
        samples=samples,
        passed=worst >= -1e-8,
        worst_sample=worst_idx,
    )
