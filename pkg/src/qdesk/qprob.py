"""Classical and quantum probability primitives.

Entropies, majorization, information geometry, density-matrix functionals,
Schmidt decomposition and the measurement collapse rule.

Log bases: classical quantities default to bits (base 2); the qubit
relative-entropy closed form is stated in nats, so quantum relative
entropy defaults to natural log.
"""
from __future__ import annotations

import numpy as np

from .errors import (
    DimensionMismatch,
    InfiniteDivergence,
    LengthMismatch,
    OutsideBlochBall,
    ZeroProbabilityBranch,
    ZeroProbabilityComponent,
)

EIG_CLIP = 1e-14  # spectral floor before taking logs
MAJ_TOL = 1e-12

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def check_prob_vector(p, tol: float = 1e-12) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < -tol):
        raise ValueError("negative probability component")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    return np.clip(p, 0.0, None)


def check_density_matrix(rho, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if not np.allclose(rho, rho.conj().T, atol=1e-12):
        raise ValueError("density matrix not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-12:
        raise ValueError("density matrix trace != 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix not PSD")
    return rho


def _log(x: np.ndarray, base: float) -> np.ndarray:
    return np.log(x) / np.log(base) if base != np.e else np.log(x)


def shannon_entropy(p, base: float = 2.0) -> float:
    """-sum p_i log p_i with 0 log 0 := 0."""
    p = check_prob_vector(p)
    p = p[p > 0]
    return float(-np.sum(p * _log(p, base)))


def relative_entropy(p, q, base: float = 2.0) -> float:
    """S(p||q) = sum p_i log(p_i / q_i)."""
    p, q = check_prob_vector(p), check_prob_vector(q)
    if p.shape != q.shape:
        raise LengthMismatch("p and q differ in length")
    mask = p > 0
    if np.any(q[mask] <= 0):
        raise InfiniteDivergence("support(p) not contained in support(q)")
    return float(np.sum(p[mask] * _log(p[mask] / q[mask], base)))


def majorizes(x, y, tol: float = MAJ_TOL) -> bool:
    """True iff every prefix sum of sorted-descending x dominates y's.

    Requires equal totals up to `tol` (the partial order is defined on
    vectors of equal sum); ties count as satisfied.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise LengthMismatch("vectors differ in length")
    if abs(x.sum() - y.sum()) > max(tol, tol * abs(x.sum())):
        return False
    cx = np.cumsum(np.sort(x)[::-1])
    cy = np.cumsum(np.sort(y)[::-1])
    return bool(np.all(cx >= cy - tol))


def majorization_compare(x, y) -> str:
    """Three-way check: 'first', 'second', 'both' (equal up to sorting),
    or 'incomparable'."""
    xy, yx = majorizes(x, y), majorizes(y, x)
    if xy and yx:
        return "both"
    if xy:
        return "first"
    if yx:
        return "second"
    return "incomparable"


def bhattacharyya_angle(p, q) -> float:
    """arccos sum sqrt(p_i q_i), the Fisher-Rao geodesic distance."""
    p, q = check_prob_vector(p), check_prob_vector(q)
    if p.shape != q.shape:
        raise LengthMismatch("p and q differ in length")
    return float(np.arccos(np.clip(np.sum(np.sqrt(p * q)), -1.0, 1.0)))


def fisher_rao_metric(p) -> np.ndarray:
    """Diagonal metric g_ii = 1/(4 p_i)."""
    p = check_prob_vector(p)
    if np.any(p <= 0):
        raise ZeroProbabilityComponent("metric undefined at p_i = 0")
    return np.diag(1.0 / (4.0 * p))


def von_neumann_entropy(rho, base: float = 2.0) -> float:
    rho = check_density_matrix(rho)
    lam = np.linalg.eigvalsh(rho)
    lam = lam[lam > EIG_CLIP]
    return float(-np.sum(lam * _log(lam, base)))


def quantum_relative_entropy(rho, eta, base: float = np.e) -> float:
    """D(rho||eta) = tr rho (log rho - log eta)."""
    rho, eta = check_density_matrix(rho), check_density_matrix(eta)
    if rho.shape != eta.shape:
        raise DimensionMismatch("states differ in dimension")
    wr, Vr = np.linalg.eigh(rho)
    we, Ve = np.linalg.eigh(eta)
    # support check: rho must vanish on the null space of eta
    null = Ve[:, we <= EIG_CLIP]
    if null.size and np.linalg.norm(null.conj().T @ rho @ null) > 1e-10:
        raise InfiniteDivergence("support(rho) not contained in support(eta)")
    wr_c = np.clip(wr, EIG_CLIP, None)
    we_c = np.clip(we, EIG_CLIP, None)
    log_rho = (Vr * _log(wr_c, base)) @ Vr.conj().T
    log_eta = (Ve * _log(we_c, base)) @ Ve.conj().T
    val = np.trace(rho @ (log_rho - log_eta)).real
    return float(max(val, 0.0))


def qubit_relative_entropy_closed_form(tau_a, tau_b) -> float:
    """Closed form (in nats) of D(rho_a||rho_b) for Bloch vectors tau.

    D = 1/2 ln((1-a^2)/(1-b^2)) + (a/2) ln((1+a)/(1-a))
        - (tau_a . tau_b / (2 b)) ln((1+b)/(1-b)),
    with a = |tau_a|, b = |tau_b|.
    """
    tau_a, tau_b = np.asarray(tau_a, float), np.asarray(tau_b, float)
    a, b = np.linalg.norm(tau_a), np.linalg.norm(tau_b)
    if a > 1 or b >= 1:
        raise OutsideBlochBall("closed form needs |tau_b| < 1")
    out = 0.5 * np.log((1 - a**2) / (1 - b**2))
    if a > 0:
        out += (a / 2) * np.log((1 + a) / (1 - a))
    if b > 0:
        out -= (np.dot(tau_a, tau_b) / (2 * b)) * np.log((1 + b) / (1 - b))
    return float(out)


def schmidt_decompose(psi, split: tuple[int, int]):
    """Schmidt form of a bipartite pure state.

    Returns (lambdas, left_basis, right_basis) with lambdas descending,
    bases as columns, and a deterministic global-phase fix (first nonzero
    component of each left vector made real positive).
    """
    n_left, n_right = split
    psi = np.asarray(psi, dtype=complex)
    if psi.size != 2 ** (n_left + n_right):
        raise DimensionMismatch(
            f"state of dim {psi.size} does not split as {split}"
        )
    M = psi.reshape(2**n_left, 2**n_right)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    keep = s > 1e-14
    U, s, Vh = U[:, keep], s[keep], Vh[keep]
    for i in range(U.shape[1]):
        j = np.argmax(np.abs(U[:, i]) > 1e-12)
        ph = U[j, i] / abs(U[j, i])
        U[:, i] /= ph
        Vh[i] *= ph
    return s**2, U, Vh.T


def schmidt_reconstruct(lambdas, left, right) -> np.ndarray:
    out = np.zeros(left.shape[0] * right.shape[0], dtype=complex)
    for lam, u, v in zip(lambdas, left.T, right.T):
        out += np.sqrt(lam) * np.kron(u, v)
    return out


def partial_trace(rho, keep, dims) -> np.ndarray:
    """Trace out every subsystem not listed in `keep`.

    dims: tuple of subsystem dimensions, leftmost factor first.
    """
    dims = tuple(dims)
    keep = sorted(keep)
    rho = np.asarray(rho, dtype=complex)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionMismatch("dims inconsistent with matrix size")
    k = len(dims)
    t = rho.reshape(dims + dims)
    drop = [i for i in range(k) if i not in keep]
    for off, i in enumerate(drop):
        ax = i - off
        t = np.trace(t, axis1=ax, axis2=ax + (k - off))
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def measurement_update(rho, Pi):
    """Collapse rule: (prob, Pi rho Pi / prob)."""
    rho = check_density_matrix(rho)
    Pi = np.asarray(Pi, dtype=complex)
    if not np.allclose(Pi @ Pi, Pi, atol=1e-10):
        raise ValueError("Pi is not a projector")
    prob = float(np.trace(Pi @ rho @ Pi).real)
    if prob < 1e-14:
        raise ZeroProbabilityBranch("measurement branch has zero probability")
    return prob, Pi @ rho @ Pi / prob


def bloch_to_density(tau) -> np.ndarray:
    """rho = (I + tau . sigma)/2."""
    tau = np.asarray(tau, dtype=float)
    if np.dot(tau, tau) > 1.0 + 1e-12:
        raise OutsideBlochBall(f"|tau| = {np.linalg.norm(tau)} > 1")
    return (np.eye(2, dtype=complex)
            + sum(t * s for t, s in zip(tau, SIGMA))) / 2


def density_to_bloch(rho) -> np.ndarray:
    rho = check_density_matrix(rho)
    return np.array([np.trace(rho @ s).real for s in SIGMA])


def sic_qubit_povm():
    """The four tetrahedral qubit projectors; (1/2) sum Pi_j = I and
    tr Pi_i Pi_j = (2 delta_ij + 1)/3."""
    kets = [np.array([1.0, 0.0], dtype=complex)]
    for k in (2, 3, 4):
        kets.append(
            np.array(
                [1 / np.sqrt(3),
                 np.sqrt(2 / 3) * np.exp(2j * np.pi * (k - 2) / 3)]
            )
        )
    return [np.outer(v, v.conj()) for v in kets]
