"""Variational quantum algorithms.

Parameterized circuits, exact and stochastic parameter-shift gradients, VQE,
QAOA with Ising/QUBO mappings (max-cut, QBoost), Gibbs-state constructions,
DQC1 trace models, barren-plateau experiments, and adiabatic dynamics
(Landau-Zener, schedule following, variational adiabatic descent).

Sign convention: every parameterized layer is U(theta) = e^{-i theta G} with
Hermitian generator G. The stochastic shift rule below is stated for this
convention and is validated against finite differences in the tests.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import simcore as sc
from .errors import (
    DimensionMismatch,
    IncompleteProjectors,
    IntegratorDiverged,
    UnsupportedGenerator,
)


def hamiltonian_matrix(terms, n: int) -> np.ndarray:
    """Dense matrix of a Pauli-term list [(label, coeff), ...]."""
    return sc.pauli_reconstruct(terms, n)


@dataclass
class Layer:
    """One circuit layer: optional fixed unitary, then e^{-i theta G}."""

    generator: list  # [(pauli label, real coeff), ...]
    fixed: np.ndarray | None = None

    def generator_matrix(self, n: int) -> np.ndarray:
        return hamiltonian_matrix(self.generator, n)


@dataclass
class ParamCircuit:
    n: int
    layers: list[Layer] = field(default_factory=list)

    @property
    def n_params(self) -> int:
        return len(self.layers)

    def state(self, theta, psi0=None) -> np.ndarray:
        psi = sc.basis_state(self.n) if psi0 is None else np.asarray(
            psi0, dtype=complex
        )
        for th, layer in zip(theta, self.layers):
            if layer.fixed is not None:
                psi = layer.fixed @ psi
            psi = sc.exp_hamiltonian(layer.generator_matrix(self.n), th) @ psi
        return psi


def cost_expectation(circ: ParamCircuit, theta, O, psi0=None) -> float:
    """C(theta) = <psi(theta)| O |psi(theta)>."""
    O = np.asarray(O, dtype=complex)
    psi = circ.state(theta, psi0)
    if O.shape[0] != psi.size:
        raise DimensionMismatch("observable does not match circuit width")
    return float(np.vdot(psi, O @ psi).real)


def parameter_shift_gradient(circ: ParamCircuit, theta, O,
                             psi0=None) -> np.ndarray:
    """Exact gradient via the +-pi/4 shift rule.

    Each layer generator must be a single Pauli string c*P (P^2 = I); the
    shift is applied in the rescaled variable c*theta.
    """
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for t, layer in enumerate(circ.layers):
        if len(layer.generator) != 1:
            raise UnsupportedGenerator(
                "multi-term generator: use stochastic_parameter_shift"
            )
        _, c = layer.generator[0]
        c = float(np.real(c))
        if abs(c) < 1e-14:
            grad[t] = 0.0
            continue
        shift = np.pi / (4 * c)
        up, dn = theta.copy(), theta.copy()
        up[t] += shift
        dn[t] -= shift
        grad[t] = c * (cost_expectation(circ, up, O, psi0)
                       - cost_expectation(circ, dn, O, psi0))
    return grad


def finite_difference_gradient(fn, theta, step: float = 1e-5) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for i in range(theta.size):
        up, dn = theta.copy(), theta.copy()
        up[i] += step
        dn[i] -= step
        grad[i] = (fn(up) - fn(dn)) / (2 * step)
    return grad


@dataclass
class GradientEstimate:
    value: float
    stderr: float
    samples: int


def _shifted_cost(circ: ParamCircuit, theta, O, psi0, t: int,
                  V: np.ndarray, s: float, sign: float) -> float:
    """Cost with layer t's e^{-iX} replaced by
    e^{-i s X} e^{-i sign pi/4 V} e^{-i (1-s) X}."""
    psi = sc.basis_state(circ.n) if psi0 is None else np.asarray(
        psi0, dtype=complex
    )
    for k, (th, layer) in enumerate(zip(theta, circ.layers)):
        if layer.fixed is not None:
            psi = layer.fixed @ psi
        Xm = th * layer.generator_matrix(circ.n)
        if k == t:
            psi = sc.exp_hamiltonian(Xm, 1 - s) @ psi
            psi = sc.exp_hamiltonian(V, sign * np.pi / 4) @ psi
            psi = sc.exp_hamiltonian(Xm, s) @ psi
        else:
            psi = sc.exp_hamiltonian(Xm, 1.0) @ psi
    O = np.asarray(O, dtype=complex)
    return float(np.vdot(psi, O @ psi).real)


def stochastic_parameter_shift(circ: ParamCircuit, t: int, label: str,
                               theta, O, psi0, samples: int,
                               rng: np.random.Generator) -> GradientEstimate:
    """Monte-Carlo estimate of dC/dx_{t,label}.

    x_{t,label} is the coefficient of the Pauli string `label` in the layer
    generator X_t = theta_t * G_t. For s ~ U(0,1) the integrand
    g(s) = C_+(s) - C_-(s) averages to the derivative.
    """
    V = sc.pauli_matrix(label)
    vals = np.empty(samples)
    for i in range(samples):
        s = rng.random()
        vals[i] = (_shifted_cost(circ, theta, O, psi0, t, V, s, +1.0)
                   - _shifted_cost(circ, theta, O, psi0, t, V, s, -1.0))
    return GradientEstimate(
        float(vals.mean()),
        float(vals.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0,
        samples,
    )


def exact_x_gradient(circ: ParamCircuit, t: int, label: str, theta, O,
                     psi0=None, quad_points: int = 64) -> float:
    """Deterministic dC/dx_{t,label} by Gauss-Legendre quadrature of the
    shift-rule integrand (oracle for the stochastic estimator)."""
    V = sc.pauli_matrix(label)
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    s = (nodes + 1) / 2
    w = weights / 2
    total = 0.0
    for si, wi in zip(s, w):
        total += wi * (_shifted_cost(circ, theta, O, psi0, t, V, si, +1.0)
                       - _shifted_cost(circ, theta, O, psi0, t, V, si, -1.0))
    return float(total)


def stochastic_theta_gradient(circ: ParamCircuit, theta, O, psi0,
                              samples: int,
                              rng: np.random.Generator) -> np.ndarray:
    """Full dC/dtheta via the chain rule dx_{t,nu}/dtheta_t = g_{t,nu}."""
    theta = np.asarray(theta, dtype=float)
    grad = np.zeros_like(theta)
    for t, layer in enumerate(circ.layers):
        for label, g in layer.generator:
            est = stochastic_parameter_shift(
                circ, t, label, theta, O, psi0, samples, rng
            )
            grad[t] += float(np.real(g)) * est.value
    return grad


# --- VQE ---------------------------------------------------------------------

def gradient_descent(fn, grad_fn, theta0, lr: float = 0.1, steps: int = 200,
                     momentum: float = 0.0, tol: float = 0.0):
    """Plain gradient descent with optional momentum."""
    theta = np.asarray(theta0, dtype=float).copy()
    vel = np.zeros_like(theta)
    history = [fn(theta)]
    for _ in range(steps):
        g = grad_fn(theta)
        vel = momentum * vel - lr * g
        theta = theta + vel
        history.append(fn(theta))
        if tol and abs(history[-2] - history[-1]) < tol and \
                np.linalg.norm(g) < tol:
            break
    return theta, history


def vqe(H, circ: ParamCircuit, theta0=None, lr: float = 0.1,
        steps: int = 300, rng: np.random.Generator | None = None,
        psi0=None):
    """Minimize <psi(theta)|H|psi(theta)> by parameter-shift descent."""
    H = np.asarray(H, dtype=complex)
    if theta0 is None:
        rng = rng or np.random.default_rng()
        theta0 = rng.uniform(-np.pi, np.pi, circ.n_params)

    def f(th):
        return cost_expectation(circ, th, H, psi0)

    def g(th):
        try:
            return parameter_shift_gradient(circ, th, H, psi0)
        except UnsupportedGenerator:
            return finite_difference_gradient(f, th)

    theta, history = gradient_descent(f, g, theta0, lr=lr, steps=steps)
    return theta, history[-1]


# --- Ising / QUBO -------------------------------------------------------------

@dataclass
class IsingModel:
    """H = sum_{i<j} J_ij z_i z_j + sum_i h_i z_i + const, z in {-1, +1},
    with optional transverse fields c (sigma^x coefficients)."""

    J: dict
    h: np.ndarray
    const: float = 0.0
    c: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.h)

    def energy(self, z) -> float:
        z = np.asarray(z, dtype=float)
        e = self.const + float(np.dot(self.h, z))
        for (i, j), Jij in self.J.items():
            e += Jij * z[i] * z[j]
        return e

    def hamiltonian(self, include_const: bool = True) -> np.ndarray:
        n = self.n
        Hm = np.zeros((2**n, 2**n), dtype=complex)
        for (i, j), Jij in self.J.items():
            lab = "".join("Z" if q in (i, j) else "I" for q in range(n))
            Hm += Jij * sc.pauli_matrix(lab)
        for i, hi in enumerate(self.h):
            if hi:
                lab = "".join("Z" if q == i else "I" for q in range(n))
                Hm += hi * sc.pauli_matrix(lab)
        if self.c is not None:
            for i, ci in enumerate(self.c):
                if ci:
                    lab = "".join("X" if q == i else "I" for q in range(n))
                    Hm += ci * sc.pauli_matrix(lab)
        if include_const:
            Hm += self.const * np.eye(2**n)
        return Hm


def spins_from_bits(x) -> np.ndarray:
    """x in {0,1} -> z in {-1,+1} via z = 1 - 2x."""
    return 1 - 2 * np.asarray(x, dtype=float)


def maxcut_to_ising(edges, n: int | None = None) -> IsingModel:
    """Ising model whose energy on spins z equals minus the cut size.

    cut(x) = sum_edges [x_i != x_j] = sum (1 - z_i z_j)/2, so
    E(z) = sum (z_i z_j - 1)/2 = -cut.
    """
    edges = [tuple(sorted(e)) for e in edges]
    if n is None:
        n = max((max(e) for e in edges), default=-1) + 1
    J = {}
    for e in edges:
        J[e] = J.get(e, 0.0) + 0.5
    return IsingModel(J, np.zeros(n), const=-len(edges) / 2)


def cut_size(edges, x) -> int:
    return sum(1 for i, j in edges if x[i] != x[j])


def qubo_to_ising(Q, b=None) -> IsingModel:
    """Map f(x) = x^T Q x + b.x over x in {0,1} to an Ising energy over
    z = 1 - 2x; the two agree on every assignment."""
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
    Qs = (Q + Q.T) / 2
    J = {}
    h = np.zeros(n)
    const = 0.0
    # x_i = (1 - z_i)/2
    for i in range(n):
        for j in range(n):
            q = Qs[i, j]
            if q == 0.0:
                continue
            if i == j:
                # x_i^2 = x_i = (1 - z_i)/2
                const += q / 2
                h[i] -= q / 2
            else:
                const += q / 4
                h[i] -= q / 4
                h[j] -= q / 4
                key = (min(i, j), max(i, j))
                J[key] = J.get(key, 0.0) + q / 4
    for i in range(n):
        const += b[i] / 2
        h[i] -= b[i] / 2
    J = {k: v for k, v in J.items() if v != 0.0}
    return IsingModel(J, h, const=const)


def qubo_energy(Q, b, x) -> float:
    x = np.asarray(x, dtype=float)
    b = np.zeros(len(x)) if b is None else np.asarray(b, dtype=float)
    return float(x @ np.asarray(Q, dtype=float) @ x + b @ x)


def solve_qubo_brute_force(Q, b=None):
    n = np.asarray(Q).shape[0]
    best, best_x = np.inf, None
    for bits in itertools.product((0, 1), repeat=n):
        e = qubo_energy(Q, b, bits)
        if e < best:
            best, best_x = e, bits
    return np.array(best_x), best


# --- QAOA ---------------------------------------------------------------------

def qaoa_state(model: IsingModel, gammas, betas) -> np.ndarray:
    """|psi> = prod_j e^{-i beta_j H0} e^{-i gamma_j H1} |+...+> with the
    sigma^x mixer H0 = sum sigma^x_i."""
    n = model.n
    H1 = model.hamiltonian(include_const=False).real
    diag = np.diag(H1).copy()  # H1 is diagonal for a classical Ising model
    psi = np.full(2**n, 1 / np.sqrt(2**n), dtype=complex)
    for g, b in zip(gammas, betas):
        psi = np.exp(-1j * g * diag) * psi
        # e^{-i b X} factorizes per qubit
        rxg = sc.exp_hamiltonian(sc.X, b)
        for q in range(n):
            psi = sc.apply_gate(psi, rxg, [q])
    return psi


def qaoa(model: IsingModel, p: int, rng: np.random.Generator,
         restarts: int = 8, lr: float = 0.05, steps: int = 250):
    """Optimize QAOA angles by multistart gradient descent.

    Returns (angles, best bitstring, approximation ratio) where the ratio
    compares the expected energy against the brute-force optimum.
    """
    n = model.n
    H1 = model.hamiltonian(include_const=False).real
    diag_e = np.diag(H1).real + model.const
    e_min = diag_e.min()
    e_max = diag_e.max()

    def expected(angles):
        psi = qaoa_state(model, angles[:p], angles[p:])
        return float(np.sum(np.abs(psi) ** 2 * diag_e))

    best_angles, best_val = None, np.inf
    for _ in range(restarts):
        angles0 = rng.uniform(0, np.pi, 2 * p)
        angles, hist = gradient_descent(
            expected, lambda a: finite_difference_gradient(expected, a, 1e-6),
            angles0, lr=lr, steps=steps,
        )
        if hist[-1] < best_val:
            best_val, best_angles = hist[-1], angles
    psi = qaoa_state(model, best_angles[:p], best_angles[p:])
    probs = np.abs(psi) ** 2
    best_idx = int(np.argmax(probs))
    bits = tuple((best_idx >> (n - 1 - q)) & 1 for q in range(n))
    # ratio in [0, 1]: fraction of the optimum achieved by the mean energy
    ratio = (e_max - best_val) / (e_max - e_min) if e_max > e_min else 1.0
    return best_angles, bits, float(ratio)


# --- QBoost ---------------------------------------------------------------------

def qboost_objective(predictions, labels, lam: float, bits: int = 3):
    """QUBO for regularized ensemble MSE with binary-fraction weights.

    predictions: K x N array of weak-learner outputs in {-1, +1};
    w_k = sum_b q_{k,b} 2^{-b} (b = 1..bits). The loss is
    (1/N) sum_i (sum_k w_k h_k(x_i) - y_i)^2 + lam * sum_{k,b} q_{k,b}.
    Returns (Q, const) with qubo_energy(Q, None, q) + const equal to the
    loss on every assignment.
    """
    Hk = np.asarray(predictions, dtype=float)
    y = np.asarray(labels, dtype=float)
    K, N = Hk.shape
    scale = np.array([2.0 ** -(b + 1) for b in range(bits)])
    nv = K * bits
    A = np.zeros((nv, K))  # q-vector -> w-vector map
    for k in range(K):
        A[k * bits:(k + 1) * bits, k] = scale
    G = (Hk @ Hk.T) / N      # K x K Gram of learners
    c = (Hk @ y) / N         # K correlation with labels
    Q = A @ G @ A.T
    lin = -2 * (A @ c) + lam
    Q[np.diag_indices(nv)] += lin  # q^2 = q for binaries
    const = float(y @ y) / N
    return Q, const


def qboost_loss(predictions, labels, q_bits, lam: float, bits: int = 3):
    """Direct evaluation of the regularized MSE (QUBO oracle)."""
    Hk = np.asarray(predictions, dtype=float)
    y = np.asarray(labels, dtype=float)
    K, N = Hk.shape
    q = np.asarray(q_bits, dtype=float).reshape(K, bits)
    w = q @ np.array([2.0 ** -(b + 1) for b in range(bits)])
    resid = w @ Hk - y
    return float(resid @ resid / N + lam * q.sum())


def simulated_annealing_qubo(Q, rng: np.random.Generator, sweeps: int = 400,
                             t0: float = 2.0, t1: float = 0.01):
    """Standard single-flip simulated annealing on a QUBO."""
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    x = rng.integers(0, 2, n).astype(float)
    Qs = Q + Q.T
    e = float(x @ Q @ x)
    best_x, best_e = x.copy(), e
    temps = np.geomspace(t0, t1, sweeps)
    for T in temps:
        for i in rng.permutation(n):
            delta = (1 - 2 * x[i]) * (Qs[i] @ x) + Q[i, i]
            if delta <= 0 or rng.random() < np.exp(-delta / T):
                x[i] = 1 - x[i]
                e += delta
                if e < best_e:
                    best_x, best_e = x.copy(), e
    return best_x.astype(int), float(best_e)


# --- Gibbs states -----------------------------------------------------------------

def gibbs_state(H, T: float, sign: float = -1.0) -> np.ndarray:
    """e^{sign * H / T} / Z by exact diagonalization."""
    H = np.asarray(H, dtype=complex)
    w, V = np.linalg.eigh(H)
    expw = np.exp(sign * (w - (w.max() if sign > 0 else w.min())) / T)
    rho = (V * expw) @ V.conj().T
    return rho / np.trace(rho).real


def gibbs_pair_prepare(T: float, n: int) -> np.ndarray:
    """Marginal of the pair construction: n pairs, each in
    (e^{-1/2T} |+>|+> + e^{+1/2T} |->|->)/sqrt(Z); tracing the ancilla of
    each pair leaves e^{-H0/T}/Z with H0 = sum sigma^x."""
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    pair = (np.exp(-1 / (2 * T)) * np.kron(plus, plus)
            + np.exp(1 / (2 * T)) * np.kron(minus, minus))
    pair /= np.linalg.norm(pair)
    rho_pair = np.outer(pair, pair.conj())
    # trace out the ancilla (second qubit of the pair)
    rho1 = np.trace(rho_pair.reshape(2, 2, 2, 2), axis1=1, axis2=3)
    rho = np.array([[1.0 + 0j]])
    for _ in range(n):
        rho = np.kron(rho, rho1)
    return rho


def tfim_gibbs(model: IsingModel, T: float):
    """rho = e^{H/T}/Z for the transverse-field Ising Hamiltonian (the
    source convention puts +H in the exponent) and the induced classical
    distribution p(s) = tr(Lambda_s rho) = diag(rho)."""
    H = model.hamiltonian()
    rho = gibbs_state(H, T, sign=+1.0)
    p = np.diag(rho).real.copy()
    p[p < 0] = 0.0
    return rho, p / p.sum()


# --- barren plateaus --------------------------------------------------------------

def brickwork_unitary(n: int, depth: int, rng: np.random.Generator) -> np.ndarray:
    """Alternating layers of Haar-random two-qubit blocks."""
    U = np.eye(2**n, dtype=complex)
    for layer in range(depth):
        start = layer % 2
        for q in range(start, n - 1, 2):
            g = sc.haar_random_unitary(4, rng)
            U = sc.expand_gate(g, [q, q + 1], n) @ U
    return U


def barren_gradient_sample(n: int, H, V, rng: np.random.Generator,
                           mode: str = "brickwork",
                           depth: int | None = None, psi0=None) -> float:
    """One draw of dE/dtheta at theta = 0 for E = <0|U-^dag e^{i theta V}
    U+^dag H U+ e^{-i theta V} U-|0>, i.e. i<0|U-^dag [V, U+^dag H U+] U-|0>."""
    if mode == "haar":
        Um = sc.haar_random_unitary(2**n, rng)
        Up = sc.haar_random_unitary(2**n, rng)
    elif mode == "brickwork":
        depth = depth or 3 * n
        Um = brickwork_unitary(n, depth, rng)
        Up = brickwork_unitary(n, depth, rng)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    psi = sc.basis_state(n) if psi0 is None else psi0
    chi = Um @ psi
    M = Up.conj().T @ np.asarray(H, dtype=complex) @ Up
    comm = V @ M - M @ V
    return float((1j * np.vdot(chi, comm @ chi)).real)


def case3_variance(H, V, n: int, purity: float = 1.0,
                   exact: bool = True) -> float:
    """Closed-form gradient variance when both U- and U+ are independent
    2-designs and the input state is pure.

    The exact Haar average is
        2 tr(H~^2) [d tr(V^2) - tr(V)^2] / (d (d+1) (d^2 - 1)),
    with H~ the traceless part of H (the identity component commutes
    away). Its d -> infinity limit is the familiar
    2 tr(H~^2) tr(rho^2) (tr(V^2)/2^{3n} - tr(V)^2/2^{4n}), available with
    exact=False."""
    H = np.asarray(H, dtype=complex)
    V = np.asarray(V, dtype=complex)
    d = 2**n
    Ht = H - np.trace(H) / d * np.eye(d)
    tr_h2 = np.trace(Ht @ Ht).real
    tr_v2 = np.trace(V @ V).real
    tr_v = np.trace(V).real
    if exact:
        return float(2 * tr_h2 * purity * (d * tr_v2 - tr_v**2)
                     / (d * (d + 1) * (d**2 - 1)))
    return float(2 * tr_h2 * purity * (tr_v2 / d**3 - tr_v**2 / d**4))


def barren_experiment(n_values, ensemble: int, rng: np.random.Generator,
                      mode: str = "brickwork", H_builder=None,
                      V_builder=None):
    """Sweep of (n, mean gradient, variance, stderr of the mean).

    Defaults: global cost H = |0..0><0..0| - I/2^n (traceless) and
    V = Z on qubit 0, the configuration whose variance decays as 4^{-n}.
    """
    rows = []
    for n in n_values:
        d = 2**n
        if H_builder is None:
            H = np.zeros((d, d), dtype=complex)
            H[0, 0] = 1.0
            H -= np.eye(d) / d
        else:
            H = H_builder(n)
        V = (sc.expand_gate(sc.Z, [0], n) if V_builder is None
             else V_builder(n))
        g = np.array([
            barren_gradient_sample(n, H, V, rng, mode=mode)
            for _ in range(ensemble)
        ])
        rows.append({
            "n": n,
            "mean": float(g.mean()),
            "var": float(g.var(ddof=1)),
            "stderr": float(g.std(ddof=1) / np.sqrt(ensemble)),
            "closed_form_var": case3_variance(H, V, n),
        })
    return rows


# --- adiabatic dynamics -------------------------------------------------------------

def landau_zener(alpha: float, Delta: float, span_factor: float = 60.0,
                 rtol: float = 1e-9) -> float:
    """Integrate the two-level sweep H(t) = [[a t/2, D], [D, -a t/2]] and
    return the probability of a non-adiabatic transition.

    The asymptotic value is exp(-2 pi D^2 / a)."""
    if Delta == 0.0:
        return 1.0
    t_char = max(Delta / alpha, 1 / Delta, 1 / np.sqrt(alpha))
    T0 = span_factor * t_char

    def rhs(t, y):
        psi = y[:2] + 1j * y[2:]
        Hm = np.array([[alpha * t / 2, Delta], [Delta, -alpha * t / 2]])
        d = -1j * Hm @ psi
        return np.concatenate([d.real, d.imag])

    # instantaneous ground state at -T0
    H0 = np.array([[-alpha * T0 / 2, Delta], [Delta, alpha * T0 / 2]])
    w, Vm = np.linalg.eigh(H0)
    psi0 = Vm[:, 0].astype(complex)
    sol = solve_ivp(rhs, (-T0, T0), np.concatenate([psi0.real, psi0.imag]),
                    rtol=rtol, atol=1e-12, method="DOP853")
    if not sol.success:
        raise IntegratorDiverged(sol.message)
    psi = sol.y[:2, -1] + 1j * sol.y[2:, -1]
    H1 = np.array([[alpha * T0 / 2, Delta], [Delta, -alpha * T0 / 2]])
    w, Vm = np.linalg.eigh(H1)
    excited = Vm[:, 1]
    return float(abs(np.vdot(excited, psi)) ** 2)


def adiabatic_follow(H0, H1, T: float, schedule=None, n_checks: int = 51,
                     rtol: float = 1e-9):
    """Integrate H(t) = (1 - lam(t/T)) H0 + lam(t/T) H1 from the ground
    state of H0; returns (s grid, fidelity with the instantaneous ground
    state)."""
    H0 = np.asarray(H0, dtype=complex)
    H1 = np.asarray(H1, dtype=complex)
    lam = schedule or (lambda s: s)

    def H(s):
        return (1 - lam(s)) * H0 + lam(s) * H1

    w, V = np.linalg.eigh(H0)
    if w[1] - w[0] < 1e-12:
        raise IntegratorDiverged("degenerate initial ground state")
    psi0 = V[:, 0].astype(complex)
    dim = psi0.size

    def rhs(t, y):
        psi = y[:dim] + 1j * y[dim:]
        d = -1j * (H(t / T) @ psi)
        return np.concatenate([d.real, d.imag])

    s_grid = np.linspace(0, 1, n_checks)
    sol = solve_ivp(rhs, (0.0, T), np.concatenate([psi0.real, psi0.imag]),
                    t_eval=s_grid * T, rtol=rtol, atol=1e-12,
                    method="DOP853")
    if not sol.success:
        raise IntegratorDiverged(sol.message)
    fids = np.empty(n_checks)
    for i, s in enumerate(s_grid):
        w, V = np.linalg.eigh(H(s))
        gs = V[:, 0]
        psi = sol.y[:dim, i] + 1j * sol.y[dim:, i]
        fids[i] = abs(np.vdot(gs, psi)) ** 2
    return s_grid, fids


def variational_adiabatic_descent(circ: ParamCircuit, H0, H1, s_grid,
                                  lr: float, steps_per_s: int,
                                  rng: np.random.Generator,
                                  theta0=None):
    """Follow the interpolated ground state with gradient descent; returns
    the parameter path (list of theta per s)."""
    H0 = np.asarray(H0, dtype=complex)
    H1 = np.asarray(H1, dtype=complex)
    theta = (rng.uniform(-0.1, 0.1, circ.n_params) if theta0 is None
             else np.asarray(theta0, dtype=float).copy())
    path = []
    for s in s_grid:
        Hs = (1 - s) * H0 + s * H1

        def f(th):
            return cost_expectation(circ, th, Hs)

        theta, _ = gradient_descent(
            f, lambda th: finite_difference_gradient(f, th, 1e-6),
            theta, lr=lr, steps=steps_per_s,
        )
        path.append(theta.copy())
    return path


def loss_std_profile(circ: ParamCircuit, H, theta_center, deltas,
                     samples: int, rng: np.random.Generator) -> dict:
    """Standard deviation of the cost over uniform parameter cubes of
    half-width delta around theta_center, per delta."""
    H = np.asarray(H, dtype=complex)
    theta_center = np.asarray(theta_center, dtype=float)
    out = {}
    for d in deltas:
        vals = np.empty(samples)
        for i in range(samples):
            th = theta_center + rng.uniform(-d, d, theta_center.size)
            vals[i] = cost_expectation(circ, th, H)
        out[float(d)] = float(vals.std(ddof=1))
    return out


# --- DQC1 model and classifier --------------------------------------------------------

def dqc1_model_value(unitaries) -> float:
    """f = Re tr(prod U) / 2^n for a list of layer unitaries."""
    U = np.eye(unitaries[0].shape[0], dtype=complex)
    for g in unitaries:
        U = g @ U
    return float(np.trace(U).real / U.shape[0])


def dqc1_model(circ_layers, x_gates, theta) -> float:
    """Trace model: encoding gates interleaved with trainable layers
    e^{-i theta_k P_k} (single Pauli-string generators).

    circ_layers: list of (label,) generators (one Pauli per trainable
    layer); x_gates: list of fixed (data-dependent) unitaries, one per
    slot, applied before each trainable layer."""
    n = len(circ_layers[0][0])
    gates = []
    for k, (lab,) in enumerate(circ_layers):
        gates.append(np.asarray(x_gates[k], dtype=complex))
        gates.append(sc.exp_hamiltonian(sc.pauli_matrix(lab), theta[k]))
    return dqc1_model_value(gates)


def dqc1_model_gradient(circ_layers, x_gates, theta) -> np.ndarray:
    """Gradient of the trace model: the trace is degree-1 trigonometric in
    each angle, so df/dtheta_k = (f(+pi/2 shift) - f(-pi/2 shift))/2."""
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for k in range(theta.size):
        up, dn = theta.copy(), theta.copy()
        up[k] += np.pi / 2
        dn[k] -= np.pi / 2
        grad[k] = (dqc1_model(circ_layers, x_gates, up)
                   - dqc1_model(circ_layers, x_gates, dn)) / 2
    return grad


def variational_classifier(state_fn, projectors, X, y, theta0,
                           lr: float = 0.2, epochs: int = 100):
    """Cross-entropy training of class probabilities
    l_j = <psi(x;theta)|Lambda_j|psi(x;theta)>.

    Returns (theta, loss history, training accuracy)."""
    projectors = [np.asarray(P, dtype=complex) for P in projectors]
    total = sum(projectors)
    if not np.allclose(total, np.eye(total.shape[0]), atol=1e-10):
        raise IncompleteProjectors("projectors do not sum to identity")

    def probs(xi, th):
        psi = state_fn(xi, th)
        p = np.array([np.vdot(psi, P @ psi).real for P in projectors])
        return np.clip(p, 1e-12, 1.0)

    def loss(th):
        return float(np.mean(
            [-np.log(probs(xi, th)[yi]) for xi, yi in zip(X, y)]
        ))

    theta, history = gradient_descent(
        loss, lambda th: finite_difference_gradient(loss, th, 1e-5),
        np.asarray(theta0, dtype=float), lr=lr, steps=epochs,
    )
    preds = [int(np.argmax(probs(xi, theta))) for xi in X]
    acc = float(np.mean([p == yi for p, yi in zip(preds, y)]))
    return theta, history, acc
