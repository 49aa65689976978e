"""Tensor-network toolkit.

MPS factorization by successive SVD, three norm-contraction schedules with
operation-count telemetry, graph coloring by tensor contraction, and an
MPS-structured projector model for anomaly detection.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadLength, DimensionMismatch


def _sign_fix(U: np.ndarray, Vh: np.ndarray):
    """Make the largest-magnitude component of each left singular vector
    real positive so decompositions are reproducible."""
    for k in range(U.shape[1]):
        col = U[:, k]
        j = int(np.argmax(np.abs(col)))
        if abs(col[j]) > 0:
            ph = col[j] / abs(col[j])
            U[:, k] *= ph.conjugate()
            Vh[k, :] *= ph
    return U, Vh


@dataclass
class MPS:
    """Chain of rank-3 cores A^j with shapes (D_{j-1}, d_j, D_j),
    D_0 = D_N = 1."""

    tensors: list = field(default_factory=list)

    def __post_init__(self):
        left = 1
        for A in self.tensors:
            if A.ndim != 3 or A.shape[0] != left:
                raise DimensionMismatch("bond dimensions do not chain")
            left = A.shape[2]
        if self.tensors and left != 1:
            raise DimensionMismatch("final bond dimension must be 1")

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dims(self) -> list:
        return [A.shape[2] for A in self.tensors[:-1]]

    def to_dense(self) -> np.ndarray:
        """Contract to the full tensor (exponential; small N only)."""
        out = self.tensors[0][0]  # (d, D1)
        dims = [self.tensors[0].shape[1]]
        for A in self.tensors[1:]:
            out = np.tensordot(out, A, axes=(out.ndim - 1, 0))
            dims.append(A.shape[1])
        return out.reshape(dims)


def mps_from_tensor(T: np.ndarray, Dmax: int | None = None) -> MPS:
    """Successive reshape-and-SVD factorization, keeping at most Dmax
    singular values per cut."""
    T = np.asarray(T, dtype=complex)
    dims = list(T.shape)
    N = len(dims)
    if N < 2:
        raise BadLength("need at least two legs")
    cores = []
    rest = T.reshape(1, -1)
    left = 1
    for j in range(N - 1):
        d = dims[j]
        mat = rest.reshape(left * d, -1)
        U, s, Vh = np.linalg.svd(mat, full_matrices=False)
        keep = int(np.sum(s > s[0] * 1e-14)) if s.size else 1
        keep = max(keep, 1)
        if Dmax is not None:
            keep = min(keep, Dmax)
        U, s, Vh = U[:, :keep], s[:keep], Vh[:keep]
        U, Vh = _sign_fix(U, Vh)
        cores.append(U.reshape(left, d, keep))
        rest = (s[:, None] * Vh)
        left = keep
    cores.append(rest.reshape(left, dims[-1], 1))
    return MPS(cores)


class OpCounter:
    """Multiply-add telemetry for contraction schedules."""

    def __init__(self):
        self.ops = 0

    def matmul(self, A, B):
        self.ops += A.shape[0] * A.shape[1] * B.shape[-1]
        return A @ B


def mps_norm(mps: MPS, scheme: str = "sequential",
             return_ops: bool = False):
    """L2 norm of the encoded tensor.

    naive: dense reconstruction, exponential in N;
    parallel: binary tree over D^2 x D^2 transfer matrices,
    O(log N * D^6) depth;
    sequential: left-to-right boundary sweep, O(N d D^3)."""
    ctr = OpCounter()
    if scheme == "naive":
        out = mps.tensors[0][0]
        for A in mps.tensors[1:]:
            mat = out.reshape(-1, A.shape[0])
            out = ctr.matmul(mat, A.reshape(A.shape[0], -1))
        vec = out.ravel()
        ctr.ops += vec.size
        val = float(np.linalg.norm(vec))
    elif scheme == "parallel":
        mats = []
        for A in mps.tensors:
            Dl, d, Dr = A.shape
            # transfer matrix E = sum_s conj(A^s) (x) A^s
            E = np.einsum("ldr,LdR->lLrR", A.conj(), A).reshape(
                Dl * Dl, Dr * Dr
            )
            ctr.ops += Dl * Dl * Dr * Dr * d
            mats.append(E)
        while len(mats) > 1:
            nxt = []
            for i in range(0, len(mats) - 1, 2):
                nxt.append(ctr.matmul(mats[i], mats[i + 1]))
            if len(mats) % 2:
                nxt.append(mats[-1])
            mats = nxt
        val = float(np.sqrt(max(mats[0][0, 0].real, 0.0)))
    elif scheme == "sequential":
        L = np.ones((1, 1), dtype=complex)
        for A in mps.tensors:
            Dl, d, Dr = A.shape
            tmp = ctr.matmul(L, A.reshape(Dl, d * Dr)).reshape(Dl * d, Dr)
            L = ctr.matmul(A.conj().reshape(Dl * d, Dr).T, tmp)
        val = float(np.sqrt(max(L[0, 0].real, 0.0)))
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return (val, ctr.ops) if return_ops else val


def mps_to_json(mps: MPS) -> str:
    return json.dumps([
        {"shape": list(A.shape),
         "re": A.real.ravel().tolist(),
         "im": A.imag.ravel().tolist()}
        for A in mps.tensors
    ])


def mps_from_json(text: str) -> MPS:
    cores = []
    for rec in json.loads(text):
        A = (np.array(rec["re"]) + 1j * np.array(rec["im"])).reshape(
            rec["shape"]
        )
        cores.append(A)
    return MPS(cores)


# --- graph coloring ----------------------------------------------------------

def count_colorings(edges, n_vertices: int, d: int) -> int:
    """Number of proper d-colorings, contracted as a tensor network with
    one color index per vertex and a difference-indicator matrix eta per
    edge."""
    eta = np.ones((d, d)) - np.eye(d)
    letters = "abcdefghijklmnopqrstuvwxyz"
    if n_vertices > len(letters):
        raise BadLength("too many vertices")
    if not edges:
        return d ** n_vertices
    terms = [f"{letters[i]}{letters[j]}" for i, j in edges]
    spec = ",".join(terms) + "->"
    free = set(range(n_vertices)) - {v for e in edges for v in e}
    val = np.einsum(spec, *[eta] * len(edges), optimize=True)
    return int(round(float(val) * d ** len(free)))


def count_colorings_brute_force(edges, n_vertices: int, d: int) -> int:
    total = 0
    for coloring in itertools.product(range(d), repeat=n_vertices):
        if all(coloring[i] != coloring[j] for i, j in edges):
            total += 1
    return total


# --- anomaly detection -------------------------------------------------------

def trig_embedding(x, d: int = 2) -> np.ndarray:
    """Unit-norm per-site feature map; d=2 is (cos, sin)."""
    k = np.arange(d)
    v = np.cos(np.pi * x / 2 - np.pi * k / d)
    return v / np.linalg.norm(v)


def embed_sample(x, d: int = 2) -> list:
    return [trig_embedding(float(xi), d) for xi in np.atleast_1d(x)]


@dataclass
class ProjectorMPS:
    """MPS-structured linear map from (C^d)^N to (C^d)^{floor(N/S)}.

    Every S-th site carries an output leg of dimension d (core shape
    (Dl, d_in, d, Dr)); the others are bond carriers (Dl, d_in, Dr). The
    rank is at most d^{floor(N/S)}, so the kernel has at least
    d^N - d^{floor(N/S)} >= d^{N - floor(N/S)} dimensions."""

    cores: list
    S: int
    d: int

    @property
    def n_sites(self) -> int:
        return len(self.cores)

    def output_sites(self) -> list:
        return [p for p in range(self.n_sites) if (p + 1) % self.S == 0]

    def apply(self, features, return_ops: bool = False):
        """Contract the input legs with per-site feature vectors; returns
        an MPS over the output legs."""
        ctr = OpCounter()
        out_cores = []
        pending = None  # accumulated bond matrix to absorb into next output core
        for p, (core, phi) in enumerate(zip(self.cores, features)):
            if core.ndim == 4:
                A = np.tensordot(core, phi, axes=(1, 0))  # (Dl, d_out, Dr)
                ctr.ops += core.shape[0] * core.shape[1] * core.shape[2] \
                    * core.shape[3]
                if pending is not None:
                    Dl, dout, Dr = A.shape
                    A = ctr.matmul(pending, A.reshape(Dl, dout * Dr)) \
                        .reshape(pending.shape[0], dout, Dr)
                    pending = None
                out_cores.append(A)
            else:
                Mmat = np.tensordot(core, phi, axes=(1, 0))  # (Dl, Dr)
                ctr.ops += core.shape[0] * core.shape[1] * core.shape[2]
                pending = Mmat if pending is None else ctr.matmul(
                    pending, Mmat
                )
        if pending is not None:
            if out_cores:
                A = out_cores[-1]
                Dl, dout, Dr = A.shape
                A = np.tensordot(A, pending, axes=(2, 0))
                ctr.ops += Dl * dout * Dr * pending.shape[1]
                out_cores[-1] = A
            else:
                out_cores = [pending.reshape(1, 1, 1)]
        mps = MPS(out_cores)
        return (mps, ctr.ops) if return_ops else mps

def projector_to_dense(model: ProjectorMPS) -> np.ndarray:
    """Dense matrix of the projector map, input index big-endian over
    sites (small N only)."""
    N = model.n_sites
    d = model.d
    n_out = len(model.output_sites())
    M = np.empty((d ** max(n_out, 0), d ** N), dtype=complex)
    for idx in range(d ** N):
        digits = []
        v = idx
        for _ in range(N):
            digits.append(v % d)
            v //= d
        digits = digits[::-1]
        feats = [np.eye(d)[g].astype(complex) for g in digits]
        out = model.apply(feats).to_dense().ravel()
        M[:, idx] = out if out.size == M.shape[0] else out[:M.shape[0]]
    return M


def projector_frobenius(model: ProjectorMPS) -> float:
    """||P||_F by a sequential sweep summing both physical legs."""
    L = np.ones((1, 1), dtype=complex)
    for core in model.cores:
        Dl = core.shape[0]
        Dr = core.shape[-1]
        A = core.reshape(Dl, -1, Dr)
        tmp = np.tensordot(L, A, axes=(1, 0))       # (Dl, mid, Dr)
        L = np.tensordot(A.conj(), tmp, axes=([0, 1], [0, 1]))
    return float(np.sqrt(max(L[0, 0].real, 0.0)))


def anomaly_score(model: ProjectorMPS, x, return_ops: bool = False):
    """||P Phi(x)||_2 by sequential contraction."""
    feats = embed_sample(x, model.d)
    if len(feats) != model.n_sites:
        raise DimensionMismatch("sample length does not match model")
    out, ops1 = model.apply(feats, return_ops=True)
    val, ops2 = mps_norm(out, "sequential", return_ops=True)
    return (val, ops1 + ops2) if return_ops else val


def _random_projector(N: int, S: int, d: int, D: int,
                      rng: np.random.Generator) -> ProjectorMPS:
    cores = []
    left = 1
    for p in range(N):
        right = 1 if p == N - 1 else D
        if (p + 1) % S == 0:
            cores.append(rng.normal(scale=0.5, size=(left, d, d, right))
                         + 0j)
        else:
            cores.append(rng.normal(scale=0.5, size=(left, d, right)) + 0j)
        left = right
    return ProjectorMPS(cores, S, d)


def _flatten(cores):
    return np.concatenate([c.ravel() for c in cores])


def _unflatten(vec, template):
    out = []
    pos = 0
    for c in template:
        n = c.size
        out.append(vec[pos:pos + n].reshape(c.shape))
        pos += n
    return out


def anomaly_loss(model: ProjectorMPS, train, alpha: float) -> float:
    """L = (1/M) sum_x |log D(x) - 1| + alpha log ||P||_F with
    D(x) = ||P Phi(x)||_2^2, so the per-sample optimum sits at
    ||P Phi(x)|| = sqrt(e)."""
    total = 0.0
    for x in train:
        D = anomaly_score(model, x) ** 2
        total += abs(math.log(max(D, 1e-300)) - 1.0)
    total /= len(train)
    if alpha:
        total += alpha * math.log(max(projector_frobenius(model), 1e-300))
    return total


def anomaly_fit(train, S: int, alpha: float, d: int = 2, D: int = 2,
                steps: int = 200, lr: float = 0.5,
                rng: np.random.Generator | None = None,
                model: ProjectorMPS | None = None):
    """Gradient descent with backtracking on the projector cores; the
    accepted-step loss sequence is non-increasing.

    Returns (model, loss history)."""
    rng = rng or np.random.default_rng()
    N = len(np.atleast_1d(train[0]))
    if model is None:
        model = _random_projector(N, S, d, D, rng)
    theta = _flatten(model.cores).real.copy()  # real parameterization
    template = model.cores

    def build(vec):
        return ProjectorMPS(
            [c.astype(complex) for c in _unflatten(vec, template)], S, d
        )

    def loss(vec):
        return anomaly_loss(build(vec), train, alpha)

    history = [loss(theta)]
    step = lr
    for _ in range(steps):
        g = np.zeros_like(theta)
        h = 1e-6
        for i in range(theta.size):
            up = theta.copy()
            up[i] += h
            dn = theta.copy()
            dn[i] -= h
            g[i] = (loss(up) - loss(dn)) / (2 * h)
        gn = np.linalg.norm(g)
        if gn < 1e-12:
            break
        accepted = False
        while step > 1e-10:
            cand = theta - step * g
            lc = loss(cand)
            if lc <= history[-1]:
                theta = cand
                history.append(lc)
                accepted = True
                step = min(step * 1.5, lr)
                break
            step /= 2
        if not accepted:
            break
    return build(theta), history
