"""Exact statevector / density-matrix simulator.

Conventions used throughout the package:
- qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
  the basis-state index
- states are plain complex numpy arrays of length 2^n (unit L2 norm)
- density matrices are Hermitian PSD trace-1 numpy arrays
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotTracePreserving,
    TargetOutOfRange,
)

# Fixed gate matrices
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
T = np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex)
PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex
    )


def phase(theta: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)


GATE_FACTORIES = {"RX": rx, "RY": ry, "RZ": rz, "P": phase}
FIXED_GATES = {
    "I": I2, "X": X, "Y": Y, "Z": Z, "H": H, "S": S, "T": T,
    "CNOT": CNOT, "CX": CNOT, "CZ": CZ, "SWAP": SWAP,
}


def n_qubits(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of 2")
    return n


def basis_state(n: int, index: int = 0) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[index] = 1.0
    return psi


def is_unitary(U: np.ndarray, tol: float = 1e-10) -> bool:
    return np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=tol)


def apply_gate(state: np.ndarray, gate: np.ndarray, targets) -> np.ndarray:
    """Apply a 2^k x 2^k unitary to the given target qubits.

    Works by index arithmetic on the amplitude array: reshape to a rank-n
    tensor, pull the target axes to the front and hit them with the matrix.
    No 2^n x 2^n matrix is ever built.
    """
    targets = list(targets)
    n = n_qubits(state.size)
    k = len(targets)
    if gate.shape != (2**k, 2**k):
        raise DimensionMismatch(
            f"gate of shape {gate.shape} does not act on {k} qubits"
        )
    for q in targets:
        if not 0 <= q < n:
            raise TargetOutOfRange(f"qubit {q} out of range for n={n}")
    if len(set(targets)) != k:
        raise TargetOutOfRange("duplicate target qubits")

    rest = [q for q in range(n) if q not in targets]
    psi = state.reshape([2] * n).transpose(targets + rest).reshape(2**k, -1)
    psi = gate @ psi
    inv = np.argsort(targets + rest)
    return psi.reshape([2] * n).transpose(inv).reshape(-1)


def apply_gate_density(rho: np.ndarray, gate: np.ndarray, targets) -> np.ndarray:
    """Conjugate a density matrix by a gate on the target qubits."""
    n = n_qubits(rho.shape[0])
    U = expand_gate(gate, targets, n)
    return U @ rho @ U.conj().T


def expand_gate(gate: np.ndarray, targets, n: int) -> np.ndarray:
    """Dense 2^n x 2^n embedding of a k-qubit gate (for small n)."""
    dim = 2**n
    out = np.empty((dim, dim), dtype=complex)
    for col in range(dim):
        out[:, col] = apply_gate(basis_state(n, col), gate, targets)
    return out


def probabilities(state: np.ndarray) -> np.ndarray:
    return np.abs(state) ** 2


def measure(state: np.ndarray, qubit: int, rng: np.random.Generator):
    """Projective measurement of one qubit in the computational basis.

    Returns (bit, collapsed statevector). The outcome follows the Born rule
    of the supplied generator.
    """
    n = n_qubits(state.size)
    if not 0 <= qubit < n:
        raise TargetOutOfRange(f"qubit {qubit} out of range for n={n}")
    psi = state.reshape([2] * n)
    p1 = float(np.sum(np.abs(np.take(psi, 1, axis=qubit)) ** 2))
    bit = 1 if rng.random() < p1 else 0
    idx = [slice(None)] * n
    idx[qubit] = 1 - bit
    psi = psi.copy()
    psi[tuple(idx)] = 0.0
    norm = np.sqrt(p1 if bit else 1.0 - p1)
    return bit, (psi / norm).reshape(-1)


def measure_all(state: np.ndarray, rng: np.random.Generator) -> tuple[int, ...]:
    """Sample a full computational-basis outcome (no collapse bookkeeping)."""
    n = n_qubits(state.size)
    k = rng.choice(state.size, p=probabilities(state) / probabilities(state).sum())
    return tuple((k >> (n - 1 - q)) & 1 for q in range(n))


def statevector_to_density(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def kraus_apply(rho: np.ndarray, ops, tol: float = 1e-8) -> np.ndarray:
    """Apply the channel rho -> sum_k A_k rho A_k^dag."""
    dim = rho.shape[0]
    total = sum(A.conj().T @ A for A in ops)
    if not np.allclose(total, np.eye(dim), atol=tol):
        raise NotTracePreserving("Kraus operators do not sum to identity")
    return sum(A @ rho @ A.conj().T for A in ops)


def pauli_matrix(label: str) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for c in label:
        out = np.kron(out, PAULIS[c])
    return out


_PAULI_STACK = np.stack([I2, X, Y, Z])  # index order matches "IXYZ"


def pauli_decompose(Hm: np.ndarray, tol: float = 0.0):
    """Expand a 2^n x 2^n matrix in the Pauli-string basis.

    Returns a list of (label, coefficient) with coefficient
    tr(P^dag H)/2^n. Coefficients below `tol` in magnitude are dropped.
    """
    dim = Hm.shape[0]
    if Hm.shape != (dim, dim):
        raise DimensionMismatch("matrix must be square")
    n = n_qubits(dim)
    # c[k_0..k_{n-1}] = tr((sigma_k0 (x) ... ) H)/2^n, contracted per qubit:
    # tr(PH) = sum_{r,c} P[r0..,c0..] H[c0..,r0..]
    letters = "abcdefghijkl"
    rows, cols, ks = letters[:n], letters[n:2 * n].upper(), letters[n:2 * n]
    terms = ",".join(f"{k}{r}{c}" for k, r, c in zip(ks, rows, cols))
    spec = f"{terms},{cols}{rows}->{''.join(ks)}"
    coeffs = np.einsum(
        spec, *([_PAULI_STACK] * n), Hm.reshape([2] * (2 * n)), optimize=True
    ) / dim
    flat = coeffs.reshape(-1)
    all_labels = ["".join(t) for t in _pauli_labels(n)]
    return [(lab, flat[i]) for i, lab in enumerate(all_labels)
            if abs(flat[i]) > tol]


def _pauli_labels(n: int):
    import itertools

    return itertools.product("IXYZ", repeat=n)


def pauli_reconstruct(terms, n: int) -> np.ndarray:
    out = np.zeros((2**n, 2**n), dtype=complex)
    for lab, c in terms:
        out += c * pauli_matrix(lab)
    return out


def hs_inner(A: np.ndarray, B: np.ndarray) -> complex:
    """Normalized Hilbert-Schmidt inner product tr(A^dag B)/2^n."""
    if A.shape != B.shape:
        raise DimensionMismatch("operands differ in shape")
    return complex(np.trace(A.conj().T @ B) / A.shape[0])


def exp_hamiltonian(Hm: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) by exact eigendecomposition."""
    if not np.allclose(Hm, Hm.conj().T, atol=1e-10):
        raise NotHermitian("input is not Hermitian")
    w, V = np.linalg.eigh(Hm)
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal
    phase fix."""
    A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    Q, R = np.linalg.qr(A)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def haar_random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def controlled(gate: np.ndarray) -> np.ndarray:
    """|0><0| (x) I + |1><1| (x) U, control on the leading qubit."""
    dim = gate.shape[0]
    out = np.eye(2 * dim, dtype=complex)
    out[dim:, dim:] = gate
    return out


def tensor(*gates: np.ndarray) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for g in gates:
        out = np.kron(out, g)
    return out


# --- circuits -----------------------------------------------------------

@dataclass(frozen=True)
class CircuitOp:
    """One circuit instruction: a named/fixed gate, a raw matrix, or a
    measurement marker."""

    name: str
    targets: tuple[int, ...]
    param: float | None = None
    matrix: np.ndarray | None = None

    def resolve(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        if self.name in FIXED_GATES:
            return FIXED_GATES[self.name]
        if self.name in GATE_FACTORIES:
            return GATE_FACTORIES[self.name](self.param)
        raise KeyError(f"unknown gate {self.name!r}")


@dataclass
class Circuit:
    n: int
    ops: list[CircuitOp] = field(default_factory=list)

    def add(self, name, targets, param=None, matrix=None):
        targets = tuple(targets) if not isinstance(targets, int) else (targets,)
        if len(set(targets)) != len(targets) or any(
            not 0 <= q < self.n for q in targets
        ):
            raise TargetOutOfRange(f"bad targets {targets} for n={self.n}")
        self.ops.append(CircuitOp(name, targets, param, matrix))
        return self

    def gate_count(self) -> int:
        return sum(1 for op in self.ops if op.name != "measure")

    def unitary(self) -> np.ndarray:
        U = np.eye(2**self.n, dtype=complex)
        for op in self.ops:
            if op.name == "measure":
                raise ValueError("circuit with measurements has no unitary")
            U = expand_gate(op.resolve(), list(op.targets), self.n) @ U
        return U

    def run(self, state=None, rng=None):
        """Execute the circuit. Returns (state, dict of measured bits)."""
        psi = basis_state(self.n) if state is None else state.astype(complex)
        bits = {}
        for op in self.ops:
            if op.name == "measure":
                if rng is None:
                    raise ValueError("measurement requires an rng")
                bit, psi = measure(psi, op.targets[0], rng)
                bits[op.targets[0]] = bit
            else:
                psi = apply_gate(psi, op.resolve(), list(op.targets))
        return psi, bits


def circuit_to_json(circ: Circuit) -> str:
    ops = []
    for op in circ.ops:
        entry = {"gate": op.name, "targets": list(op.targets)}
        if op.param is not None:
            entry["param"] = op.param
        if op.matrix is not None:
            entry["matrix"] = [
                [[float(v.real), float(v.imag)] for v in row] for row in op.matrix
            ]
        ops.append(entry)
    return json.dumps({"n": circ.n, "ops": ops})


def circuit_from_json(text: str) -> Circuit:
    data = json.loads(text)
    circ = Circuit(data["n"])
    for entry in data["ops"]:
        matrix = None
        if "matrix" in entry:
            matrix = np.array(
                [[complex(re, im) for re, im in row] for row in entry["matrix"]]
            )
        circ.add(entry["gate"], entry["targets"], entry.get("param"), matrix)
    return circ
