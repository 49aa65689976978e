"""Data encodings and the Fourier-spectrum analysis of encoding models.

Covers basis / amplitude / qsample / phase encodings, Hamiltonian-type
encoding unitaries (single Pauli, parallel and sequential repeats, and the
exponential encoding with base-3 weights), the frequency spectrum
Omega = {mu_k - mu_j}, and discrete Fourier coefficient fitting.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import simcore as sc
from .errors import (
    AliasedSpectrum,
    BadLength,
    DuplicateSample,
    UnsupportedKind,
    ZeroVector,
)


@dataclass(frozen=True)
class EncodingSpec:
    """kind in {basis, amplitude, qsample, phase, pauli, pauli-parallel,
    pauli-sequential, exponential}; params are kind-specific."""

    kind: str
    params: dict = field(default_factory=dict)

    def to_json(self):
        import json

        return json.dumps({"kind": self.kind, "params": self.params})

    @staticmethod
    def from_json(text):
        import json

        d = json.loads(text)
        return EncodingSpec(d["kind"], d.get("params", {}))


def basis_encode(samples) -> np.ndarray:
    """Uniform superposition over the samples' basis states."""
    samples = [tuple(int(b) & 1 for b in s) for s in samples]
    width = len(samples[0])
    if any(len(s) != width for s in samples):
        raise BadLength("samples differ in length")
    if len(set(samples)) != len(samples):
        raise DuplicateSample("duplicate sample")
    psi = np.zeros(2**width, dtype=complex)
    for s in samples:
        idx = int("".join(map(str, s)), 2)
        psi[idx] = 1.0
    return psi / np.linalg.norm(psi)


def bits_of(value: int, width: int) -> tuple[int, ...]:
    """Fixed-width big-endian bit tuple of an unsigned integer."""
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def amplitude_encode(vectors, normalize: bool = False) -> np.ndarray:
    """(1/sqrt(M)) sum_m sum_j x^m_j |j>|m>, with zero padding to powers
    of two. Vectors must be unit norm unless normalize=True."""
    vectors = [np.asarray(v, dtype=complex) for v in vectors]
    M = len(vectors)
    N = vectors[0].size
    for v in vectors:
        if v.size != N:
            raise BadLength("vectors differ in length")
        if np.linalg.norm(v) < 1e-14:
            raise ZeroVector("zero vector cannot be amplitude encoded")
    if normalize:
        vectors = [v / np.linalg.norm(v) for v in vectors]
    n_j = max(1, math.ceil(math.log2(N)))
    n_m = max(0, math.ceil(math.log2(M))) if M > 1 else 0
    out = np.zeros(2 ** (n_j + n_m), dtype=complex)
    for m, v in enumerate(vectors):
        for j in range(N):
            out[(j << n_m) | m] = v[j]
    return out / np.sqrt(M)


def amplitude_encode_with_norm(x) -> np.ndarray:
    """Non-unit input: append one component carrying sqrt(1 - ||x||^2)
    after rescaling so the total is a valid state."""
    x = np.asarray(x, dtype=complex)
    nrm = np.linalg.norm(x)
    if nrm < 1e-14:
        raise ZeroVector("zero vector")
    scale = max(nrm, 1.0)
    x = x / scale
    out = np.concatenate([x, [np.sqrt(max(0.0, 1.0 - np.linalg.norm(x) ** 2))]])
    pad = 2 ** math.ceil(math.log2(out.size))
    return np.concatenate([out, np.zeros(pad - out.size)])


def qsample_encode(p) -> np.ndarray:
    """Amplitudes sqrt(p_j); computational-basis measurement samples p."""
    p = np.asarray(p, dtype=float)
    if p.size & (p.size - 1):
        raise BadLength("length must be a power of two")
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ValueError("not a probability vector")
    return np.sqrt(p).astype(complex)


def phase_encode(x) -> np.ndarray:
    """Product state of qubits cos(x_i)|0> + sin(x_i)|1>, as a density
    matrix. Satisfies tr rho(x) rho(y) = prod cos^2(x_i - y_i)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    psi = np.array([1.0], dtype=complex)
    for xi in x:
        psi = np.kron(psi, np.array([np.cos(xi), np.sin(xi)]))
    return np.outer(psi, psi.conj())


# --- Hamiltonian-type encodings -------------------------------------------

def generator_eigenvalues(spec: EncodingSpec) -> np.ndarray:
    """Eigenvalues of the encoding generator G in U(x) = e^{-i x G}."""
    if spec.kind == "pauli":
        # one Pauli with eigenvalues +-gamma (default gamma = 1)
        g = spec.params.get("gamma", 1.0)
        return np.array([-g, g])
    if spec.kind == "pauli-parallel":
        r = spec.params["r"]
        # r parallel sigma_z/2 terms: eigenvalues (p - r)/2, p = 0..r
        return np.array(
            sorted({sum(s) / 2 for s in itertools.product((-1, 1), repeat=r)})
        )
    if spec.kind == "pauli-sequential":
        # sequential repeats reuse the single sigma_z/2 generator per layer
        return np.array([-0.5, 0.5])
    if spec.kind == "exponential":
        N = spec.params["N"]
        l = spec.params.get("l", 3)
        if l != 3:
            raise UnsupportedKind("exponential encoding ships with l = 3")
        sums = [0.0]
        for j in range(1, N + 1):
            beta = 3.0 ** (j - 1)
            sums = [s + sign * beta / 2 for s in sums for sign in (-1, 1)]
        return np.array(sorted(set(sums)))
    raise UnsupportedKind(f"{spec.kind!r} has no generator spectrum")


def encoding_unitary(spec: EncodingSpec, x: float) -> np.ndarray:
    """The encoding gate e^{-i x G} for Hamiltonian-type specs."""
    if spec.kind == "pauli":
        g = spec.params.get("gamma", 1.0)
        return sc.exp_hamiltonian(g * sc.Z, x)
    if spec.kind == "pauli-parallel":
        r = spec.params["r"]
        G = sum(
            sc.expand_gate(sc.Z / 2, [q], r) for q in range(r)
        )
        return sc.exp_hamiltonian(G, x)
    if spec.kind == "pauli-sequential":
        return sc.exp_hamiltonian(sc.Z / 2, x)
    if spec.kind == "exponential":
        N = spec.params["N"]
        out = np.array([[1.0 + 0j]])
        for j in range(1, N + 1):
            out = np.kron(out, sc.exp_hamiltonian(3.0 ** (j - 1) / 2 * sc.Z, x))
        return out
    raise UnsupportedKind(f"{spec.kind!r} is not a Hamiltonian-type encoding")


def _layer_count(spec: EncodingSpec, layers: int) -> int:
    if spec.kind == "pauli-sequential":
        return spec.params["r"] * layers
    return layers


def frequency_spectrum(spec: EncodingSpec, layers: int = 1) -> np.ndarray:
    """Omega = {Lambda_k - Lambda_j} over L-fold sums of generator
    eigenvalues; sorted, symmetric, contains 0."""
    eigs = generator_eigenvalues(spec)
    L = _layer_count(spec, layers)
    sums = {0.0}
    for _ in range(L):
        sums = {s + e for s in sums for e in eigs}
    sums = np.array(sorted(sums))
    omegas = sorted({round(float(a - b), 12) for a in sums for b in sums})
    return np.array(omegas)


# --- Fourier fitting ---------------------------------------------------------

def fit_fourier_coefficients(model, omegas, oversample: int = 2) -> dict:
    """Fit f(x) = sum_w c_w e^{iwx} on an integer spectrum.

    Samples the 2*pi-periodic model at K = 2*oversample*max(Omega) + 1
    equispaced points and inverts the DFT. Raises AliasedSpectrum when the
    off-spectrum residual power exceeds 1e-8 (the model has frequencies the
    sampling grid cannot separate from Omega).
    """
    omegas = np.asarray(omegas)
    ints = np.round(omegas).astype(int)
    if np.abs(omegas - ints).max() > 1e-9:
        raise ValueError("spectrum must be integer-valued for DFT fitting")
    wmax = int(np.abs(ints).max()) if ints.size else 0
    K = 2 * oversample * max(wmax, 1) + 1
    xs = 2 * np.pi * np.arange(K) / K
    fs = np.array([model(x) for x in xs], dtype=complex)
    all_c = np.fft.fft(fs) / K  # coefficient of e^{i w x} sits at index w mod K
    coeffs = {}
    off_power = 0.0
    for idx in range(K):
        w = idx if idx <= K // 2 else idx - K
        c = all_c[w % K]
        if w in ints:
            coeffs[int(w)] = complex(c)
        else:
            off_power += abs(c) ** 2
    if off_power > 1e-8:
        raise AliasedSpectrum(
            f"off-spectrum power {off_power:.3e} exceeds tolerance"
        )
    return coeffs


def off_spectrum_power(model, omegas, oversample: int = 4) -> float:
    """Total squared coefficient mass outside Omega (diagnostic)."""
    omegas = np.round(np.asarray(omegas)).astype(int)
    wmax = int(np.abs(omegas).max()) if omegas.size else 0
    K = 2 * oversample * max(wmax, 1) + 1
    xs = 2 * np.pi * np.arange(K) / K
    fs = np.array([model(x) for x in xs], dtype=complex)
    all_c = np.fft.fft(fs) / K
    power = 0.0
    for idx in range(K):
        w = idx if idx <= K // 2 else idx - K
        if w not in omegas:
            power += abs(all_c[w % K]) ** 2
    return float(power)


def encoding_model(spec: EncodingSpec, trainables, observable,
                   layers: int = 1):
    """Build f(x) = <0| V(x)^dag O V(x) |0> with V(x) alternating trainable
    blocks and encoding gates.

    `trainables` is a list of layers+1 unitaries W_0 .. W_L; the circuit is
    W_L S(x) W_{L-1} ... S(x) W_0 (sequential repeats insert the single
    gate r times per layer with pass-through trainables when provided).
    """
    gates = [np.asarray(W, dtype=complex) for W in trainables]
    if len(gates) != layers * _layer_reps(spec) + 1:
        raise BadLength(
            f"need {layers * _layer_reps(spec) + 1} trainable blocks"
        )

    def f(x: float) -> float:
        S = encoding_unitary(spec, x)
        psi = np.zeros(gates[0].shape[0], dtype=complex)
        psi[0] = 1.0
        psi = gates[0] @ psi
        for W in gates[1:]:
            psi = W @ (S @ psi)
        return float(np.vdot(psi, observable @ psi).real)

    return f


def _layer_reps(spec: EncodingSpec) -> int:
    return spec.params["r"] if spec.kind == "pauli-sequential" else 1
