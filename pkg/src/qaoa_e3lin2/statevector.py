"""Dense statevector reference simulator for the level-1 ansatz.

Prepares ``exp(-i beta B) exp(-i gamma C) |s>`` where ``|s>`` is the uniform
superposition, ``B`` is the sum of single-qubit X operators and ``C`` is the
diagonal spin objective of an instance. Exact expectations and Born-rule
samples from this module are the ground truth the fast analytic evaluator is
checked against.

Bit order: variable v is bit v of the basis-state integer index
(little-endian), so index ``sum_v x_v 2^v`` encodes assignment x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _caps
from .instance import Assignment, Instance

NORM_TOL = 1e-12


@dataclass(frozen=True)
class AngleParams:
    """State-preparation angles, both in radians."""

    gamma: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and math.isfinite(self.beta)):
            raise ValueError(f"angles must be finite, got gamma={self.gamma}, beta={self.beta}")


@dataclass(frozen=True, eq=False)
class QuantumState:
    """n qubits as a dense complex amplitude vector of length 2^n."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        if amp.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes for n={self.n}, got shape {amp.shape}")
        _check_norm(amp)
        object.__setattr__(self, "amplitudes", amp)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _check_norm(amp: np.ndarray) -> None:
    err = abs(float(np.sum(np.abs(amp) ** 2)) - 1.0)
    if err > NORM_TOL:
        raise FloatingPointError(f"state norm drifted by {err:.3e} (> {NORM_TOL})")


def cost_values(instance: Instance, n: int) -> np.ndarray:
    """Spin objective C(z) for every basis index of an n-qubit register."""
    if n < instance.n:
        raise ValueError(f"register n={n} smaller than instance n={instance.n}")
    idx = np.arange(1 << n, dtype=np.int64)
    total = np.zeros(1 << n, dtype=np.float64)
    for cl in instance.clauses:
        parity = ((idx >> cl.a) ^ (idx >> cl.b) ^ (idx >> cl.c)) & 1
        total += cl.sign * (1.0 - 2.0 * parity)
    total *= 0.5
    return total


def uniform_state(n: int, n_max: int | None = None) -> QuantumState:
    """The uniform superposition |s>, an eigenstate of every X."""
    n_max = _caps.default_n_max() if n_max is None else n_max
    if not 1 <= n <= n_max:
        raise ValueError(f"n must be in [1, {n_max}], got {n}")
    amp = np.full(1 << n, 2.0 ** (-n / 2.0), dtype=np.complex128)
    return QuantumState(n=n, amplitudes=amp)


def apply_cost_phase(state: QuantumState, instance: Instance, gamma: float) -> QuantumState:
    """Multiply amplitude[z] by exp(-i gamma C(z)); diagonal, norm preserving."""
    if state.n < instance.n:
        raise ValueError(f"state has {state.n} qubits, instance needs {instance.n}")
    amp = state.amplitudes * np.exp(-1j * gamma * cost_values(instance, state.n))
    _check_norm(amp)
    return QuantumState(n=state.n, amplitudes=amp)


def apply_mixer(state: QuantumState, beta: float) -> QuantumState:
    """Apply exp(-i beta X) = cos(beta) I - i sin(beta) X to every qubit."""
    amp = state.amplitudes.copy()
    cos_b = math.cos(beta)
    sin_b = math.sin(beta)
    for v in range(state.n):
        view = amp.reshape(1 << (state.n - 1 - v), 2, 1 << v)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = cos_b * a0 - 1j * sin_b * a1
        view[:, 1, :] = cos_b * a1 - 1j * sin_b * a0
    _check_norm(amp)
    return QuantumState(n=state.n, amplitudes=amp)


def prepare(instance: Instance, params: AngleParams, n_max: int | None = None) -> QuantumState:
    """The level-1 state: mixer after cost phase on the uniform state."""
    state = uniform_state(instance.n, n_max=n_max)
    state = apply_cost_phase(state, instance, params.gamma)
    return apply_mixer(state, params.beta)


def expectation(state: QuantumState, instance: Instance) -> float:
    """<state| C |state> for the diagonal spin objective; exactly real."""
    probs = state.probabilities()
    return float(np.dot(probs, cost_values(instance, state.n)))


def sample(state: QuantumState, count: int, seed: int = 0) -> list[Assignment]:
    """Draw i.i.d. computational-basis measurements; deterministic per seed."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    probs = state.probabilities()
    probs = probs / probs.sum()
    draws = rng.choice(probs.size, size=count, p=probs)
    out = []
    for z in draws:
        bits = (int(z) >> np.arange(state.n, dtype=np.int64)) & 1
        out.append(Assignment(bits.astype(np.uint8)))
    return out
