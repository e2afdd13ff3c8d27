"""Dense complex state-vector engine for t qudits of prime dimension d.

The amplitude vector has length d^t; the flat index is read as base-d
digits c_1 c_2 ... c_t with qudit 1 the most significant digit, matching
left-to-right ket order. Provides GHZ-type preparation, the single-qudit
Fourier transform over Z_d and its inverse, the generalized Pauli shift
|c> -> |c+m mod d>, and computational-basis measurement/sampling.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .zmod import is_prime

DIMENSION_GUARD = 2**24

# Tolerance hierarchy: strict at construction, looser for accumulated
# drift across operations, loosest at the measurement gate.
CONSTRUCTION_NORM_TOL = 1e-12
OPERATION_NORM_TOL = 1e-9
MEASUREMENT_NORM_TOL = 1e-6


class DimensionGuardError(ValueError):
    """Raised when d^t would exceed the in-memory state-vector guard."""


class UnnormalizedStateError(ValueError):
    pass


class QuditState:
    """Immutable-by-convention amplitude vector over t qudits of dimension d."""

    __slots__ = ("d", "t", "amplitudes")

    def __init__(
        self,
        d: int,
        t: int,
        amplitudes: Iterable[complex],
        *,
        norm_tol: float = CONSTRUCTION_NORM_TOL,
    ):
        if t < 1:
            raise ValueError("qudit count must be >= 1")
        if not is_prime(d):
            raise ValueError(f"qudit dimension {d} must be prime")
        if d**t > DIMENSION_GUARD:
            raise DimensionGuardError(
                f"state dimension d^t = {d}^{t} exceeds guard {DIMENSION_GUARD}"
            )
        amps = np.array(amplitudes, dtype=np.complex128)
        if amps.shape != (d**t,):
            raise ValueError(f"expected {d ** t} amplitudes, got {amps.shape}")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > norm_tol:
            raise UnnormalizedStateError(
                f"squared norm {norm_sq} deviates from 1 beyond {norm_tol}"
            )
        self.d = d
        self.t = t
        self.amplitudes = amps

    def dim(self) -> int:
        return self.d**self.t

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "QuditState":
        return QuditState(self.d, self.t, self.amplitudes.copy(),
                          norm_tol=OPERATION_NORM_TOL)


@dataclass(frozen=True)
class MeasurementOutcome:
    """Computational-basis digits, one per qudit, each in [0, d-1]."""

    digits: tuple[int, ...]

    def label(self) -> str:
        return "-".join(str(c) for c in self.digits)


def index_to_digits(index: int, d: int, t: int) -> tuple[int, ...]:
    digits = []
    for _ in range(t):
        index, r = divmod(index, d)
        digits.append(r)
    return tuple(reversed(digits))


def digits_to_index(digits: Sequence[int], d: int) -> int:
    index = 0
    for c in digits:
        index = index * d + c
    return index


def _check_guard(d: int, t: int) -> None:
    if d**t > DIMENSION_GUARD:
        raise DimensionGuardError(
            f"state dimension d^t = {d}^{t} exceeds guard {DIMENSION_GUARD}"
        )


def prepare_ghz(t: int, d: int) -> QuditState:
    """(1/sqrt(d)) sum_c |c>|c>...|c> — the protocol's entangled resource."""
    _check_guard(d, t)
    amps = np.zeros(d**t, dtype=np.complex128)
    stride = (d**t - 1) // (d - 1) if d > 1 else 1  # index of |c c ... c> is c*stride
    amps[np.arange(d) * stride] = 1.0 / np.sqrt(d)
    return QuditState(d, t, amps)


def qft_matrix(d: int) -> np.ndarray:
    """d-dimensional Fourier matrix F[b, a] = omega^{ab}/sqrt(d), omega = e^{2 pi i/d}."""
    grid = np.outer(np.arange(d), np.arange(d))
    return np.exp(2j * np.pi * grid / d) / np.sqrt(d)


def _apply_single_qudit(state: QuditState, position: int,
                        matrix: np.ndarray) -> QuditState:
    if not 1 <= position <= state.t:
        raise ValueError(f"position {position} out of range 1..{state.t}")
    d, t = state.d, state.t
    reshaped = state.amplitudes.reshape(d ** (position - 1), d, d ** (t - position))
    out = np.einsum("ba,iak->ibk", matrix, reshaped)
    return QuditState(d, t, out.reshape(-1), norm_tol=OPERATION_NORM_TOL)


def apply_qft(state: QuditState, position: int) -> QuditState:
    """|a> -> (1/sqrt(d)) sum_b e^{+2 pi i ab/d} |b> on one tensor factor."""
    return _apply_single_qudit(state, position, qft_matrix(state.d))


def apply_iqft(state: QuditState, position: int) -> QuditState:
    """Conjugate-phase inverse of apply_qft."""
    return _apply_single_qudit(state, position, qft_matrix(state.d).conj().T)


def apply_shift(state: QuditState, position: int, m: int) -> QuditState:
    """Generalized Pauli shift |c> -> |c+m mod d>; pure basis relabeling.

    m is normalized mod d, so negative or oversized shifts are accepted.
    """
    if not 1 <= position <= state.t:
        raise ValueError(f"position {position} out of range 1..{state.t}")
    d, t = state.d, state.t
    reshaped = state.amplitudes.reshape(d ** (position - 1), d, d ** (t - position))
    out = np.roll(reshaped, m % d, axis=1)
    return QuditState(d, t, out.reshape(-1), norm_tol=OPERATION_NORM_TOL)


def analytic_post_transform_state(t: int, d: int,
                                  shadows: Sequence[int]) -> QuditState:
    """Closed form of the state after per-qudit QFT + shift on the GHZ state.

    Uniform superposition (amplitude d^{-(t-1)/2}) over the d^{t-1} basis
    states whose digit sum is congruent to the shadow sum mod d.
    """
    if len(shadows) != t:
        raise ValueError(f"expected {t} shadows, got {len(shadows)}")
    _check_guard(d, t)
    target = sum(s % d for s in shadows) % d
    idx = np.arange(d**t)
    digit_sum = np.zeros(d**t, dtype=np.int64)
    for _ in range(t):
        digit_sum += idx % d
        idx //= d
    amps = np.zeros(d**t, dtype=np.complex128)
    amps[digit_sum % d == target] = d ** (-(t - 1) / 2)
    return QuditState(d, t, amps)


def _checked_probabilities(state: QuditState) -> np.ndarray:
    probs = state.probabilities()
    norm = float(probs.sum())
    if abs(norm - 1.0) > MEASUREMENT_NORM_TOL:
        raise UnnormalizedStateError("unnormalized state")
    return probs / norm


def measure_all(state: QuditState, rng: np.random.Generator) -> MeasurementOutcome:
    """Sample one computational-basis outcome over all t qudits."""
    probs = _checked_probabilities(state)
    u = rng.random()
    index = int(min(np.searchsorted(np.cumsum(probs), u, side="right"),
                    state.dim() - 1))
    return MeasurementOutcome(index_to_digits(index, state.d, state.t))


def marginal_distribution(state: QuditState, position: int) -> np.ndarray:
    """Reduced computational-basis distribution of one qudit."""
    if not 1 <= position <= state.t:
        raise ValueError(f"position {position} out of range 1..{state.t}")
    d, t = state.d, state.t
    probs = _checked_probabilities(state)
    reshaped = probs.reshape(d ** (position - 1), d, d ** (t - position))
    return reshaped.sum(axis=(0, 2))


def measure_position(
    state: QuditState, position: int, rng: np.random.Generator
) -> tuple[int, QuditState]:
    """Projectively measure one qudit; returns (digit, collapsed state)."""
    d, t = state.d, state.t
    marginal = marginal_distribution(state, position)
    u = rng.random()
    digit = int(min(np.searchsorted(np.cumsum(marginal), u, side="right"), d - 1))
    reshaped = state.amplitudes.reshape(
        d ** (position - 1), d, d ** (t - position)
    ).copy()
    mask = np.arange(d) != digit
    reshaped[:, mask, :] = 0.0
    flat = reshaped.reshape(-1)
    flat = flat / np.sqrt(marginal[digit])
    return digit, QuditState(d, t, flat, norm_tol=OPERATION_NORM_TOL)


def sample_counts(
    state: QuditState, shots: int, seed: int | np.random.Generator
) -> dict[tuple[int, ...], int]:
    """Multinomial shot sampling; returns outcome digits -> count."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    probs = _checked_probabilities(state)
    counts = rng.multinomial(shots, probs)
    return {
        index_to_digits(i, state.d, state.t): int(c)
        for i, c in enumerate(counts)
        if c > 0
    }


def histogram_json(
    counts: dict[tuple[int, ...], int], d: int, t: int, shots: int, seed: int
) -> dict:
    """JSON-ready histogram keyed by dash-joined digit strings."""
    return {
        "d": d,
        "t": t,
        "shots": shots,
        "seed": seed,
        "counts": {
            "-".join(str(c) for c in digits): n
            for digits, n in sorted(counts.items())
        },
    }
