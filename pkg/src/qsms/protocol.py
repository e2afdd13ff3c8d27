"""End-to-end orchestration of the threshold summation protocol.

Steps, in order: dealers share their secrets over a trusted classical
channel (1), each player folds their per-dealer shares into one combined
share (2), the qualified set turns combined shares into Lagrange-weighted
shadows (3), the initiator prepares and distributes a GHZ-type state (4),
each qualified player applies QFT then a Pauli shift by their shadow (5),
everyone measures and broadcasts (6), and the digits are summed mod d (7).
A run produces a JSON-serializable transcript.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import qudit
from .qudit import MeasurementOutcome, QuditState
from .shamir import Polynomial, Share, Shadow, add_shares, compute_shadow, generate_shares
from .zmod import FieldElement, is_prime, smallest_valid_prime

# Middleware hook on the initiator's quantum sends: (state, position, rng)
# -> state. The honest path installs none.
QuantumTap = Callable[[QuditState, int, np.random.Generator], QuditState]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    secrets: tuple[int, ...]
    n: int
    t: int
    d: int | None = None
    qualified: tuple[int, ...] | None = None
    evaluation_points: tuple[int, ...] | None = None
    shots: int = 8192
    seed: int = 0
    polynomials: tuple[tuple[int, ...], ...] | None = None
    allow_out_of_range_prime: bool = False

    def resolved(self) -> "ResolvedConfig":
        if self.n < 2:
            raise ConfigError("need at least 2 players")
        if not 2 <= self.t <= self.n:
            raise ConfigError(f"threshold must satisfy 2 <= t <= n, got t={self.t}")
        # Default prime: smallest in (n, 2n], so n distinct nonzero
        # evaluation points exist (a prime d = n would leave only d-1).
        d = self.d
        if d is None:
            d = self.n + 1
            while not is_prime(d):
                d += 1
            if d > 2 * self.n:  # pragma: no cover - Bertrand guarantees
                d = smallest_valid_prime(self.n)
        if not is_prime(d):
            raise ConfigError(f"d={d} is not prime")
        if not self.allow_out_of_range_prime and not self.n <= d <= 2 * self.n:
            raise ConfigError(
                f"d={d} outside [n, 2n] = [{self.n}, {2 * self.n}]"
            )
        if not self.secrets:
            raise ConfigError("need at least one secret")
        for s in self.secrets:
            if not 0 <= s < d:
                raise ConfigError(f"secret {s} outside [0, {d})")
        qualified = self.qualified if self.qualified is not None else tuple(
            range(1, self.t + 1)
        )
        if len(qualified) != self.t or len(set(qualified)) != self.t:
            raise ConfigError(f"qualified set must be {self.t} distinct players")
        if any(not 1 <= i <= self.n for i in qualified):
            raise ConfigError("qualified player index out of range")
        points = self.evaluation_points if self.evaluation_points is not None else tuple(
            range(1, self.n + 1)
        )
        if len(points) != self.n:
            raise ConfigError("need one evaluation point per player")
        if len({p % d for p in points}) != self.n or any(p % d == 0 for p in points):
            raise ConfigError("evaluation points must be distinct and nonzero mod d")
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")
        if self.polynomials is not None:
            if len(self.polynomials) != len(self.secrets):
                raise ConfigError("need one pinned polynomial per secret")
            for secret, coeffs in zip(self.secrets, self.polynomials):
                if len(coeffs) != self.t:
                    raise ConfigError("pinned polynomials must have t coefficients")
                if coeffs[0] % d != secret % d:
                    raise ConfigError(
                        f"pinned constant term {coeffs[0]} does not match secret {secret}"
                    )
        return ResolvedConfig(
            secrets=tuple(self.secrets),
            n=self.n,
            t=self.t,
            d=d,
            qualified=tuple(qualified),
            evaluation_points=tuple(points),
            shots=self.shots,
            seed=self.seed,
            polynomials=self.polynomials,
        )


@dataclass(frozen=True)
class ResolvedConfig:
    """RunConfig with every default filled in and all invariants checked."""

    secrets: tuple[int, ...]
    n: int
    t: int
    d: int
    qualified: tuple[int, ...]
    evaluation_points: tuple[int, ...]
    shots: int
    seed: int
    polynomials: tuple[tuple[int, ...], ...] | None

    def to_json(self) -> dict:
        return {
            "secrets": list(self.secrets),
            "n": self.n,
            "t": self.t,
            "d": self.d,
            "qualified": list(self.qualified),
            "evaluation_points": list(self.evaluation_points),
            "shots": self.shots,
            "seed": self.seed,
            "polynomials": [list(p) for p in self.polynomials]
            if self.polynomials is not None
            else None,
        }


@dataclass(frozen=True)
class Message:
    sender: str
    receiver: str
    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {
            "sender": self.sender,
            "receiver": self.receiver,
            "kind": self.kind,
            "payload": self.payload,
        }


@dataclass
class PlayerState:
    """One player's private record; never holds another player's data."""

    index: int
    dealer_shares: list[Share] | None = None
    combined: Share | None = None
    shadow: Shadow | None = None
    position: int | None = None


@dataclass
class PreparedRun:
    """Result of the classical phase (Steps 1-3)."""

    config: ResolvedConfig
    polynomials: list[Polynomial]
    players: list[PlayerState]
    messages: list[Message]
    shadows: list[int] = field(default_factory=list)


def deal(
    secrets: Sequence[int], config: ResolvedConfig, rng: np.random.Generator
) -> tuple[list[Polynomial], list[PlayerState], list[Message]]:
    """Step 1: each dealer shares its secret to all n players."""
    d = config.d
    polys = []
    for k, secret in enumerate(secrets):
        if not 0 <= secret < d:
            raise ConfigError(f"secret {secret} outside [0, {d})")
        if config.polynomials is not None:
            polys.append(Polynomial.from_ints(config.polynomials[k], d))
        else:
            polys.append(Polynomial.random(secret, config.t - 1, d, rng))
    players = [PlayerState(index=i, dealer_shares=[]) for i in range(1, config.n + 1)]
    messages = []
    for k, poly in enumerate(polys):
        shares = generate_shares(poly, config.evaluation_points, d)
        for player, share in zip(players, shares):
            player.dealer_shares.append(share)
            messages.append(
                Message(
                    sender=f"dealer_{k + 1}",
                    receiver=f"P{player.index}",
                    kind="share",
                    payload=share.to_json(),
                )
            )
    return polys, players, messages


def combine_local(player: PlayerState) -> Share:
    """Step 2: fold per-dealer shares into one combined share; the
    per-dealer shares are discarded from the player's record."""
    if not player.dealer_shares:
        raise ValueError(f"player {player.index} holds no shares")
    combined = player.dealer_shares[0]
    for share in player.dealer_shares[1:]:
        combined = add_shares(combined, share)
    player.combined = combined
    player.dealer_shares = None
    return combined


def prepare_run(config: ResolvedConfig, rng: np.random.Generator) -> PreparedRun:
    """Steps 1-3: deal, combine, and compute the qualified set's shadows."""
    polys, players, messages = deal(config.secrets, config, rng)
    for player in players:
        combine_local(player)
    qualified_points = [config.evaluation_points[i - 1] for i in config.qualified]
    shadows = []
    for position, i in enumerate(config.qualified, start=1):
        player = players[i - 1]
        player.position = position
        player.shadow = compute_shadow(
            player.combined, position, qualified_points, config.d
        )
        shadows.append(player.shadow.value.value)
    return PreparedRun(config, polys, players, messages, shadows)


def run_quantum_phase(
    shadows: Sequence[int],
    d: int,
    shots: int,
    rng: np.random.Generator,
    tap: QuantumTap | None = None,
) -> list[MeasurementOutcome]:
    """Steps 4-6, repeated per shot with a freshly prepared GHZ state.

    ``tap`` intercepts the initiator's particle sends (positions 2..t)
    before any QFT is applied; it is how adversaries are wired in.
    """
    t = len(shadows)
    if t < 1:
        raise ValueError("need at least one shadow")
    outcomes = []
    for _ in range(shots):
        state = qudit.prepare_ghz(t, d)
        if tap is not None:
            for position in range(2, t + 1):
                state = tap(state, position, rng)
        for position in range(1, t + 1):
            state = qudit.apply_qft(state, position)
            state = qudit.apply_shift(state, position, shadows[position - 1])
        outcomes.append(qudit.measure_all(state, rng))
    return outcomes


def aggregate(digits: Sequence[int], d: int) -> FieldElement:
    """Step 7: the broadcast digits sum to the secret total mod d."""
    for c in digits:
        if not 0 <= c < d:
            raise ValueError(f"digit {c} outside [0, {d})")
    return FieldElement(sum(digits), d)


@dataclass
class ProtocolTranscript:
    config: ResolvedConfig
    dealer_shares: list[list[Share]]
    combined_shares: list[Share]
    shadows: list[Shadow]
    messages: list[Message]
    outcomes: list[MeasurementOutcome]
    per_shot_sums: list[int]
    result: int
    result_binary: str
    seed: int

    def histogram(self) -> dict:
        counts = Counter(o.digits for o in self.outcomes)
        return qudit.histogram_json(
            dict(counts), self.config.d, self.config.t,
            len(self.outcomes), self.seed,
        )

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_json(),
            "shares": {
                "dealers": [[s.to_json() for s in row] for row in self.dealer_shares],
                "combined": [s.to_json() for s in self.combined_shares],
            },
            "shadows": [s.to_json() for s in self.shadows],
            "messages": [m.to_json() for m in self.messages],
            "histogram": self.histogram(),
            "outcomes": [list(o.digits) for o in self.outcomes],
            "per_shot_sums": self.per_shot_sums,
            "result": self.result,
            "result_binary": self.result_binary,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def run_protocol(
    config: RunConfig | ResolvedConfig, tap: QuantumTap | None = None
) -> ProtocolTranscript:
    cfg = config.resolved() if isinstance(config, RunConfig) else config
    root = np.random.SeedSequence(cfg.seed)
    deal_seq, shot_seq = root.spawn(2)

    prepared = prepare_run(cfg, np.random.default_rng(deal_seq))
    messages = list(prepared.messages)

    # Step 4 particle sends carry no classical payload beyond the slot index.
    initiator = cfg.qualified[0]
    for position, i in enumerate(cfg.qualified[1:], start=2):
        messages.append(
            Message(f"P{initiator}", f"P{i}", "particle", {"position": position})
        )

    outcomes = run_quantum_phase(
        prepared.shadows, cfg.d, cfg.shots, np.random.default_rng(shot_seq), tap=tap
    )
    sums = [int(aggregate(o.digits, cfg.d)) for o in outcomes]
    if tap is None and len(set(sums)) != 1:
        raise AssertionError("honest run produced non-constant per-shot sums")
    result = sums[0]

    # Reconstruct transcript share rows from the messages (the players have
    # already discarded their per-dealer shares).
    k = len(cfg.secrets)
    dealer_rows: list[list[Share]] = [[] for _ in range(k)]
    for poly_idx, poly in enumerate(prepared.polynomials):
        dealer_rows[poly_idx] = generate_shares(poly, cfg.evaluation_points, cfg.d)

    return ProtocolTranscript(
        config=cfg,
        dealer_shares=dealer_rows,
        combined_shares=[p.combined for p in prepared.players],
        shadows=[
            prepared.players[i - 1].shadow for i in cfg.qualified
        ],
        messages=messages,
        outcomes=outcomes,
        per_shot_sums=sums,
        result=result,
        result_binary=format(result, "b"),
        seed=cfg.seed,
    )
