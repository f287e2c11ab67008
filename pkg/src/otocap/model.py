"""Network model for full-duplex 1-2-1 relay networks.

A 1-2-1 network has a source (node 0), ``num_relays`` relays (nodes
1..N) and a destination (node N+1).  Every node steers a single transmit
beam and a single receive beam; a directed link i -> j carries the
main-lobe gain ``alpha`` only when node i points its transmit beam at j
*and* node j points its receive beam at i.  Every other link operates at
the side-lobe gain ``beta`` (``beta = 0`` is the ideal model).

The channel matrix is stored as a dense complex array indexed by node id
as ``channel[j, i]`` = coefficient of the link i -> j.  Only the block
with receivers in [1 : N+1] and transmitters in [0 : N] is meaningful;
everything outside it is identically zero (the source never receives,
the destination never transmits, relays have no self-channel).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NetworkInstance",
    "NodeState",
    "AlignmentPattern",
    "Cut",
    "ValidationReport",
    "InvalidPatternError",
    "validate_instance",
    "validate_pattern",
    "max_degree",
    "effective_channel",
]


class InvalidPatternError(ValueError):
    """An alignment pattern does not fit the instance it is used with."""


@dataclass(frozen=True)
class AlignmentPattern:
    """A set of simultaneously aligned links, i.e. a partial matching.

    ``pairs`` holds directed links (transmitter, receiver).  Each node
    appears at most once as a transmitter and at most once as a receiver
    (full duplex: the same node may do both).  Pairs are normalised to
    ascending transmitter order, which doubles as the canonical sort key
    for pattern enumeration.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted((int(i), int(j)) for i, j in self.pairs))
        txs = [i for i, _ in pairs]
        rxs = [j for _, j in pairs]
        if len(set(txs)) != len(txs):
            raise InvalidPatternError(f"repeated transmitter in pattern {pairs}")
        if len(set(rxs)) != len(rxs):
            raise InvalidPatternError(f"repeated receiver in pattern {pairs}")
        for i, j in pairs:
            if i == j:
                raise InvalidPatternError(f"self-link {i}->{j} in pattern")
        object.__setattr__(self, "pairs", pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, pair):
        return tuple(pair) in self.pairs


EMPTY_PATTERN = AlignmentPattern(())


@dataclass(frozen=True)
class Cut:
    """A source-side cut: the set of nodes Omega with 0 in Omega.

    ``omega`` is a sorted tuple of node ids drawn from [0 : N]; the
    destination can never sit on the source side.  ``complement`` is the
    receiving side [0 : N+1] \\ Omega and always contains node N+1.
    """

    omega: tuple[int, ...]
    num_relays: int

    def __post_init__(self):
        omega = tuple(sorted(int(v) for v in self.omega))
        if len(set(omega)) != len(omega):
            raise ValueError(f"repeated node in cut {omega}")
        if 0 not in omega:
            raise ValueError("cut must contain the source (node 0)")
        if omega and not all(0 <= v <= self.num_relays for v in omega):
            raise ValueError(
                f"cut {omega} has nodes outside [0:{self.num_relays}]"
            )
        object.__setattr__(self, "omega", omega)

    @property
    def complement(self) -> tuple[int, ...]:
        inside = set(self.omega)
        return tuple(v for v in range(self.num_relays + 2) if v not in inside)


@dataclass(frozen=True)
class NodeState:
    """One joint beam configuration for every node.

    ``tx_target[i]`` is the node that i points its transmit beam at
    (None for no target), ``rx_source[i]`` the node that i listens to.
    The destination never transmits and the source never receives.
    Targets are unrestricted otherwise -- a node may point at a zero
    link, which simply never aligns anything useful.
    """

    tx_target: tuple[int | None, ...]
    rx_source: tuple[int | None, ...]

    def __post_init__(self):
        n_nodes = len(self.tx_target)
        if len(self.rx_source) != n_nodes:
            raise ValueError("tx_target and rx_source length mismatch")
        if self.tx_target[n_nodes - 1] is not None:
            raise ValueError("destination cannot transmit")
        if self.rx_source[0] is not None:
            raise ValueError("source cannot receive")


@dataclass(frozen=True)
class NetworkInstance:
    """Immutable problem instance: topology, gains and transmit power."""

    num_relays: int
    channel: np.ndarray
    power: float
    alpha: float
    beta: float
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = int(self.num_relays)
        if n < 0:
            raise ValueError("num_relays must be >= 0")
        h = np.array(self.channel, dtype=np.complex128)
        if h.shape != (n + 2, n + 2):
            raise ValueError(
                f"channel must be ({n + 2}, {n + 2}) for {n} relays, got {h.shape}"
            )
        h.flags.writeable = False
        object.__setattr__(self, "num_relays", n)
        object.__setattr__(self, "channel", h)
        object.__setattr__(self, "power", float(self.power))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    # -- basic topology helpers -------------------------------------------

    @property
    def n_nodes(self) -> int:
        return self.num_relays + 2

    @property
    def destination(self) -> int:
        return self.num_relays + 1

    def link_gain(self, i: int, j: int) -> complex:
        """Raw channel coefficient of the link i -> j."""
        return complex(self.channel[j, i])

    def has_link(self, i: int, j: int) -> bool:
        return (
            0 <= i <= self.num_relays
            and 1 <= j <= self.destination
            and i != j
            and self.channel[j, i] != 0
        )

    def links(self) -> list[tuple[int, int]]:
        """All nonzero directed links (i, j), receiver-major order."""
        out = []
        for j in range(1, self.destination + 1):
            for i in range(self.num_relays + 1):
                if i != j and self.channel[j, i] != 0:
                    out.append((i, j))
        return out

    def neighbors(self, v: int) -> set[int]:
        """Nodes adjacent to v through a nonzero link in either direction."""
        out = set()
        for u in range(self.n_nodes):
            if u == v:
                continue
            if self.has_link(v, u) or self.has_link(u, v):
                out.add(u)
        return out

    @classmethod
    def from_links(
        cls,
        num_relays: int,
        links: dict[tuple[int, int], complex],
        power: float,
        alpha: float,
        beta: float,
        metadata: dict | None = None,
    ) -> "NetworkInstance":
        """Build an instance from a sparse {(i, j): h_ji} link map."""
        n = num_relays
        h = np.zeros((n + 2, n + 2), dtype=np.complex128)
        for (i, j), gain in links.items():
            if not (0 <= i <= n and 1 <= j <= n + 1 and i != j):
                raise ValueError(f"link ({i}, {j}) outside valid index ranges")
            h[j, i] = gain
        return cls(n, h, power, alpha, beta, metadata or {})


@dataclass
class ValidationReport:
    """Outcome of validate_instance: hard violations plus soft warnings."""

    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_instance(inst: NetworkInstance) -> ValidationReport:
    """Check all structural invariants of an instance.

    Unreachability of the destination is reported as a warning, not a
    violation: an instance with no source-destination path is valid and
    simply has zero capacity.
    """
    report = ValidationReport()
    n = inst.num_relays
    h = inst.channel

    if not np.all(np.isfinite(h.view(np.float64))):
        report.violations.append("channel contains non-finite entries")
    if inst.power <= 0 or not np.isfinite(inst.power):
        report.violations.append(f"power must be positive, got {inst.power}")
    if inst.alpha <= 0 or not np.isfinite(inst.alpha):
        report.violations.append(f"alpha must be positive, got {inst.alpha}")
    if inst.beta < 0 or not np.isfinite(inst.beta):
        report.violations.append(f"beta must be nonnegative, got {inst.beta}")

    for i in range(1, n + 1):
        if h[i, i] != 0:
            report.violations.append(f"self-channel at node {i}")
    for j in range(inst.n_nodes):
        for i in range(inst.n_nodes):
            if i == j:
                continue
            valid_block = 1 <= j <= n + 1 and 0 <= i <= n
            if not valid_block and h[j, i] != 0:
                report.violations.append(
                    f"coefficient outside receiver/transmitter range at ({j}, {i})"
                )

    if not _destination_reachable(inst):
        report.warnings.append("destination unreachable from source")
    return report


def _destination_reachable(inst: NetworkInstance) -> bool:
    seen = {0}
    frontier = deque([0])
    while frontier:
        u = frontier.popleft()
        if u == inst.destination:
            return True
        for v in range(1, inst.destination + 1):
            if v not in seen and inst.has_link(u, v):
                seen.add(v)
                frontier.append(v)
    return False


def max_degree(inst: NetworkInstance, mode: str = "undirected") -> int:
    """Maximum node degree over the nonzero-link topology.

    ``undirected`` (default) counts distinct neighbors in either
    direction, so a node with links both to and from the same peer
    counts that peer once.  ``in`` and ``out`` count directed links at
    the busiest receiver / transmitter instead.
    """
    if mode == "undirected":
        counts = [len(inst.neighbors(v)) for v in range(inst.n_nodes)]
    elif mode == "in":
        counts = [
            sum(inst.has_link(i, j) for i in range(inst.n_nodes))
            for j in range(inst.n_nodes)
        ]
    elif mode == "out":
        counts = [
            sum(inst.has_link(i, j) for j in range(inst.n_nodes))
            for i in range(inst.n_nodes)
        ]
    else:
        raise ValueError(f"unknown degree mode {mode!r}")
    return max(counts, default=0)


def validate_pattern(inst: NetworkInstance, pattern: AlignmentPattern) -> None:
    """Raise InvalidPatternError unless every pair is a nonzero link."""
    for i, j in pattern:
        if not (0 <= i <= inst.num_relays and 1 <= j <= inst.destination):
            raise InvalidPatternError(
                f"pair ({i}, {j}) outside transmitter/receiver ranges"
            )
        if inst.channel[j, i] == 0:
            raise InvalidPatternError(f"pair ({i}, {j}) references a zero link")


def effective_channel(
    inst: NetworkInstance, pattern: AlignmentPattern
) -> np.ndarray:
    """Channel matrix seen under a fixed alignment pattern.

    Aligned pairs carry ``alpha`` times the raw coefficient, every other
    link the side-lobe factor ``beta``.  Shape and indexing match
    ``inst.channel``.
    """
    validate_pattern(inst, pattern)
    h = inst.beta * inst.channel
    for i, j in pattern:
        h[j, i] = inst.alpha * inst.channel[j, i]
    return h
