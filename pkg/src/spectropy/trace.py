"""Immutable value types shared by every analysis stage.

Everything here is a frozen dataclass holding plain tuples: equality is
structural, instances are safe to share across threads, and the dict
forms produced by ``to_dict`` survive a JSON round trip bit-exactly for
finite doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyTraceError, NonFiniteSampleError

DEFAULT_BANDWIDTH_HZ = 200e3
DEFAULT_SAMPLE_INTERVAL_S = 180.0


@dataclass(frozen=True)
class BandMetadata:
    """Identity of one frequency band (nominally a 200 kHz channel)."""

    center_freq_hz: float
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ
    label: str = ""
    service: str | None = None

    def __post_init__(self) -> None:
        if not self.center_freq_hz > 0:
            raise ValueError(f"center_freq_hz must be positive, got {self.center_freq_hz}")
        if not self.bandwidth_hz > 0:
            raise ValueError(f"bandwidth_hz must be positive, got {self.bandwidth_hz}")

    @property
    def center_freq_mhz(self) -> float:
        return self.center_freq_hz / 1e6

    def to_dict(self) -> dict:
        return {
            "center_freq_hz": self.center_freq_hz,
            "bandwidth_hz": self.bandwidth_hz,
            "label": self.label,
            "service": self.service,
        }


def band_metadata_from_dict(d: dict) -> BandMetadata:
    return BandMetadata(
        center_freq_hz=d["center_freq_hz"],
        bandwidth_hz=d["bandwidth_hz"],
        label=d["label"],
        service=d["service"],
    )


@dataclass(frozen=True)
class PsdTrace:
    """Time-ordered PSD samples (dBm per channel bandwidth) for one band."""

    band: BandMetadata
    samples: tuple[float, ...]
    sample_interval_s: float = DEFAULT_SAMPLE_INTERVAL_S

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", tuple(float(v) for v in self.samples))
        if not self.sample_interval_s > 0:
            raise ValueError(f"sample_interval_s must be positive, got {self.sample_interval_s}")

    def __len__(self) -> int:
        return len(self.samples)

    def to_dict(self) -> dict:
        return {
            "band": self.band.to_dict(),
            "samples": list(self.samples),
            "sample_interval_s": self.sample_interval_s,
        }


def psd_trace_from_dict(d: dict) -> PsdTrace:
    return PsdTrace(
        band=band_metadata_from_dict(d["band"]),
        samples=tuple(d["samples"]),
        sample_interval_s=d["sample_interval_s"],
    )


def validate_trace(trace: PsdTrace) -> PsdTrace:
    """Check sample invariants and hand back the same trace object.

    Idempotent: a trace that validates once validates again unchanged.
    """
    if len(trace.samples) == 0:
        raise EmptyTraceError("trace has no samples")
    finite = np.isfinite(np.asarray(trace.samples, dtype=np.float64))
    if not finite.all():
        index = int(np.argmin(finite))
        raise NonFiniteSampleError(index, trace.samples[index])
    return trace


@dataclass(frozen=True)
class QuantizedTrace:
    """Integer level sequence over the alphabet {0, ..., q-1}.

    ``q`` is carried explicitly rather than inferred from ``max(levels)``
    so an all-constant trace keeps its intended alphabet size.
    ``bin_edges`` holds the interior cut points when the trace came out
    of a quantizer; it is empty for synthetic level sequences and for
    degenerate (constant) bands.
    """

    band: BandMetadata
    levels: tuple[int, ...]
    q: int
    bin_edges: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", tuple(int(v) for v in self.levels))
        object.__setattr__(self, "bin_edges", tuple(float(v) for v in self.bin_edges))
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.levels:
            arr = np.asarray(self.levels, dtype=np.int64)
            if arr.min() < 0 or arr.max() > self.q - 1:
                raise ValueError(f"levels must lie in [0, {self.q - 1}]")
        if self.bin_edges:
            edges = np.asarray(self.bin_edges, dtype=np.float64)
            if not (np.diff(edges) > 0).all():
                raise ValueError("bin_edges must be strictly increasing")

    def __len__(self) -> int:
        return len(self.levels)

    def to_dict(self) -> dict:
        return {
            "band": self.band.to_dict(),
            "levels": list(self.levels),
            "q": self.q,
            "bin_edges": list(self.bin_edges),
        }


def quantized_trace_from_dict(d: dict) -> QuantizedTrace:
    return QuantizedTrace(
        band=band_metadata_from_dict(d["band"]),
        levels=tuple(d["levels"]),
        q=d["q"],
        bin_edges=tuple(d["bin_edges"]),
    )


@dataclass(frozen=True)
class LevelDistribution:
    """Empirical level frequencies p_0..p_{q-1}, summing to one."""

    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probabilities", tuple(float(p) for p in self.probabilities))
        if not self.probabilities:
            raise ValueError("distribution needs at least one probability")
        p = np.asarray(self.probabilities, dtype=np.float64)
        if (p < 0).any() or (p > 1).any():
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")

    @property
    def q(self) -> int:
        return len(self.probabilities)


@dataclass(frozen=True)
class EntropyReport:
    """The three entropy measures (bits) for one quantized band."""

    e_rand: float
    e_unc: float
    e_actual: float
    n: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1 or self.n < 1:
            raise ValueError("q and n must be positive")
        if self.e_rand != math.log2(self.q):
            raise ValueError(f"e_rand must equal log2(q)={math.log2(self.q)}, got {self.e_rand}")
        if not 0.0 <= self.e_unc <= self.e_rand:
            raise ValueError(f"e_unc={self.e_unc} outside [0, {self.e_rand}]")
        if self.e_actual < 0.0:
            raise ValueError(f"e_actual must be non-negative, got {self.e_actual}")

    def to_dict(self) -> dict:
        return {
            "e_rand": self.e_rand,
            "e_unc": self.e_unc,
            "e_actual": self.e_actual,
            "n": self.n,
            "q": self.q,
        }


@dataclass(frozen=True)
class PredictabilityReport:
    """Upper-bound predictability for one band plus solver diagnostics.

    ``entropy_used`` is the entropy actually inverted after clamping to
    [0, log2 q]; ``clamped`` records whether the raw input fell outside
    that range (estimator noise on short traces can push it past log2 q).
    """

    pi_max: float
    entropy_used: float
    clamped: bool
    iterations: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.q > 1 and not (1.0 / self.q <= self.pi_max <= 1.0):
            raise ValueError(f"pi_max={self.pi_max} outside [1/{self.q}, 1]")
        if self.q == 1 and self.pi_max != 1.0:
            raise ValueError("pi_max must be 1 for a single-level alphabet")

    def to_dict(self) -> dict:
        return {
            "pi_max": self.pi_max,
            "entropy_used": self.entropy_used,
            "clamped": self.clamped,
            "iterations": self.iterations,
            "q": self.q,
        }
