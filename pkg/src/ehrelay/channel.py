"""Random frequency-selective MIMO channels with distance-based path loss.

A :class:`Scenario` collects every physical and protocol parameter of the
two-hop link.  :func:`generate` draws one block-fading realization: i.i.d.
circularly-symmetric complex Gaussian entries (Rayleigh fading) whose
per-entry power follows a ``distance**(-pathloss_exp)`` law, one matrix
per OFDM subcarrier and hop.  Each matrix is decomposed on the spot so
that downstream code can work with per-subchannel power gains (squared
singular values).

Realizations are immutable after construction and generation is
deterministic for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import NamedTuple

import numpy as np

from ehrelay.linalg import SvdResult, svd

__all__ = [
    "ChannelRealization",
    "EffectiveSubchannels",
    "Scenario",
    "effective_subchannels",
    "generate",
    "scenario_from_file",
]


@dataclass(frozen=True)
class Scenario:
    """Physical and protocol parameters of the relay link.

    Attributes:
        n_s, n_r, n_d: Antenna counts at source, relay and destination.
        k_subcarriers: Number of OFDM subcarriers K.
        bandwidth_hz: Total system bandwidth in Hz.
        p_source: Source transmit power budget in W.
        eta: Energy conversion efficiency of the relay harvester, in (0, 1].
        phi: Relay position as the ratio d_SR / d_SD, in (0, 1).
        d_sd: Source-destination reference distance (dimensionless ratio).
        pathloss_exp: Path loss exponent.
        noise_total_w: Total receiver noise power over the whole band, W.
            Each subchannel sees ``noise_total_w / k_subcarriers``.
        seed: Seed for the default random generator.
    """

    n_s: int = 2
    n_r: int = 2
    n_d: int = 2
    k_subcarriers: int = 2
    bandwidth_hz: float = 1000.0
    p_source: float = 1.0
    eta: float = 1.0
    phi: float = 0.5
    d_sd: float = 1.0
    pathloss_exp: float = 4.0
    noise_total_w: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        for name in ("n_s", "n_r", "n_d"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive antenna count")
        if int(self.k_subcarriers) < 1:
            raise ValueError("k_subcarriers must be >= 1")
        if not self.bandwidth_hz > 0:
            raise ValueError("bandwidth_hz must be > 0")
        if not self.p_source > 0:
            raise ValueError("p_source must be > 0")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")
        if not 0.0 < self.phi < 1.0:
            raise ValueError("phi must lie strictly in (0, 1)")
        if not self.d_sd > 0:
            raise ValueError("d_sd must be > 0")
        if not self.noise_total_w > 0:
            raise ValueError("noise_total_w must be > 0")

    @property
    def noise_per_subchannel(self) -> float:
        """Noise power per subchannel (same at relay and destination)."""
        return self.noise_total_w / self.k_subcarriers

    @property
    def n_streams(self) -> int:
        """Spatial subchannels per subcarrier: min over all antenna counts."""
        return min(self.n_s, self.n_r, self.n_d)

    @property
    def d_sr(self) -> float:
        """Source-relay distance."""
        return self.phi * self.d_sd

    @property
    def d_rd(self) -> float:
        """Relay-destination distance."""
        return (1.0 - self.phi) * self.d_sd


@dataclass(frozen=True)
class ChannelRealization:
    """One block-fading draw of both hops, decomposed per subcarrier.

    ``gains1``/``gains2`` hold the ``K * n_streams`` squared singular
    values in subcarrier-major order; ``index1``/``index2`` record the
    ``(subcarrier, layer)`` provenance of each flattened entry.
    """

    scenario: Scenario
    h1: tuple[np.ndarray, ...]
    h2: tuple[np.ndarray, ...]
    svd1: tuple[SvdResult, ...]
    svd2: tuple[SvdResult, ...]
    gains1: np.ndarray
    gains2: np.ndarray
    index1: tuple[tuple[int, int], ...]
    index2: tuple[tuple[int, int], ...]


class EffectiveSubchannels(NamedTuple):
    """Sorted end-to-end subchannel gains plus provenance maps."""

    gains1: np.ndarray
    gains2: np.ndarray
    index1: tuple[tuple[int, int], ...]
    index2: tuple[tuple[int, int], ...]


def generate(scenario: Scenario, rng: np.random.Generator | None = None) -> ChannelRealization:
    """Draw one channel realization.

    Entries of hop-1 matrices are i.i.d. CN(0, d_SR**-pathloss_exp) and
    hop-2 entries use d_RD in the same way.  When ``rng`` is omitted a
    fresh ``numpy.random.default_rng(scenario.seed)`` is used, so two
    calls with the same scenario produce identical realizations.
    """
    if rng is None:
        rng = np.random.default_rng(scenario.seed)
    var1 = scenario.d_sr ** (-scenario.pathloss_exp)
    var2 = scenario.d_rd ** (-scenario.pathloss_exp)

    h1 = tuple(
        _complex_gaussian(rng, scenario.n_r, scenario.n_s, var1)
        for _ in range(scenario.k_subcarriers)
    )
    h2 = tuple(
        _complex_gaussian(rng, scenario.n_d, scenario.n_r, var2)
        for _ in range(scenario.k_subcarriers)
    )
    svd1 = tuple(svd(h) for h in h1)
    svd2 = tuple(svd(h) for h in h2)

    n = scenario.n_streams
    gains1, index1 = _flatten_gains(svd1, n)
    gains2, index2 = _flatten_gains(svd2, n)
    return ChannelRealization(
        scenario=scenario,
        h1=h1,
        h2=h2,
        svd1=svd1,
        svd2=svd2,
        gains1=gains1,
        gains2=gains2,
        index1=index1,
        index2=index2,
    )


def effective_subchannels(real: ChannelRealization) -> EffectiveSubchannels:
    """Sort both hops' flattened gains in descending order.

    The returned index maps give, for each sorted position, the
    ``(subcarrier, layer)`` pair the gain came from.
    """
    order1 = np.argsort(-real.gains1, kind="stable")
    order2 = np.argsort(-real.gains2, kind="stable")
    return EffectiveSubchannels(
        gains1=real.gains1[order1],
        gains2=real.gains2[order2],
        index1=tuple(real.index1[i] for i in order1),
        index2=tuple(real.index2[i] for i in order2),
    )


def scenario_from_file(path) -> Scenario:
    """Load a :class:`Scenario` from a plain-text ``key=value`` file.

    Lines starting with ``#`` and blank lines are ignored.  Unknown keys
    raise ``ValueError``.
    """
    values = parse_key_value_file(path)
    return scenario_from_mapping(values, source=str(path))


def scenario_from_mapping(values: dict[str, str], source: str = "<mapping>") -> Scenario:
    """Build a Scenario from string key/value pairs, rejecting unknown keys."""
    field_types = {f.name: f.type for f in fields(Scenario)}
    kwargs = {}
    for key, raw in values.items():
        if key not in field_types:
            raise ValueError(f"{source}: unknown scenario key '{key}'")
        kwargs[key] = _parse_scalar(key, raw, field_types[key])
    return Scenario(**kwargs)


def parse_key_value_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment."""
    values: dict[str, str] = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got '{line.strip()}'")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key in values:
            raise ValueError(f"{path}:{lineno}: duplicate key '{key}'")
        values[key] = raw.strip()
    return values


def _parse_scalar(key: str, raw: str, typ) -> int | float:
    type_name = typ if isinstance(typ, str) else getattr(typ, "__name__", str(typ))
    try:
        if "int" in type_name:
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ValueError(f"invalid value for '{key}': {raw!r}") from exc


def _complex_gaussian(rng: np.random.Generator, rows: int, cols: int, variance: float) -> np.ndarray:
    scale = np.sqrt(variance / 2.0)
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return scale * (re + 1j * im)


def _flatten_gains(
    svds: tuple[SvdResult, ...], n_streams: int
) -> tuple[np.ndarray, tuple[tuple[int, int], ...]]:
    gains = []
    index = []
    for k, dec in enumerate(svds):
        top = dec.singular_values[:n_streams]
        gains.extend(float(s) ** 2 for s in top)
        index.extend((k, layer) for layer in range(len(top)))
    return np.asarray(gains, dtype=float), tuple(index)
