"""Seeded Monte Carlo experiments over three method arms with CSV output.

Each trial draws the blockage state and the three link channels from
counter-based substreams keyed by (seed, scenario, trial, site), so results
are independent of execution order and identical channels are replayed for
every method arm and sweep point of a trial (common random numbers). The
three arms are the full phase/power optimization, a single random phase draw
with waterfilling, and a system with the reflected path removed.
"""

import csv
import io
import time
from dataclasses import dataclass, fields, replace

import numpy as np

from . import flops
from .channel import FreqChannelSet, UraSpec, synthesize_link, taps_to_subcarriers
from .pga import pga_optimize
from .power import waterfill_covariances
from .propagation import GeometryConfig, LinkGains, direct_gain, indirect_gain, link_distances, p_los, sample_blockage
from .rate import RisPhases, equivalent_channel, rate_from_heq
from .rng import SITE_BLOCKAGE, SITE_LINK, SITE_PHASES, substream

ARMS = ("pga", "random_phases", "no_ris")
SCENARIOS = {"se_vs_snr": 1, "plos_vs_se": 2, "distance_vs_se": 3, "complexity_table": 4}

CSV_COLUMNS = ("scenario", "sweep_name", "sweep_value", "arm", "n_ris", "snr_db",
               "mean_se", "stderr_se", "trials", "seed", "d2")


def _square_factorization(n: int) -> tuple[int, int]:
    """rows x cols with rows the largest divisor of n not above sqrt(n)."""
    r = int(np.sqrt(n))
    while r > 1 and n % r:
        r -= 1
    return r, n // r


@dataclass
class SystemConfig:
    """Array sizes, OFDM and channel statistics, and optimizer/Monte Carlo settings."""

    tx_rows: int = 8
    tx_cols: int = 8
    rx_rows: int = 2
    rx_cols: int = 2
    ris_rows: int = 8
    ris_cols: int = 8
    spacing_wavelengths: float = 0.5
    n_streams: int | None = None  # default min(n_t, n_r)
    n_subcarriers: int = 24
    n_taps: tuple[int, int, int] = (3, 4, 5)
    rician_k: float = 10.0
    ris_clusters: int = 8
    ris_rays: int = 10
    direct_los_clusters: int = 1
    direct_los_rays: int = 1
    direct_nlos_clusters: int = 5
    direct_nlos_rays: int = 10
    angular_spread_deg: float = 10.0
    snr_db: tuple[float, ...] = (-5.0, 10.0)
    n_ris_list: tuple[int, ...] = (64, 256)  # se_vs_snr sweep
    plos_grid: tuple[float, ...] = (0.1, 0.25, 0.5, 0.75, 1.0)
    distance_grid: tuple[float, ...] = (100.0, 130.0, 160.0, 190.0, 220.0, 250.0)
    mc_trials: int = 500
    seed: int = 0
    mu0: float = 0.1
    epsilon: float = 1e-3
    max_iter: int = 200
    noise_var: float = 1.0

    def __post_init__(self):
        for name in ("tx_rows", "tx_cols", "rx_rows", "rx_cols", "ris_rows", "ris_cols",
                     "n_subcarriers", "ris_clusters", "ris_rays", "direct_los_clusters",
                     "direct_los_rays", "direct_nlos_clusters", "direct_nlos_rays",
                     "mc_trials", "max_iter"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        self.n_taps = tuple(int(t) for t in self.n_taps)
        if len(self.n_taps) != 3 or min(self.n_taps) < 1:
            raise ValueError("n_taps must hold three positive tap counts")
        if self.n_subcarriers < max(self.n_taps):
            raise ValueError("subcarrier count must be at least the longest tap profile")
        if self.rician_k < 0:
            raise ValueError("Rician factor must be nonnegative")

    @property
    def n_t(self) -> int:
        return self.tx_rows * self.tx_cols

    @property
    def n_r(self) -> int:
        return self.rx_rows * self.rx_cols

    @property
    def n_ris(self) -> int:
        return self.ris_rows * self.ris_cols

    @property
    def tx_spec(self) -> UraSpec:
        return UraSpec(self.tx_rows, self.tx_cols, self.spacing_wavelengths)

    @property
    def rx_spec(self) -> UraSpec:
        return UraSpec(self.rx_rows, self.rx_cols, self.spacing_wavelengths)

    @property
    def ris_spec(self) -> UraSpec:
        return UraSpec(self.ris_rows, self.ris_cols, self.spacing_wavelengths)

    @property
    def angular_spread_rad(self) -> float:
        return float(np.deg2rad(self.angular_spread_deg))

    def with_n_ris(self, n_ris: int) -> "SystemConfig":
        rows, cols = _square_factorization(n_ris)
        return replace(self, ris_rows=rows, ris_cols=cols)


@dataclass
class ScenarioResult:
    """Aggregated spectral efficiency for one (scenario, sweep point, arm) cell."""

    scenario: str
    sweep_name: str
    sweep_value: float
    arm: str
    n_ris: int
    snr_db: float
    mean_se: float
    stderr_se: float
    trials: int
    seed: int
    d2: float


PRESETS = {
    "paper": {},
    "desk": {"tx_rows": 4, "tx_cols": 4, "ris_rows": 4, "ris_cols": 4,
             "n_subcarriers": 8, "mc_trials": 50, "n_ris_list": (16, 64)},
}


def preset_config(name: str = "paper") -> tuple[SystemConfig, GeometryConfig]:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return SystemConfig(**PRESETS[name]), GeometryConfig()


def reference_gain(geom: GeometryConfig) -> float:
    """Blockage-averaged direct-path gain used as the SNR reference.

    p*rho_LOS + (1-p)*rho_NLOS with p the effective LOS probability (the
    override when set); equals the plain LOS gain when p = 1.
    """
    p = geom.p_los_override if geom.p_los_override is not None else p_los(geom)
    return p * direct_gain(geom, los=True) + (1.0 - p) * direct_gain(geom, los=False)


def total_power_for_snr(cfg: SystemConfig, geom: GeometryConfig, snr_db: float) -> float:
    """Budget P_t so the dB axis reads as average per-subcarrier received direct SNR.

    P_t = K * 10^(snr/10) / reference_gain(geom) with unit noise variance.
    """
    return cfg.n_subcarriers * 10.0 ** (snr_db / 10.0) / reference_gain(geom)


def _draw_channels(cfg: SystemConfig, key: tuple, los: bool) -> FreqChannelSet:
    stacks = []
    for link in (1, 2, 3):
        taps = synthesize_link(link, cfg, substream(*key, SITE_LINK, link), los=los)
        stacks.append(taps_to_subcarriers(taps, cfg.n_subcarriers))
    return FreqChannelSet(h1=stacks[0], h2=stacks[1], h3=stacks[2])


def draw_trial(cfg: SystemConfig, geom: GeometryConfig, key: tuple) -> tuple[FreqChannelSet, LinkGains]:
    """Blockage state, link channels and pathloss gains of one Monte Carlo trial.

    `key` is the (seed, scenario index, trial) substream key; everything drawn
    here is shared by all method arms and sweep points of the trial.
    """
    prob = geom.p_los_override if geom.p_los_override is not None else p_los(geom)
    los = sample_blockage(prob, substream(*key, SITE_BLOCKAGE))
    channels = _draw_channels(cfg, key, los)
    gains = LinkGains(rho_direct=direct_gain(geom, los),
                      rho_indirect=indirect_gain(geom), los=los)
    return channels, gains


def run_trial(cfg: SystemConfig, geom: GeometryConfig, arm: str, key: tuple,
              snr_db: float, meter=None) -> float:
    """Spectral efficiency of one Monte Carlo trial for one method arm.

    `key` is the (seed, scenario index, trial) substream key. Arms share the
    trial's blockage draw and channel realizations; the random-phase arm uses
    the same phase substream that initializes the optimizer.
    """
    if arm not in ARMS:
        raise ValueError(f"unknown arm {arm!r}; choose from {ARMS}")
    channels, gains = draw_trial(cfg, geom, key)
    if arm == "no_ris":
        gains = LinkGains(rho_direct=gains.rho_direct, rho_indirect=0.0, los=gains.los)
    total_power = total_power_for_snr(cfg, geom, snr_db)
    phases_rng = substream(*key, SITE_PHASES)

    if arm == "no_ris":
        phi = RisPhases(np.ones(cfg.n_ris, dtype=complex))
        eq = equivalent_channel(channels, phi, gains)
        alloc = waterfill_covariances(eq.heq, total_power, cfg.noise_var, cfg.n_streams)
        return rate_from_heq(eq.heq, alloc.q, cfg.noise_var)
    if arm == "random_phases":
        phi = RisPhases.random(cfg.n_ris, phases_rng)
        eq = equivalent_channel(channels, phi, gains)
        alloc = waterfill_covariances(eq.heq, total_power, cfg.noise_var, cfg.n_streams)
        return rate_from_heq(eq.heq, alloc.q, cfg.noise_var)

    folded = FreqChannelSet(h1=np.sqrt(gains.rho_indirect) * channels.h1,
                            h2=channels.h2,
                            h3=np.sqrt(gains.rho_direct) * channels.h3)
    result = pga_optimize(folded, total_power, noise_var=cfg.noise_var, mu0=cfg.mu0,
                          epsilon=cfg.epsilon, max_iter=cfg.max_iter,
                          n_streams=cfg.n_streams, rng=phases_rng, meter=meter)
    return result.rate


def _aggregate(cfg: SystemConfig, geom: GeometryConfig, scenario: str, arm: str,
               sweep_name: str, sweep_value: float, snr_db: float, seed: int) -> ScenarioResult:
    scen_id = SCENARIOS[scenario]
    values = np.array([run_trial(cfg, geom, arm, (seed, scen_id, t), snr_db)
                       for t in range(cfg.mc_trials)])
    stderr = float(values.std(ddof=1) / np.sqrt(len(values))) if len(values) > 1 else 0.0
    _, d2, _ = link_distances(geom)
    return ScenarioResult(scenario=scenario, sweep_name=sweep_name, sweep_value=float(sweep_value),
                          arm=arm, n_ris=cfg.n_ris, snr_db=float(snr_db),
                          mean_se=float(values.mean()), stderr_se=stderr,
                          trials=cfg.mc_trials, seed=seed, d2=float(d2))


def run_scenario(cfg: SystemConfig, geom: GeometryConfig, scenario: str,
                 seed: int | None = None) -> list[ScenarioResult]:
    """Run one experiment scenario and return one result row per (sweep point, arm).

    se_vs_snr sweeps the SNR grid for each RIS size in cfg.n_ris_list at the
    bs_height=10, d_ris=2.2 geometry; plos_vs_se sweeps the LOS-probability
    override grid for each configured SNR at D=200, bs_height=5, d_ris=2.2;
    distance_vs_se sweeps the BS-UE distance grid at bs_height=20, d_ris=30,
    SNR=5 dB.
    """
    if scenario not in SCENARIOS or scenario == "complexity_table":
        raise ValueError(f"unknown scenario {scenario!r}; choose from "
                         f"{sorted(s for s in SCENARIOS if s != 'complexity_table')}")
    seed = cfg.seed if seed is None else int(seed)
    rows: list[ScenarioResult] = []
    if scenario == "se_vs_snr":
        g = replace(geom, bs_height=10.0, d_ris=2.2)
        for n_ris in cfg.n_ris_list:
            c = cfg.with_n_ris(n_ris)
            for snr in cfg.snr_db:
                for arm in ARMS:
                    rows.append(_aggregate(c, g, scenario, arm, "snr_db", snr, snr, seed))
    elif scenario == "plos_vs_se":
        base = replace(geom, d_bs_ue=200.0, bs_height=5.0, d_ris=2.2)
        for snr in cfg.snr_db:
            for override in cfg.plos_grid:
                g = replace(base, p_los_override=float(override))
                for arm in ARMS:
                    rows.append(_aggregate(cfg, g, scenario, arm, "p_los", override, snr, seed))
    else:  # distance_vs_se
        base = replace(geom, bs_height=20.0, d_ris=30.0)
        for d in cfg.distance_grid:
            g = replace(base, d_bs_ue=float(d))
            for arm in ARMS:
                rows.append(_aggregate(cfg, g, scenario, arm, "d_bs_ue", d, 5.0, seed))
    return rows


def complexity_table(cfg: SystemConfig, geom: GeometryConfig, n_ris_list, seed: int | None = None,
                     trials: int = 10, snr_db: float = -5.0) -> list[dict]:
    """Instrumented optimizer runs for each RIS size: mean iterations, FLOPs, runtime.

    FLOP and iteration counters depend only on the seeded draws, so rows are
    reproducible; runtimes are wall-clock measurements.
    """
    seed = cfg.seed if seed is None else int(seed)
    scen_id = SCENARIOS["complexity_table"]
    rows = []
    for n_ris in n_ris_list:
        c = cfg.with_n_ris(int(n_ris))
        iters, flop_counts, runtimes = [], [], []
        for t in range(trials):
            meter = flops.FlopMeter()
            t0 = time.perf_counter()
            run_trial(c, geom, "pga", (seed, scen_id, t), snr_db, meter=meter)
            runtimes.append(time.perf_counter() - t0)
            iters.append(meter.iterations)
            flop_counts.append(meter.flop_total)
        rows.append({"n_ris": int(n_ris),
                     "iter_count": float(np.mean(iters)),
                     "flop_count": float(np.mean(flop_counts)),
                     "runtime_s": float(np.mean(runtimes))})
    return rows


def scenario_rows_to_csv(rows: list[ScenarioResult]) -> str:
    """RFC-4180 CSV text (header + one line per result row)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.scenario, r.sweep_name, f"{r.sweep_value:.10g}", r.arm, r.n_ris,
                         f"{r.snr_db:.10g}", f"{r.mean_se:.10g}", f"{r.stderr_se:.10g}",
                         r.trials, r.seed, f"{r.d2:.10g}"])
    return buf.getvalue()


def complexity_rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["n_ris", "iter_count", "flop_count", "runtime_s"])
    for r in rows:
        writer.writerow([r["n_ris"], f"{r['iter_count']:.10g}", f"{r['flop_count']:.10g}",
                         f"{r['runtime_s']:.6f}"])
    return buf.getvalue()


# Config files hold "key = value" lines; these parsers map them onto the two
# config dataclasses. Tuples are comma-separated; booleans/None are literal.
_SYSTEM_FIELDS = {f.name: f for f in fields(SystemConfig)}
_GEOMETRY_FIELDS = {f.name: f for f in fields(GeometryConfig)}


def _parse_value(name: str, text: str):
    text = text.strip()
    if name in ("n_taps", "snr_db", "n_ris_list", "plos_grid", "distance_grid"):
        parts = [p for p in text.split(",") if p.strip()]
        if name in ("n_taps", "n_ris_list"):
            return tuple(int(p) for p in parts)
        return tuple(float(p) for p in parts)
    if text.lower() == "none":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_config(path: str | None = None, overrides: dict | None = None,
                 preset: str = "paper") -> tuple[SystemConfig, GeometryConfig]:
    """Build the configs from a preset, an optional key=value file and overrides.

    File format: UTF-8 lines of `key = value`, `#` starts a comment. Keys must
    name a SystemConfig or GeometryConfig field; anything else is an error.
    Overrides (already-typed or string values) are applied after the file.
    """
    sys_kwargs = dict(PRESETS[preset]) if preset in PRESETS else None
    if sys_kwargs is None:
        raise ValueError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    geom_kwargs: dict = {}

    def assign(key: str, raw):
        value = _parse_value(key, raw) if isinstance(raw, str) else raw
        if key in _SYSTEM_FIELDS:
            sys_kwargs[key] = value
        elif key in _GEOMETRY_FIELDS:
            geom_kwargs[key] = value
        else:
            raise ValueError(f"unknown configuration key {key!r}")

    if path is not None:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                stripped = line.split("#", 1)[0].strip()
                if not stripped:
                    continue
                if "=" not in stripped:
                    raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
                key, _, raw = stripped.partition("=")
                assign(key.strip(), raw)
    for key, raw in (overrides or {}).items():
        assign(key, raw)
    return SystemConfig(**sys_kwargs), GeometryConfig(**geom_kwargs)
