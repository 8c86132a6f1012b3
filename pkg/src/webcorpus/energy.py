"""Training energy and carbon accounting.

Total draw of a training box is c*p_c + p_r + g*p_g (CPU sockets, DRAM,
GPUs). Multiplying by hours, a datacenter PUE overhead factor, and /1000
gives kWh; kWh times the grid's carbon intensity gives kg CO2e:

    kwh_pue = pue * hours * watts / 1000
    co2e_kg = grid_intensity * kwh_pue

Defaults: PUE 1.58 (2018 global datacenter average) and 0.051 kg/kWh
(French grid, November 2019). Stored values keep full float64 precision;
rendering rounds half-up to 2 decimals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError

DEFAULT_PUE = 1.58
DEFAULT_GRID_INTENSITY = 0.051  # kg CO2e per kWh


@dataclass(frozen=True)
class HardwareProfile:
    cpu_count: int
    cpu_power_w: float  # per CPU socket
    dram_power_w: float  # total across all DIMMs
    gpu_count: int
    gpu_power_w: float  # per GPU

    def __post_init__(self):
        if self.cpu_count < 0 or self.gpu_count < 0:
            raise ConfigError("device counts must be >= 0")
        if min(self.cpu_power_w, self.dram_power_w, self.gpu_power_w) < 0:
            raise ConfigError("power draws must be >= 0")
        if self.cpu_count * self.cpu_power_w + self.dram_power_w + self.gpu_count * self.gpu_power_w <= 0:
            raise ConfigError("profile draws no power")

    def to_dict(self) -> dict:
        return {
            "cpu_count": self.cpu_count,
            "cpu_power_w": self.cpu_power_w,
            "dram_power_w": self.dram_power_w,
            "gpu_count": self.gpu_count,
            "gpu_power_w": self.gpu_power_w,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HardwareProfile":
        return cls(
            cpu_count=data["cpu_count"],
            cpu_power_w=data["cpu_power_w"],
            dram_power_w=data["dram_power_w"],
            gpu_count=data["gpu_count"],
            gpu_power_w=data["gpu_power_w"],
        )


@dataclass(frozen=True)
class EnergyReport:
    profile: HardwareProfile
    hours: float
    pue: float
    grid_intensity: float
    total_watts: float
    kwh_pue: float
    co2e_kg: float
    label: str = ""


def power_draw(profile: HardwareProfile) -> float:
    """Combined draw in Watts: CPUs + DRAM + GPUs."""
    return (
        profile.cpu_count * profile.cpu_power_w
        + profile.dram_power_w
        + profile.gpu_count * profile.gpu_power_w
    )


def estimate(
    profile: HardwareProfile,
    hours: float,
    pue: float = DEFAULT_PUE,
    grid_intensity: float = DEFAULT_GRID_INTENSITY,
    label: str = "",
) -> EnergyReport:
    """Energy and emissions for one training run."""
    if hours < 0:
        raise ConfigError(f"hours must be >= 0, got {hours}")
    if pue < 1:
        raise ConfigError(f"PUE must be >= 1, got {pue}")
    if grid_intensity < 0:
        raise ConfigError(f"grid intensity must be >= 0, got {grid_intensity}")
    watts = power_draw(profile)
    kwh_pue = pue * hours * watts / 1000.0
    return EnergyReport(
        profile=profile,
        hours=hours,
        pue=pue,
        grid_intensity=grid_intensity,
        total_watts=watts,
        kwh_pue=kwh_pue,
        co2e_kg=grid_intensity * kwh_pue,
        label=label,
    )


def aggregate(reports: Iterable[EnergyReport]) -> float:
    """Total CO2e in kg across reports."""
    return sum(r.co2e_kg for r in reports)


def round2(x: float) -> float:
    """Half-up rounding to 2 decimals, the table-rendering convention."""
    return float(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def render_energy_table(reports: Sequence[EnergyReport]) -> str:
    """Text table: label, Watts, hours, days, kWh*PUE, CO2e, plus a total
    row. The total sums the rounded per-row CO2e values so the printed
    column adds up exactly to the printed total."""
    header = ("Run", "Power", "Hours", "Days", "kWh*PUE", "CO2e")
    body = []
    for r in reports:
        body.append(
            (
                r.label or "-",
                f"{r.total_watts:g}",
                f"{r.hours:.2f}",
                f"{r.hours / 24:.2f}",
                f"{round2(r.kwh_pue):.2f}",
                f"{round2(r.co2e_kg):.2f}",
            )
        )
    total = sum(round2(r.co2e_kg) for r in reports)
    body.append(("Total emissions", "", "", "", "", f"{round2(total):.2f}"))
    widths = [max(len(header[i]), *(len(row[i]) for row in body)) for i in range(6)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    for row in body:
        cells = [row[0].ljust(widths[0])]
        cells += [row[i].rjust(widths[i]) for i in range(1, 6)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def load_run_specs(path: str | Path) -> list[tuple[HardwareProfile, float, str]]:
    """Read a JSON list of {"label", "hours", "profile": {...}} entries."""
    try:
        entries = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read run specs from {path}: {exc}") from exc
    if not isinstance(entries, list):
        raise ConfigError(f"{path}: expected a JSON list of runs")
    runs = []
    for i, entry in enumerate(entries):
        try:
            profile = HardwareProfile.from_dict(entry["profile"])
            runs.append((profile, float(entry["hours"]), str(entry.get("label", f"run-{i}"))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{path}: bad run entry {i}: {exc}") from exc
    return runs
