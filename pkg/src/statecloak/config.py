"""Experiment configuration files.

One TOML file fully describes an experiment:

    [system]        a, q, r, sigma0 (optional; defaults to the stationary
                    variance q / (1 - a^2))
    [channels]      gamma_user, gamma_eaves    (dropout probabilities)
    [encoding]      mu, seed                   (noise probability, shared seed)
    [simulation]    horizon, burn_in, trials, master_seed,
                    common_indicator (optional, default false)

[system] and [channels] are always required. [encoding] and [simulation]
are only needed by commands that simulate; pure design queries run without
them. Errors carry the file path and the table/key (or the TOML parser's
line and column) so a broken config is locatable at a glance.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .channel import ChannelParams
from .errors import ConfigError, ParameterError
from .model import SystemParams
from .montecarlo import SimConfig
from .secrecy import EncodingPolicy

__all__ = ["SimulationSettings", "ExperimentConfig", "load_config", "to_sim_config"]


@dataclass(frozen=True)
class SimulationSettings:
    """Trial budgets and the master seed for Monte Carlo runs."""

    horizon: int
    burn_in: int
    trials: int
    master_seed: int
    common_indicator: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed config: domain objects plus the raw document for manifests."""

    system: SystemParams
    channels: ChannelParams
    policy: EncodingPolicy | None
    simulation: SimulationSettings | None
    raw: dict[str, Any]
    path: str


def _table(doc: dict[str, Any], path: str, name: str, required: bool) -> dict[str, Any] | None:
    if name not in doc:
        if required:
            raise ConfigError(f"{path}: missing required table [{name}]")
        return None
    table = doc[name]
    if not isinstance(table, dict):
        raise ConfigError(f"{path}: [{name}] must be a table")
    return table


def _reject_unknown(table: dict[str, Any], path: str, name: str, known: set[str]) -> None:
    unknown = set(table) - known
    if unknown:
        raise ConfigError(f"{path}: [{name}] has unknown key(s): {', '.join(sorted(unknown))}")


def _number(table: dict[str, Any], path: str, name: str, key: str, required: bool = True):
    if key not in table:
        if required:
            raise ConfigError(f"{path}: [{name}] is missing required key '{key}'")
        return None
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: [{name}] {key}: expected a number, got {value!r}")
    return value


def _integer(table: dict[str, Any], path: str, name: str, key: str) -> int:
    value = _number(table, path, name, key)
    if not isinstance(value, int):
        raise ConfigError(f"{path}: [{name}] {key}: expected an integer, got {value!r}")
    return value


def _boolean(table: dict[str, Any], path: str, name: str, key: str, default: bool) -> bool:
    if key not in table:
        return default
    value = table[key]
    if not isinstance(value, bool):
        raise ConfigError(f"{path}: [{name}] {key}: expected true or false, got {value!r}")
    return value


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate a TOML experiment config.

    Domain constraint violations (unstable plant, probabilities out of
    range, ...) surface as ConfigError with the offending table named; the
    underlying parameter message is preserved.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such config file") from None
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"{path}: invalid TOML: {err}") from None

    where = str(path)
    known_tables = {"system", "channels", "encoding", "simulation"}
    unknown = set(doc) - known_tables
    if unknown:
        raise ConfigError(f"{where}: unknown table(s): {', '.join(sorted(unknown))}")

    system_t = _table(doc, where, "system", required=True)
    _reject_unknown(system_t, where, "system", {"a", "q", "r", "sigma0"})
    channels_t = _table(doc, where, "channels", required=True)
    _reject_unknown(channels_t, where, "channels", {"gamma_user", "gamma_eaves"})

    try:
        system = SystemParams(
            a=float(_number(system_t, where, "system", "a")),
            q=float(_number(system_t, where, "system", "q")),
            r=float(_number(system_t, where, "system", "r")),
            sigma0=(
                None
                if (s0 := _number(system_t, where, "system", "sigma0", required=False)) is None
                else float(s0)
            ),
        )
    except ParameterError as err:
        raise ConfigError(f"{where}: [system]: {err}") from None
    try:
        channels = ChannelParams(
            gamma_user=float(_number(channels_t, where, "channels", "gamma_user")),
            gamma_eaves=float(_number(channels_t, where, "channels", "gamma_eaves")),
        )
    except ParameterError as err:
        raise ConfigError(f"{where}: [channels]: {err}") from None

    policy = None
    encoding_t = _table(doc, where, "encoding", required=False)
    if encoding_t is not None:
        _reject_unknown(encoding_t, where, "encoding", {"mu", "seed"})
        try:
            policy = EncodingPolicy(
                mu=float(_number(encoding_t, where, "encoding", "mu")),
                seed=_integer(encoding_t, where, "encoding", "seed"),
            )
        except ParameterError as err:
            raise ConfigError(f"{where}: [encoding]: {err}") from None

    simulation = None
    simulation_t = _table(doc, where, "simulation", required=False)
    if simulation_t is not None:
        _reject_unknown(
            simulation_t,
            where,
            "simulation",
            {"horizon", "burn_in", "trials", "master_seed", "common_indicator"},
        )
        simulation = SimulationSettings(
            horizon=_integer(simulation_t, where, "simulation", "horizon"),
            burn_in=_integer(simulation_t, where, "simulation", "burn_in"),
            trials=_integer(simulation_t, where, "simulation", "trials"),
            master_seed=_integer(simulation_t, where, "simulation", "master_seed"),
            common_indicator=_boolean(
                simulation_t, where, "simulation", "common_indicator", default=False
            ),
        )

    return ExperimentConfig(
        system=system,
        channels=channels,
        policy=policy,
        simulation=simulation,
        raw=doc,
        path=where,
    )


def to_sim_config(cfg: ExperimentConfig, seed_override: int | None = None) -> SimConfig:
    """Assemble the Monte Carlo SimConfig, optionally overriding the master seed.

    The override replaces only [simulation] master_seed; the encoding seed
    is part of the scheme itself (the sensor/user shared secret) and stays
    as configured.
    """
    if cfg.policy is None:
        raise ConfigError(f"{cfg.path}: this command needs an [encoding] table")
    if cfg.simulation is None:
        raise ConfigError(f"{cfg.path}: this command needs a [simulation] table")
    sim = cfg.simulation
    try:
        return SimConfig(
            system=cfg.system,
            channels=cfg.channels,
            policy=cfg.policy,
            horizon=sim.horizon,
            burn_in=sim.burn_in,
            trials=sim.trials,
            master_seed=sim.master_seed if seed_override is None else seed_override,
            common_indicator=sim.common_indicator,
        )
    except ParameterError as err:
        raise ConfigError(f"{cfg.path}: [simulation]: {err}") from None
