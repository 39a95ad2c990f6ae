"""Shared fixtures: the reference parameter set and a config-file factory."""

import pytest

from statecloak.channel import ChannelParams
from statecloak.model import SystemParams
from statecloak.montecarlo import SimConfig
from statecloak.secrecy import EncodingPolicy


@pytest.fixture
def ref_params():
    # a=0.6, q=r=0.01: p_bar=0.005446..., p_op=0.015625, p_n=0.025625
    return SystemParams(a=0.6, q=0.01, r=0.01)


@pytest.fixture
def ref_sim(ref_params):
    return SimConfig(
        system=ref_params,
        channels=ChannelParams(gamma_user=0.3, gamma_eaves=0.3),
        policy=EncodingPolicy(mu=0.504, seed=20240917),
        horizon=20_000,
        burn_in=500,
        trials=20,
        master_seed=42,
    )


CONFIG_TEMPLATE = """\
[system]
a = {a}
q = {q}
r = {r}

[channels]
gamma_user = {gamma_user}
gamma_eaves = {gamma_eaves}

[encoding]
mu = {mu}
seed = {seed}

[simulation]
horizon = {horizon}
burn_in = {burn_in}
trials = {trials}
master_seed = {master_seed}
"""


@pytest.fixture
def make_config(tmp_path):
    """Write a TOML experiment config; keyword args override the defaults."""

    def _make(name="exp.toml", **overrides):
        values = dict(
            a=0.6, q=0.01, r=0.01,
            gamma_user=0.3, gamma_eaves=0.3,
            mu=0.504, seed=20240917,
            horizon=20000, burn_in=500, trials=20, master_seed=42,
        )
        values.update(overrides)
        path = tmp_path / name
        path.write_text(CONFIG_TEMPLATE.format(**values))
        return path

    return _make
