import numpy as np
import pytest

from beamsquint import SystemConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def make_cfg(n=32, L=32, eps=0.0, rho=1.0, M=128, fc=100e9):
    return SystemConfig(n_antennas=n, n_subcarriers=M, carrier_hz=fc,
                        bandwidth_hz=2 * eps * fc, codebook_size=L, snr_linear=rho)


def random_unit(rng, n):
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return w / np.linalg.norm(w)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[key])
