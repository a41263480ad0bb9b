"""Shared fixtures: expensive objects built once per session."""

from __future__ import annotations

import pytest

from ipdsaw import exactz, wetting
from ipdsaw.polymer import Variant


@pytest.fixture(scope="session")
def kernel2():
    """First-return kernel at beta = 2 out to t = 10^4."""
    return wetting.return_kernel(2.0, 10 ** 4)


@pytest.fixture(scope="session")
def free_table_400():
    """Exact sampling table for the full model, L = 400, deep collapse."""
    _, table = exactz.dp_Z(400, 2.0, 1.2, Variant.FREE)
    return table
