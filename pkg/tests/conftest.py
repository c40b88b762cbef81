"""Shared fixtures: the expensive tables are built once per session."""

import pytest

from alpha4 import build_spf_table, sieve, special


@pytest.fixture(scope="session")
def spf_million():
    return build_spf_table(10**6 + 3)


@pytest.fixture(scope="session")
def desk_params():
    return sieve.make_scale_params(10**6)


@pytest.fixture(scope="session")
def desk_records(desk_params, spf_million):
    return special.enumerate_S(desk_params, spf_million)


@pytest.fixture(scope="session")
def shared_ctx(desk_params, spf_million, desk_records):
    # pre-seeded so the acceptance checks reuse the session tables
    return {"params": desk_params, "spf": spf_million, "records": desk_records}
