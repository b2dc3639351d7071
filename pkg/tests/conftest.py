import pytest

from alcove import build_datum, omega_by_cosets, realize_type, restrict_datum


@pytest.fixture(scope="session")
def datum_cache():
    """Session cache: building data repeatedly dominates test time otherwise."""
    cache = {}

    def get(label, isogeny="sc"):
        key = (label, isogeny)
        if key not in cache:
            cache[key] = build_datum(label, isogeny)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def omega_cache(datum_cache):
    cache = {}

    def get(label, isogeny="sc"):
        key = (label, isogeny)
        if key not in cache:
            datum, autos = realize_type(label, isogeny)
            if autos:
                datum = restrict_datum(datum, autos).folded
            cache[key] = omega_by_cosets(datum)
        return cache[key]

    return get
