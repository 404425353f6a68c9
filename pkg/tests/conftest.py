import pytest

from affine_weyl import AffineWeylGroup, TwistAuto
from root_datum import preset


@pytest.fixture(scope="session")
def groups():
    cache: dict[str, AffineWeylGroup] = {}

    def get(name: str) -> AffineWeylGroup:
        if name not in cache:
            cache[name] = AffineWeylGroup(preset(name))
        return cache[name]

    return get


@pytest.fixture(scope="session")
def twist(groups):
    def get(name: str, description: str = "id") -> TwistAuto:
        return TwistAuto.parse(groups(name), description)

    return get
