import pytest
from hypothesis import settings
from hypothesis import strategies as st

from avass.model import Mat, Perm

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def mats(dim=None, lo=-3, hi=3, max_dim=6):
    """Square integer matrices; a fixed dim or any dim in 1..max_dim."""
    def of(d):
        row = st.tuples(*[st.integers(lo, hi)] * d)
        return st.tuples(*[row] * d).map(Mat)
    if dim is not None:
        return of(dim)
    return st.integers(1, max_dim).flatmap(of)


def perms(dim):
    return st.permutations(list(range(dim))).map(lambda p: Perm(tuple(p)))


def transfer_like(dim, pseudo=True):
    """Matrices with at most one nonzero per column."""
    vals = [-1, 1] if pseudo else [1]
    col = st.one_of(st.none(), st.tuples(st.integers(0, dim - 1), st.sampled_from(vals)))

    def build(cols):
        rows = [[0] * dim for _ in range(dim)]
        for j, c in enumerate(cols):
            if c is not None:
                rows[c[0]][j] = c[1]
        return Mat(tuple(map(tuple, rows)))
    return st.lists(col, min_size=dim, max_size=dim).map(build)


def copy_like(dim, pseudo=True):
    return transfer_like(dim, pseudo).map(Mat.transpose)


def resets(dim):
    return st.lists(st.integers(0, 1), min_size=dim, max_size=dim).map(Mat.diag)


@pytest.fixture(scope="session")
def doubler():
    from avass.fixtures import doubler_vass
    return doubler_vass()
