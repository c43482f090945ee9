import numpy as np
from hypothesis import given, strategies as st

from vekua.jets import Jet, multi_indices, variables

pt = st.floats(-1, 1)


def test_multi_indices_count():
    assert len(list(multi_indices(2, 3))) == 10
    assert len(list(multi_indices(3, 2))) == 10


@given(pt, pt)
def test_product_and_chain_rules(x, y):
    X, Y = variables((np.array(x), np.array(y)), 3)
    f = (X * Y).sin()
    assert np.isclose(f.partial(0), y * np.cos(x * y))
    assert np.isclose(f.partial(0, 1), np.cos(x * y) - x * y * np.sin(x * y))
    assert np.isclose(f.partial(0, 0, 1), -2 * y * np.sin(x * y) - x * y * y * np.cos(x * y))


@given(pt, pt)
def test_reciprocal_and_sqrt(x, y):
    X, Y = variables((np.array(x), np.array(y)), 2)
    g = 2 + X * X + Y
    r = g.reciprocal() * g
    assert np.isclose(r.value, 1) and abs(r.partial(0)) < 1e-12 and abs(r.partial(0, 0)) < 1e-12
    s = g.sqrt()
    assert np.allclose((s * s - g).coef, 0, atol=1e-12)


def test_embed_adds_constant_directions():
    X, Y = variables((np.array(0.3), np.array(0.4)), 2)
    f = (X * Y).exp()
    g = f.embed(3)
    assert g.nvars == 3
    assert np.isclose(g.partial(0, 1), f.partial(0, 1))
    assert g.partial(2) == 0 and g.partial(0, 2) == 0


def test_truncate_and_laplacian():
    X, Y = variables((np.array(1.0), np.array(2.0)), 2)
    f = X ** 2 - Y ** 2 + X * Y
    assert f.laplacian().value == 0
    assert f.truncate(1).order == 1
