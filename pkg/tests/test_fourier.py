import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from linkorders import _accel
from linkorders.errors import NotAUnitError, SizeCapError
from linkorders.fourier import RingFunction, dft, dft_at, dft_many, translate
from linkorders.rings import HeisenbergRing, LevelZeroRing, MatrixRing, RamifiedRing

SMALL = {
    "ram2": RamifiedRing(2),
    "ram3": RamifiedRing(3),
    "ram4": RamifiedRing(2, 2),
    "mat2": MatrixRing(2),
    "mat3": MatrixRing(3, 1, 2),
    "heis2": HeisenbergRing(2),
    "lz2": LevelZeroRing(2),
    "lz3": LevelZeroRing(3),
}
needs_numba = pytest.mark.skipif(not _accel.numba_available(), reason="numba not installed")


def random_function(ring, seed):
    rng = np.random.default_rng(seed)
    return RingFunction(ring, rng.normal(size=ring.order) + 1j * rng.normal(size=ring.order))


@pytest.mark.parametrize("name", sorted(SMALL))
def test_double_transform_is_reflection(name):
    f = random_function(SMALL[name], 0)
    assert np.abs(dft(dft(f)).values - f.reflect().values).max() < 1e-9


@pytest.mark.parametrize("name", sorted(SMALL))
def test_unitary(name):
    f = random_function(SMALL[name], 1)
    g = random_function(SMALL[name], 2)
    assert abs(np.vdot(dft(f).values, dft(g).values) - np.vdot(f.values, g.values)) < 1e-8


@pytest.mark.parametrize("name", sorted(SMALL))
def test_delta_and_constant(name):
    R = SMALL[name]
    N = R.order
    delta = dft(RingFunction.indicator(R, [0])).values
    assert np.allclose(delta, N**-0.5)
    const = dft(RingFunction(R, np.ones(N))).values
    expected = np.zeros(N)
    expected[0] = N**0.5
    assert np.allclose(const, expected)


@given(st.sampled_from(sorted(SMALL)), st.integers(0, 2**31), st.data())
def test_pointwise_matches_dense(name, seed, data):
    R = SMALL[name]
    f = random_function(R, seed)
    y = data.draw(st.integers(0, R.order - 1))
    assert abs(dft_at(f, y) - dft(f).values[y]) < 1e-9


@pytest.mark.parametrize("name", ["ram3", "mat3", "heis2", "lz3"])
def test_translation_rule(name):
    R = SMALL[name]
    f = random_function(R, 3)
    F = dft(f).values
    y = R.elements()
    for g in np.random.default_rng(4).choice(R.units(), 5):
        left = dft(translate("left", int(g), f)).values
        assert np.abs(left - F[R.mul(y, np.full_like(y, g))]).max() < 1e-9
        right = dft(translate("right", int(g), f)).values
        assert np.abs(right - F[R.mul(np.full_like(y, R.inv(g)), y)]).max() < 1e-9


def test_translate_rejects_non_units():
    R = SMALL["ram3"]
    with pytest.raises(NotAUnitError):
        translate("left", R.encode(0, 1), random_function(R, 0))
    with pytest.raises(ValueError):
        translate("up", R.one, random_function(R, 0))


def test_size_cap():
    with pytest.raises(SizeCapError):
        dft_many(HeisenbergRing(7), np.zeros((7**6, 1)))


def test_numpy_backend_columns():
    R = SMALL["lz2"]
    F = np.stack([random_function(R, s).values for s in range(3)], axis=1)
    many = dft_many(R, F, "numpy")
    for c in range(3):
        assert np.allclose(many[:, c], dft(RingFunction(R, F[:, c]), "numpy").values)
    with pytest.raises(ValueError):
        dft_many(R, F, "fortran")


@needs_numba
@pytest.mark.parametrize("name", sorted(SMALL))
def test_numba_matches_numpy(name):
    R = SMALL[name]
    F = np.stack([random_function(R, s).values for s in range(4)], axis=1)
    assert np.abs(dft_many(R, F, "numba") - dft_many(R, F, "numpy")).max() < 1e-10


def _backend_in_subprocess(flag):
    env = dict(os.environ)
    env.pop(_accel.DISABLE_ENV, None)
    if flag is not None:
        env[_accel.DISABLE_ENV] = flag
    code = "import json; from linkorders import _accel; print(json.dumps(_accel.numba_enabled()))"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_env_flag_disables_numba():
    assert _backend_in_subprocess("1") is False
    assert _backend_in_subprocess(None) is _accel.numba_available()
    assert _backend_in_subprocess("0") is _accel.numba_available()
