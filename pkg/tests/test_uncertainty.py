import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoslit.apparatus import make_particle
from twoslit.errors import InvalidArgumentError
from twoslit.uncertainty import packet_uncertainties

sizes = st.floats(min_value=1e-12, max_value=1e12, allow_nan=False, allow_infinity=False)
positive = st.floats(min_value=1e-9, max_value=1e9, allow_nan=False, allow_infinity=False)


@given(d=sizes, mass=positive, energy=positive)
def test_products_are_unity(d, mass, energy):
    rep = packet_uncertainties(make_particle(mass, energy), d)
    assert abs(rep.momentum_product - 1.0) <= 1e-15
    assert abs(rep.energy_product - 1.0) <= 1e-15


def test_slow_wide_packet():
    # v = 1 exactly, D = 1e9: momentum spread 1e-9 and a 1e9 crossing time
    rep = packet_uncertainties(make_particle(1.0, 0.5), 1.0e9)
    assert rep.delta_p == 1.0e-9
    assert rep.delta_x == 1.0e9
    assert rep.delta_E == 1.0e-9
    assert rep.delta_t == 1.0e9


def test_scaling():
    part = make_particle(2.0, 3.0)
    a = packet_uncertainties(part, 10.0)
    b = packet_uncertainties(part, 20.0)
    assert b.delta_p == pytest.approx(0.5 * a.delta_p, rel=1e-15)
    assert b.delta_t == pytest.approx(2.0 * a.delta_t, rel=1e-15)


def test_domain():
    part = make_particle(1.0, 0.5)
    for bad in (0.0, -1.0):
        with pytest.raises(InvalidArgumentError):
            packet_uncertainties(part, bad)
