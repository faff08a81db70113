import pytest
from hypothesis import HealthCheck, settings

from twoslit.apparatus import Apparatus, make_detector, make_particle

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def desk_particle():
    # p = v = 1, lambda_dB = 2 pi
    return make_particle(mass=1.0, kinetic_energy=0.5)


@pytest.fixture(scope="session")
def desk_apparatus():
    return Apparatus(
        source_x=0.0,
        L1=1.0e5,
        L2=1.0e5,
        slit_A_center=-250.0,
        slit_B_center=250.0,
        slit_width=1.0,
        screen_min=-2.0e5,
        screen_max=2.0e5,
        screen_samples=4096,
        aperture_samples=64,
    )


@pytest.fixture(scope="session")
def desk_detector():
    return make_detector(enabled=True, photon_wavelength=20.0, radius_rho=20.0, depth_epsilon=5.0)


@pytest.fixture(scope="session")
def desk_window():
    return (-1.55e5, 1.55e5)
