import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from susy_lab.errors import (
    ConvergenceError,
    DegenerateCouplingError,
    DomainError,
    SingularProfileError,
    UsageError,
)
from susy_lab.sl_engine import (
    ConstantSquare,
    EvenPolynomial,
    EvenTabulated,
    Grid,
    HarmonicSquare,
    NegConstantSquare,
    cumulative_simpson,
    harmonic_series_log_y,
    harmonic_series_logderiv,
    harmonic_series_y,
    log_y_from_u,
    riccati_logderiv,
    series_coeff_c,
)


def test_grid_layout():
    g = Grid(3.0, 13)
    assert g.h == 0.5
    assert g.x[g.mid] == 0.0
    assert np.array_equal(g.x, -g.x[::-1])
    assert np.allclose(g.x, -3.0 + np.arange(13) * 0.5, atol=1e-15)
    assert Grid.with_step(2.0, 1e-3).h == pytest.approx(1e-3)


@pytest.mark.parametrize("points", [4, 3, 10])
def test_grid_rejects_even_or_tiny(points):
    with pytest.raises(DomainError):
        Grid(1.0, points)


def test_kernels_are_even():
    x = np.linspace(-5, 5, 101)
    for k in (ConstantSquare(1.5), NegConstantSquare(0.5), HarmonicSquare(2.0), EvenPolynomial((1.0, -2.0, 0.5))):
        assert np.array_equal(k(x), k(-x))
    assert EvenPolynomial((0.0, 0.0, 1.0))(2.0) == 16.0


def test_constant_kernel_closed_form_example():
    grid = Grid(2.0, 4001)
    prof = riccati_logderiv(ConstantSquare(1.0), 0.5, grid)
    i = np.searchsorted(grid.x_half, 1.0)
    assert prof.u[i] == pytest.approx(0.5 * math.tanh(0.5), abs=1e-12)
    assert prof.u[0] == 0.0


@pytest.mark.parametrize("omega", [1.0, 2.0])
@pytest.mark.parametrize("s", [0.25, -1 / 3, 0.6])
def test_constant_kernel_tanh_profile(s, omega):
    grid = Grid.with_step(10.0 / (abs(s) * omega), 1e-3)
    prof = riccati_logderiv(ConstantSquare(omega), s, grid)
    assert np.max(np.abs(prof.u - s * omega * np.tanh(s * omega * grid.x_half))) <= 1e-8


@given(st.floats(min_value=0.05, max_value=0.95), st.sampled_from(["constant", "harmonic", "poly"]))
def test_profile_even_in_s(sigma, which):
    kernel = {"constant": ConstantSquare(1.3), "harmonic": HarmonicSquare(0.7),
              "poly": EvenPolynomial((0.2, 0.0, 1.0))}[which]
    grid = Grid(3.0, 601)
    a = riccati_logderiv(kernel, sigma, grid).u
    b = riccati_logderiv(kernel, -sigma, grid).u
    assert np.array_equal(a, b)


def test_harmonic_small_x_leading_term():
    grid = Grid(0.2, 401)
    prof = riccati_logderiv(HarmonicSquare(1.0), 1.0, grid)
    x = grid.x_half
    # u = x^3/3 - x^7/63 + ...
    assert np.max(np.abs(prof.u - x**3 / 3)) <= x[-1] ** 7 / 63 * 1.01 + 1e-13


def test_riccati_residual_is_second_order():
    res = []
    for h in (2e-3, 1e-3):
        grid = Grid.with_step(4.0, h)
        prof = riccati_logderiv(HarmonicSquare(1.0), 0.6, grid)
        u, x = prof.u, grid.x_half
        du = (u[2:] - u[:-2]) / (2 * grid.h)
        res.append(np.max(np.abs(du + u[1:-1] ** 2 - 0.36 * x[1:-1] ** 2)))
    assert 3.5 <= res[0] / res[1] <= 4.5


def test_log_y_constant_kernel():
    grid = Grid(2.0, 4001)
    ly = log_y_from_u(riccati_logderiv(ConstantSquare(1.0), 0.5, grid))
    assert ly[0] == 0.0
    assert ly[-1] == pytest.approx(math.log(math.cosh(1.0)), abs=1e-12)
    assert np.all(np.diff(ly) >= 0)
    assert np.max(np.abs(ly - np.log(np.cosh(0.5 * grid.x_half)))) <= 1e-12


def test_cumulative_simpson_zero_and_polynomial():
    assert np.array_equal(cumulative_simpson(np.zeros(11), 0.1), np.zeros(11))
    x = np.linspace(0, 1, 12)  # odd number of panels exercises the end rule
    got = cumulative_simpson(x**2, x[1] - x[0])
    assert np.allclose(got, x**3 / 3, atol=1e-15)


@pytest.mark.parametrize("p, c", [(1, 12), (2, 672), (3, 88704)])
def test_series_coefficients(p, c):
    assert series_coeff_c(p) == c


def test_series_coefficients_large_and_bad():
    assert isinstance(series_coeff_c(25), int)
    assert series_coeff_c(26) == pytest.approx(series_coeff_c(25) * 103 * 104, rel=1e-12)
    for bad in (0, -1, 1.5):
        with pytest.raises(DomainError):
            series_coeff_c(bad)


def test_series_values():
    assert harmonic_series_y(0.3, 1.7, 0.0) == 1.0
    # first correction (s w)^2 x^4 / 12
    x = 1e-2
    assert harmonic_series_y(0.5, 2.0, x) - 1.0 == pytest.approx(x**4 / 12, rel=1e-6)
    with pytest.raises(DomainError):
        harmonic_series_y(0.5, 1.0, 1.0, tol=0.0)
    with pytest.raises(ConvergenceError):
        harmonic_series_y(1.0, 1.0, 60.0)


def test_series_against_ode():
    s, omega = -1 / 3, 1.0
    grid = Grid(1.0, 2001)
    ly = log_y_from_u(riccati_logderiv(HarmonicSquare(omega), s, grid))
    assert abs(ly[-1] - math.log(harmonic_series_y(s, omega, 1.0))) <= 1e-9


def test_series_log_forms_agree():
    x = np.linspace(0, 3, 31)
    direct = np.log([harmonic_series_y(0.7, 1.2, v) for v in x])
    assert np.allclose(harmonic_series_log_y(0.7, 1.2, x), direct, atol=1e-13)
    # u = (ln y)' by a fine difference
    eps = 1e-5
    fd = (harmonic_series_log_y(0.7, 1.2, x + eps) - harmonic_series_log_y(0.7, 1.2, x - eps)) / (2 * eps)
    assert np.allclose(harmonic_series_logderiv(0.7, 1.2, x), fd, atol=1e-8)
    assert np.array_equal(harmonic_series_logderiv(0.7, 1.2, -x), -harmonic_series_logderiv(0.7, 1.2, x))


def test_series_against_bessel():
    sp = pytest.importorskip("scipy.special")
    s, omega = 0.4, 1.5
    x = np.linspace(0.05, 3, 40)
    z = abs(s) * omega * x**2 / 2
    # y is proportional to sqrt(x) I_{-1/4}(z); fix the constant at the first sample
    ref = 0.5 * np.log(x) + np.log(sp.iv(-0.25, z))
    got = harmonic_series_log_y(s, omega, x)
    assert np.allclose(got - got[0], ref - ref[0], atol=1e-12)


def test_singular_profile_reports_location():
    # k = -1 at |s| = 1: y = cos x vanishes at pi/2; a poly kernel avoids the domain pre-check
    grid = Grid(3.0, 3001)
    with pytest.raises(SingularProfileError) as err:
        riccati_logderiv(EvenPolynomial((-1.0,)), 1.0, grid)
    assert err.value.location == pytest.approx(math.pi / 2, abs=0.01)


def test_neg_constant_domain():
    with pytest.raises(DomainError):
        riccati_logderiv(NegConstantSquare(1.0), 0.5, Grid(math.pi, 101))
    grid = Grid(1.0, 2001)
    prof = riccati_logderiv(NegConstantSquare(1.0), 0.5, grid)
    assert np.allclose(prof.u, -0.5 * np.tan(0.5 * grid.x_half), atol=1e-11)


def test_degenerate_s():
    with pytest.raises(DegenerateCouplingError):
        riccati_logderiv(ConstantSquare(1.0), 0.0, Grid(1.0, 11))


def test_tabulated_kernel_csv(tmp_path):
    x = np.linspace(-4, 4, 161)
    path = tmp_path / "k.csv"
    path.write_text("x,k\n" + "".join(f"{float(a)!r},{float(b)!r}\n" for a, b in zip(x, 1.0 + 0.0 * x)))
    k = EvenTabulated.from_csv(path)
    grid = Grid(4.0, 801)
    a = riccati_logderiv(k, 0.5, grid).u
    b = riccati_logderiv(ConstantSquare(1.0), 0.5, grid).u
    assert np.max(np.abs(a - b)) <= 1e-14


@pytest.mark.parametrize("text, err", [
    ("a,b\n-1,1\n0,1\n1,1\n", UsageError),
    ("x,k\n-1,1\n0,1\n1,2\n", DomainError),
    ("x,k\n-1,1\n0.5,1\n1,1\n", DomainError),
    ("x,k\n-1,1\n1,1\n0,1\n", UsageError),
    ("x,k\n", UsageError),
])
def test_tabulated_kernel_rejects(tmp_path, text, err):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(err):
        EvenTabulated.from_csv(path)
