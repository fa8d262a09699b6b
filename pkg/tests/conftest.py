import numpy as np
import pytest

from bishop_discs.manifolds import build_collar, choose_tau_delta, quadratic
from bishop_discs.spectral import CircleGrid


def cot_kernel_matrix(N):
    """Dense discrete conjugate-function matrix: weights (2/N) cot(pi m / N) on odd offsets m."""
    j = np.arange(N)
    m = (j[:, None] - j[None, :]) % N
    K = np.zeros((N, N))
    odd = m % 2 == 1
    K[odd] = (2.0 / N) / np.tan(np.pi * m[odd] / N)
    return K


@pytest.fixture(scope="session")
def grid256():
    return CircleGrid(256)


@pytest.fixture(scope="session")
def grid512():
    return CircleGrid(512)


@pytest.fixture(scope="session")
def collar256(grid256):
    return build_collar(grid256, 1)


@pytest.fixture(scope="session")
def collar512(grid512):
    return build_collar(grid512, 1)


@pytest.fixture(scope="session")
def quad_cut256(grid256):
    return choose_tau_delta(quadratic(), 0.5, grid256.hilbert_sup_norm)


@pytest.fixture(scope="session")
def quad_cut512(grid512):
    return choose_tau_delta(quadratic(), 0.5, grid512.hilbert_sup_norm)


class FinePicardOracle:
    """Brute-force Picard iteration on a fine grid with the dense cot-kernel matrix.

    Independent of the FFT path: the conjugate function is applied as an
    explicit matrix, with the collar conjugate computed the same way.
    """

    def __init__(self, N=4096):
        from bishop_discs.manifolds import collar_profile

        self.N = N
        self.K = cot_kernel_matrix(N)
        theta = 2 * np.pi * np.arange(N) / N
        self.Tpsi = self.K @ collar_profile(theta)

    def solve(self, h, c, t, tol=1e-15, max_iter=300):
        u = np.full(self.N, float(c))
        for _ in range(max_iter):
            new = c - t * self.Tpsi - self.K @ h(u[:, None])[:, 0]
            if np.max(np.abs(new - u)) < tol:
                return new
            u = new
        return u


@pytest.fixture(scope="session")
def fine_oracle():
    return FinePicardOracle(4096)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
