import multiprocessing
import signal
import sys

from .internal import *
from . import workspace
from .workspace import Log, LogToStringScope
from .materials import MaterialModel, ResponseSample, response_sample
from .greenfn import (BlockGeometry, Region, zeta, alpha_beta,
                      green_left, green_inside, green_right)

if TYPE_CHECKING:
    from .quadrature import QuadratureResult

# Per-frequency zero-point spectra of the block, in natural units
# (hbar = c = mu0 = eps0 = 1). "Pre-Im" quantities are
#   cE = -(1/pi) w^2 g(x, x)      cB = -(1/pi) lim d/dx d/dx' g
# and the spectral densities of <E^2> and <B^2> are their imaginary parts.

@dataclass
class VarianceDensity:
    omega: float
    x: float
    dE2: float
    dB2: float
    u: float

@dataclass
class SpectralRecord:
    omega: float
    W: float
    W_C: float
    W_free: float
    W_bulk: float

    def short_repr(self) -> str:
        return f"w={self.omega:g} W={self.W:.9g} W_C={self.W_C:.9g} W_free={self.W_free:.9g}"

### Field variances ###

def _outside_pre_im(sample: ResponseSample, L: float, x: float) -> tuple[complex, complex]:
    w = float(sample.omega)
    # Left of the block is the mirror image of the right.
    xr = x if x > L else L - x
    reflected = complex(zeta(sample, L)) * np.exp(2j * w * xr)
    return w / TWO_PI * (1j - reflected), w / TWO_PI * (1j + reflected)

def variance_density_outside(sample: ResponseSample, L: float, x: float) -> VarianceDensity:
    geom = BlockGeometry(L)
    if geom.region(x) == Region.INSIDE:
        raise RegionError(f"x={x} is inside the block [0, {L:g}]")
    cE, cB = _outside_pre_im(sample, L, x)
    # u = (dE2 + dB2)/2, the zeta terms cancel
    return VarianceDensity(float(sample.omega), x, cE.imag, cB.imag, float(sample.omega) / TWO_PI)

def _inside_pre_im(sample: ResponseSample, L: float, x: ArrayLike,
                   alpha: complex, beta: complex) -> tuple[ArrayLike, ArrayLike]:
    w, n, mu = float(sample.omega), complex(sample.n), complex(sample.mu)
    F = np.exp(2j * n * w * x) + np.exp(2j * n * w * (L - x))
    return (1j * mu * w / (TWO_PI * n) * (1 + 2 * alpha + beta * F),
            1j * mu * n * w / TWO_PI * (1 + 2 * alpha - beta * F))

def _energy_density(sample: ResponseSample, cE: ArrayLike, cB: ArrayLike) -> ArrayLike:
    mu = complex(sample.mu)
    return 0.5 * (complex(sample.d_omega_eps) * cE
                  + complex(sample.d_omega_mu) / (mu * mu) * cB).imag

def _inside_density(sample: ResponseSample, L: float, x: float,
                    alpha: complex, beta: complex) -> VarianceDensity:
    cE, cB = _inside_pre_im(sample, L, x, alpha, beta)
    return VarianceDensity(float(sample.omega), x, cE.imag, cB.imag, _energy_density(sample, cE, cB))

def variance_density_inside(sample: ResponseSample, L: float, x: float) -> VarianceDensity:
    BlockGeometry(L).require(Region.INSIDE, x)
    alpha, beta = alpha_beta(sample, L)
    return _inside_density(sample, L, x, complex(alpha), complex(beta))

# Coincidence limit of d/dx d/dx' g, differentiated term by term from the
# closed forms; the |x - x'| term contributes through its smooth part only.
def _mixed_derivative_limit(sample: ResponseSample, L: float, x: float) -> complex:
    w = float(sample.omega)
    if x > L or x < 0:
        xr = x if x > L else L - x
        return -0.5j * w - 0.5 * w * complex(zeta(sample, L)) * np.exp(2j * w * xr)
    n, mu = complex(sample.n), complex(sample.mu)
    alpha, beta = alpha_beta(sample, L)
    F = np.exp(2j * n * w * x) + np.exp(2j * n * w * (L - x))
    return -0.5j * mu * n * w * (1 + 2 * complex(alpha) - complex(beta) * F)

def variance_from_green(model: MaterialModel, L: float, omega: float, x: float) -> VarianceDensity:
    geom = BlockGeometry(L)
    if x == 0 or x == L:
        raise RegionError(f"x={x} lies on an interface of the block [0, {L:g}]")
    sample = response_sample(model, omega)
    region = geom.region(x)
    fn = {Region.LEFT: green_left, Region.INSIDE: green_inside, Region.RIGHT: green_right}[region]
    g = complex(fn(sample, L, x, x))
    cE = -omega * omega * g / math.pi
    cB = -_mixed_derivative_limit(sample, L, x) / math.pi
    u = _energy_density(sample, cE, cB) if region == Region.INSIDE else 0.5 * (cE.imag + cB.imag)
    return VarianceDensity(omega, x, cE.imag, cB.imag, u)

### Spectral energies ###

def spectral_energy(sample: ResponseSample, L: float) -> tuple[ArrayLike, ArrayLike, ArrayLike]:
    """(W, W_bulk, W_C): spectral energy of the block, of the same length of
    bulk medium, and their difference.

    Works elementwise when `sample` holds an array of frequencies.
    """
    if not L > 0:
        raise DomainError(f"block length must be > 0, got {L}")
    w, n, mu = sample.omega, sample.n, sample.mu
    alpha, beta = alpha_beta(sample, L)
    E = np.exp(2j * n * w * L)
    boundary = beta * (E - 1.0) * (mu / n) * sample.d_n_over_mu
    # Same prefactor for both so that vacuum cancels exactly.
    W = w / TWO_PI * np.imag(1j * L * (1.0 + 2.0 * alpha) * sample.d_omega_n + boundary)
    W_bulk = w / TWO_PI * np.imag(1j * L * sample.d_omega_n)
    return W, W_bulk, W - W_bulk

# W_C evaluated directly, without forming W and W_bulk.
def casimir_spectral_energy(sample: ResponseSample, L: float) -> ArrayLike:
    w, n, mu = sample.omega, sample.n, sample.mu
    alpha, beta = alpha_beta(sample, L)
    E = np.exp(2j * n * w * L)
    return w / TWO_PI * np.imag(2j * L * alpha * sample.d_omega_n
                                + beta * (E - 1.0) * (mu / n) * sample.d_n_over_mu)

def free_spectral_energy(omega: Freq, L: float) -> Freq:
    return omega * L / TWO_PI

# Integral of the energy density across the block; must equal W.
def spatial_energy(sample: ResponseSample, L: float, tol: float = 1e-11,
                   coefficients: tuple[complex, complex] | None = None) -> 'QuadratureResult':
    from .quadrature import integrate_adaptive
    alpha, beta = coefficients or tuple(complex(v) for v in alpha_beta(sample, L))
    w, n = float(sample.omega), complex(sample.n)
    def density(x: np.ndarray) -> np.ndarray:
        return _energy_density(sample, *_inside_pre_im(sample, L, x, alpha, beta))
    # Panels resolving the standing-wave period pi/(Re n w).
    panels = max(4, int(math.ceil(L * abs(n.real) * w / math.pi)) * 2)
    return integrate_adaptive(density, 0.0, L, tol, initial_panels=panels)

### Scans ###

def _records(model: MaterialModel, L: float, omega: np.ndarray) -> list[SpectralRecord]:
    if omega.size == 0:
        return []
    W, W_bulk, W_C = spectral_energy(response_sample(model, omega), L)
    free = free_spectral_energy(omega, L)
    return [SpectralRecord(float(o), float(a), float(c), float(f), float(b))
            for o, a, b, c, f in zip(omega, W, W_bulk, W_C, free)]

def _scan_chunk(model: MaterialModel, L: float,
                omega: np.ndarray) -> tuple[str, int, list[SpectralRecord]]:
    with LogToStringScope() as log:
        ret = _records(model, L, omega)
    return log.getvalue(), log.errors, ret

def spectrum_scan(model: MaterialModel, L: float, omega_grid: Sequence[float] | np.ndarray,
                  multithread: bool | None = None, chunk: int = 256) -> list[SpectralRecord]:
    grid = np.asarray(omega_grid, dtype=float)
    if grid.size and (np.any(grid <= 0) or np.any(np.diff(grid) <= 0)):
        raise DomainError("frequency grid must be positive and strictly increasing")
    BlockGeometry(L)
    if multithread is None:
        multithread = workspace.multithread
    where = f"spectrum:{model.name or 'custom'}:L={L:g}:"
    Log.scan(where, f"{grid.size} frequencies, {'parallel' if multithread else 'serial'}")
    if not multithread or grid.size <= chunk:
        ret = _records(model, L, grid)
    else:
        ret = _scan_parallel(model, L, grid, chunk)
    if ret:
        Log.scan(where, f"first {ret[0].short_repr()}, last {ret[-1].short_repr()}")
    return ret

def _scan_parallel(model: MaterialModel, L: float, grid: np.ndarray,
                   chunk: int) -> list[SpectralRecord]:
    init_multithreading()
    ret: list[SpectralRecord] = []
    with multiprocessing.Pool(processes=multiprocessing.cpu_count(),
                              initializer=signal.signal,
                              initargs=(signal.SIGINT, signal.SIG_IGN)) as pool:
        for log, errors, records in pool.starmap(
                _scan_chunk,
                ((model, L, grid[i:i+chunk]) for i in range(0, grid.size, chunk))):
            print(log, end='', file=workspace.logStream or sys.stderr)
            workspace.addErrors(errors)
            ret.extend(records)
    return ret
