import enum

from .internal import *
from .workspace import Log
from .materials import MaterialModel, ResponseSample, response_sample

# Green function of (d/dx (1/mu) d/dx + w^2 eps) g = delta(x - x') for a block
# occupying [0, L] in vacuum, with outgoing waves at both ends.
# Scattering quantities only ever use E = exp(2 i n w L), |E| <= 1 for Im n >= 0.

class Region(enum.IntEnum):
    LEFT = -1
    INSIDE = 0
    RIGHT = 1

@dataclass(frozen=True)
class BlockGeometry:
    length_L: float

    def __post_init__(self):
        if not self.length_L > 0:
            raise DomainError(f"block length must be > 0, got {self.length_L}")

    def region(self, x: float) -> Region:
        return Region.LEFT if x < 0 else Region.RIGHT if x > self.length_L else Region.INSIDE

    def regions(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where(x < 0, Region.LEFT, np.where(x > self.length_L, Region.RIGHT, Region.INSIDE))

    def require(self, region: Region, *xs: ArrayLike) -> None:
        for x in xs:
            got = self.regions(x)
            if not np.all(got == region):
                raise RegionError(f"point(s) {x} outside the {region.name.lower()} region "
                                  f"of a block of length {self.length_L:g}")

@dataclass
class GreenSample:
    x: float
    x_prime: float
    omega: float
    value: complex

@dataclass
class ScatterCoefficients:
    zeta: ArrayLike
    phi_zeta: ArrayLike
    abs_zeta: ArrayLike
    alpha: ArrayLike
    beta: ArrayLike

_TINY_DENOMINATOR = 1e-300

def _round_trip(sample: ResponseSample, L: float) -> ArrayLike:
    return np.exp(2j * sample.n * sample.omega * L)

def _check_denominator(den: ArrayLike, what: str) -> None:
    if np.any(np.abs(den) < _TINY_DENOMINATOR):
        raise DegenerateGeometryError(f"{what}: vanishing denominator (lossless resonance?)")

def zeta(sample: ResponseSample, L: float) -> ArrayLike:
    eps, mu, n = sample.epsilon, sample.mu, sample.n
    E = _round_trip(sample, L)
    den = (eps + mu) * (E - 1.0) - 2.0 * n * (E + 1.0)
    _check_denominator(den, "zeta")
    return 1j * np.exp(-2j * sample.omega * L) * (eps - mu) * (E - 1.0) / den

def alpha_beta(sample: ResponseSample, L: float) -> tuple[ArrayLike, ArrayLike]:
    eps, mu, n = sample.epsilon, sample.mu, sample.n
    E = _round_trip(sample, L)
    den_a = (n + mu) ** 2 - (n - mu) ** 2 * E
    den_b = 2.0 * n + eps + mu + (2.0 * n - eps - mu) * E
    _check_denominator(den_a, "alpha")
    _check_denominator(den_b, "beta")
    return (n - mu) ** 2 * E / den_a, (eps - mu) / den_b

def scatter_coefficients(sample: ResponseSample, L: float) -> ScatterCoefficients:
    z = zeta(sample, L)
    a, b = alpha_beta(sample, L)
    return ScatterCoefficients(zeta=z, phi_zeta=np.angle(z), abs_zeta=np.abs(z), alpha=a, beta=b)

# Textbook forms with cot(n w L) and exp(-2 i n w L); they overflow for thick
# absorbing blocks and are kept only to cross-check the stable ones.
def zeta_cot(sample: ResponseSample, L: float) -> ArrayLike:
    eps, mu, n, w = sample.epsilon, sample.mu, sample.n, sample.omega
    cot = 1.0 / np.tan(n * w * L)
    return 1j * np.exp(-2j * w * L) * (eps - mu) / (2j * n * cot + eps + mu)

def alpha_naive(sample: ResponseSample, L: float) -> ArrayLike:
    n, mu, w = sample.n, sample.mu, sample.omega
    return 1.0 / (((n + mu) / (n - mu)) ** 2 * np.exp(-2j * n * w * L) - 1.0)

### Closed forms per region ###

def green_right(sample: ResponseSample, L: float, x: ArrayLike, x_prime: ArrayLike) -> ArrayLike:
    BlockGeometry(L).require(Region.RIGHT, x, x_prime)
    k = sample.omega
    return (-0.5j / k * np.exp(1j * k * np.abs(x - x_prime))
            + 0.5 / k * zeta(sample, L) * np.exp(1j * k * (x + x_prime)))

# Mirror x -> L - x maps the block onto itself.
def green_left(sample: ResponseSample, L: float, x: ArrayLike, x_prime: ArrayLike) -> ArrayLike:
    BlockGeometry(L).require(Region.LEFT, x, x_prime)
    return green_right(sample, L, L - np.asarray(x), L - np.asarray(x_prime))

def green_inside(sample: ResponseSample, L: float, x: ArrayLike, x_prime: ArrayLike) -> ArrayLike:
    BlockGeometry(L).require(Region.INSIDE, x, x_prime)
    q = sample.n * sample.omega
    a, b = alpha_beta(sample, L)
    d, s = np.asarray(x) - np.asarray(x_prime), np.asarray(x) + np.asarray(x_prime)
    return -0.5j * sample.mu / q * (np.exp(1j * q * np.abs(d))
                                    + a * (np.exp(1j * q * d) + np.exp(-1j * q * d))
                                    + b * (np.exp(1j * q * s) + np.exp(-1j * q * (s - 2.0 * L))))

def green_closed(model: MaterialModel, L: float, omega: float,
                 x: float, x_prime: float) -> GreenSample:
    geom = BlockGeometry(L)
    region = geom.region(x)
    if geom.region(x_prime) != region:
        raise RegionError(f"no closed form for x={x} and x'={x_prime} in different regions")
    sample = response_sample(model, omega)
    fn = {Region.LEFT: green_left, Region.INSIDE: green_inside, Region.RIGHT: green_right}[region]
    return GreenSample(x, x_prime, omega, complex(fn(sample, L, x, x_prime)))

### Transfer-matrix construction ###
# State vector (psi, (1/mu) psi') is continuous across the interfaces, so the
# interface matrix is the identity and everything lives in the propagators.
# Propagated states are stored divided by exp(|Im q d|), with the exponent kept
# separately, so thick absorbing blocks never overflow.

def _propagate(psi: ArrayLike, p: ArrayLike, d: ArrayLike, n: complex, mu: complex,
               k: float) -> tuple[ArrayLike, ArrayLike, ArrayLike]:
    q = n * k
    qd = q * d
    growth = np.abs(np.imag(qd))
    ep, em = np.exp(1j * qd - growth), np.exp(-1j * qd - growth)
    c, s = 0.5 * (ep + em), -0.5j * (ep - em)
    return c * psi + (mu / q) * s * p, -(q / mu) * s * psi + c * p, growth

def _solutions(sample: ResponseSample, L: float, x: ArrayLike
               ) -> tuple[ArrayLike, ArrayLike, ArrayLike, ArrayLike, ArrayLike, ArrayLike]:
    """Scaled outgoing solutions at x: (psi_L, p_L, log_L, psi_R, p_R, log_R).

    The true psi_L is psi_L * exp(log_L), likewise for p_L and the right solution.
    """
    n, mu, k = complex(sample.n), complex(sample.mu), float(sample.omega)
    x = np.asarray(x, dtype=float)
    # psi_L ~ exp(-i k x) for x < 0
    left_at_L = _propagate(1.0 + 0j, -1j * k, L, n, mu, k)
    # psi_R ~ exp(i k (x - L)) for x > L
    right_at_0 = _propagate(1.0 + 0j, 1j * k, -L, n, mu, k)
    e_left = np.exp(-1j * k * np.minimum(x, 0.0))
    lin = _propagate(1.0 + 0j, -1j * k, np.clip(x, 0.0, L), n, mu, k)
    lout = _propagate(left_at_L[0], left_at_L[1], np.maximum(x - L, 0.0), 1.0, 1.0, k)
    e_right = np.exp(1j * k * np.maximum(x - L, 0.0))
    rin = _propagate(1.0 + 0j, 1j * k, np.clip(x, 0.0, L) - L, n, mu, k)
    rout = _propagate(right_at_0[0], right_at_0[1], np.minimum(x, 0.0), 1.0, 1.0, k)
    psi_l = np.where(x < 0, e_left, np.where(x <= L, lin[0], lout[0]))
    p_l = np.where(x < 0, -1j * k * e_left, np.where(x <= L, lin[1], lout[1]))
    log_l = np.where(x < 0, 0.0, np.where(x <= L, lin[2], left_at_L[2] + lout[2]))
    psi_r = np.where(x > L, e_right, np.where(x >= 0, rin[0], rout[0]))
    p_r = np.where(x > L, 1j * k * e_right, np.where(x >= 0, rin[1], rout[1]))
    log_r = np.where(x > L, 0.0, np.where(x >= 0, rin[2], right_at_0[2] + rout[2]))
    return psi_l, p_l, log_l, psi_r, p_r, log_r

_TINY_WRONSKIAN = 1e-250

# Overflows to inf for blocks too thick to represent the unscaled solutions.
def wronskian(model: MaterialModel, L: float, omega: float, x: ArrayLike) -> ArrayLike:
    psi_l, p_l, log_l, psi_r, p_r, log_r = _solutions(response_sample(model, omega), L, x)
    with np.errstate(over="ignore", invalid="ignore"):
        return (psi_l * p_r - p_l * psi_r) * np.exp(log_l + log_r)

def green_numeric(model: MaterialModel, L: float, omega: float,
                  x: ArrayLike, x_prime: ArrayLike) -> ArrayLike:
    BlockGeometry(L)
    sample = response_sample(model, omega)
    x, x_prime = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(x_prime, dtype=float))
    lo, hi = np.minimum(x, x_prime), np.maximum(x, x_prime)
    psi_l, _, log_l, _, _, _ = _solutions(sample, L, lo)
    _, _, _, psi_r, _, log_r = _solutions(sample, L, hi)
    # At x = 0 psi_L = 1 and p_L = -i k exactly.
    at0 = _solutions(sample, L, np.zeros(1))
    wr = complex((at0[0] * at0[4] - at0[1] * at0[3])[0])
    if abs(wr) < _TINY_WRONSKIAN:
        raise ResonanceDegeneracyError(f"Wronskian {wr:.3g} vanishes at omega={omega}")
    # log_L(lo) + log_R(hi) - log_W <= 0 for lo <= hi
    ret = (psi_l / wr) * psi_r * np.exp(log_l + log_r - float(at0[2][0] + at0[5][0]))
    if not np.all(np.isfinite(ret)):
        raise NumericalError(f"transfer-matrix Green function not finite at omega={omega}")
    return ret if ret.ndim else complex(ret)

### Stencil check of the defining equation ###

def residual_check(samples: Sequence[GreenSample], model: MaterialModel, L: float,
                   omega: float) -> float:
    """Max |(d/dx (1/mu) d/dx + w^2 eps) g| over a uniform grid of samples.

    Points whose 3-point stencil touches an interface or the source are skipped.
    """
    if len(samples) < 3:
        raise ValueError("residual check needs at least 3 samples")
    xs = np.array([s.x for s in samples])
    gs = np.array([s.value for s in samples])
    x_prime = samples[0].x_prime
    h = xs[1] - xs[0]
    if not np.allclose(np.diff(xs), h, rtol=1e-9, atol=0):
        raise ValueError("residual check needs a uniform grid")
    sample = response_sample(model, omega)
    geom = BlockGeometry(L)
    regions = geom.regions(xs)
    inside = regions == Region.INSIDE
    eps = np.where(inside, sample.epsilon, 1.0)
    inv_mu = np.where(inside, 1.0 / sample.mu, 1.0)
    lap = (gs[2:] - 2.0 * gs[1:-1] + gs[:-2]) / (h * h)
    res = inv_mu[1:-1] * lap + omega * omega * eps[1:-1] * gs[1:-1]
    mid = xs[1:-1]
    clear = 2.0 * abs(h) * (1 - 1e-9)
    ok = ((np.abs(mid - x_prime) > clear) & (np.abs(mid) > clear) & (np.abs(mid - L) > clear)
          & (regions[:-2] == regions[1:-1]) & (regions[2:] == regions[1:-1]))
    if not np.any(ok):
        raise ValueError("no grid point clear of the source and the interfaces")
    return float(np.max(np.abs(res[ok])))

def sample_green(model: MaterialModel, L: float, omega: float, xs: ArrayLike,
                 x_prime: float, numeric: bool = False) -> list[GreenSample]:
    xs = np.asarray(xs, dtype=float)
    if numeric:
        values = np.atleast_1d(green_numeric(model, L, omega, xs, x_prime))
    else:
        values = np.array([green_closed(model, L, omega, float(x), x_prime).value for x in xs])
    return [GreenSample(float(x), x_prime, omega, complex(v)) for x, v in zip(xs, values)]

# h-halving study: ratio of residuals at h and h/2, ~4 for a second-order stencil.
def residual_convergence(model: MaterialModel, L: float, omega: float, x_prime: float,
                         start: float, stop: float, h: float) -> float:
    def residual(h_: float) -> float:
        xs = np.arange(start, stop + 0.5 * h_, h_)
        return residual_check(sample_green(model, L, omega, xs, x_prime, numeric=True),
                              model, L, omega)
    coarse, fine = residual(h), residual(h / 2)
    ratio = coarse / fine if fine > 0 else math.inf
    if not 3.0 <= ratio <= 5.0:
        Log.residual_coarse(f"greenfn:omega={omega:g}:",
                            f"residual ratio {ratio:.3g} under h-halving from h={h:g}, "
                            f"grid not in the convergent regime")
    return ratio
