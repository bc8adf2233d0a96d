from .internal import *
from .workspace import Log

if TYPE_CHECKING:
    from .quadrature import QuadratureResult

# Dispersive, absorptive response of the block: a single damped oscillator
#   eps(w) = 1 - W^2 / (w^2 - w0^2 + i g w)
# for the permittivity and optionally the same form for the permeability.

@dataclass(frozen=True)
class Oscillator:
    omega0: float       # resonance frequency, eV
    omega_p: float      # oscillator strength, eV
    gamma: float        # damping rate, eV

    def validate(self, what: str = "material") -> None:
        if not self.gamma > 0:
            raise ConfigError(f"{what}.gamma", f"damping must be > 0, got {self.gamma}")
        if not self.omega_p >= 0:
            raise ConfigError(f"{what}.omega_p", f"must be >= 0, got {self.omega_p}")
        if not self.omega0 >= 0:
            raise ConfigError(f"{what}.omega0", f"must be >= 0, got {self.omega0}")

    def _denominator(self, omega: Freq) -> ArrayLike:
        return omega * omega - self.omega0 * self.omega0 + 1j * self.gamma * omega

    def response(self, omega: Freq) -> ArrayLike:
        return 1.0 - self.omega_p * self.omega_p / self._denominator(omega)

    def derivative(self, omega: Freq) -> ArrayLike:
        d = self._denominator(omega)
        return self.omega_p * self.omega_p * (2.0 * omega + 1j * self.gamma) / (d * d)

    def short_repr(self) -> str:
        return f"omega0={self.omega0:g} omega_p={self.omega_p:g} gamma={self.gamma:g}"

@dataclass(frozen=True)
class MaterialModel:
    omega0: float
    omega_p: float
    gamma: float
    mu_model: Oscillator | None = None  # None means mu = 1
    name: str = field(default="", compare=False)

    def __post_init__(self):
        self.eps_oscillator().validate("material")
        if self.mu_model is not None:
            self.mu_model.validate("mu")

    def eps_oscillator(self) -> Oscillator:
        return Oscillator(self.omega0, self.omega_p, self.gamma)

    def short_repr(self) -> str:
        ret = f"{self.name or 'custom'}: {self.eps_oscillator().short_repr()}"
        if self.mu_model is not None:
            ret += f" mu: {self.mu_model.short_repr()}"
        return ret

    def asDict(self) -> dict[str, Any]:
        ret: dict[str, Any] = {"name": self.name, "omega0": self.omega0,
                               "omega_p": self.omega_p, "gamma": self.gamma}
        if self.mu_model is not None:
            ret["mu"] = {"omega0": self.mu_model.omega0, "omega_p": self.mu_model.omega_p,
                         "gamma": self.mu_model.gamma}
        return ret

    @staticmethod
    def fromPreset(name: str) -> 'MaterialModel':
        if name not in PRESETS:
            raise ConfigError("material", f"unknown preset '{name}', "
                                          f"expected one of: {', '.join(PRESETS)}")
        return PRESETS[name]

# Drude gold and a Lorentz dielectric; vacuum has no oscillator strength.
PRESETS: dict[str, MaterialModel] = {
    "gold":       MaterialModel(omega0=0.0, omega_p=8.45, gamma=0.047, name="gold"),
    "dielectric": MaterialModel(omega0=5.0, omega_p=8.0,  gamma=0.5,   name="dielectric"),
    "vacuum":     MaterialModel(omega0=0.0, omega_p=0.0,  gamma=1.0,   name="vacuum"),
}

@dataclass
class ResponseSample:
    """Complex response and its dispersion factors at one (or an array of) frequencies."""
    omega: Freq
    epsilon: ArrayLike
    mu: ArrayLike
    n: ArrayLike
    d_omega_n: ArrayLike      # d(w n)/dw
    d_n_over_mu: ArrayLike    # d(n/mu)/dw, eV^-1
    d_omega_eps: ArrayLike    # d(w eps)/dw
    d_omega_mu: ArrayLike     # d(w mu)/dw
    dn: ArrayLike = field(default=0.0, repr=False)    # dn/dw, eV^-1

def _check_omega(omega: Freq) -> None:
    if not np.all(np.asarray(omega) > 0):
        raise DomainError(f"frequency must be > 0 (real axis only), got {omega}")

def permittivity(model: MaterialModel, omega: Freq) -> ArrayLike:
    _check_omega(omega)
    return model.eps_oscillator().response(omega)

def permeability(model: MaterialModel, omega: Freq) -> ArrayLike:
    _check_omega(omega)
    if model.mu_model is None:
        return np.ones_like(omega, dtype=complex) if isinstance(omega, np.ndarray) else 1.0 + 0j
    return model.mu_model.response(omega)

_branch_tol = 4 * np.finfo(float).eps

# Square root of eps*mu on the passive branch: Im n >= 0,
# and Re n >= 0 when n is real to machine precision.
def refractive_index(epsilon: ArrayLike, mu: ArrayLike) -> ArrayLike:
    prod = np.asarray(epsilon * mu, dtype=complex)
    if np.any(prod == 0):
        raise SingularResponseError(f"eps*mu vanishes (eps={epsilon}, mu={mu})")
    n = np.sqrt(prod)  # principal root, Re n >= 0
    real_axis = np.abs(n.imag) <= _branch_tol * np.abs(n)
    n = np.where((n.imag < 0) & ~real_axis, -n, n)
    return n if n.ndim else complex(n)

def response_sample(model: MaterialModel, omega: Freq) -> ResponseSample:
    _check_omega(omega)
    eps_osc = model.eps_oscillator()
    eps = eps_osc.response(omega)
    d_eps = eps_osc.derivative(omega)
    if model.mu_model is None:
        mu: ArrayLike = 1.0 + 0.0 * eps
        d_mu: ArrayLike = 0.0 * eps
    else:
        mu = model.mu_model.response(omega)
        d_mu = model.mu_model.derivative(omega)
    n = refractive_index(eps, mu)
    dn = (mu * d_eps + eps * d_mu) / (2.0 * n)
    return ResponseSample(omega=omega, epsilon=eps, mu=mu, n=n,
                          d_omega_n=n + omega * dn,
                          d_n_over_mu=dn / mu - n * d_mu / (mu * mu),
                          d_omega_eps=eps + omega * d_eps,
                          d_omega_mu=mu + omega * d_mu,
                          dn=dn)

# Largest relative deviation of the analytic dispersion factors from central
# differences with step 1e-5*omega.
def derivative_deviation(model: MaterialModel, omega: Freq, rel_step: float = 1e-5) -> np.ndarray:
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    h = rel_step * omega
    s = response_sample(model, omega)
    sp, sm = response_sample(model, omega + h), response_sample(model, omega - h)
    def fd(fn: Callable[[ResponseSample], ArrayLike]) -> ArrayLike:
        return (fn(sp) - fn(sm)) / (2.0 * h)
    pairs = [
        (s.d_omega_n,   fd(lambda r: r.omega * r.n)),
        (s.d_n_over_mu, fd(lambda r: r.n / r.mu)),
        (s.d_omega_eps, fd(lambda r: r.omega * r.epsilon)),
        (s.d_omega_mu,  fd(lambda r: r.omega * r.mu)),
    ]
    ret = np.zeros(omega.shape)
    for analytic, numeric in pairs:
        scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-300)
        ret = np.maximum(ret, np.abs(analytic - numeric) / scale)
    return ret

### Kramers-Kronig consistency ###

# Re eps(w) - 1 rebuilt from Im eps on [0, cutoff]:
#   (2/pi) PV int w' Im eps(w') / (w'^2 - w^2) dw'
# The odd extension of Im eps folds the 1/(w'+w) half into a regular factor, so
# only the w' = w pole needs a principal value.
def kramers_kronig_transform(model: MaterialModel, omega: float, cutoff: float,
                             tol: float = 1e-10) -> 'QuadratureResult':
    from .quadrature import principal_value
    osc = model.eps_oscillator()
    if not 0 < omega < cutoff:
        raise DomainError(f"frequency {omega} must lie in (0, cutoff={cutoff})")
    def numerator(w: np.ndarray) -> np.ndarray:
        return (2.0 / math.pi) * w * np.imag(osc.response(w)) / (w + omega)
    return principal_value(numerator, omega, 0.0, cutoff, tol)

def kramers_kronig_residual(model: MaterialModel, omega_grid: Sequence[float],
                            cutoff: float, tol: float = 1e-10) -> float:
    grid = np.asarray(omega_grid, dtype=float)
    if grid.size == 0:
        return 0.0
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise DomainError("Kramers-Kronig grid must be positive and strictly increasing")
    exact = np.real(permittivity(model, grid)) - 1.0
    scale = float(np.max(np.abs(exact)))
    if scale == 0:
        return 0.0

    def residual(tol_: float) -> tuple[float, float]:
        dev, err = 0.0, 0.0
        for w, ex in zip(grid, exact):
            try:
                res = kramers_kronig_transform(model, float(w), cutoff, tol_)
            except QuadratureError as e:
                raise KramersKronigError(f"transform at omega={w:g} did not converge: {e}") from e
            dev = max(dev, abs(res.value - ex))
            err = max(err, res.error_estimate)
        return dev / scale, err / scale

    coarse, coarse_err = residual(tol)
    fine, fine_err = residual(tol / 16)
    # The residual must be stable under refinement of the quadrature.
    if abs(fine - coarse) > max(0.5 * fine, 10 * tol, 4 * coarse_err):
        raise KramersKronigError(f"residual does not converge under refinement: "
                                 f"{coarse:.3e} -> {fine:.3e}")
    if abs(fine - coarse) > coarse_err + tol:
        Log.kk_refine(f"kk:{model.name or 'custom'}:",
                      f"residual moved by {abs(fine - coarse):.3e} under refinement")
    return fine

