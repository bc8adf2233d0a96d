from scipy.integrate import quad

from .internal import *
from .workspace import Log
from .materials import MaterialModel, response_sample

@dataclass
class QuadratureResult:
    value: float
    error_estimate: float
    panels: int
    tail_estimate: float = 0.0
    # Widest starting panel as a fraction of the local oscillation period (spectral integrals).
    max_period_fraction: float | None = None
    omega_max: float | None = None

    def short_repr(self) -> str:
        return (f"{self.value:.12g} +- {self.error_estimate:.3g} "
                f"({self.panels} panels, tail {self.tail_estimate:.3g})")

# Scalar view of a vectorised f: the panels [lo, lo + width] mapped onto t in [0, 1] and summed.
def _stacked(f: Callable[[np.ndarray], ArrayLike], lo: np.ndarray, width: np.ndarray,
             where: str) -> Callable[[float], float]:
    def g(t: float) -> float:
        w = lo + width * t
        y = np.broadcast_to(np.asarray(f(w), dtype=float), w.shape)
        if not np.all(np.isfinite(y)):
            bad = int(np.flatnonzero(~np.isfinite(y))[0])
            raise QuadratureError(f"{where} integrand not finite at {w[bad]:.17g}")
        return float(fsum(width * y))
    return g

# One QUADPACK run; the subdivision limit is the panel budget.
def _quad(g: Callable[[float], float], a: float, b: float, epsabs: float, epsrel: float,
          limit: int, where: str) -> QuadratureResult:
    value, error, info, *message = quad(g, a, b, epsabs=epsabs, epsrel=epsrel,
                                        limit=limit, full_output=1)
    result = QuadratureResult(float(value), float(error), int(info["last"]))
    if not (math.isfinite(result.value) and math.isfinite(result.error_estimate)):
        raise QuadratureError(f"{where} no finite result: {result.short_repr()}", result)
    if message:
        target = max(epsabs, epsrel * abs(result.value))
        if result.panels >= limit:
            Log.quad_budget(where, f"panel budget {limit} exhausted: {result.short_repr()}")
            raise QuadratureError(f"{where} panel budget {limit} exhausted, "
                                  f"error {result.error_estimate:.3g} > {target:.3g}", result)
        if result.error_estimate > 10 * target:
            raise QuadratureError(f"{where} {message[0]}", result)
        Log.quad_inexact(where, f"{message[0].splitlines()[0]} {result.short_repr()}")
    Log.quad_refine(where, f"[{a:g}, {b:g}] {result.panels} subintervals, "
                           f"error {result.error_estimate:.3g}")
    return result

def integrate_adaptive(f: Callable[[np.ndarray], ArrayLike], a: float, b: float,
                       tol: float = 1e-10, tol_abs: float = 1e-15,
                       max_panels: int = 20000, initial_panels: int = 1) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integration of a vectorised real f over [a, b].

    b may be +inf; QUADPACK then maps the tail onto (0, 1]. With
    initial_panels > 1 the interval is cut into equal panels that are
    bisected together, one vectorised call of f per node covering all of
    them. max_panels bounds the total panel count.
    """
    if not (tol > 0 and tol_abs > 0):
        raise ValueError(f"tolerance must be > 0, got {tol}, {tol_abs}")
    if not (math.isfinite(a) and b > a):
        raise ValueError(f"invalid interval [{a}, {b}]")
    if initial_panels < 1 or (initial_panels > 1 and math.isinf(b)):
        raise ValueError(f"invalid panel count {initial_panels} for [{a}, {b}]")
    where = f"quadrature:[{a:g}, {b:g}]:"
    if initial_panels == 1:
        return _quad(_stacked(f, np.zeros(1), np.ones(1), where), a, b,
                     tol_abs, tol, max_panels, where)
    edges = np.linspace(a, b, initial_panels + 1)
    result = _quad(_stacked(f, edges[:-1], np.diff(edges), where), 0.0, 1.0,
                   tol_abs, tol, max(1, max_panels // initial_panels), where)
    result.panels *= initial_panels
    return result

def principal_value(f: Callable[[np.ndarray], ArrayLike], singular_point: float,
                    a: float, b: float, tol: float = 1e-10,
                    tol_abs: float = 1e-15) -> QuadratureResult:
    """PV of the integral of f(w)/(w - singular_point) over [a, b].

    The interval symmetric about the pole is folded onto itself so that
    paired nodes w = c +- t cancel the 1/(w - c) singularity exactly.
    """
    c = singular_point
    if not a < c < b:
        raise DomainError(f"singular point {c} not strictly inside ({a}, {b})")
    h = min(c - a, b - c)
    sides = np.array([c - 1e-9 * h, c + 1e-9 * h])
    fm, fp = np.broadcast_to(np.asarray(f(sides), dtype=float), 2)
    if not (math.isfinite(fm) and math.isfinite(fp)) or \
            abs(fp - fm) > 1e-6 * (abs(fp) + abs(fm)) + tol_abs:
        raise PrincipalValueError(f"no cancellation at the pole {c}: "
                                  f"f(c-0)={fm:.6g}, f(c+0)={fp:.6g}")

    def paired(t: np.ndarray) -> np.ndarray:
        return (np.asarray(f(c + t), dtype=float) - np.asarray(f(c - t), dtype=float)) / t

    def shifted(w: np.ndarray) -> np.ndarray:
        return np.asarray(f(w), dtype=float) / (w - c)

    parts = [integrate_adaptive(paired, 0.0, h, tol, tol_abs)]
    if c - h > a:
        parts.append(integrate_adaptive(shifted, a, c - h, tol, tol_abs))
    if c + h < b:
        parts.append(integrate_adaptive(shifted, c + h, b, tol, tol_abs))
    return QuadratureResult(value=float(fsum(p.value for p in parts)),
                            error_estimate=math.fsum(p.error_estimate for p in parts),
                            panels=sum(p.panels for p in parts))

### Frequency integral of the Casimir spectral energy ###

SpectrumKind: TypeAlias = Literal["total_W_C"]

# Local oscillation period of exp(2 i n w L) in w.
def oscillation_period(model: MaterialModel, L: float, omega: Freq) -> ArrayLike:
    re_n = np.abs(np.real(response_sample(model, omega).n))
    with np.errstate(divide="ignore"):
        return np.where(re_n > 0, math.pi / (np.maximum(re_n, 1e-300) * L), np.inf)

# Panel width for [a, b]: 1/8 of the shortest local period found on a sampling grid.
def panel_width_limit(model: MaterialModel, L: float, a: float, b: float,
                      samples: int = 129) -> float:
    period = oscillation_period(model, L, np.linspace(a, b, samples))
    return float(np.min(period)) / 8.0

def _spectrum_scale(model: MaterialModel) -> float:
    scale = max(model.omega0, model.omega_p, 1.0)
    if model.mu_model is not None:
        scale = max(scale, model.mu_model.omega0, model.mu_model.omega_p)
    return scale

def integrate_spectrum(model: MaterialModel, L: float, kind: SpectrumKind = "total_W_C",
                       tol: float = 1e-4, omega_min: float = 1e-3, omega_cap: float = 4e3,
                       max_panels: int = 4_000_000) -> QuadratureResult:
    """Total Casimir energy: the integral of W_C over the real frequency axis.

    Octave blocks from omega_min upwards are split into panels no wider than
    1/8 of the local period of exp(2 i n w L). The panels of a block are
    refined together by QUADPACK, and the march stops once the C/w^2
    envelope of W_C drops below tol*|value|. The tail beyond the last block
    and the sliver below omega_min are bounded, reported in tail_estimate
    and added to error_estimate.
    """
    from .spectra import casimir_spectral_energy
    if kind != "total_W_C":
        raise ValueError(f"unknown spectrum integral '{kind}'")
    if not L > 0:
        raise DomainError(f"block length must be > 0, got {L}")
    if not tol > 0:
        raise ValueError(f"tolerance must be > 0, got {tol}")
    where = f"spectrum:{model.name or 'custom'}:L={L:g}:"

    def integrand(w: np.ndarray) -> np.ndarray:
        return np.asarray(casimir_spectral_energy(response_sample(model, w), L), dtype=float)

    omega_stop = 10.0 * _spectrum_scale(model)
    values: list[float] = []
    errors: list[float] = []
    fractions: list[float] = []
    used = 0
    a, tail = omega_min, 0.0
    while True:
        b = min(2.0 * a, omega_cap)
        h = min(panel_width_limit(model, L, a, b), (b - a) / 4)
        n = int(math.ceil((b - a) / h))
        if used + n > max_panels:
            partial = QuadratureResult(math.fsum(values), math.fsum(errors), used)
            Log.quad_budget(where, f"panel budget {max_panels} exhausted at {a:g} eV: "
                                   f"{partial.short_repr()}")
            raise QuadratureError(f"{where} panel budget {max_panels} exhausted at {a:g} eV", partial)
        edges = a + (b - a) * np.arange(n + 1) / n
        edges[-1] = b
        lo, width = edges[:-1], np.diff(edges)

        # Edges and midpoints: absolute scale of the block and the w^2 |W_C| envelope.
        nodes = np.sort(np.concatenate([edges, lo + 0.5 * width]))
        sampled = integrand(nodes)
        if not np.all(np.isfinite(sampled)):
            bad = int(np.flatnonzero(~np.isfinite(sampled))[0])
            raise QuadratureError(f"{where} integrand not finite at {nodes[bad]:.17g}")
        absint = float(fsum(width * np.abs(sampled[1::2])))
        envelope = float(np.max(np.abs(sampled) * nodes * nodes))

        try:
            block = _quad(_stacked(integrand, lo, width, where), 0.0, 1.0,
                          max(0.5 * tol * absint, 1e-300), 0.0,
                          max(1, (max_panels - used) // n), where)
        except QuadratureError as e:
            raise QuadratureError(str(e), QuadratureResult(math.fsum(values), math.fsum(errors), used)) from e
        values.append(block.value)
        errors.append(block.error_estimate)
        used += n * block.panels
        period = np.minimum(np.minimum(oscillation_period(model, L, lo),
                                       oscillation_period(model, L, edges[1:])),
                            oscillation_period(model, L, lo + 0.5 * width))
        fractions.append(float(np.max(width / period)))
        value = math.fsum(values)
        Log.quad_refine(where, f"[{a:g}, {b:g}] {n * block.panels} panels, running {value:.6g}, "
                               f"envelope {envelope:.3g}")
        if b >= omega_stop and envelope / (b * b) <= tol * abs(value):
            tail = envelope / b
            break
        if b >= omega_cap:
            tail = envelope / b
            Log.quad_tail(where, f"frequency cap {omega_cap:g} eV reached with envelope "
                                 f"{envelope / (b * b):.3g} > {tol * abs(value):.3g}")
            break
        a = b

    # W_C vanishes linearly at w -> 0: the skipped sliver is at most |W_C(w_min)| w_min / 2.
    tail += abs(float(integrand(np.array([omega_min]))[0])) * omega_min / 2
    return QuadratureResult(value=math.fsum(values),
                            error_estimate=math.fsum(errors) + abs(tail),
                            panels=used,
                            tail_estimate=tail,
                            max_period_fraction=max(fractions),
                            omega_max=b)
