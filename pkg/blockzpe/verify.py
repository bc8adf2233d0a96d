from .internal import *
from .workspace import Log
from .materials import (MaterialModel, PRESETS, response_sample,
                        derivative_deviation, kramers_kronig_residual)
from .greenfn import (Region, zeta, zeta_cot, alpha_beta, alpha_naive,
                      green_closed, green_numeric, wronskian)
from .spectra import (variance_density_inside, variance_from_green,
                      spectral_energy, casimir_spectral_energy, spatial_energy)
from .modealg import (commutator_gram, build_transform, verify_independence,
                      gram_eigenvalues, physical_transforms)

# Oracle suite run by `zpe_tool verify`. Each check compares two independent
# routes to the same quantity and passes when the deviation is below threshold.

@dataclass
class Check:
    name: str
    deviation: float
    threshold: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return math.isfinite(self.deviation) and self.deviation < self.threshold

    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

@dataclass
class VerifyOptions:
    lengths: tuple[float, ...] = (5.068, 50.68)
    oracle_length: float = 5.068       # transfer-matrix products overflow for thicker metals
    oracle_samples: int = 1000         # per region
    mode_samples: int = 10_000
    kk_cutoff: float = 1e3
    kk_grid: tuple[float, ...] = (0.5, 2.0, 4.0, 6.0, 9.0, 15.0)
    seed: int = 20240917
    corrupt_alpha: bool = False        # flips the sign of alpha in the spatial-integral check

def _sample_region(rng: np.random.Generator, region: Region, L: float, size: int) -> np.ndarray:
    match region:
        case Region.LEFT:
            return rng.uniform(-2.0 * L, -1e-3 * L, size)
        case Region.INSIDE:
            return rng.uniform(1e-3 * L, (1 - 1e-3) * L, size)
        case _:
            return rng.uniform((1 + 1e-3) * L, 3.0 * L, size)

def check_green_oracle(model: MaterialModel, L: float, rng: np.random.Generator,
                       samples: int) -> list[Check]:
    dev, recip, wr_dev = 0.0, 0.0, 0.0
    for region in Region:
        omegas = rng.uniform(0.5, 15.0, samples)
        xs = _sample_region(rng, region, L, samples)
        xps = _sample_region(rng, region, L, samples)
        for w, x, xp in zip(omegas, xs, xps):
            closed = green_closed(model, L, float(w), float(x), float(xp)).value
            swapped = green_closed(model, L, float(w), float(xp), float(x)).value
            numeric = complex(green_numeric(model, L, float(w), x, xp))
            dev = max(dev, max_rel_dev(closed, numeric))
            recip = max(recip, max_rel_dev(closed, swapped))
    for w in (1.0, 5.0, 12.0):
        wr = wronskian(model, L, w, np.array([-L, 0.25 * L, 0.5 * L, 0.75 * L, 2.0 * L]))
        wr_dev = max(wr_dev, max_rel_dev(wr, np.full_like(wr, wr[0])))
    return [Check(f"green closed vs numeric ({model.name})", dev, 1e-8),
            Check(f"green reciprocity ({model.name})", recip, 1e-10),
            Check(f"wronskian constancy ({model.name})", wr_dev, 1e-10)]

def check_naive_forms(model: MaterialModel, L: float) -> Check:
    sample = response_sample(model, np.linspace(0.5, 15.0, 60))
    z, (a, _) = zeta(sample, L), alpha_beta(sample, L)
    with np.errstate(all="ignore"):
        zc, an = zeta_cot(sample, L), alpha_naive(sample, L)
    ok = np.isfinite(zc) & np.isfinite(an) & (np.abs(np.exp(-2j * sample.n * sample.omega * L)) < 1e8)
    dev = max(max_rel_dev(z[ok], zc[ok]), max_rel_dev(a[ok], an[ok])) if np.any(ok) else 0.0
    return Check(f"stable vs naive zeta, alpha ({model.name}, L={L:g})", dev, 1e-10)

def check_variances(model: MaterialModel, L: float, rng: np.random.Generator) -> list[Check]:
    outside, inside = 0.0, 0.0
    for w, x in zip(rng.uniform(0.5, 15.0, 50), rng.uniform(1e-2 * L, 3.0 * L, 50)):
        w, x = float(w), float(x)
        for xo in (L + x, -x):
            v = variance_from_green(model, L, w, xo)
            outside = max(outside, abs(v.u - w / TWO_PI) / (w / TWO_PI))
        xi = (x % L) or 0.5 * L
        closed = variance_density_inside(response_sample(model, w), L, xi)
        v = variance_from_green(model, L, w, xi)
        got, want = np.array([v.dE2, v.dB2, v.u]), np.array([closed.dE2, closed.dB2, closed.u])
        inside = max(inside, float(np.max(np.abs(got - want)) / np.max(np.abs(want))))
    return [Check(f"outside cancellation u = w/2pi ({model.name}, L={L:g})", outside, 1e-12),
            Check(f"variance from green vs closed inside ({model.name}, L={L:g})", inside, 1e-10)]

def check_spatial_integral(model: MaterialModel, L: float, corrupt_alpha: bool = False) -> Check:
    dev = 0.0
    for w in (1.0, 5.0, 9.0):
        sample = response_sample(model, w)
        W = float(spectral_energy(sample, L)[0])
        coefficients = None
        if corrupt_alpha:
            a, b = alpha_beta(sample, L)
            coefficients = (-complex(a), complex(b))
        res = spatial_energy(sample, L, coefficients=coefficients)
        dev = max(dev, abs(res.value - W) / abs(W))
    return Check(f"spatial integral of u = W ({model.name}, L={L:g})", dev, 1e-8)

# Difference against the direct form, relative to the largest |W| on the grid.
def check_casimir_direct(model: MaterialModel, L: float) -> Check:
    sample = response_sample(model, np.linspace(0.1, 20.0, 400))
    W, _, W_C = spectral_energy(sample, L)
    direct = casimir_spectral_energy(sample, L)
    return Check(f"W - W_bulk vs direct W_C ({model.name}, L={L:g})",
                 float(np.max(np.abs(W_C - direct)) / np.max(np.abs(W))), 1e-12)

def check_mode_algebra(models: Sequence[MaterialModel], lengths: Sequence[float],
                       rng: np.random.Generator, samples: int) -> list[Check]:
    radius = rng.uniform(1e-3, 0.999, samples)
    phase = rng.uniform(-math.pi, math.pi, samples)
    dev, eig_dev = 0.0, 0.0
    for z in radius * np.exp(1j * phase):
        g = commutator_gram(z)
        dev = max(dev, verify_independence(build_transform(z), g))
        eig, roots = gram_eigenvalues(g)
        eig_dev = max(eig_dev, float(np.max(np.abs(eig - roots))),
                      float(np.max(np.abs(eig - np.array([1 - abs(z), 1 + abs(z)])))))
    phys, max_abs = 0.0, 0.0
    for model in models:
        for L in lengths:
            grid = np.geomspace(1e-3, 1e3, 400)
            max_abs = max(max_abs, float(np.max(np.abs(zeta(response_sample(model, grid), L)))))
            for g, t in physical_transforms(model, L, grid):
                phys = max(phys, verify_independence(t, g))
    return [Check("mode algebra, random zeta", dev, 1e-12),
            Check("gram eigenvalues vs characteristic roots", eig_dev, 1e-12),
            Check("mode algebra, physical zeta", phys, 1e-12),
            Check("max |zeta| on the physical grid", max_abs, 1.0)]

# Frequencies of a grid away from (off) and close to (near) a resonance. The zero
# crossing of Re eps, where n has its sharpest feature, counts as near.
def derivative_bands(model: MaterialModel, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    plasma = math.hypot(model.omega0, model.omega_p)
    near = (np.abs(grid - model.omega0) <= 10 * model.gamma) | (np.abs(grid - plasma) <= 0.1 * plasma)
    return grid[~near], grid[near]

def check_derivatives(model: MaterialModel) -> list[Check]:
    off, near = derivative_bands(model, np.linspace(0.05, 20.0, 400))
    def worst(band: np.ndarray) -> float:
        return float(np.max(derivative_deviation(model, band))) if band.size else 0.0
    return [Check(f"dispersion derivatives off resonance ({model.name})", worst(off), 1e-6),
            Check(f"dispersion derivatives near resonance ({model.name})", worst(near), 1e-4)]

def check_kramers_kronig(model: MaterialModel, cutoff: float, grid: Sequence[float]) -> Check:
    return Check(f"Kramers-Kronig residual ({model.name}, cutoff={cutoff:g})",
                 kramers_kronig_residual(model, grid, cutoff), 1e-3)

def _guarded(name: str, fn: Callable[[], Check | list[Check]]) -> list[Check]:
    try:
        ret = fn()
    except (NumericalError, AlgebraBreakdownError) as e:
        return [Check(name, math.inf, 0.0, f"{type(e).__name__}: {e}")]
    return ret if isinstance(ret, list) else [ret]

def run_checks(models: Sequence[MaterialModel] | None = None,
               options: VerifyOptions | None = None) -> list[Check]:
    models = list(models) if models is not None else [PRESETS["gold"], PRESETS["dielectric"]]
    opts = options or VerifyOptions()
    rng = np.random.default_rng(opts.seed)
    ret: list[Check] = []
    for model in models:
        L0 = opts.oracle_length
        ret += _guarded(f"green oracle ({model.name})",
                        lambda: check_green_oracle(model, L0, rng, opts.oracle_samples))
        ret += _guarded(f"naive forms ({model.name})", lambda: check_naive_forms(model, L0))
        for L in opts.lengths:
            ret += _guarded(f"variances ({model.name})", lambda: check_variances(model, L, rng))
            ret += _guarded(f"spatial integral ({model.name})",
                            lambda: check_spatial_integral(model, L, opts.corrupt_alpha))
            ret += _guarded(f"direct W_C ({model.name})", lambda: check_casimir_direct(model, L))
        ret += _guarded(f"derivatives ({model.name})", lambda: check_derivatives(model))
        ret += _guarded(f"Kramers-Kronig ({model.name})",
                        lambda: check_kramers_kronig(model, opts.kk_cutoff, opts.kk_grid))
    ret += _guarded("mode algebra", lambda: check_mode_algebra(models, opts.lengths, rng,
                                                                opts.mode_samples))
    for check in ret:
        Log.verify_check("verify:", f"{check.status()} {check.name}: "
                                    f"{check.deviation:.3e} < {check.threshold:.0e}"
                                    + (f" ({check.detail})" if check.detail else ""))
    return ret
