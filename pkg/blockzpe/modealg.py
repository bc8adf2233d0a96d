from .internal import *
from .materials import MaterialModel, response_sample
from .greenfn import zeta

# Left/right exterior modes a+ and a- of the block do not commute:
#   [a+, a+^] = [a-, a-^] = 1,  [a+, a-^] = i zeta,  [a+, a-] = 0
# at a single frequency (the delta(w - w') factor normalised to 1).
# A 2x2 transform of (a+, a-) gives independent canonical modes (b1, b2).
# Operators are represented by their coefficient vectors only.

@dataclass
class CommutatorGram:
    matrix: np.ndarray  # [x_i, x_j^] over the basis (a+, a-)
    plain: np.ndarray = field(default_factory=lambda: np.zeros((2, 2), dtype=complex))  # [x_i, x_j]

    @property
    def zeta(self) -> complex:
        return complex(-1j * self.matrix[0, 1])

@dataclass
class ModeTransform:
    matrix: np.ndarray  # rows: coefficients of b1, b2 over (a+, a-)
    delta_plus: float
    delta_minus: float
    phi_zeta: float

def commutator_gram(zeta: complex) -> CommutatorGram:
    z = complex(zeta)
    return CommutatorGram(np.array([[1.0, 1j * z],
                                    [-1j * z.conjugate(), 1.0]], dtype=complex),
                          plain=np.zeros((2, 2), dtype=complex))

def build_transform(zeta: complex) -> ModeTransform:
    z = complex(zeta)
    r = abs(z)
    if not r < 1:
        raise AlgebraBreakdownError(f"|zeta| = {r:.17g} >= 1, independent modes do not exist")
    phi = math.atan2(z.imag, z.real)
    dp, dm = 1.0 / math.sqrt(1.0 + r), 1.0 / math.sqrt(1.0 - r)
    s, d = 0.5 * (dp + dm), 0.5 * (dp - dm)
    em, ep = np.exp(-0.5j * phi), np.exp(0.5j * phi)
    return ModeTransform(np.array([[s * em, 1j * d * ep],
                                   [-1j * d * em, s * ep]], dtype=complex),
                         delta_plus=dp, delta_minus=dm, phi_zeta=phi)

def verify_independence(t: ModeTransform, g: CommutatorGram) -> float:
    """Max deviation of the commutators [b_i, b_j^] from the identity.

    [b_i, b_j^] = (M G M^)_ij. The undaggered [b_i, b_j] = (M P M^T)_ij, with
    P = g.plain the [a_k, a_l] matrix, must vanish.
    """
    m = t.matrix
    dagger = m @ g.matrix @ m.conj().T
    plain = m @ g.plain @ m.T
    return float(max(np.max(np.abs(dagger - np.eye(2))), np.max(np.abs(plain))))

# Eigenvalues of G (Hermitian solver) and the roots of its characteristic
# polynomial l^2 - tr(G) l + det(G), both ascending.
def gram_eigenvalues(g: CommutatorGram) -> tuple[np.ndarray, np.ndarray]:
    eig = np.linalg.eigvalsh(g.matrix)
    tr = np.trace(g.matrix).real
    det = np.linalg.det(g.matrix).real
    roots = np.sort(np.roots([1.0, -tr, det]).real)
    return eig, roots

# Transforms for the physical zeta(w, L) of a block on a frequency grid.
def physical_transforms(model: MaterialModel, L: float,
                        omega_grid: Sequence[float] | np.ndarray
                        ) -> list[tuple[CommutatorGram, ModeTransform]]:
    grid = np.asarray(omega_grid, dtype=float)
    if grid.size == 0:
        return []
    zetas = np.atleast_1d(zeta(response_sample(model, grid), L))
    return [(commutator_gram(z), build_transform(z)) for z in zetas]
