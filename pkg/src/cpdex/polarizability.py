"""Electric dipole polarizability of the particle on the imaginary frequency axis."""

import warnings
from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-12


class PolarizabilityError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PolarizabilityTensor:
    """Real symmetric 3x3 tensor (any volume unit; reduced code uses units of d^3)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise PolarizabilityError("polarizability must be a 3x3 matrix")
        scale = max(np.abs(m).max(), 1.0)
        if np.abs(m - m.T).max() > SYMMETRY_TOL * scale:
            raise PolarizabilityError("polarizability tensor is not symmetric")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if np.linalg.eigvalsh(m).min() < -SYMMETRY_TOL * scale:
            warnings.warn("polarizability tensor is not positive semi-definite", stacklevel=3)

    @classmethod
    def isotropic(cls, alpha):
        return cls(alpha * np.eye(3))

    @classmethod
    def diagonal(cls, axx, ayy, azz):
        return cls(np.diag([axx, ayy, azz]))

    def __getitem__(self, key):
        return self.matrix[key]

    def __mul__(self, factor):
        return PolarizabilityTensor(self.matrix * factor)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PolarizabilityTensor) and np.array_equal(self.matrix, other.matrix)

    def allclose(self, other, atol=1e-12):
        return np.allclose(self.matrix, other.matrix, rtol=0, atol=atol)


@dataclass(frozen=True)
class StaticModel:
    alpha0: PolarizabilityTensor


@dataclass(frozen=True)
class TwoStateModel:
    """Single-resonance model alpha0 / (1 + (d_r kappa)^2), with d_r = c / omega_r."""

    alpha0: PolarizabilityTensor
    resonance_length: float

    def __post_init__(self):
        if not self.resonance_length > 0:
            raise PolarizabilityError("resonance_length must be positive")


def evaluate(model, kappa):
    """Polarizability at imaginary wavenumber ``kappa >= 0``."""
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    if isinstance(model, StaticModel):
        return model.alpha0
    if isinstance(model, TwoStateModel):
        return model.alpha0 * (1.0 / (1.0 + (model.resonance_length * kappa) ** 2))
    raise TypeError(f"unknown polarizability model {model!r}")


def static_limit(model):
    if isinstance(model, PolarizabilityTensor):
        return model
    return model.alpha0


def _rz(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotate_inplane(t, theta):
    """Components of ``t`` in the frame whose x, y axes are turned by ``theta`` about z."""
    r = _rz(theta)
    return PolarizabilityTensor(r.T @ t.matrix @ r)


def rotate(t, rot):
    """Actively rotate the particle: ``rot @ t @ rot.T`` for a 3x3 rotation matrix."""
    rot = np.asarray(rot, dtype=float)
    return PolarizabilityTensor(rot @ t.matrix @ rot.T)


@dataclass(frozen=True)
class BraceComponents:
    """The scalar combinations of alpha contracted by the expansion."""

    perp: float          # alpha_xx + alpha_yy
    zz: float
    aniso: tuple         # (alpha_xx - alpha_yy, 2 alpha_xy)
    axial: tuple         # (alpha_zx, alpha_zy)


def decompose(t):
    m = t.matrix if isinstance(t, PolarizabilityTensor) else np.asarray(t, dtype=float)
    if np.abs(m - m.T).max() > SYMMETRY_TOL * max(np.abs(m).max(), 1.0):
        raise PolarizabilityError("polarizability tensor is not symmetric")
    return BraceComponents(
        perp=m[0, 0] + m[1, 1],
        zz=m[2, 2],
        aniso=(m[0, 0] - m[1, 1], 2.0 * m[0, 1]),
        axial=(m[2, 0], m[2, 1]),
    )


def model_from_dict(spec):
    """Build a model from the atom-file schema.

    ``{"model": "static" | "two_state", "alpha0": 3x3, "resonance_length": float}``
    """
    try:
        kind = spec.get("model", "static")
        alpha0 = PolarizabilityTensor(np.asarray(spec["alpha0"], dtype=float))
    except KeyError as exc:
        raise PolarizabilityError(f"atom file is missing {exc}") from None
    if kind == "static":
        return StaticModel(alpha0)
    if kind == "two_state":
        if "resonance_length" not in spec:
            raise PolarizabilityError("two_state atom needs resonance_length")
        return TwoStateModel(alpha0, float(spec["resonance_length"]))
    raise PolarizabilityError(f"unknown atom model {kind!r}")
