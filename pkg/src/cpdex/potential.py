"""Casimir-Polder potential of a small particle near a gently curved perfect conductor.

All routines work in reduced units: lengths in the particle-surface
distance ``d`` (taken from the jet), polarizabilities in whatever volume unit
the caller uses, and energies in ``hbar c [alpha] / d^4``. Temperatures enter
through ``tau = 2 pi d k_B T / (hbar c)``, the spacing of the reduced Matsubara
frequencies ``xi_n = n tau``. :class:`Constants` converts at the boundary.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.constants as sc

from . import betas as _betas
from .betas import VALID_INDICES, beta_classical, beta_moment
from .geometry import SurfaceJet
from .polarizability import (PolarizabilityTensor, StaticModel, TwoStateModel,
                             static_limit)
from .specfun import ConvergenceError, QuadratureSpec, integrate_semiinfinite

PARTS = ("flat", "linear", "gradient", "quadratic")
MODES = ("t0", "finite-t", "retarded", "classical", "london")


@dataclass(frozen=True)
class Constants:
    """Physical constants used for unit conversion (SI, CODATA by default)."""

    hbar: float = sc.hbar
    c: float = sc.c
    k_B: float = sc.k

    @classmethod
    def from_dict(cls, spec):
        unknown = set(spec) - {"hbar", "c", "k_B"}
        if unknown:
            raise ValueError(f"unknown constants: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in spec.items()})

    def reduced_temperature(self, T, d):
        """tau = 2 pi d k_B T / (hbar c)."""
        return 2 * math.pi * d * self.k_B * T / (self.hbar * self.c)

    def energy_scale(self, d, alpha_unit=1.0):
        """hbar c alpha_unit / d^4: multiplies reduced energies."""
        return self.hbar * self.c * alpha_unit / d ** 4


@dataclass(frozen=True)
class PotentialBreakdown:
    """Potential split into the terms of the derivative expansion.

    ``total`` is always the sum of the four parts. ``diagnostics`` carries
    mode-specific extras (quadrature errors, Matsubara truncation, omitted
    terms).
    """

    flat: float
    linear: float
    gradient: float
    quadratic: float
    mode: str = "t0"
    d: float = 1.0
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def total(self):
        return self.flat + self.linear + self.gradient + self.quadratic

    def scaled(self, factor, mode=None, **diag):
        return PotentialBreakdown(
            *(factor * getattr(self, p) for p in PARTS),
            mode=mode or self.mode, d=self.d, diagnostics={**self.diagnostics, **diag},
        )

    def as_dict(self):
        out = {p: getattr(self, p) for p in PARTS}
        out["total"] = self.total
        return out

    def energy(self, constants=Constants(), alpha_unit=1.0):
        """Total in SI when ``d`` is in metres and alpha in ``alpha_unit`` m^3."""
        return self.total * constants.energy_scale(self.d, alpha_unit)


@dataclass(frozen=True)
class MatsubaraGrid:
    tau: float
    n_terms: int

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")

    @property
    def nodes(self):
        return self.tau * np.arange(self.n_terms)


# ---------------------------------------------------------------------------
# brace


def _alpha_matrix(alpha):
    if isinstance(alpha, PolarizabilityTensor):
        return alpha.matrix
    return PolarizabilityTensor(np.asarray(alpha, dtype=float)).matrix


def _contractions(jet, alpha):
    """Geometric/polarizability invariants multiplying each beta coefficient."""
    a = _alpha_matrix(alpha)
    hess, third, _ = jet.reduced()
    lap = np.trace(hess)
    traceless = hess - 0.5 * lap * np.eye(2)
    a_perp = a[0, 0] + a[1, 1]
    a_zz = a[2, 2]
    aniso = float(np.sum(traceless * a[:2, :2]))
    grad_lap = np.einsum("ijj->i", third)
    hsq = float(np.sum(hess * hess))
    return {
        "flat": {(0, 1): a_perp, (0, 2): a_zz},
        "linear": {(2, 1): lap * a_perp, (2, 2): lap * a_zz, (2, 3): aniso},
        "gradient": {(3, 1): float(a[2, :2] @ grad_lap)},
        "quadratic": {
            (4, 1): lap ** 2 * a_perp, (4, 2): lap ** 2 * a_zz,
            (4, 3): hsq * a_perp, (4, 4): hsq * a_zz, (4, 5): lap * aniso,
        },
    }


def _assemble(contr, coeffs):
    return {part: float(sum(float(coeffs[k]) * float(w) for k, w in terms.items()))
            for part, terms in contr.items()}


def brace(jet, alpha, xi, verbatim=False):
    """The braced integrand of the expansion at reduced frequency ``xi``.

    Parameters
    ----------
    jet : SurfaceJet
        Local surface data in the particle frame.
    alpha : PolarizabilityTensor or array_like
        Polarizability at this frequency, in the particle frame.
    xi : float
        ``kappa d >= 0``.

    Returns
    -------
    dict
        ``{"flat", "linear", "gradient", "quadratic"}`` contributions.
    """
    contr = _contractions(jet, alpha)
    coeffs = {k: _betas.beta(k, xi, verbatim) for k in VALID_INDICES}
    return _assemble(contr, coeffs)


def brace_principal(c1, c2, alpha, xi, grad_curv=(0.0, 0.0), verbatim=False):
    """Brace written directly in the principal frame.

    ``c1 = d/R1``, ``c2 = d/R2``; ``alpha`` must be expressed along the
    principal axes; ``grad_curv`` is ``d^2 grad(1/R1 + 1/R2)``.
    """
    a = _alpha_matrix(alpha)
    b = {k: _betas.beta(k, xi, verbatim) for k in VALID_INDICES}
    a_perp, a_zz, a_diff = a[0, 0] + a[1, 1], a[2, 2], a[0, 0] - a[1, 1]
    s = c1 + c2
    return {
        "flat": b[0, 1] * a_perp + b[0, 2] * a_zz,
        "linear": s * (b[2, 1] * a_perp + b[2, 2] * a_zz) + 0.5 * b[2, 3] * (c1 - c2) * a_diff,
        "gradient": b[3, 1] * (a[2, 0] * grad_curv[0] + a[2, 1] * grad_curv[1]),
        "quadratic": s ** 2 * (b[4, 1] * a_perp + b[4, 2] * a_zz)
        + (c1 ** 2 + c2 ** 2) * (b[4, 3] * a_perp + b[4, 4] * a_zz)
        + 0.5 * b[4, 5] * (c1 ** 2 - c2 ** 2) * a_diff,
    }


def _alpha_scale(model, xi, d):
    """alpha(kappa)/alpha0 at kappa = xi/d, vectorized over ``xi``."""
    xi = np.asarray(xi, dtype=float)
    if isinstance(model, (PolarizabilityTensor, StaticModel)):
        return np.ones_like(xi)
    if isinstance(model, TwoStateModel):
        return 1.0 / (1.0 + (model.resonance_length * xi / d) ** 2)
    raise TypeError(f"unsupported polarizability model {model!r}")


def _parts_on(jet, model, xi, verbatim=False):
    """Brace parts on an array of ``xi`` values, shape (4, len(xi))."""
    contr = _contractions(jet, static_limit(model))
    xi = np.asarray(xi, dtype=float)
    b = {k: np.asarray(_betas.beta(k, xi, verbatim), dtype=float) for k in VALID_INDICES}
    scale = _alpha_scale(model, xi, jet.d)
    return np.array([
        scale * sum(b[k] * w for k, w in contr[p].items()) for p in PARTS
    ])


# ---------------------------------------------------------------------------
# regimes


def potential_T0(jet, model, quad=QuadratureSpec(), verbatim=False):
    """Zero-temperature potential, ``-(1/2 pi) int_0^inf brace dxi``.

    Each part of the breakdown is integrated separately.

    Raises
    ------
    ConvergenceError
        If any quadrature misses ``quad``'s tolerances.
    """
    vals, errs = {}, {}
    for i, part in enumerate(PARTS):
        def f(x, i=i):
            return float(_parts_on(jet, model, [x], verbatim)[i, 0])
        try:
            vals[part], errs[part] = integrate_semiinfinite(f, quad)
        except ConvergenceError as exc:
            raise ConvergenceError(f"{part} term: {exc}", exc.estimate, exc.error) from None
    scale = -1.0 / (2 * math.pi)
    return PotentialBreakdown(
        *(scale * vals[p] for p in PARTS), mode="t0", d=jet.d,
        diagnostics={"quad_error": abs(scale) * sum(errs.values())},
    )


def potential_retarded(jet, alpha0, verbatim=False):
    """Static-polarizability potential from the exact coefficient moments (no quadrature)."""
    contr = _contractions(jet, static_limit(alpha0))
    moments = {k: beta_moment(k, verbatim) for k in VALID_INDICES}
    parts = _assemble(contr, moments)
    scale = -1.0 / (2 * math.pi)
    return PotentialBreakdown(*(scale * parts[p] for p in PARTS), mode="retarded", d=jet.d)


def potential_classical(jet, alpha0, tau, include_gradient=False, verbatim=False):
    """High-temperature (n = 0 Matsubara term) free energy, ``-(tau/4 pi) brace(0)``.

    The curvature-gradient term is left out by default; its would-be value is
    reported as ``diagnostics["omitted_gradient"]`` whenever it is nonzero.
    """
    if not tau > 0:
        raise ValueError("classical limit needs tau > 0")
    contr = _contractions(jet, static_limit(alpha0))
    parts = _assemble(contr, {k: beta_classical(k, verbatim) for k in VALID_INDICES})
    scale = -tau / (4 * math.pi)
    diag = {}
    if not include_gradient:
        if parts["gradient"] != 0.0:
            diag["omitted_gradient"] = scale * parts["gradient"]
        parts["gradient"] = 0.0
    return PotentialBreakdown(*(scale * parts[p] for p in PARTS), mode="classical", d=jet.d,
                              diagnostics=diag)


def potential_finiteT(jet, model, tau, rtol=1e-12, max_terms=1_000_000, chunk=1024,
                      verbatim=False):
    """Matsubara sum ``-(tau/2 pi) sum'_n brace(n tau)`` with half weight at n = 0.

    Summation stops at the first ``N`` with ``|term_N| <= rtol |sum|`` and
    ``xi_N > 10``; the total over all parts drives the test.
    """
    if not tau > 0:
        raise ValueError("finite-temperature sum needs tau > 0")
    acc = np.zeros(len(PARTS))
    start = 0
    while start < max_terms:
        n = np.arange(start, min(start + chunk, max_terms))
        terms = _parts_on(jet, model, n * tau, verbatim)
        if start == 0:
            terms[:, 0] *= 0.5
        for j in range(terms.shape[1]):
            acc += terms[:, j]
            term = abs(terms[:, j].sum())
            if n[j] * tau > 10 and term <= rtol * abs(acc.sum()):
                scale = -tau / (2 * math.pi)
                return PotentialBreakdown(
                    *(scale * acc), mode="finite-t", d=jet.d,
                    diagnostics={"matsubara": MatsubaraGrid(tau, int(n[j]) + 1)},
                )
        start += chunk
    raise ConvergenceError("Matsubara sum did not converge",
                           PotentialBreakdown(*(-tau / (2 * math.pi) * acc), mode="finite-t",
                                              d=jet.d))


def x_coth_x(x):
    """x coth x, equal to 1 at x = 0."""
    x = float(x)
    if x == 0.0:
        return 1.0
    if abs(x) < 1e-4:
        return 1.0 + x * x / 3.0 - x ** 4 / 45.0
    return x / math.tanh(x)


def london_argument(tau, d, resonance_length):
    """hbar omega_r / (2 k_B T) = pi d / (d_r tau)."""
    return math.pi * d / (resonance_length * tau)


def potential_london(jet, alpha0, tau, resonance_length, include_gradient=False):
    """Non-retarded two-state result: ``x coth x`` times the classical free energy."""
    x = london_argument(tau, jet.d, resonance_length)
    return potential_classical(jet, alpha0, tau, include_gradient).scaled(
        x_coth_x(x), mode="london", x=x)


# ---------------------------------------------------------------------------
# orientation


def axis_rotation(axis):
    """Rotation taking the body z axis onto unit vector ``axis`` (R_z(phi) R_y(theta))."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    theta = math.acos(max(-1.0, min(1.0, n[2])))
    phi = math.atan2(n[1], n[0])
    cp, sp, ct, st = math.cos(phi), math.sin(phi), math.cos(theta), math.sin(theta)
    rz = np.array([[cp, -sp, 0.0], [sp, cp, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[ct, 0.0, st], [0.0, 1.0, 0.0], [-st, 0.0, ct]])
    return rz @ ry


@dataclass(frozen=True, eq=False)
class OrientationScan:
    axes: np.ndarray
    energies: np.ndarray

    @property
    def argmin(self):
        return self.axes[int(np.argmin(self.energies))]

    @property
    def minimum(self):
        return float(self.energies.min())


def hemisphere_axes(n_polar=19, n_azimuth=36):
    """Unit vectors on the upper hemisphere (axes are directionless)."""
    out = []
    for t in np.linspace(0.0, math.pi / 2, n_polar):
        for p in np.linspace(0.0, math.pi, n_azimuth, endpoint=False):
            out.append((math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t)))
            if t == 0.0:
                break
    return np.array(out)


def orientation_scan(jet, alpha0, axes=None):
    """Retarded potential with the particle's body z axis pointed along each of ``axes``."""
    body = static_limit(alpha0)
    axes = hemisphere_axes() if axes is None else np.atleast_2d(np.asarray(axes, dtype=float))
    energies = np.array([
        potential_retarded(jet, PolarizabilityTensor(
            (r := axis_rotation(a)) @ body.matrix @ r.T)).total
        for a in axes
    ])
    return OrientationScan(axes, energies)


# ---------------------------------------------------------------------------
# request dispatch


@dataclass(frozen=True)
class EvaluationRequest:
    jet: SurfaceJet
    model: object
    mode: str = "t0"
    tau: float = 0.0
    quad: QuadratureSpec = QuadratureSpec()
    rtol: float = 1e-12
    include_gradient: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.mode in ("finite-t", "classical", "london") and not self.tau > 0:
            raise ValueError(f"mode {self.mode!r} needs a positive temperature")
        if self.mode == "london" and not isinstance(self.model, TwoStateModel):
            raise ValueError("london mode needs a two_state polarizability model")


def evaluate(req):
    if req.mode == "t0":
        return potential_T0(req.jet, req.model, req.quad)
    if req.mode == "retarded":
        return potential_retarded(req.jet, req.model)
    if req.mode == "classical":
        return potential_classical(req.jet, req.model, req.tau, req.include_gradient)
    if req.mode == "finite-t":
        return potential_finiteT(req.jet, req.model, req.tau, req.rtol)
    return potential_london(req.jet, req.model.alpha0, req.tau, req.model.resonance_length,
                            req.include_gradient)
