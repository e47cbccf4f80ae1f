"""Local surface data at the point closest to the particle.

Surfaces are height fields ``z = f(x, y)`` in a world frame with the particle
above them. The expansion needs the surface re-expressed in the particle's
frame: origin at the particle, ``z`` pointing at the closest point ``P``, and
``H(x, y)`` the distance from the ``xy``-plane to the surface along ``z``. A
surface that bulges toward the particle has a positive-definite Hessian of H
(a sphere of radius R gives ``H_xx = H_yy = 1/R``).

Parametric profiles provide exact Taylor coefficients by series composition;
:class:`Grid` profiles fall back to Richardson-extrapolated finite differences.
"""

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.interpolate import RectBivariateSpline

ORDER = 4
GRADIENT_TOL = 1e-8


class GeometryError(ValueError):
    pass


class FrameError(GeometryError):
    """The supplied point is not a foot of the perpendicular from the particle."""


class ResolutionError(GeometryError):
    """Grid too coarse or too small for the derivative stencils."""


# ---------------------------------------------------------------------------
# truncated bivariate power series


class _Series2:
    """Power series in (u, v) truncated above total degree ORDER."""

    __slots__ = ("c",)
    _mask = np.add.outer(np.arange(ORDER + 1), np.arange(ORDER + 1)) <= ORDER

    def __init__(self, c):
        self.c = np.where(self._mask, c, 0.0)

    @classmethod
    def const(cls, a):
        c = np.zeros((ORDER + 1, ORDER + 1))
        c[0, 0] = a
        return cls(c)

    @classmethod
    def linear(cls, a0, au, av):
        c = np.zeros((ORDER + 1, ORDER + 1))
        c[0, 0], c[1, 0], c[0, 1] = a0, au, av
        return cls(c)

    def __add__(self, other):
        if isinstance(other, _Series2):
            return _Series2(self.c + other.c)
        return _Series2(self.c + _Series2.const(other).c)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rsub__(self, other):
        return (-1.0) * self + other

    def __mul__(self, other):
        if not isinstance(other, _Series2):
            return _Series2(self.c * other)
        out = np.zeros_like(self.c)
        for i, j in zip(*np.nonzero(self._mask)):
            a = self.c[i, j]
            if a != 0.0:
                out[i:, j:] += a * other.c[: ORDER + 1 - i, : ORDER + 1 - j]
        return _Series2(out)

    __rmul__ = __mul__

    def __neg__(self):
        return _Series2(-self.c)

    def compose(self, coeffs):
        """sum_k coeffs[k] (self - self(0))^k for a univariate Taylor series ``coeffs``."""
        delta = self - self.c[0, 0]
        out = _Series2.const(coeffs[0])
        power = _Series2.const(1.0)
        for k in range(1, ORDER + 1):
            power = power * delta
            out = out + coeffs[k] * power
        return out

    def derivative(self, m, n):
        return math.factorial(m) * math.factorial(n) * self.c[m, n]


def _sqrt_coeffs(a):
    # Taylor coefficients of sqrt(a + t) in t
    if a <= 0:
        raise GeometryError("point lies outside the profile's domain")
    return [_binom_half(k) * a ** (0.5 - k) for k in range(ORDER + 1)]


def _binom_half(k):
    out = 1.0
    for i in range(k):
        out *= (0.5 - i) / (i + 1)
    return out


def _cos_coeffs(a):
    # Taylor coefficients of cos(a + t)
    derivs = [math.cos(a), -math.sin(a), -math.cos(a), math.sin(a)]
    return [derivs[k % 4] / math.factorial(k) for k in range(ORDER + 1)]


def _exp_coeffs(a):
    return [math.exp(a) / math.factorial(k) for k in range(ORDER + 1)]


# ---------------------------------------------------------------------------
# profiles


class SurfaceProfile:
    """Height field ``z = f(x, y)`` below the particle."""

    def height(self, x, y):
        raise NotImplementedError

    def taylor(self, x0, y0):
        """Truncated Taylor series of f about (x0, y0) in the offsets (u, v)."""
        raise NotImplementedError

    def derivatives(self, x0, y0):
        s = self.taylor(x0, y0)
        return {(m, n): s.derivative(m, n) for m in range(ORDER + 1)
                for n in range(ORDER + 1 - m)}

    def normal(self, x0, y0):
        """Upward unit normal (pointing to the particle's side)."""
        s = self.taylor(x0, y0)
        n = np.array([-s.derivative(1, 0), -s.derivative(0, 1), 1.0])
        return n / np.linalg.norm(n)

    def scan_scale(self):
        """Characteristic lateral length used to size the closest-point scan."""
        return None


@dataclass(frozen=True)
class Sphere(SurfaceProfile):
    """Upper cap of a ball; the apex sits at (cx, cy, apex)."""

    radius: float
    cx: float = 0.0
    cy: float = 0.0
    apex: float = 0.0

    def height(self, x, y):
        rho2 = (np.asarray(x) - self.cx) ** 2 + (np.asarray(y) - self.cy) ** 2
        with np.errstate(invalid="ignore"):
            return self.apex - self.radius + np.sqrt(self.radius ** 2 - rho2)

    def taylor(self, x0, y0):
        du = _Series2.linear(x0 - self.cx, 1.0, 0.0)
        dv = _Series2.linear(y0 - self.cy, 0.0, 1.0)
        rho2 = du * du + dv * dv
        inner = self.radius ** 2 - rho2.c[0, 0]
        root = (-1.0 * rho2).compose(_sqrt_coeffs(inner))
        return root + (self.apex - self.radius)


@dataclass(frozen=True)
class Cylinder(SurfaceProfile):
    """Upper half of a circular cylinder whose axis lies along angle ``axis_angle``."""

    radius: float
    axis_angle: float = math.pi / 2
    apex: float = 0.0

    def _w(self, x, y):
        return -math.sin(self.axis_angle) * x + math.cos(self.axis_angle) * y

    def height(self, x, y):
        w = self._w(np.asarray(x), np.asarray(y))
        with np.errstate(invalid="ignore"):
            return self.apex - self.radius + np.sqrt(self.radius ** 2 - w ** 2)

    def taylor(self, x0, y0):
        w = _Series2.linear(self._w(x0, y0), -math.sin(self.axis_angle), math.cos(self.axis_angle))
        w2 = w * w
        root = (-1.0 * w2).compose(_sqrt_coeffs(self.radius ** 2 - w2.c[0, 0]))
        return root + (self.apex - self.radius)


@dataclass(frozen=True)
class Sinusoid(SurfaceProfile):
    """``A cos(2 pi s / wavelength + phase)`` with ``s`` along ``direction``; crest at s=0."""

    amplitude: float
    wavelength: float
    phase: float = 0.0
    direction: float = 0.0

    def _arg(self, x, y):
        s = math.cos(self.direction) * x + math.sin(self.direction) * y
        return 2 * math.pi * s / self.wavelength + self.phase

    def height(self, x, y):
        return self.amplitude * np.cos(self._arg(np.asarray(x), np.asarray(y)))

    def taylor(self, x0, y0):
        k = 2 * math.pi / self.wavelength
        arg = _Series2.linear(self._arg(x0, y0), k * math.cos(self.direction),
                              k * math.sin(self.direction))
        return self.amplitude * arg.compose(_cos_coeffs(arg.c[0, 0]))

    def scan_scale(self):
        return self.wavelength


@dataclass(frozen=True)
class GaussianBump(SurfaceProfile):
    height_: float
    width: float

    def height(self, x, y):
        rho2 = np.asarray(x) ** 2 + np.asarray(y) ** 2
        return self.height_ * np.exp(-rho2 / (2 * self.width ** 2))

    def taylor(self, x0, y0):
        du = _Series2.linear(x0, 1.0, 0.0)
        dv = _Series2.linear(y0, 0.0, 1.0)
        arg = (du * du + dv * dv) * (-0.5 / self.width ** 2)
        return self.height_ * arg.compose(_exp_coeffs(arg.c[0, 0]))

    def scan_scale(self):
        return self.width


@dataclass(frozen=True)
class Polynomial(SurfaceProfile):
    """``sum c[m, n] x^m y^n`` with total degree at most 4; ``coeffs`` maps (m, n) -> c."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        for (m, n) in self.coeffs:
            if m < 0 or n < 0 or m + n > ORDER:
                raise GeometryError(f"polynomial term x^{m} y^{n} exceeds degree {ORDER}")

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def height(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for (m, n), c in self.coeffs.items():
            out = out + c * x ** m * y ** n
        return out

    def taylor(self, x0, y0):
        xs = _Series2.linear(x0, 1.0, 0.0)
        ys = _Series2.linear(y0, 0.0, 1.0)
        out = _Series2.const(0.0)
        for (m, n), c in self.coeffs.items():
            term = _Series2.const(c)
            for _ in range(m):
                term = term * xs
            for _ in range(n):
                term = term * ys
            out = out + term
        return out


def _central(f, axis, order, step):
    """Central difference of ``order`` (1..4) along ``axis`` with offset ``step`` (in samples)."""
    weights = {
        1: {-1: -0.5, 1: 0.5},
        2: {-1: 1.0, 0: -2.0, 1: 1.0},
        3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
        4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
    }[order]
    reach = max(weights) * step
    out = np.full(f.shape, np.nan)
    n = f.shape[axis]
    if n <= 2 * reach:
        return out
    core = [slice(None)] * f.ndim
    core[axis] = slice(reach, n - reach)
    acc = 0.0
    for off, w in weights.items():
        sl = [slice(None)] * f.ndim
        sl[axis] = slice(reach + off * step, n - reach + off * step)
        acc = acc + w * f[tuple(sl)]
    out[tuple(core)] = acc
    return out


@dataclass(frozen=True, eq=False)
class Grid(SurfaceProfile):
    """Heights sampled at ``(x0 + i*spacing, y0 + j*spacing)``; ``heights[i, j]``."""

    spacing: float
    heights: np.ndarray
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=float)
        if h.ndim != 2 or min(h.shape) < 9:
            raise ResolutionError("grid needs at least 9 samples per direction")
        object.__setattr__(self, "heights", h)
        object.__setattr__(self, "_fields", self._derivative_fields())

    @property
    def xs(self):
        return self.x0 + self.spacing * np.arange(self.heights.shape[0])

    @property
    def ys(self):
        return self.y0 + self.spacing * np.arange(self.heights.shape[1])

    def _fd(self, m, n, step):
        f = self.heights
        if m:
            f = _central(f, 0, m, step)
        if n:
            f = _central(f, 1, n, step)
        return f / (step * self.spacing) ** (m + n)

    def _derivative_fields(self):
        # one Richardson level: steps 2s/s up to second order, 4s/2s beyond
        fields = {}
        for m in range(ORDER + 1):
            for n in range(ORDER + 1 - m):
                if m + n == 0:
                    fields[0, 0] = self.heights
                    continue
                coarse = 2 if m + n <= 2 else 4
                big = self._fd(m, n, coarse)
                small = self._fd(m, n, coarse // 2)
                fields[m, n] = (4.0 * small - big) / 3.0
        return fields

    def height(self, x, y):
        spline = RectBivariateSpline(self.xs, self.ys, self.heights, kx=3, ky=3)
        return spline.ev(x, y)

    def taylor(self, x0, y0):
        xs, ys = self.xs, self.ys
        c = np.zeros((ORDER + 1, ORDER + 1))
        for (m, n), fld in self._fields.items():
            ok_i = ~np.all(np.isnan(fld), axis=1)
            ok_j = ~np.all(np.isnan(fld), axis=0)
            xi, yj = xs[ok_i], ys[ok_j]
            if len(xi) < 4 or len(yj) < 4 or not (xi[0] <= x0 <= xi[-1] and yj[0] <= y0 <= yj[-1]):
                raise ResolutionError("derivative stencil leaves the grid at this point")
            sub = fld[np.ix_(ok_i, ok_j)]
            val = RectBivariateSpline(xi, yj, sub, kx=3, ky=3).ev(x0, y0)
            c[m, n] = val / (math.factorial(m) * math.factorial(n))
        return _Series2(c)

    def scan_scale(self):
        return 8 * self.spacing


# ---------------------------------------------------------------------------
# particle-frame data


def _sym_tensor(series, rank):
    t = np.zeros((2,) * rank)
    for idx in product((0, 1), repeat=rank):
        n = sum(idx)
        t[idx] = series.derivative(rank - n, n)
    return t


@dataclass(frozen=True, eq=False)
class SurfaceJet:
    """Distance and derivatives of H at the particle's foot, particle frame.

    ``hessian`` is 1/length, ``third`` 1/length^2, ``fourth`` 1/length^3.
    """

    d: float
    hessian: np.ndarray
    third: np.ndarray = None
    fourth: np.ndarray = None
    gradient: np.ndarray = None

    def __post_init__(self):
        if not self.d > 0:
            raise GeometryError("distance must be positive")
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("hessian", np.asarray(self.hessian, dtype=float).reshape(2, 2))
        set_("third", np.zeros((2, 2, 2)) if self.third is None
             else np.asarray(self.third, dtype=float).reshape(2, 2, 2))
        set_("fourth", np.zeros((2, 2, 2, 2)) if self.fourth is None
             else np.asarray(self.fourth, dtype=float).reshape(2, 2, 2, 2))
        set_("gradient", np.zeros(2) if self.gradient is None
             else np.asarray(self.gradient, dtype=float).reshape(2))
        if np.abs(self.gradient).max() > GRADIENT_TOL:
            raise FrameError("height gradient does not vanish at the closest point")
        for name, t in (("hessian", self.hessian), ("third", self.third), ("fourth", self.fourth)):
            scale = max(np.abs(t).max(), 1e-300)
            for perm in _perms(t.ndim):
                if np.abs(t - np.transpose(t, perm)).max() > 1e-9 * scale:
                    raise GeometryError(f"{name} tensor is not fully symmetric")

    @classmethod
    def flat(cls, d):
        return cls(d, np.zeros((2, 2)))

    @classmethod
    def from_curvatures(cls, d, c1, c2, theta=0.0, mean_curvature_gradient=(0.0, 0.0)):
        """Jet with principal curvatures (c1, c2) along axes turned by ``theta``.

        ``mean_curvature_gradient`` sets grad(c1 + c2) through the simplest
        symmetric third-derivative tensor with that Laplacian gradient.
        """
        r = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        hess = r @ np.diag([c1, c2]) @ r.T
        gx, gy = mean_curvature_gradient
        # H_ijk = (g_i d_jk + g_j d_ik + g_k d_ij) / 4 has d_i (laplacian H) = g_i
        g = np.array([gx, gy])
        eye = np.eye(2)
        third = (np.einsum("i,jk->ijk", g, eye) + np.einsum("j,ik->ijk", g, eye)
                 + np.einsum("k,ij->ijk", g, eye)) / 4.0
        return cls(d, hess, third)

    def reduced(self):
        """(hessian*d, third*d^2, fourth*d^3)."""
        d = self.d
        return self.hessian * d, self.third * d ** 2, self.fourth * d ** 3

    def laplacian_gradient(self):
        return np.einsum("ijj->i", self.third)

    def rotated(self, theta):
        """Components in the frame whose in-plane axes are turned by ``theta``."""
        r = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        return SurfaceJet(
            self.d,
            np.einsum("ai,bj,ab->ij", r, r, self.hessian),
            np.einsum("ai,bj,ck,abc->ijk", r, r, r, self.third),
            np.einsum("ai,bj,ck,dl,abcd->ijkl", r, r, r, r, self.fourth),
            r.T @ self.gradient,
        )


def _perms(n):
    from itertools import permutations
    return list(permutations(range(n)))


@dataclass(frozen=True)
class PrincipalFrame:
    curv1: float   # 1/R1 >= 1/R2
    curv2: float
    theta: float   # angle of the first principal axis in (-pi/2, pi/2]

    @property
    def radius1(self):
        return math.inf if self.curv1 == 0 else 1.0 / self.curv1

    @property
    def radius2(self):
        return math.inf if self.curv2 == 0 else 1.0 / self.curv2


def principal_frame(jet, umbilic_tol=1e-12):
    h = jet.hessian
    w, v = np.linalg.eigh(h)
    c1, c2 = w[1], w[0]
    scale = max(abs(c1), abs(c2), 1e-300)
    if abs(c1 - c2) <= umbilic_tol * scale:
        return PrincipalFrame(c1, c2, 0.0)
    theta = math.atan2(v[1, 1], v[0, 1])
    if theta <= -math.pi / 2:
        theta += math.pi
    elif theta > math.pi / 2:
        theta -= math.pi
    return PrincipalFrame(c1, c2, theta)


# ---------------------------------------------------------------------------
# closest point and jets


@dataclass(frozen=True, eq=False)
class ClosestPoint:
    point: np.ndarray
    distance: float
    multiplicity: int = 1
    candidates: tuple = ()


def _newton_foot(profile, atom, x, y, maxiter=100, tol=1e-14):
    def dist2(px, py):
        z = float(profile.height(px, py))
        return (px - atom[0]) ** 2 + (py - atom[1]) ** 2 + (z - atom[2]) ** 2

    cur = dist2(x, y)
    for _ in range(maxiter):
        d = profile.derivatives(x, y)
        f, fx, fy = d[0, 0], d[1, 0], d[0, 1]
        dz = f - atom[2]
        g = 2 * np.array([x - atom[0] + dz * fx, y - atom[1] + dz * fy])
        hxx = 2 * (1 + fx * fx + dz * d[2, 0])
        hyy = 2 * (1 + fy * fy + dz * d[0, 2])
        hxy = 2 * (fx * fy + dz * d[1, 1])
        hess = np.array([[hxx, hxy], [hxy, hyy]])
        try:
            if np.linalg.eigvalsh(hess).min() <= 0:
                raise np.linalg.LinAlgError
            step = -np.linalg.solve(hess, g)
        except np.linalg.LinAlgError:
            step = -g / max(abs(hxx), abs(hyy), 2.0)
        lam = 1.0
        while lam > 1e-12:
            nx, ny = x + lam * step[0], y + lam * step[1]
            new = dist2(nx, ny)
            if np.isfinite(new) and new <= cur:
                break
            lam *= 0.5
        else:
            break
        x, y, cur = nx, ny, new
        if np.hypot(*(lam * step)) < tol * (1 + abs(x) + abs(y)):
            break
    return x, y, math.sqrt(cur)


def closest_point(profile, atom, scan=41, tie_rtol=1e-9):
    """Closest surface point to ``atom`` (world coordinates, above the surface).

    Seeds damped Newton iterations from the local minima of a coarse scan of
    the squared distance; equidistant minima are reported through
    ``multiplicity`` and the lexicographically smallest (x, y) is returned.
    """
    atom = np.asarray(atom, dtype=float)
    z0 = float(profile.height(atom[0], atom[1]))
    gap = atom[2] - z0
    if not gap > 0:
        raise GeometryError("particle is not above the surface")
    half = gap
    xs = atom[0] + np.linspace(-half, half, scan)
    ys = atom[1] + np.linspace(-half, half, scan)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    with np.errstate(invalid="ignore"):
        d2 = (gx - atom[0]) ** 2 + (gy - atom[1]) ** 2 + (profile.height(gx, gy) - atom[2]) ** 2
    d2 = np.where(np.isfinite(d2), d2, np.inf)
    seeds = []
    for i in range(scan):
        for j in range(scan):
            nb = d2[max(i - 1, 0): i + 2, max(j - 1, 0): j + 2]
            if np.isfinite(d2[i, j]) and d2[i, j] <= nb.min():
                seeds.append((d2[i, j], gx[i, j], gy[i, j]))
    seeds.sort()
    found = []
    for _, sx, sy in seeds[:12]:
        x, y, dist = _newton_foot(profile, atom, sx, sy)
        if not any(np.hypot(x - fx_, y - fy_) < 1e-7 * max(gap, 1.0) for fx_, fy_, _ in found):
            found.append((x, y, dist))
    if not found:
        raise GeometryError("closest-point search failed")
    best = min(f[2] for f in found)
    ties = sorted((f for f in found if f[2] <= best * (1 + tie_rtol)), key=lambda f: (f[0], f[1]))
    x, y, dist = ties[0]
    point = np.array([x, y, float(profile.height(x, y))])
    return ClosestPoint(point, dist, len(ties), tuple(np.array(t[:2]) for t in ties))


def particle_frame(profile, point, atom=None):
    """Orthonormal columns (e1, e2, e3) of the particle frame at foot ``point``.

    e3 points from ``atom`` to ``point``; without ``atom`` it is the inward
    surface normal. e1 is the world x axis projected onto the plane normal
    to e3.
    """
    if atom is None:
        e3 = -profile.normal(point[0], point[1])
    else:
        e3 = np.asarray(point, dtype=float) - np.asarray(atom, dtype=float)
        e3 = e3 / np.linalg.norm(e3)
    ref = np.array([1.0, 0.0, 0.0])
    e1 = ref - e3 * (ref @ e3)
    if np.linalg.norm(e1) < 1e-8:
        ref = np.array([0.0, 1.0, 0.0])
        e1 = ref - e3 * (ref @ e3)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(e3, e1)
    return np.column_stack([e1, e2, e3])


def jet_at(profile, point, atom):
    """Derivatives of H at ``point`` in the frame of a particle at ``atom``.

    ``point`` must be the foot of the perpendicular from ``atom`` (as returned
    by :func:`closest_point`); otherwise H has a slope there and
    :class:`FrameError` is raised.
    """
    point = np.asarray(point, dtype=float)
    atom = np.asarray(atom, dtype=float)
    distance = float(np.linalg.norm(point - atom))
    frame = particle_frame(profile, point, atom)
    e1, e2, e3 = frame.T
    series = profile.taylor(point[0], point[1])
    t = series - series.c[0, 0]
    u = _Series2.linear(0.0, 1.0, 0.0)
    v = _Series2.linear(0.0, 0.0, 1.0)
    delta = _Series2.const(0.0)
    # fixed point on the truncated series; contracts like the squared slope
    for _ in range(200):
        sx = u * e1[0] + v * e2[0] + delta * e3[0]
        sy = u * e1[1] + v * e2[1] + delta * e3[1]
        rhs = _evaluate_at(t, sx, sy) - (u * e1[2] + v * e2[2])
        new = rhs * (1.0 / e3[2])
        change = np.abs(new.c - delta.c).max()
        delta = new
        if change <= 1e-15 * max(np.abs(delta.c).max(), 1.0):
            break
    else:
        raise GeometryError("surface is too steep for the particle-frame expansion")
    grad = np.array([delta.derivative(1, 0), delta.derivative(0, 1)])
    if np.abs(grad).max() > GRADIENT_TOL:
        raise FrameError(f"H has slope {grad} at the supplied point; not the closest point")
    return SurfaceJet(
        distance,
        _sym_tensor(delta, 2),
        _sym_tensor(delta, 3),
        _sym_tensor(delta, 4),
        np.zeros(2),
    )


def _evaluate_at(series, sx, sy):
    """Evaluate the polynomial ``series`` at series arguments with zero constant terms."""
    out = _Series2.const(0.0)
    xpow = [_Series2.const(1.0)]
    ypow = [_Series2.const(1.0)]
    for _ in range(ORDER):
        xpow.append(xpow[-1] * sx)
        ypow.append(ypow[-1] * sy)
    for m in range(ORDER + 1):
        for n in range(ORDER + 1 - m):
            c = series.c[m, n]
            if c != 0.0:
                out = out + c * (xpow[m] * ypow[n])
    return out


def place_particle(profile, xy, distance):
    """World position at ``distance`` along the upward normal above surface point ``xy``."""
    x, y = xy
    p = np.array([x, y, float(profile.height(x, y))])
    return p + distance * profile.normal(x, y)


def profile_from_dict(spec, scale=1.0):
    """Build a profile from the surface-file schema, lengths multiplied by ``scale``."""
    fam = spec.get("family")
    s = float(scale)
    try:
        if fam == "sphere":
            return Sphere(s * spec["radius"], s * spec.get("cx", 0.0), s * spec.get("cy", 0.0),
                          s * spec.get("apex", 0.0))
        if fam == "cylinder":
            return Cylinder(s * spec["radius"], spec.get("axis_angle", math.pi / 2),
                            s * spec.get("apex", 0.0))
        if fam == "sinusoid":
            return Sinusoid(s * spec["amplitude"], s * spec["wavelength"], spec.get("phase", 0.0),
                            spec.get("direction", 0.0))
        if fam == "gaussian_bump":
            return GaussianBump(s * spec["height"], s * spec["width"])
        if fam == "polynomial":
            coeffs = {}
            for m, n, c in spec["coefficients"]:
                coeffs[int(m), int(n)] = float(c) * s ** (1 - m - n)
            return Polynomial(coeffs)
        if fam == "grid":
            return Grid(s * spec["spacing"], s * np.asarray(spec["heights"], dtype=float),
                        s * spec.get("x0", 0.0), s * spec.get("y0", 0.0))
    except KeyError as exc:
        raise GeometryError(f"surface file for {fam!r} is missing {exc}") from None
    raise GeometryError(f"unknown surface family {fam!r}")
