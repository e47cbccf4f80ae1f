"""Command-line front end.

Commands write CSV (curves, tables) or JSON (reports) to ``--out`` or stdout.
Every output starts with a header carrying the library version and a hash of
the resolved configuration, and floats are printed with 12 significant
digits, so identical inputs give byte-identical files.

Exit codes: 0 success, 2 validation failure, 3 input error, 4 numerical
non-convergence.
"""

import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import click
import numpy as np

from . import __version__
from .betas import VALID_INDICES, BetaIndex, beta_moment, row
from .geometry import (GeometryError, closest_point, jet_at, particle_frame, place_particle,
                       principal_frame, profile_from_dict)
from .polarizability import PolarizabilityError, PolarizabilityTensor, model_from_dict, static_limit
from .potential import (MODES, Constants, EvaluationRequest, evaluate, orientation_scan,
                        hemisphere_axes)
from .specfun import ConvergenceError, QuadratureSpec, integrate_semiinfinite

EXIT_OK, EXIT_VALIDATION, EXIT_INPUT, EXIT_CONVERGENCE = 0, 2, 3, 4
REGIME_WARN = 0.5


class ValidationFailure(Exception):
    """Some check in a report failed; the report itself was still written."""


def fmt(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x) + 0.0  # drops negative zero
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return f"{x:.12g}"
    return str(x)


def _round(obj):
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if not math.isfinite(x) else float(f"{x:.12g}") + 0.0
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def config_hash(config):
    blob = json.dumps(_round(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def render(rows, columns, config, fmt_name, extra=None):
    """Serialize ``rows`` (list of dicts) with the reproducibility header."""
    chash = config_hash(config)
    if fmt_name == "json":
        doc = {"cpdex_version": __version__, "config_hash": chash, "config": config,
               "rows": [{c: r.get(c) for c in columns} for r in rows]}
        if extra:
            doc.update(extra)
        return json.dumps(_round(doc), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# cpdex {__version__}\n# config_hash {chash}\n")
    for key, val in (extra or {}).items():
        buf.write(f"# {key} {json.dumps(_round(val), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(r.get(c, "")) for c in columns])
    return buf.getvalue()


def emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def parse_list(text, name="list"):
    try:
        vals = [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"cannot parse {name} {text!r}") from None
    if not vals:
        raise click.BadParameter(f"empty {name}")
    return vals


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.BadParameter(f"cannot read {path}: {exc}") from None


def _common_output(f):
    f = click.option("--out", type=click.Path(dir_okay=False), default=None,
                     help="Output file (stdout if omitted).")(f)
    f = click.option("--format", "fmt_name", type=click.Choice(["csv", "json"]), default=None,
                     help="Output format.")(f)
    return f


@click.group()
@click.version_option(__version__, prog_name="cpdex")
def cli():
    """Casimir-Polder derivative expansion near curved perfect conductors."""


# ---------------------------------------------------------------------------
# betas


@cli.command("betas")
@click.option("--xi", "xi_text", default="0,0.5,1,2", show_default=True,
              help="Comma-separated reduced frequencies.")
@click.option("--index", "indices", multiple=True, help="Restrict to p,q (repeatable).")
@click.option("--verbatim", is_flag=True, help="Use the originally tabulated (4,2) row.")
@_common_output
def cmd_betas(xi_text, indices, verbatim, out, fmt_name):
    """Tabulate the coefficient functions."""
    xis = parse_list(xi_text, "xi grid")
    if any(x < 0 for x in xis):
        raise click.BadParameter("xi must be non-negative")
    keys = VALID_INDICES
    if indices:
        try:
            keys = [tuple(int(v) for v in s.split(",")) for s in indices]
            for k in keys:
                BetaIndex(*k)
        except (ValueError, TypeError, IndexError) as exc:
            raise click.BadParameter(f"invalid index filter: {exc}") from None
    rows = []
    for k in keys:
        r = row(k, verbatim)
        for x in xis:
            e, i = float(r.exp_part(x)), float(r.ei_part(x))
            rows.append({"p": k[0], "q": k[1], "xi": x, "beta": e + i,
                         "exp_part": e, "ei_part": i, "provenance": r.provenance})
    config = {"command": "betas", "xi": xis, "indices": [list(k) for k in keys],
              "verbatim": verbatim}
    cols = ["p", "q", "xi", "beta", "exp_part", "ei_part", "provenance"]
    emit(render(rows, cols, config, fmt_name or "csv"), out)


# ---------------------------------------------------------------------------
# moments

# brace coefficients of the static-polarizability closed form, per index
CLOSED_FORM_TARGETS = {
    (0, 1): Fraction(1, 8), (0, 2): Fraction(1, 8),
    (2, 1): Fraction(-3, 40), (2, 2): Fraction(-1, 15), (2, 3): Fraction(-1, 40),
    (3, 1): Fraction(1, 30),
    (4, 1): Fraction(3, 280), (4, 2): Fraction(-1, 240), (4, 3): Fraction(13, 280),
    (4, 4): Fraction(3, 40), (4, 5): Fraction(9, 560),
}


def target_moment(key):
    """Moment implied by the closed-form coefficient (anisotropic slots carry 1/4)."""
    factor = 4 if key in ((2, 3), (4, 5)) else 2
    return CLOSED_FORM_TARGETS[key] * factor


def moments_report(tol=1e-8):
    rows = []
    for key in VALID_INDICES:
        variants = [("default", False)]
        if key == (4, 2):
            variants = [("verbatim", True), ("recovered", False)]
        for label, verbatim in variants:
            exact = beta_moment(key, verbatim)
            r = row(key, verbatim)
            quad, _ = integrate_semiinfinite(lambda x: float(r(x)), QuadratureSpec(rtol=1e-12))
            target = target_moment(key)
            dev = abs(float(exact) - float(target))
            qdev = abs(quad - float(exact)) / max(abs(float(exact)), 1e-300)
            ok = dev <= tol * abs(float(target)) and qdev <= tol
            status = "pass" if ok else ("known-discrepant" if label == "verbatim" else "fail")
            rows.append({"p": key[0], "q": key[1], "row": label, "closed_form": exact,
                         "quadrature": quad, "target": target, "deviation": dev,
                         "quad_rel_dev": qdev, "status": status})
    return rows


@cli.command("moments")
@click.option("--tol", type=float, default=1e-8, show_default=True)
@_common_output
def cmd_moments(tol, out, fmt_name):
    """Compare coefficient moments with the closed-form static potential."""
    if not tol > 0:
        raise click.BadParameter("--tol must be positive")
    rows = moments_report(tol)
    cols = ["p", "q", "row", "closed_form", "quadrature", "target", "deviation",
            "quad_rel_dev", "status"]
    emit(render(rows, cols, {"command": "moments", "tol": tol}, fmt_name or "csv"), out)
    if any(r["status"] == "fail" for r in rows):
        raise ValidationFailure("moment identity failed")


# ---------------------------------------------------------------------------
# potential


def _load_setup(surface, atom, constants):
    surf = load_json(surface)
    units = surf.get("units", "d")
    if units not in ("d", "absolute"):
        raise click.BadParameter("surface 'units' must be 'd' or 'absolute'")
    model = model_from_dict(load_json(atom))
    consts = None
    if constants:
        consts = Constants.from_dict(load_json(constants))
    return surf, units, model, consts


def local_setup(surf_spec, distance):
    """Jet and particle-frame rotation for a particle ``distance`` above the anchor.

    With ``"units": "d"`` the surface lengths are multiples of ``distance``;
    with ``"absolute"`` they share the unit of ``distance``.
    """
    scale = distance if surf_spec.get("units", "d") == "d" else 1.0
    profile = profile_from_dict(surf_spec, scale)
    anchor = [scale * v for v in surf_spec.get("anchor", [0.0, 0.0])]
    atom_pos = place_particle(profile, anchor, distance)
    cp = closest_point(profile, atom_pos)
    jet = jet_at(profile, cp.point, atom_pos)
    frame = particle_frame(profile, cp.point, atom_pos)
    return jet, frame, cp


def _to_frame(model, frame):
    a = static_limit(model)
    local = PolarizabilityTensor(frame.T @ a.matrix @ frame)
    if isinstance(model, PolarizabilityTensor):
        return local
    return replace(model, alpha0=local)


@cli.command("potential")
@click.option("--surface", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--atom", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--mode", type=click.Choice(MODES), default="t0", show_default=True)
@click.option("--distance", "distance_text", required=True, help="Comma-separated distances.")
@click.option("--temperature", type=float, default=None,
              help="Kelvin with --constants; otherwise reduced tau at unit distance.")
@click.option("--tol", type=float, default=1e-10, show_default=True,
              help="Relative tolerance for quadrature and Matsubara sums.")
@click.option("--constants", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON with hbar, c, k_B (SI); switches to physical units.")
@click.option("--include-gradient", is_flag=True,
              help="Keep the curvature-gradient term in classical/london modes.")
@_common_output
def cmd_potential(surface, atom, mode, distance_text, temperature, tol, constants,
                  include_gradient, out, fmt_name):
    """Potential versus distance for a surface/particle pair."""
    if not tol > 0:
        raise click.BadParameter("--tol must be positive")
    distances = parse_list(distance_text, "distance list")
    if any(d <= 0 for d in distances):
        raise click.BadParameter("distances must be positive")
    surf, units, model, consts = _load_setup(surface, atom, constants)
    if mode in ("finite-t", "classical", "london") and not (temperature and temperature > 0):
        raise click.BadParameter(f"mode {mode} needs --temperature > 0")
    rows = []
    warned = False
    for d in distances:
        jet, frame, cp = local_setup(surf, d)
        pf = principal_frame(jet)
        c1, c2 = pf.curv1 * jet.d, pf.curv2 * jet.d
        if max(abs(c1), abs(c2)) > REGIME_WARN and not warned:
            click.echo(f"warning: d/R = {max(abs(c1), abs(c2)):.3g} exceeds {REGIME_WARN}; "
                       "the expansion may be unreliable", err=True)
            warned = True
        tau = 0.0
        if temperature:
            tau = consts.reduced_temperature(temperature, jet.d) if consts else temperature * jet.d
        req = EvaluationRequest(jet, _to_frame(model, frame), mode, tau,
                                QuadratureSpec(rtol=tol), rtol=tol,
                                include_gradient=include_gradient)
        res = evaluate(req)
        r = {"d": jet.d, "total": res.total, "flat": res.flat, "linear_curv": res.linear,
             "curv_grad": res.gradient, "quad_curv": res.quadratic, "d_over_R1": c1,
             "d_over_R2": c2, "tau": tau, "multiplicity": cp.multiplicity,
             "omitted_gradient": res.diagnostics.get("omitted_gradient", 0.0)}
        if consts:
            r["energy_J"] = res.energy(consts, float(load_json(atom).get("alpha_unit", 1.0)))
        rows.append(r)
    cols = ["d", "total", "flat", "linear_curv", "curv_grad", "quad_curv", "d_over_R1",
            "d_over_R2", "tau", "multiplicity", "omitted_gradient"]
    if consts:
        cols.append("energy_J")
    config = {"command": "potential", "surface": surf, "atom": load_json(atom), "mode": mode,
              "distances": distances, "temperature": temperature, "tol": tol, "units": units,
              "constants": load_json(constants) if constants else None,
              "include_gradient": include_gradient}
    emit(render(rows, cols, config, fmt_name or "csv"), out)


# ---------------------------------------------------------------------------
# oracle


@cli.command("validate-oracle")
@click.option("--xi", "xi_text", default="0,0.5", show_default=True)
@click.option("--order", type=click.IntRange(0, 2), default=1, show_default=True)
@click.option("--method", type=click.Choice(["ad", "fd"]), default="ad", show_default=True)
@click.option("--recover", is_flag=True, help="Also refit the (4,2) row.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def cmd_validate_oracle(xi_text, order, method, recover, out):
    """Rebuild coefficients from the scattering kernels and compare (JSON report)."""
    from . import oracle

    xis = parse_list(xi_text, "xi list")
    if any(x < 0 for x in xis):
        raise click.BadParameter("xi must be non-negative")
    records = []
    for xi in xis:
        grid = oracle.loop_grid(xi)
        parts = [oracle.extract_flat(xi, grid)]
        if order >= 1:
            parts.append(oracle.extract_low_order(xi, method, grid=grid))
        if order >= 2:
            parts.append(oracle.extract_quadratic(xi, method, grid=grid))
        for part in parts:
            for key, val in sorted(part.values.items()):
                table = float(row(key)(xi))
                tol = oracle.TOLERANCES[key[0]]
                records.append({"p": key[0], "q": key[1], "xi": xi, "table": table,
                                "oracle": val, "abs_dev": abs(val - table),
                                "imag": abs(part.imag.get(key, 0.0)), "tol": tol,
                                "provenance": row(key).provenance,
                                "pass": abs(val - table) <= tol})
    config = {"command": "validate-oracle", "xi": xis, "order": order, "method": method,
              "recover": recover}
    extra = {"all_pass": all(r["pass"] for r in records)}
    if recover:
        rec, diag = oracle.recover_row((4, 2), method=method)
        extra["recovered_row"] = {"exp_poly": [str(c) for c in rec.exp_poly],
                                  "ei_poly": [str(c) for c in rec.ei_poly],
                                  "moment": str(rec.moment()),
                                  "matches_stored": rec == row((4, 2)), **diag}
        extra["all_pass"] = extra["all_pass"] and rec == row((4, 2))
    cols = ["p", "q", "xi", "table", "oracle", "abs_dev", "imag", "tol", "provenance", "pass"]
    emit(render(records, cols, config, "json", extra), out)
    if not extra["all_pass"]:
        raise ValidationFailure("oracle disagrees with the coefficient table")


# ---------------------------------------------------------------------------
# orientation


@cli.command("orientation")
@click.option("--surface", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--atom", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--distance", type=float, required=True)
@click.option("--n-polar", type=click.IntRange(2, None), default=19, show_default=True)
@click.option("--n-azimuth", type=click.IntRange(1, None), default=36, show_default=True)
@_common_output
def cmd_orientation(surface, atom, distance, n_polar, n_azimuth, out, fmt_name):
    """Retarded energy versus the direction of the particle's body z axis."""
    if not distance > 0:
        raise click.BadParameter("distance must be positive")
    surf, _, model, _ = _load_setup(surface, atom, None)
    jet, frame, _ = local_setup(surf, distance)
    body = static_limit(model)
    axes = hemisphere_axes(n_polar, n_azimuth)
    scan = orientation_scan(jet, body, axes)
    rows = []
    for ax, e in zip(scan.axes, scan.energies):
        theta = math.degrees(math.acos(max(-1.0, min(1.0, ax[2]))))
        phi = math.degrees(math.atan2(ax[1], ax[0]))
        rows.append({"theta_deg": theta, "phi_deg": phi, "nx": ax[0], "ny": ax[1],
                     "nz": ax[2], "energy": e})
    spread = float(scan.energies.max() - scan.energies.min())
    degenerate = spread <= 1e-12 * max(abs(scan.minimum), 1e-300)
    extra = {"argmin": [float(v) for v in scan.argmin], "degenerate": degenerate,
             "frame": "particle frame: x,y tangent, z toward the surface"}
    config = {"command": "orientation", "surface": surf, "atom": load_json(atom),
              "distance": distance, "n_polar": n_polar, "n_azimuth": n_azimuth}
    cols = ["theta_deg", "phi_deg", "nx", "ny", "nz", "energy"]
    emit(render(rows, cols, config, fmt_name or "csv", extra), out)


# ---------------------------------------------------------------------------


def main(argv=None):
    """Entry point with the documented exit codes."""
    try:
        rv = cli.main(args=argv, prog_name="cpdex", standalone_mode=False)
        return rv if isinstance(rv, int) else EXIT_OK
    except ValidationFailure as exc:
        click.echo(f"validation failure: {exc}", err=True)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        click.echo(f"did not converge: {exc}", err=True)
        return EXIT_CONVERGENCE
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except (GeometryError, PolarizabilityError, ValueError, KeyError, TypeError,
            IndexError) as exc:
        click.echo(f"input error: {exc}", err=True)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
