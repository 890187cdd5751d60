"""Command-line front end.

Subcommands::

    spin          couplings and success probability of the spin protocol
    optical       ideal interferometric scheme: amplitudes and optima
    sweep         model curves (F_H, F_chi, P_S) over a phi_X grid
    tomography    simulated process tomography and ML reconstruction
    oracle-check  cross-check closed forms against the photon simulation

Angles are degrees at this interface and radians internally.  All outputs
are deterministic for a fixed configuration and seed.  CSV files are
UTF-8 with a header row, '.' decimal separator and 12 significant digits;
JSON documents carry {config, results, version} with complex matrices
encoded as {"re": [[...]], "im": [[...]]}.

Exit status: 0 success, 1 usage error, 2 numerical infeasibility,
3 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, fock, imperfections, metrics, optical, spin, tomography
from .errors import InfeasibleError, OracleMismatchError

#: Device reference values quoted for context in tomography reports; they
#: include drift and component imperfections outside the model and are
#: never asserted against.
REFERENCE_MEASURED_F_CHI = 0.846
REFERENCE_MEASURED_P_S = 0.0115

SWEEP_CSV_HEADER = "phi_X_deg,phi_Y_deg,phi_A_deg,F_H,F_chi,P_S,feasible"
COUNTS_CSV_HEADER = "input_idx,basis_idx,outcome_idx,count"


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    """12-significant-digit decimal rendering used in CSV output."""
    return format(float(x), ".12g")


def _matrix_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "re": [[float(v) for v in row] for row in m.real],
        "im": [[float(v) for v in row] for row in m.imag],
    }


def _complex_json(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json_doc(config: dict, results: dict) -> str:
    doc = {"config": config, "results": results, "version": __version__}
    return json.dumps(doc, indent=2) + "\n"


def _parse_grid(grid_arg: str) -> np.ndarray:
    try:
        start_s, stop_s, points_s = grid_arg.split(":")
        start, stop, points = float(start_s), float(stop_s), int(points_s)
    except ValueError as exc:
        raise UsageError(f"grid must be start:stop:points, got {grid_arg!r}") from exc
    if points < 1:
        raise UsageError(f"grid needs at least one point, got {points}")
    return np.linspace(start, stop, points)


# ---------------------------------------------------------------------------
# sweep record (de)serialization

def sweep_records_to_csv(records: list[imperfections.SweepRecord]) -> str:
    lines = [SWEEP_CSV_HEADER]
    for r in records:
        metric_fields = (
            ["", "", ""]
            if not r.feasible
            else [_fmt(r.f_h), _fmt(r.f_chi), _fmt(r.p_s)]
        )
        lines.append(
            ",".join(
                [_fmt(r.phi_x_deg), _fmt(r.phi_y_deg), _fmt(r.phi_a_deg)]
                + metric_fields
                + ["true" if r.feasible else "false"]
            )
        )
    return "\n".join(lines) + "\n"


def sweep_records_from_csv(text: str) -> list[imperfections.SweepRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != SWEEP_CSV_HEADER:
        raise ValueError("missing or unexpected sweep CSV header")
    records = []
    for ln in lines[1:]:
        cols = ln.split(",")
        feasible = cols[6] == "true"
        records.append(
            imperfections.SweepRecord(
                phi_x_deg=float(cols[0]),
                phi_y_deg=float(cols[1]),
                phi_a_deg=float(cols[2]),
                f_h=float(cols[3]) if feasible else None,
                f_chi=float(cols[4]) if feasible else None,
                p_s=float(cols[5]) if feasible else None,
                feasible=feasible,
            )
        )
    return records


def counts_to_csv(records: list[tomography.CountRecord]) -> str:
    lines = [COUNTS_CSV_HEADER]
    for r in records:
        lines.append(f"{r.input_idx},{r.basis_idx},{r.outcome_idx},{_fmt(r.count)}")
    return "\n".join(lines) + "\n"


def counts_from_csv(text: str) -> list[tomography.CountRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != COUNTS_CSV_HEADER:
        raise ValueError("missing or unexpected counts CSV header")
    records = []
    for ln in lines[1:]:
        i, b, o, c = ln.split(",")
        records.append(tomography.CountRecord(int(i), int(b), int(o), float(c)))
    return records


# ---------------------------------------------------------------------------
# commands

def cmd_spin(args) -> int:
    if not 0.0 < args.phi_deg <= 180.0:
        raise UsageError(f"--phi-deg must lie in (0, 180], got {args.phi_deg}")
    phi = math.radians(args.phi_deg)
    best = spin.optimal_couplings(phi)
    couplings = spin.solve_cz_condition(phi, best.t)
    gate = spin.effective_gate(couplings.params)

    grid_deg = _parse_grid(args.grid) if args.grid else np.array([args.phi_deg])
    grid_rows = []
    for phi_deg in grid_deg:
        if not 0.0 < phi_deg <= 180.0:
            raise UsageError(f"grid angle {phi_deg} outside (0, 180]")
        opt = spin.optimal_couplings(math.radians(phi_deg))
        grid_rows.append((float(phi_deg), opt.t, opt.t_tilde, opt.p_success))

    if args.format == "csv":
        lines = ["phi_deg,t,t_tilde,p_success"]
        lines += [",".join(_fmt(v) for v in row) for row in grid_rows]
        _emit("\n".join(lines) + "\n", args.out)
        return 0

    config = {"command": "spin", "phi_deg": args.phi_deg, "grid": args.grid}
    results = {
        "optimal": {"t": best.t, "t_tilde": best.t_tilde, "p_success": best.p_success},
        "cz_couplings": {
            "t": couplings.t,
            "t_tilde": couplings.t_tilde,
            "aux_phase_deg": math.degrees(couplings.aux_phase),
        },
        "effective_gate": {
            "eta_a": _complex_json(gate.eta_a),
            "matrix": _matrix_json(gate.matrix),
        },
        "p_success_grid": [
            {"phi_deg": p, "t": t, "t_tilde": tt, "p_success": ps}
            for p, t, tt, ps in grid_rows
        ],
    }
    _emit(_json_doc(config, results), args.out)
    return 0


def cmd_optical(args) -> int:
    no_bypass = optical.coincidence_amplitudes_no_bypass(args.R)
    best = optical.optimal_bypass(args.R)
    results = {
        "R": args.R,
        "no_bypass": {
            "bare": [float(v) for v in no_bypass.bare],
            "filtered": [float(v) for v in no_bypass.filtered],
        },
        "optimal_bypass": {
            "t_x": best.t_x,
            "t_y": best.t_y,
            "p_success": best.p_success,
        },
    }
    if args.phi_x_deg is not None:
        t_x, _ = optical.waveplate_amplitudes(math.radians(args.phi_x_deg))
        sol = optical.solve_cz_conditions(args.R, t_x)
        w = optical.bypass_amplitudes(sol)
        results["cz_solution"] = {
            "phi_x_deg": args.phi_x_deg,
            "t_x": sol.t_x,
            "t_y": sol.t_y,
            "t_a": sol.t_a,
            "t_b": sol.t_b,
            "r_y": sol.r_y,
            "amplitudes": [_complex_json(v) for v in w],
            "p_success": float(abs(w[0]) ** 2),
        }

    if args.format == "csv":
        lines = ["R,t_x,t_y,p_success",
                 ",".join(_fmt(v) for v in (args.R, best.t_x, best.t_y, best.p_success))]
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    config = {"command": "optical", "R": args.R, "phi_x_deg": args.phi_x_deg}
    _emit(_json_doc(config, results), args.out)
    return 0


def _base_params(args) -> imperfections.SetupParams:
    return imperfections.SetupParams(
        R=args.R, R_H=args.RH, visibility=args.visibility
    )


def cmd_sweep(args) -> int:
    grid = _parse_grid(args.grid)
    records = imperfections.sweep_phi_x(_base_params(args), grid, rule=args.angle_rule)
    if args.plot:
        from . import plots

        plots.save_figure(plots.sweep_figure(records), args.plot)
    if args.format == "json":
        results = {
            "records": [
                {
                    "phi_X_deg": r.phi_x_deg,
                    "phi_Y_deg": r.phi_y_deg,
                    "phi_A_deg": r.phi_a_deg,
                    "F_H": r.f_h,
                    "F_chi": r.f_chi,
                    "P_S": r.p_s,
                    "feasible": r.feasible,
                }
                for r in records
            ]
        }
        config = {
            "command": "sweep", "R": args.R, "RH": args.RH,
            "visibility": args.visibility, "grid": args.grid,
            "angle_rule": args.angle_rule,
        }
        _emit(_json_doc(config, results), args.out)
    else:
        _emit(sweep_records_to_csv(records), args.out)
    return 0


def _resembles(chi: np.ndarray) -> str:
    """Label the dominant Choi eigenvector as identity-like or CZ-like."""
    _, vecs = np.linalg.eigh(chi)
    top = vecs[:, -1]
    v_id = np.zeros(16, dtype=complex)
    v_cz = np.zeros(16, dtype=complex)
    for j, sign in enumerate((1.0, 1.0, 1.0, -1.0)):
        v_id[4 * j + j] = 0.5
        v_cz[4 * j + j] = 0.5 * sign
    ov_id = abs(np.vdot(v_id, top)) ** 2
    ov_cz = abs(np.vdot(v_cz, top)) ** 2
    return "identity" if ov_id > ov_cz else "cz"


def cmd_tomography(args) -> int:
    if args.format == "csv":
        raise UsageError("tomography reports are JSON only; counts go to --counts-out")
    if args.bypass_off:
        params = imperfections.SetupParams(
            R=args.R, R_H=args.RH, visibility=args.visibility,
            phi_x_deg=0.0, phi_y_deg=0.0, phi_a_deg=0.0,
        )
    else:
        params = imperfections.cz_parameter_solution(
            imperfections.SetupParams(
                R=args.R, R_H=args.RH, visibility=args.visibility,
                phi_x_deg=args.phi_x_deg,
            ),
            rule=args.angle_rule,
        )
    chi_model = imperfections.process_matrix(params)
    rates = tomography.expected_rates(chi_model)

    if args.counts_in:
        counts = counts_from_csv(Path(args.counts_in).read_text(encoding="utf-8"))
        data = tomography.records_to_array(counts)
    elif args.noiseless:
        data = rates * args.counts_scale
        counts = tomography.array_to_records(data)
    else:
        if args.seed is None:
            raise UsageError("--seed is required when Poisson counts are simulated")
        counts = tomography.simulate_counts(rates, args.counts_scale, args.seed)
        data = tomography.records_to_array(counts)
    if args.counts_out:
        Path(args.counts_out).write_text(counts_to_csv(counts), encoding="utf-8")

    settings = tomography.TomographySettings(counts_per_setting=int(args.counts_scale))
    result = tomography.mle_reconstruct(data, settings)
    chi_cz = metrics.chi_cz_reference()

    if args.plot:
        from . import plots

        plots.save_figure(
            plots.process_matrix_figure(result.chi_normalized, "reconstructed process"),
            args.plot,
        )

    config = {
        "command": "tomography", "R": args.R, "RH": args.RH,
        "visibility": args.visibility, "phi_x_deg": args.phi_x_deg,
        "bypass_off": args.bypass_off, "angle_rule": args.angle_rule,
        "counts_scale": args.counts_scale, "seed": args.seed,
        "noiseless": args.noiseless,
    }
    results = {
        "params": {
            "R": params.R, "R_H": params.R_H, "visibility": params.visibility,
            "phi_x_deg": params.phi_x_deg, "phi_y_deg": params.phi_y_deg,
            "phi_a_deg": params.phi_a_deg,
        },
        "model": {
            "f_chi_vs_cz": metrics.process_fidelity(chi_model, chi_cz),
            "p_s": metrics.average_success_probability(chi_model),
        },
        "estimate": {
            "f_chi_vs_cz": metrics.process_fidelity(result.chi, chi_cz),
            "p_s": metrics.average_success_probability(result.chi),
            "fidelity_vs_model": metrics.uhlmann_fidelity(result.chi, chi_model),
            "iterations": result.iterations,
            "converged": result.converged,
            "resembles": _resembles(result.chi),
        },
        "reference_measured": {
            "f_chi": REFERENCE_MEASURED_F_CHI,
            "p_s": REFERENCE_MEASURED_P_S,
            "note": "measured device values including effects outside the model",
        },
        "chi_raw": _matrix_json(result.chi),
        "chi_normalized": _matrix_json(result.chi_normalized),
    }
    _emit(_json_doc(config, results), args.out)
    return 0


def _random_setup_params(rng: np.random.Generator) -> imperfections.SetupParams:
    return imperfections.SetupParams(
        R=rng.uniform(0.2, 0.45),
        R_H=rng.uniform(0.0, 0.06),
        visibility=rng.uniform(0.85, 1.0),
        phi_x_deg=rng.uniform(1.0, 44.0),
        phi_y_deg=rng.uniform(-44.0, 44.0),
        phi_a_deg=rng.uniform(0.0, 44.0),
    )


def run_oracle_checks(
    draws: int, seed: int, corrupt: bool = False, tol: float = 1e-9
) -> list[str]:
    """Cross-check the closed forms against the photon simulation.

    Raises OracleMismatchError naming the offending parameter set when any
    equivalence fails; ``corrupt`` injects a deliberate coefficient error
    as a negative control.
    """
    rng = np.random.default_rng(seed)
    lines = []
    for k in range(draws):
        p = _random_setup_params(rng)
        chi_model = imperfections.process_matrix(p)
        if corrupt:
            chi_model = chi_model.copy()
            chi_model[15, 15] += 1e-6
        chi_oracle = fock.process_matrix_oracle(p)
        dev_chi = float(np.max(np.abs(chi_model - chi_oracle)))
        if dev_chi > tol:
            raise OracleMismatchError(
                f"process matrix mismatch (max dev {dev_chi:.3e}) for {p}"
            )

        p0 = imperfections.SetupParams(
            R=p.R, R_H=0.0, visibility=p.visibility,
            phi_x_deg=p.phi_x_deg, phi_y_deg=p.phi_y_deg, phi_a_deg=p.phi_a_deg,
        )
        t_x, r_x, t_y, r_y, t_a, _ = p0.waveplates()
        coeff = imperfections.coefficients_indistinguishable(p0)
        w = optical.bypass_amplitudes(
            optical.OpticalSchemeParams(
                R=p0.R, t_x=t_x, t_y=t_y, t_a=t_a, t_b=p0.t, r_x=r_x, r_y=r_y
            )
        )
        dev_w = max(
            abs(coeff.beta_00 - w[0]), abs(coeff.beta_01 - w[1]),
            abs(coeff.beta_10 - w[2]), abs(coeff.beta_11 - w[3]),
        )
        if dev_w > tol:
            raise OracleMismatchError(
                f"coefficient vs amplitude mismatch (max dev {dev_w:.3e}) for {p0}"
            )

        sol = optical.solve_cz_conditions(rng.uniform(0.1, 0.9), rng.uniform(0.3, 0.99))
        w_closed = optical.bypass_amplitudes(sol)
        w_oracle = fock.bypass_amplitudes_oracle(sol)
        dev_ideal = max(abs(a - b) for a, b in zip(w_closed, w_oracle))
        if dev_ideal > tol:
            raise OracleMismatchError(
                f"ideal-scheme amplitude mismatch (max dev {dev_ideal:.3e}) for {sol}"
            )
        lines.append(
            f"draw {k}: OK (chi dev {dev_chi:.3e}, coeff dev {dev_w:.3e}, "
            f"ideal dev {dev_ideal:.3e})"
        )
    lines.append(f"oracle-check: {draws} draws passed within {tol:g}")
    return lines


def cmd_oracle_check(args) -> int:
    if args.draws < 1:
        raise UsageError(f"--draws must be positive, got {args.draws}")
    lines = run_oracle_checks(args.draws, args.seed, corrupt=args.corrupt)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sub, fmt_default: str) -> None:
    sub.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    sub.add_argument("--out", help="write output to this file instead of stdout")


def _add_setup_args(sub) -> None:
    sub.add_argument("--R", type=float, default=imperfections.FIXTURE_R,
                     help="central vertical reflectance")
    sub.add_argument("--RH", type=float, default=imperfections.FIXTURE_R_H,
                     help="parasitic horizontal reflectance")
    sub.add_argument("--visibility", type=float,
                     default=imperfections.FIXTURE_VISIBILITY,
                     help="two-photon interference visibility")
    sub.add_argument("--angle-rule", choices=imperfections.ANGLE_RULES,
                     default=imperfections.ANGLE_RULE_NOMINAL,
                     help="reflectance used when solving the gate-condition angles")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weakcz",
                     description="bypass-enhanced CZ gate analysis toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_spin = subs.add_parser("spin", help="spin-protocol couplings and success")
    p_spin.add_argument("--phi-deg", type=float, required=True,
                        help="interaction phase in degrees, in (0, 180]")
    p_spin.add_argument("--grid", help="phi grid start:stop:points (degrees)")
    _add_common(p_spin, "json")
    p_spin.set_defaults(func=cmd_spin)

    p_opt = subs.add_parser("optical", help="ideal interferometric scheme")
    p_opt.add_argument("--R", type=float, default=imperfections.NOMINAL_R)
    p_opt.add_argument("--phi-x-deg", type=float, default=None,
                       help="bypass wave-plate angle to solve the gate conditions at")
    _add_common(p_opt, "json")
    p_opt.set_defaults(func=cmd_optical)

    p_sweep = subs.add_parser("sweep", help="model curves over a phi_X grid")
    _add_setup_args(p_sweep)
    p_sweep.add_argument("--grid", default="0:45:17",
                         help="phi_X grid start:stop:points (degrees)")
    p_sweep.add_argument("--plot", help="also render the curves to this image file")
    _add_common(p_sweep, "csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_tomo = subs.add_parser("tomography", help="simulate and reconstruct a process")
    _add_setup_args(p_tomo)
    p_tomo.add_argument("--phi-x-deg", type=float, default=20.0)
    p_tomo.add_argument("--bypass-off", action="store_true",
                        help="use the no-bypass configuration (all angles zero)")
    p_tomo.add_argument("--counts-scale", type=float, default=100000.0,
                        help="counts per unit rate and measurement setting")
    p_tomo.add_argument("--seed", type=int, default=None)
    p_tomo.add_argument("--noiseless", action="store_true",
                        help="use exact expected rates instead of Poisson draws")
    p_tomo.add_argument("--counts-in", help="reconstruct from this counts CSV")
    p_tomo.add_argument("--counts-out", help="write the counts CSV here")
    p_tomo.add_argument("--plot", help="render the reconstructed process matrix here")
    _add_common(p_tomo, "json")
    p_tomo.set_defaults(func=cmd_tomography)

    p_oc = subs.add_parser("oracle-check", help="closed forms vs photon simulation")
    p_oc.add_argument("--draws", type=int, default=10)
    p_oc.add_argument("--seed", type=int, default=2024)
    p_oc.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p_oc.add_argument("--out")
    p_oc.set_defaults(func=cmd_oracle_check, format="text")

    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except OracleMismatchError as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
