"""
Command-line front end.

Angles on the command line and in printed output are degrees; everything
inside the library is radians. Printed numbers carry 9 significant digits.
Machine-readable results go to files only, written atomically. A relative
output path is resolved against ``$ORTHOHAPTIC_OUTPUT_DIR`` when it is set.

Exit codes: 0 success, 2 usage or configuration error, 3 kinematic error,
I/O error or failed self-check, 4 infeasible design or empty workspace.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import checks
from .config import ConfigError, DeviceConfig, load_config
from .design import size_device
from .device import DevicePose, JointVector, device_fk, device_ik, device_jacobian
from .errors import EmptyWorkspace, Infeasible, KinematicError
from .geometry import rot_x, rot_y, rot_z
from .transmission import UJointConfig, ujoint_output, ujoint_speed_ratio
from .workspace import atomic_write, conditioning_map, fmt_float, largest_cube

OUTPUT_DIR_ENV = "ORTHOHAPTIC_OUTPUT_DIR"

EXIT_OK, EXIT_USAGE, EXIT_KINEMATIC, EXIT_INFEASIBLE = 0, 2, 3, 4


class UsageError(Exception):
    pass


def g9(x) -> str:
    return f"{float(x) + 0.0:.9g}"  # no "-0"


def fmt_vec(v) -> str:
    return " ".join(g9(x) for x in np.ravel(v))


def parse_floats(text: str, count: int, name: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != count:
        raise UsageError(f"{name}: expected {count} comma-separated numbers, got {text!r}")
    try:
        vals = np.array([float(s) for s in parts])
    except ValueError:
        bad = next(s for s in parts if not _is_float(s))
        raise UsageError(f"{name}: cannot parse {bad!r} as a number") from None
    if not np.all(np.isfinite(vals)):
        raise UsageError(f"{name}: values must be finite")
    return vals


def _is_float(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def pose_rotation(angles_deg) -> np.ndarray:
    """Wrist-frame rotation ``Rx(a) Ry(b) Rz(c)`` from degrees."""
    a, b, c = np.radians(angles_deg)
    return rot_x(a) @ rot_y(b) @ rot_z(c)


def rotation_angles(R) -> np.ndarray:
    """Inverse of :func:`pose_rotation` in degrees, middle angle in [-90, 90]."""
    b = math.asin(max(-1.0, min(1.0, R[0, 2])))
    a = math.atan2(-R[1, 2], R[2, 2])
    c = math.atan2(-R[0, 1], R[0, 0])
    return np.degrees([a, b, c])


def output_path(path: str) -> str:
    root = os.environ.get(OUTPUT_DIR_ENV)
    if root and not os.path.isabs(path):
        return os.path.join(root, path)
    return path


def write_output(path: str, text: str) -> str:
    path = output_path(path)
    try:
        atomic_write(path, text)
    except OSError as e:
        raise IOError(f"cannot write {path}: {e.strerror or e}") from None
    return path


def key_values(pairs) -> str:
    return "".join(f"{k} = {v}\n" for k, v in pairs)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_fk(args, cfg: DeviceConfig, out):
    v = parse_floats(args.joints, 6, "--joints")
    params = cfg.device_params()
    pose = device_fk(JointVector(v[:3], np.radians(v[3:])), params)
    Rw = params.variant.mount.T @ pose.R
    out(f"position: {fmt_vec(pose.p)}")
    out(f"orientation (deg): {fmt_vec(rotation_angles(Rw))}")


def cmd_ik(args, cfg: DeviceConfig, out):
    v = parse_floats(args.pose, 6, "--pose")
    params = cfg.device_params()
    R = params.variant.mount @ pose_rotation(v[3:])
    q = device_ik(DevicePose(v[:3], R), params)
    out(f"rho: {fmt_vec(q.rho)}")
    out(f"gamma (deg): {fmt_vec(np.degrees(q.gamma))}")


def cmd_jacobian(args, cfg: DeviceConfig, out):
    params = cfg.device_params()
    if (args.joints is None) == (args.pose is None):
        raise UsageError("jacobian: give exactly one of --joints or --pose")
    if args.joints is not None:
        v = parse_floats(args.joints, 6, "--joints")
        q = JointVector(v[:3], np.radians(v[3:]))
    else:
        v = parse_floats(args.pose, 6, "--pose")
        q = device_ik(DevicePose(v[:3], params.variant.mount @ pose_rotation(v[3:])), params)
    J = device_jacobian(q, params)
    for name, M in (("J_t", J.J_t), ("J_r", J.J_r)):
        out(f"{name}:")
        for row in M:
            out("  " + fmt_vec(row))
        s = np.linalg.svd(M, compute_uv=False)
        out(f"  singular values: {fmt_vec(s[::-1])}")
    c = J.conditioning()
    out(f"condition numbers: translation {g9(c['translation'])}, rotation {g9(c['rotation'])}")


def cmd_workspace_map(args, cfg: DeviceConfig, out):
    L = cfg.L
    box = parse_floats(args.box, 2, "--box") * L if args.box else np.array([-L, L])
    if not box[0] <= box[1]:
        raise UsageError("--box: lower bound exceeds upper bound")
    n = cfg.grid_n if args.n is None else args.n
    if n < 1:
        raise UsageError("--n: must be at least 1")
    m = conditioning_map(cfg.workspace_spec(with_psi=args.psi), box, n)
    path = write_output(args.out, m.to_csv_text())
    out(f"{len(m.points)} points, {int(m.member.sum())} members -> {path}")


def cmd_cube(args, cfg: DeviceConfig, out):
    spec = cfg.workspace_spec(with_psi=args.psi)
    cube = largest_cube(spec, n=cfg.grid_n)
    out(f"center: {fmt_vec(cube.center)}")
    out(f"edge: {g9(cube.edge)}")
    # the orientation workspace, for comparison with the translational cube
    lim = g9(cfg.limit_deg)
    if cfg.wrist == "hybrid":
        out(f"rotation range: pitch and yaw +-{lim} deg, roll unlimited")
    else:
        out(f"rotation range: each motor +-{lim} deg about the (1,1,1) home axis")
    text = key_values([("center_x", fmt_float(cube.center[0])),
                       ("center_y", fmt_float(cube.center[1])),
                       ("center_z", fmt_float(cube.center[2])),
                       ("edge", fmt_float(cube.edge))])
    out(f"-> {write_output(args.out, text)}")


def cmd_optimize(args, cfg: DeviceConfig, out):
    overrides = {}
    if args.edge is not None:
        overrides["edge"] = args.edge
    if args.psi is not None:
        overrides["psi"] = args.psi
    if overrides:
        try:
            cfg = DeviceConfig(**{**cfg.__dict__, **overrides})
        except ConfigError as e:
            raise UsageError(str(e)) from None
    res = size_device(cfg.design_spec(), tol=cfg.tolerances())
    out(f"L: {g9(res.L)}")
    out(f"stroke: {g9(res.rho_min)} {g9(res.rho_max)}")
    out(f"cube center: {fmt_vec(res.cube.center)}")
    out(f"amplification factors: {g9(res.worst_sigma[0])} {g9(res.worst_sigma[1])}")
    designed = DeviceConfig(**{**cfg.__dict__, "L": res.L,
                               "rho_min": res.rho_min, "rho_max": res.rho_max})
    notes = ("# sized design; cube centre "
             + ", ".join(fmt_float(x) for x in res.cube.center)
             + f"; amplification factors in [{fmt_float(res.worst_sigma[0])}, "
             + f"{fmt_float(res.worst_sigma[1])}]\n")
    out(f"-> {write_output(args.out, notes + designed.to_text())}")


def cmd_transmission(args, cfg: DeviceConfig, out):
    if args.steps < 1:
        raise UsageError("--steps: must be at least 1")
    if not 0.0 <= args.beta < 90.0:
        raise UsageError("--beta: must lie in [0, 90)")
    ujc = UJointConfig(math.radians(args.beta), math.radians(args.phase))
    th = np.arange(args.steps) * (2 * np.pi / args.steps)
    tol = cfg.tolerances()
    th_out = ujoint_output(th, ujc, tol)
    ratio = ujoint_speed_ratio(th, ujc, tol)
    lines = ["theta_in_deg,theta_out_deg,speed_ratio"]
    lines += [f"{fmt_float(a)},{fmt_float(b)},{fmt_float(r)}"
              for a, b, r in zip(np.degrees(th), np.degrees(th_out), ratio)]
    path = write_output(args.out, "\n".join(lines) + "\n")
    k, j = int(np.argmax(ratio)), int(np.argmin(ratio))
    out(f"speed ratio max {g9(ratio[k])} at {g9(np.degrees(th[k]))} deg, "
        f"min {g9(ratio[j])} at {g9(np.degrees(th[j]))} deg")
    out(f"{args.steps} rows -> {path}")


def cmd_check(args, out):
    if not args.tol_scale >= 0:
        raise UsageError("--tol-scale: must be >= 0")
    ok = checks.run_all(scale=args.tol_scale, only=args.only, out=out)
    out("all suites passed" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_KINEMATIC


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orthohaptic", description="Kinematics and design tools for the "
                "Orthoglide-based six-dof haptic device.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def with_config(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", metavar="PATH",
                        help="device configuration file (defaults apply when omitted)")
        return sp

    sp = with_config("fk", "stylus pose from joint values")
    sp.add_argument("--joints", required=True, metavar="R1,R2,R3,G1,G2,G3",
                    help="prismatic values and motor angles in degrees")
    sp.set_defaults(run=cmd_fk)

    sp = with_config("ik", "joint values from a stylus pose")
    sp.add_argument("--pose", required=True, metavar="X,Y,Z,A,B,C",
                    help="position and wrist angles Rx(A) Ry(B) Rz(C) in degrees")
    sp.set_defaults(run=cmd_ik)

    sp = with_config("jacobian", "Jacobian blocks and their conditioning")
    sp.add_argument("--joints", metavar="R1,R2,R3,G1,G2,G3")
    sp.add_argument("--pose", metavar="X,Y,Z,A,B,C")
    sp.set_defaults(run=cmd_jacobian)

    sp = with_config("workspace-map", "CSV map of membership and amplification factors")
    sp.add_argument("--n", type=int, help="samples per axis (default: grid_n)")
    sp.add_argument("--box", metavar="LO,HI", help="grid extent in units of L (default -1,1)")
    sp.add_argument("--psi", action="store_true", help="also apply the amplification bound")
    sp.add_argument("--out", default="workspace_map.csv", metavar="PATH")
    sp.set_defaults(run=cmd_workspace_map)

    sp = with_config("cube", "largest axis-aligned cube in the workspace")
    sp.add_argument("--psi", action="store_true", help="also apply the amplification bound")
    sp.add_argument("--out", default="cube.cfg", metavar="PATH")
    sp.set_defaults(run=cmd_cube)

    sp = with_config("optimize", "size leg length and stroke for a required cube")
    sp.add_argument("--edge", type=float, help="required cube edge (default: config edge)")
    sp.add_argument("--psi", type=float, help="amplification bound (default: config psi)")
    sp.add_argument("--out", default="design.cfg", metavar="PATH")
    sp.set_defaults(run=cmd_optimize)

    sp = with_config("transmission", "single universal joint over one input period")
    sp.add_argument("--beta", type=float, required=True, help="bend angle in degrees")
    sp.add_argument("--phase", type=float, default=0.0, help="yoke phase in degrees")
    sp.add_argument("--steps", type=int, default=360)
    sp.add_argument("--out", default="transmission.csv", metavar="PATH")
    sp.set_defaults(run=cmd_transmission)

    sp = sub.add_parser("check", help="run the self-check suites at default parameters")
    sp.add_argument("--tol-scale", type=float, default=1.0,
                    help="multiply every suite bound by this factor")
    sp.add_argument("--only", nargs="+", metavar="SUITE", help="suite labels or names to run")
    sp.set_defaults(run=None)
    return p


def main(argv=None, out=print, err=None) -> int:
    err = err or (lambda s: print(s, file=sys.stderr))
    try:
        args = build_parser().parse_args(argv)
        if args.command == "check":
            return cmd_check(args, out)
        cfg = load_config(args.config) if args.config else DeviceConfig()
        args.run(args, cfg, out)
        return EXIT_OK
    except UsageError as e:
        err(f"usage error: {e}")
        return EXIT_USAGE
    except ConfigError as e:
        err(f"config error: {e}")
        return EXIT_USAGE
    except (Infeasible, EmptyWorkspace) as e:
        err(f"infeasible: {e}")
        return EXIT_INFEASIBLE
    except KinematicError as e:
        name, msg = type(e).__name__, str(e)
        if not msg.startswith(name):
            msg = f"{name}: {msg}"
        err(f"kinematic error: {msg}")
        return EXIT_KINEMATIC
    except OSError as e:
        err(f"I/O error: {e}")
        return EXIT_KINEMATIC


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
