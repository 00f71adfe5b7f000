"""Command-line front end: verify, decompose, capability, classify, evolve.

Exit codes: 0 success, 1 verification failure, 2 not decomposable,
3 null spinor, 4 mismatch with the reference classification, 64 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .capability import (
    REFERENCE_VANISHING,
    classify,
    pdot_analytic,
    pdot_density,
    pdot_fd,
    reference_mismatch,
)
from .clifford import build_rep, normalize_rep_id, verify_clifford
from .conformal import (
    PSEUDO_HERMITIAN_TOL,
    all_generators,
    check_closure,
    check_pseudo_hermiticity,
    conjugation_table,
    generator,
)
from .errors import (
    InvalidArgumentError,
    NotDecomposableError,
    NullSpinorError,
    RepresentationError,
    UnsupportedTPSError,
)
from .jsonio import load_json, load_spinor, sig
from .schmidt import decompose, tracked_frame

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_NOT_DECOMPOSABLE = 2
EXIT_NULL = 3
EXIT_MISMATCH = 4
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    rep: str = "A"
    file: str | None = None
    branch: str = "upper"
    seed: int = 1
    samples: int = 200
    tol: float = 1e-10
    format: str = "text"
    out: str | None = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(args.rep, args.file, args.branch, args.seed, args.samples, args.tol, args.format, args.out)

    def representation(self, validate: bool = True):
        name = normalize_rep_id(self.rep)
        if name == "Custom":
            if not self.file:
                raise UsageError("--rep custom needs --file <payload.json>")
            return build_rep(name, load_json(self.file), validate=validate)
        return build_rep(name)


def _num(x) -> str:
    return f"{float(x):.12g}"


def _cnum(z) -> str:
    z = complex(z)
    return f"{_num(z.real)}{'+' if z.imag >= 0 else '-'}{_num(abs(z.imag))}j"


def _vec(v) -> str:
    return "(" + ", ".join(_cnum(z) for z in v) + ")"


def _emit(text: str, cfg: RunConfig):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args, cfg: RunConfig) -> int:
    rep = cfg.representation(validate=False)
    lines = []
    failures = []

    def record(name, violation, tol):
        ok = violation < tol
        lines.append(f"{'PASS' if ok else 'FAIL'}  {name}  max violation {violation:.3e}")
        if not ok:
            failures.append(name)

    for name, v in verify_clifford(rep).checks:
        record(name, v, PSEUDO_HERMITIAN_TOL)
    record("g4 operator-Schmidt rank = 1", float(la.operator_schmidt_rank(rep.gamma4) - 1), 0.5)
    gens = all_generators(rep, cfg.branch)
    record(
        "g4 H^dagger g4 = H (all generators)",
        max(check_pseudo_hermiticity(rep, g) for g in gens),
        PSEUDO_HERMITIAN_TOL,
    )
    for name, v in conjugation_table(gens):
        record(name, v, PSEUDO_HERMITIAN_TOL)
    closure = check_closure(gens)
    record("commutator closure (all pairs)", closure.max_violation, closure.tol)

    header = f"verify rep {rep.label} branch {cfg.branch}"
    if failures:
        lines.append(f"FAILED: {failures[0]}")
    else:
        lines.append("all checks passed")
    _emit(header + "\n" + "\n".join(lines) + "\n", cfg)
    if failures:
        print(f"verification failed: {failures[0]}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_decompose(args, cfg: RunConfig) -> int:
    rep = cfg.representation()
    psi = load_spinor(args.spinor)
    d = decompose(psi, rep)
    if cfg.format == "json":
        _emit(json.dumps(d.to_json(), indent=2) + "\n", cfg)
        return EXIT_OK
    out = [
        f"P          {_num(d.P)}",
        f"psiA       {_vec(d.psi_a)}  sign {d.s_a:+d}",
        f"psiAperp   {_vec(d.psi_a_perp)}  sign {d.s_a_perp:+d}",
        f"psiB       {_vec(d.psi_b)}  sign {d.s_b:+d}",
        f"psiBperp   {_vec(d.psi_b_perp)}  sign {d.s_b_perp:+d}",
        f"norm       {_num(d.norm)}",
        f"scale      {_num(d.scale)}",
        f"residual   {d.residual:.3e}",
    ]
    _emit("\n".join(out) + "\n", cfg)
    return EXIT_OK


def cmd_capability(args, cfg: RunConfig) -> int:
    rep = cfg.representation()
    psi = load_spinor(args.spinor)
    gen = generator(rep, args.generator, cfg.branch)
    d = decompose(psi, rep)
    psi_n = psi / d.scale
    values = {}
    if args.method in ("analytic", "all"):
        values["analytic"] = pdot_analytic(d, gen, rep)
    if args.method in ("density", "all"):
        values["density"] = pdot_density(psi_n, gen, rep, d)
    if args.method in ("fd", "all"):
        values["fd"] = pdot_fd(psi_n, gen, rep, args.step, d)
    residuals = {}
    if args.method == "all":
        keys = list(values)
        for i, a in enumerate(keys):
            for b in keys[i + 1:]:
                residuals[f"{a}-{b}"] = abs(values[a] - values[b])
    if cfg.format == "json":
        payload = {
            "generator": gen.name,
            "branch": gen.branch,
            "rep": rep.label,
            "P": sig(d.P),
            "pdot": {k: sig(v) for k, v in values.items()},
        }
        if residuals:
            payload["residuals"] = {k: sig(v) for k, v in residuals.items()}
        _emit(json.dumps(payload, indent=2) + "\n", cfg)
        return EXIT_OK
    out = [f"generator {gen.name}  branch {gen.branch}  rep {rep.label}  P {_num(d.P)}"]
    out += [f"pdot_{k}  {_num(v)}" for k, v in values.items()]
    out += [f"residual {k}  {v:.3e}" for k, v in residuals.items()]
    _emit("\n".join(out) + "\n", cfg)
    return EXIT_OK


def cmd_classify(args, cfg: RunConfig) -> int:
    rep = cfg.representation()
    table = classify(rep, cfg.branch, cfg.samples, cfg.tol, cfg.seed)
    _emit(table.render(cfg.format), cfg)
    if args.expect_paper:
        if table.rep not in REFERENCE_VANISHING:
            raise UsageError("--expect-paper is only defined for the built-in representations A and B")
        mismatch = reference_mismatch(table)
        if mismatch is not None:
            print(f"classification mismatch: {mismatch}", file=sys.stderr)
            return EXIT_MISMATCH
        print(f"classification matches reference set for {table.rep}", file=sys.stderr)
    return EXIT_OK


def evolve_rows(psi, gen, rep, tau_max: float, steps: int):
    """``(tau, P or None, norm, decomposable)`` along ``exp(-i H tau) psi``.

    P follows the Schmidt branch that starts at the decomposition's
    ``psi_a`` so the curve stays smooth through ``P = 1/2``.
    """
    d = decompose(psi, rep)
    psi_n = np.asarray(psi, dtype=complex) / d.scale
    reference = d.psi_a
    rows = []
    for i in range(steps):
        tau = tau_max * i / (steps - 1)
        state = la.mat_exp(gen.matrix, tau) @ psi_n
        norm = la.spinor_norm(rep.gamma4, state)
        if i == 0:
            rows.append((tau, d.P, norm, True))
            continue
        try:
            P, reference = tracked_frame(state, rep, reference)
            rows.append((tau, P, norm, True))
        except (NotDecomposableError, NullSpinorError):
            rows.append((tau, None, norm, False))
    return rows


def cmd_evolve(args, cfg: RunConfig) -> int:
    if args.steps < 2 or not args.tau_max > 0:
        raise UsageError("evolve needs --steps >= 2 and --tau-max > 0")
    rep = cfg.representation()
    psi = load_spinor(args.spinor)
    gen = generator(rep, args.generator, cfg.branch)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tau", "P", "norm", "decomposable"])
    for tau, P, norm, ok in evolve_rows(psi, gen, rep, args.tau_max, args.steps):
        w.writerow([_num(tau), "" if P is None else _num(P), _num(norm), int(ok)])
    _emit(buf.getvalue(), cfg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--rep", default="A", help="A, B or custom (default A)")
    common.add_argument("--file", help="custom representation payload (JSON)")
    common.add_argument("--branch", choices=("upper", "lower"), default="upper")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--format", choices=("text", "json", "csv", "md"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = _Parser(prog="spinorent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", parents=[common], help="check Clifford and generator identities")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", parents=[common], help="generalized Schmidt decomposition")
    p.add_argument("spinor", help="spinor JSON file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("capability", parents=[common], help="entanglement-capability rate of one generator")
    p.add_argument("spinor", help="spinor JSON file")
    p.add_argument("--generator", required=True, help="M12 .. M34, D, P1 .. P4, K1 .. K4")
    p.add_argument("--method", choices=("analytic", "density", "fd", "all"), default="analytic")
    p.add_argument("--step", type=float, default=1e-4, help="finite-difference step")
    p.set_defaults(func=cmd_capability)

    p = sub.add_parser("classify", parents=[common], help="classify all 15 generators")
    p.add_argument("--expect-paper", action="store_true",
                   help="exit 4 unless the vanishing set matches the built-in reference")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evolve", parents=[common], help="Schmidt weight along a finite trajectory (CSV)")
    p.add_argument("spinor", help="spinor JSON file")
    p.add_argument("--generator", required=True)
    p.add_argument("--tau-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_evolve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    cfg = RunConfig.from_args(args)
    try:
        return args.func(args, cfg)
    except NotDecomposableError as exc:
        print(f"not decomposable [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_NOT_DECOMPOSABLE
    except UnsupportedTPSError as exc:
        print(f"not decomposable [unsupported-tps]: {exc}", file=sys.stderr)
        return EXIT_NOT_DECOMPOSABLE
    except NullSpinorError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NULL
    except RepresentationError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, InvalidArgumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
