"""Batch front end: realize / bounds / verify / impulse over JSON problem files."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .blocks import Realization
from .bounds import bounds_report
from .check import markov_check
from .errors import (
    BaseMismatch,
    InternalCheckError,
    NegativeImpulse,
    PosrealError,
)
from .realizer import (
    IterationCapExceeded,
    NoPositiveRealization,
    Realized,
    Unsupported,
    realize,
    realize_with_base,
)
from .tf import TransferFunction, from_coefficients, recombine, build_partial_fraction, PoleTerm

EXIT_OK = 0
EXIT_NO_REALIZATION = 1
EXIT_UNSUPPORTED = 2
EXIT_INPUT = 3
EXIT_VERIFY = 4


class SchemaError(PosrealError):
    """Problem or realization document does not match the expected schema."""


@dataclass(frozen=True)
class ProblemSpec:
    tf: TransferFunction
    options: dict


def _reject_constant(token):
    raise SchemaError(f"non-finite number {token!r} in input")


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh, parse_constant=_reject_constant)
    except FileNotFoundError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _as_real_list(obj, what: str) -> list[float]:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{what} must be a nonempty list of numbers")
    out = []
    for v in obj:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"{what} must contain numbers only")
        out.append(float(v))
    return out


def _as_complex(obj, what: str) -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(float(obj), 0.0)
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise SchemaError(f"{what}: unexpected keys {sorted(extra)}")
        re = obj.get("re", 0.0)
        im = obj.get("im", 0.0)
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in (re, im)):
            raise SchemaError(f"{what}: re/im must be numbers")
        return complex(float(re), float(im))
    raise SchemaError(f"{what} must be a number or an object with re/im")


_OPTION_KEYS = {"mode", "tol", "max_shifts", "horizon", "base", "base_shift"}


def load_problem(path: str) -> ProblemSpec:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise SchemaError("problem document must be a JSON object")
    forms = [k for k in ("transfer", "partial_fractions") if k in doc]
    if len(forms) != 1:
        raise SchemaError("exactly one of 'transfer' or 'partial_fractions' is required")
    extra = set(doc) - {"transfer", "partial_fractions", "options"}
    if extra:
        raise SchemaError(f"unexpected top-level keys {sorted(extra)}")

    if forms[0] == "transfer":
        block = doc["transfer"]
        if not isinstance(block, dict) or set(block) - {"num", "den"}:
            raise SchemaError("'transfer' must hold exactly 'num' and 'den'")
        tf = from_coefficients(
            _as_real_list(block.get("num"), "transfer.num"),
            _as_real_list(block.get("den"), "transfer.den"),
        )
    else:
        block = doc["partial_fractions"]
        if not isinstance(block, dict) or set(block) - {"dominant", "terms"}:
            raise SchemaError("'partial_fractions' must hold 'dominant' and 'terms'")
        dom = block.get("dominant")
        if not isinstance(dom, dict) or set(dom) - {"pole", "residue"}:
            raise SchemaError("'dominant' must hold 'pole' and 'residue'")
        raw_terms = block.get("terms", [])
        if not isinstance(raw_terms, list):
            raise SchemaError("'terms' must be a list")
        terms = []
        for i, item in enumerate(raw_terms):
            if not isinstance(item, dict) or set(item) - {"pole", "order", "coeffs"}:
                raise SchemaError(f"terms[{i}] must hold 'pole', 'order', 'coeffs'")
            pole = _as_complex(item.get("pole"), f"terms[{i}].pole")
            coeffs = item.get("coeffs")
            if not isinstance(coeffs, list) or not coeffs:
                raise SchemaError(f"terms[{i}].coeffs must be a nonempty list")
            cs = tuple(_as_complex(c, f"terms[{i}].coeffs") for c in coeffs)
            order = item.get("order", len(cs))
            if order != len(cs):
                raise SchemaError(f"terms[{i}]: order must equal the coefficient count")
            terms.append(PoleTerm(pole, cs))
        dom_pole = _as_complex(dom.get("pole"), "dominant.pole")
        dom_res = _as_complex(dom.get("residue"), "dominant.residue")
        if dom_pole.imag != 0 or dom_res.imag != 0:
            raise SchemaError("dominant pole and residue must be real")
        pf = build_partial_fraction(dom_pole.real, dom_res.real, terms)
        tf = recombine(pf)

    options = doc.get("options", {})
    if not isinstance(options, dict) or set(options) - _OPTION_KEYS:
        raise SchemaError(f"options keys must be within {sorted(_OPTION_KEYS)}")
    return ProblemSpec(tf, options)


def load_realization(obj, base_dir: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if isinstance(obj, str):
        obj = _load_json(str((base_dir / obj) if not os.path.isabs(obj) else obj))
    if not isinstance(obj, dict):
        raise SchemaError("realization document must be a JSON object")
    for key in ("A", "b", "c"):
        if key not in obj:
            raise SchemaError(f"realization document is missing '{key}'")
    A = obj["A"]
    if not isinstance(A, list) or not all(isinstance(r, list) for r in A):
        raise SchemaError("'A' must be a list of rows")
    rows = [_as_real_list(r, "A row") for r in A]
    b = _as_real_list(obj["b"], "b")
    c = _as_real_list(obj["c"], "c")
    dim = obj.get("dimension", len(rows))
    if dim != len(rows) or any(len(r) != dim for r in rows) or len(b) != dim or len(c) != dim:
        raise SchemaError("realization dimensions are inconsistent")
    return np.array(rows), np.array(b), np.array(c)


def _realization_doc(A, b, c) -> dict:
    A = np.asarray(A)
    return {
        "dimension": int(A.shape[0]),
        "A": [[float(v) for v in row] for row in A],
        "b": [float(v) for v in np.asarray(b)],
        "c": [float(v) for v in np.asarray(c)],
    }


def _verification_doc(report) -> dict:
    return {
        "horizon": int(report.horizon),
        "max_relative_error": float(report.max_relative_error),
        "worst_index": int(report.worst_index),
        "nonnegative": bool(report.nonnegative),
        "passed": bool(report.passed),
    }


def _trace_doc(trace) -> dict:
    doc = {
        "mode": trace.mode,
        "shifts_performed": trace.shifts_performed,
        "prefix": [float(v) for v in trace.prefix],
        "pre_lift_dimension": trace.pre_lift_dimension,
        "final_dimension": trace.final_dimension,
        "budget_totals": [float(v) for v in trace.budget_totals],
        "blocks": [
            {
                k: v
                for k, v in (
                    ("kind", s.kind),
                    ("dim", s.dim),
                    ("share", float(s.share)),
                    ("share_floor", None if s.share_floor is None else float(s.share_floor)),
                    ("share_floor_alt", None if s.share_floor_alt is None else float(s.share_floor_alt)),
                )
            }
            for s in trace.blocks
        ],
        "scale_gamma": float(trace.scale_gamma),
        "pole_scale": float(trace.pole_scale),
    }
    if trace.budget is not None:
        doc["budget"] = {
            "mode": trace.budget.mode,
            "total": float(trace.budget.total),
            "leftover": float(trace.budget.leftover),
            "allocations": [
                {"pole": {"re": p.real, "im": p.imag}, "share": float(s)}
                for p, s in trace.budget.allocations()
            ],
        }
    return doc


def _render_csv(doc: dict) -> str:
    lines: list[str] = []

    def emit(prefix: str, value):
        if isinstance(value, dict):
            for k, v in value.items():
                emit(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(value, list) and value and isinstance(value[0], list):
            lines.append(prefix)
            for row in value:
                lines.append(",".join(repr(float(v)) for v in row))
        elif isinstance(value, list):
            lines.append(prefix)
            lines.append(",".join(_scalar(v) for v in value))
        else:
            lines.append(f"{prefix},{_scalar(value)}")

    def _scalar(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return repr(v)
        if v is None:
            return ""
        return str(v)

    for key in ("status", "dimension"):
        if key in doc:
            lines.append(f"{key},{_scalar(doc[key])}")
    for key in ("A", "b", "c"):
        if key in doc:
            lines.append(key)
            block = doc[key]
            rows = block if isinstance(block[0], list) else [block]
            for row in rows:
                lines.append(",".join(repr(float(v)) for v in row))
    for key, value in doc.items():
        if key in ("status", "dimension", "A", "b", "c", "trace"):
            continue
        emit(key, value)
    return "\n".join(lines) + "\n"


def _write_output(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    target = Path(output)
    fd, tmp = tempfile.mkstemp(dir=str(target.parent) or ".", prefix=target.name)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(doc: dict, args) -> None:
    if args.format == "csv":
        text = _render_csv(doc)
    else:
        text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    _write_output(text, args.output)


def _resolve(flag, options: dict, key: str, default):
    if flag is not None:
        return flag
    if key in options:
        return options[key]
    return default


_MODES = {"per-pole": "per_pole", "per_pole": "per_pole", "sum": "conservative_sum",
          "conservative_sum": "conservative_sum"}


def _cmd_realize(args) -> int:
    problem = load_problem(args.problem)
    opts = problem.options
    mode = _MODES.get(str(_resolve(args.mode, opts, "mode", "per-pole")))
    if mode is None:
        raise SchemaError("mode must be 'per-pole' or 'sum'")
    tol = float(_resolve(args.tol, opts, "tol", 1e-6))
    cap = _resolve(args.max_shifts, opts, "max_shifts", None)
    horizon = _resolve(args.horizon, opts, "horizon", None)
    base_ref = _resolve(args.base, opts, "base", None)
    base_shift = _resolve(args.base_shift, opts, "base_shift", None)

    if base_ref is not None:
        if base_shift is None:
            raise SchemaError("a base realization needs its shift index (--base-shift)")
        A, b, c = load_realization(base_ref, Path(args.problem).parent)
        base = Realization(A, b, c)
        outcome = realize_with_base(
            problem.tf, base, int(base_shift), verify_tol=tol,
            verify_horizon=None if horizon is None else int(horizon),
        )
    else:
        outcome = realize(
            problem.tf, mode, verify_tol=tol,
            verify_horizon=None if horizon is None else int(horizon),
            cap_override=None if cap is None else int(cap),
        )

    if isinstance(outcome, Realized):
        doc = {"status": "realized"}
        doc.update(_realization_doc(outcome.realization.A, outcome.realization.b, outcome.realization.c))
        doc["verification"] = _verification_doc(outcome.trace.verification)
        doc["trace"] = _trace_doc(outcome.trace)
        _emit(doc, args)
        return EXIT_OK
    if isinstance(outcome, NoPositiveRealization):
        _emit(
            {
                "status": "no_positive_realization",
                "witness_index": outcome.witness_index,
                "witness_value": float(outcome.witness_value),
            },
            args,
        )
        return EXIT_NO_REALIZATION
    if isinstance(outcome, IterationCapExceeded):
        _emit({"status": "iteration_cap_exceeded", "cap": outcome.cap}, args)
        return EXIT_UNSUPPORTED
    _emit({"status": "unsupported", "reason": outcome.reason}, args)
    return EXIT_UNSUPPORTED


def _cmd_bounds(args) -> int:
    problem = load_problem(args.problem)
    try:
        report = bounds_report(problem.tf, args.tol)
    except NegativeImpulse as exc:
        _emit(
            {"status": "negative_impulse", "index": exc.index, "value": float(exc.value)},
            args,
        )
        return EXIT_NO_REALIZATION
    _emit(
        {
            "k0": report.k0,
            "theo2": report.theo2,
            "mn2": report.mn2,
            "horizon": report.horizon_used,
            "zero_indices": list(report.zero_indices),
        },
        args,
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    problem = load_problem(args.problem)
    A, b, c = load_realization(args.realization, Path(args.problem).parent)
    K = None if args.horizon is None else int(args.horizon)
    report = markov_check((A, b, c), problem.tf, K, args.tol if args.tol else 1e-6)
    _emit(_verification_doc(report), args)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _cmd_impulse(args) -> int:
    problem = load_problem(args.problem)
    K = int(args.horizon) if args.horizon is not None else 20
    if K < 1:
        raise SchemaError("impulse horizon must be positive")
    from .tf import impulse_response

    values = impulse_response(problem.tf, K).values
    _emit({"count": K, "values": [float(v) for v in values]}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posreal",
        description="Nonnegative state-space realizations of rational transfer functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("problem", help="problem file (JSON)")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--output", default=None, help="write the result here (atomic)")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
        p.add_argument("--horizon", type=int, default=None, help="horizon override")

    p = sub.add_parser("realize", help="synthesize and verify a realization")
    common(p)
    p.add_argument("--mode", choices=["per-pole", "sum"], default=None)
    p.add_argument("--max-shifts", type=int, default=None, dest="max_shifts")
    p.add_argument("--base", default=None, help="realization file for the shifted tail")
    p.add_argument("--base-shift", type=int, default=None, dest="base_shift")
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("bounds", help="impulse zero pattern and order lower bounds")
    common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("verify", help="check a supplied realization against the problem")
    common(p)
    p.add_argument("--realization", required=True, help="realization file (JSON)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("impulse", help="print leading impulse-response values")
    common(p)
    p.set_defaults(func=_cmd_impulse)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, BaseMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalCheckError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (PosrealError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
