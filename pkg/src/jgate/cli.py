"""Command-line front end: gate, classify, iterate, and sample commands.

Wire formats
------------
Complex numbers are two-element arrays [re, im]; a matrix is four such
entries in row-major order.  A gate/iterate input document is

    {"g": {"lambda": [1.2, 0.0]},          either a multiplier ...
     "g": [[...], [...], [...], [...]],    ... or a raw matrix
     "h": [[...], [...], [...], [...]],
     "options": {"tolerance": 1e-9, "steps": 8}}      (optional)

A raw g must be loxodromic; it is reduced to diagonal normal form and h
is conjugated into the same frame before any gate runs.  The
unimodularity tolerance is, in order of precedence: options.tolerance,
the JGATE_TOLERANCE environment variable, then 1e-9.

Exit codes: 0 inconclusive, 10 elementary, 11 non-discrete (or the
coarse elementary-or-non-discrete), 2 not applicable (hypothesis not
met), 1 parse or validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import gates, mat2c
from .errors import InvalidRangeError, JgateError, ParseError
from .gates import (
    GateReport,
    ProofChainReport,
    Verdict,
    VerdictTag,
    classical_jorgensen,
    corollary_gates,
    iterate_conjugation,
    proof_chain_report,
    wjc_bound,
    wjc_gate,
)
from .mat2c import SL2Matrix, diagonal, make_unimodular, mul, inverse
from .moebius import (
    MoebiusClass,
    classify,
    diagonalize_loxodromic,
    fixed_points,
    is_axis_preserving,
    mg_of,
)
from .rng import SplitMix64

TOLERANCE_ENV = "JGATE_TOLERANCE"

EXIT_INCONCLUSIVE = 0
EXIT_ERROR = 1
EXIT_NOT_APPLICABLE = 2
EXIT_ELEMENTARY = 10
EXIT_NON_DISCRETE = 11

_EXIT_BY_TAG = {
    VerdictTag.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    VerdictTag.NOT_APPLICABLE: EXIT_NOT_APPLICABLE,
    VerdictTag.ELEMENTARY: EXIT_ELEMENTARY,
    VerdictTag.NON_DISCRETE: EXIT_NON_DISCRETE,
    VerdictTag.ELEMENTARY_OR_NON_DISCRETE: EXIT_NON_DISCRETE,
}

#: |lambda| values at or above the golden ratio give mg >= 1 for every
#: argument, so such a sampling range could never accept.
_GOLDEN = (1 + math.sqrt(5)) / 2

_MAX_REJECTS = 100_000

CSV_COLUMNS = [
    "seedIndex",
    "lambda_re",
    "lambda_im",
    "mg",
    "bound",
    "abcd_sqrt",
    "bc_sqrt",
    "onePlusBc_sqrt",
    "sumBcOnePlusBc",
    "jorgensenLhs",
    "wjcFired",
    "cor1Fired",
    "cor2Fired",
    "cor3Fired",
    "classicalFired",
    "axisPreserving",
]

CSV_H_COLUMNS = [
    "h_a_re", "h_a_im", "h_b_re", "h_b_im",
    "h_c_re", "h_c_im", "h_d_re", "h_d_im",
]


# ---------------------------------------------------------------------------
# JSON <-> values

def _complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _complex_from_json(v) -> complex:
    if (
        not isinstance(v, list)
        or len(v) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        raise ParseError(f"expected [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


def _matrix_to_json(m: SL2Matrix) -> list[list[float]]:
    return [_complex_to_json(e) for e in m.entries]


def _matrix_from_json(v, tol: float) -> SL2Matrix:
    if not isinstance(v, list) or len(v) != 4:
        raise ParseError(f"expected a row-major list of 4 complex entries, got {v!r}")
    a, b, c, d = (_complex_from_json(e) for e in v)
    return make_unimodular(a, b, c, d, tol=tol)


def _env_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return mat2c.DET_TOL
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"{TOLERANCE_ENV} is not a number: {raw!r}") from None


# ---------------------------------------------------------------------------
# Input documents

@dataclass(frozen=True)
class InputOptions:
    tolerance: float | None = None
    steps: int | None = None


@dataclass(frozen=True)
class InputDocument:
    """Either g_lambda or g_matrix is set, never both."""

    g_lambda: complex | None
    g_matrix: SL2Matrix | None
    h: SL2Matrix
    options: InputOptions = InputOptions()


def parse_input_document(text: str, det_tol: float | None = None) -> InputDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object")
    unknown = set(data) - {"g", "h", "options"}
    if unknown:
        raise ParseError(f"unknown top-level fields: {sorted(unknown)}")
    if "g" not in data or "h" not in data:
        raise ParseError("document needs both 'g' and 'h'")

    options = InputOptions()
    if "options" in data:
        raw = data["options"]
        if not isinstance(raw, dict) or set(raw) - {"tolerance", "steps"}:
            raise ParseError(f"bad options object: {raw!r}")
        tol = raw.get("tolerance")
        steps = raw.get("steps")
        if tol is not None and (isinstance(tol, bool) or not isinstance(tol, (int, float))):
            raise ParseError("options.tolerance must be a number")
        if steps is not None and (isinstance(steps, bool) or not isinstance(steps, int)):
            raise ParseError("options.steps must be an integer")
        options = InputOptions(
            tolerance=None if tol is None else float(tol),
            steps=steps,
        )

    tol = options.tolerance
    if tol is None:
        tol = det_tol if det_tol is not None else mat2c.DET_TOL

    raw_g = data["g"]
    if isinstance(raw_g, dict):
        if set(raw_g) != {"lambda"}:
            raise ParseError(f"g object must hold exactly a 'lambda' field, got {raw_g!r}")
        g_lambda: complex | None = _complex_from_json(raw_g["lambda"])
        g_matrix = None
    else:
        g_lambda = None
        g_matrix = _matrix_from_json(raw_g, tol)

    h = _matrix_from_json(data["h"], tol)
    return InputDocument(g_lambda=g_lambda, g_matrix=g_matrix, h=h, options=options)


def serialize_input_document(doc: InputDocument) -> str:
    """Canonical single-line JSON: field order g, h, options; floats as
    their shortest exact decimal (never more than 17 significant digits)."""
    payload: dict = {}
    if doc.g_lambda is not None:
        payload["g"] = {"lambda": _complex_to_json(doc.g_lambda)}
    else:
        payload["g"] = _matrix_to_json(doc.g_matrix)
    payload["h"] = _matrix_to_json(doc.h)
    opts = {}
    if doc.options.tolerance is not None:
        opts["tolerance"] = doc.options.tolerance
    if doc.options.steps is not None:
        opts["steps"] = doc.options.steps
    if opts:
        payload["options"] = opts
    return json.dumps(payload)


# ---------------------------------------------------------------------------
# Report assembly

def _boundary_point_json(p) -> dict:
    if p.is_infinity:
        return {"type": "infinity"}
    return {"type": "finite", "z": _complex_to_json(p.z)}


def _classification_json(m: SL2Matrix) -> dict:
    cls = classify(m)
    t = mat2c.trace(m)
    out: dict = {
        "class": cls.value,
        "trace": _complex_to_json(t),
        "traceSquared": _complex_to_json(t * t),
    }
    if cls is MoebiusClass.IDENTITY:
        out["fixedPoints"] = None  # every boundary point is fixed
    else:
        out["fixedPoints"] = [_boundary_point_json(p) for p in fixed_points(m)]
    if cls is MoebiusClass.LOXODROMIC:
        norm = diagonalize_loxodromic(m)
        out["lambda"] = _complex_to_json(norm.lam)
        out["mg"] = norm.mg
        out["liftSign"] = norm.lift_sign
    return out


def _gate_report_json(r: GateReport) -> dict:
    out = {
        "gate": r.gate.value,
        "lhs": r.lhs,
        "bound": r.bound,
        "fired": r.fired,
        "comparison": r.comparison,
        "equality": r.equality,
    }
    if r.kiikka_consistent is not None:
        out["kiikkaConsistent"] = r.kiikka_consistent
    return out


def _chain_json(p: ProofChainReport) -> dict:
    def ineq(i):
        return {"lhs": i.lhs, "rhs": i.rhs, "holds": i.holds}

    return {
        "hypothesisHolds": p.hypothesis_holds,
        "h1": _matrix_to_json(p.h1),
        "ineq11": ineq(p.ineq11),
        "ineq12": ineq(p.ineq12),
        "ineq3": ineq(p.ineq3),
        "eq4Residual": p.eq4_residual,
        "traceIdentityResidual": p.trace_identity_residual,
        "chainConsistent": p.chain_consistent,
    }


def _verdict_json(v: Verdict) -> dict:
    return {
        "tag": v.tag.value,
        "reason": v.reason,
        "firedGates": [r.gate.value for r in v.fired_gates],
    }


@dataclass(frozen=True)
class _Frame:
    """g and h moved to the diagonal frame, plus provenance for the report."""

    lam: complex
    h: SL2Matrix
    g_info: dict
    h_original: SL2Matrix


def _not_applicable(reason: str, extra: dict | None = None) -> tuple[dict, int]:
    report = {
        "verdict": _verdict_json(Verdict(VerdictTag.NOT_APPLICABLE, reason=reason)),
        "gates": [],
        "proofChain": None,
        "exitCode": EXIT_NOT_APPLICABLE,
    }
    if extra:
        report.update(extra)
    return report, EXIT_NOT_APPLICABLE


def _resolve_frame(doc: InputDocument) -> _Frame | tuple[dict, int]:
    """Bring (g, h) into the frame where g = diag(lambda, 1/lambda)."""
    if doc.g_lambda is not None:
        lam = doc.g_lambda
        if abs(lam) <= 1:
            return _not_applicable(
                "LambdaNotExpanding",
                {"g": {"lambda": _complex_to_json(lam), "class": None}},
            )
        g_info = {
            "class": MoebiusClass.LOXODROMIC.value,
            "lambda": _complex_to_json(lam),
            "mg": mg_of(lam),
            "liftSign": 1,
        }
        return _Frame(lam=lam, h=doc.h, g_info=g_info, h_original=doc.h)

    g_class = classify(doc.g_matrix)
    if g_class is not MoebiusClass.LOXODROMIC:
        return _not_applicable(
            "NotLoxodromic", {"g": _classification_json(doc.g_matrix)}
        )
    norm = diagonalize_loxodromic(doc.g_matrix)
    conjugated_h = mul(mul(norm.conjugator, doc.h), inverse(norm.conjugator))
    g_info = _classification_json(doc.g_matrix)
    g_info["conjugator"] = _matrix_to_json(norm.conjugator)
    return _Frame(lam=norm.lam, h=conjugated_h, g_info=g_info, h_original=doc.h)


def run_gate_command(doc: InputDocument) -> tuple[dict, int]:
    """Evaluate every gate on the document; returns (report, exit code)."""
    frame = _resolve_frame(doc)
    if isinstance(frame, tuple):
        return frame

    h_info = _classification_json(frame.h_original)
    h_info["axisPreserving"] = is_axis_preserving(frame.h)
    h_info["normalized"] = _matrix_to_json(frame.h)

    mg = mg_of(frame.lam)
    if mg >= 1:
        return _not_applicable(
            "MgNotLessThanOne",
            {"g": frame.g_info, "h": h_info, "mg": mg},
        )

    g_diag = diagonal(frame.lam)
    classical = classical_jorgensen(g_diag, frame.h)
    wjc_verdict = wjc_gate(frame.lam, frame.h)
    corollaries = corollary_gates(frame.lam, frame.h)
    chain = proof_chain_report(frame.lam, frame.h)

    reports = (classical, *wjc_verdict.reports, *corollaries)
    if any(r.fired for r in reports):
        tag = (
            VerdictTag.ELEMENTARY
            if is_axis_preserving(frame.h)
            else VerdictTag.NON_DISCRETE
        )
    else:
        tag = VerdictTag.INCONCLUSIVE
    verdict = Verdict(tag, reports=reports)
    code = _EXIT_BY_TAG[verdict.tag]

    report = {
        "g": frame.g_info,
        "h": h_info,
        "mg": mg,
        "wjcBound": wjc_bound(mg),
        "gates": [_gate_report_json(r) for r in reports],
        "verdict": _verdict_json(verdict),
        "proofChain": _chain_json(chain),
        "exitCode": code,
    }
    return report, code


def run_classify_command(text: str, det_tol: float | None = None) -> dict:
    """Classification report for a single matrix document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if isinstance(data, dict) and set(data) == {"matrix"}:
        data = data["matrix"]
    tol = det_tol if det_tol is not None else mat2c.DET_TOL
    m = _matrix_from_json(data, tol)
    return _classification_json(m)


def run_iterate_command(doc: InputDocument, n: int) -> dict:
    """Iterated conjugation trace in the diagonal frame of g."""
    frame = _resolve_frame(doc)
    if isinstance(frame, tuple):
        return frame[0]
    trace = iterate_conjugation(frame.lam, frame.h, n)
    return {
        "lambda": _complex_to_json(frame.lam),
        "overflow": trace.overflow,
        "steps": [
            {
                "n": s.index,
                "h": _matrix_to_json(s.h),
                "offDiag": s.off_diag,
                "commDefect": s.comm_defect,
            }
            for s in trace.steps
        ],
    }


# ---------------------------------------------------------------------------
# Sampling sweep

@dataclass(frozen=True)
class SampleConfig:
    seed: int
    count: int
    lambda_min: float
    lambda_max: float
    h_scale: float
    out: str
    emit_h: bool = False

    def validate(self) -> None:
        if self.count < 0:
            raise InvalidRangeError(f"count must be >= 0, got {self.count}")
        if not self.lambda_min > 1:
            raise InvalidRangeError(f"lambda-min must be > 1, got {self.lambda_min}")
        if self.lambda_max < self.lambda_min:
            raise InvalidRangeError("lambda-max must be >= lambda-min")
        if self.lambda_min >= _GOLDEN:
            raise InvalidRangeError(
                f"lambda-min {self.lambda_min} >= {_GOLDEN:.6f}: "
                "no multiplier in range has mg < 1"
            )
        if not self.h_scale > 0:
            raise InvalidRangeError(f"h-scale must be > 0, got {self.h_scale}")
        if not 0 <= self.seed < 2**64:
            raise InvalidRangeError("seed must fit in 64 unsigned bits")


def _draw_row(rng: SplitMix64, cfg: SampleConfig) -> tuple[complex, SL2Matrix]:
    """One (lambda, h) draw.  Order of stream consumption is part of the
    reproducibility contract: |lambda|, arg(lambda) (repeated until
    mg < 1); |b|, arg(b), |c|, arg(c) (repeated while 1 + bc degenerates);
    then arg(a)."""
    for _ in range(_MAX_REJECTS):
        radius = cfg.lambda_min + (cfg.lambda_max - cfg.lambda_min) * rng.next_float()
        theta = 2 * math.pi * rng.next_float()
        lam = complex(radius * math.cos(theta), radius * math.sin(theta))
        if mg_of(lam) < 1:
            break
    else:
        raise InvalidRangeError("lambda range rejected every draw (mg >= 1)")

    for _ in range(_MAX_REJECTS):
        mag_b = cfg.h_scale * rng.next_unit_positive()
        arg_b = 2 * math.pi * rng.next_float()
        mag_c = cfg.h_scale * rng.next_unit_positive()
        arg_c = 2 * math.pi * rng.next_float()
        b = complex(mag_b * math.cos(arg_b), mag_b * math.sin(arg_b))
        c = complex(mag_c * math.cos(arg_c), mag_c * math.sin(arg_c))
        ad = 1 + b * c
        if abs(ad) > 1e-12:
            break
    else:
        raise InvalidRangeError("h draw degenerated (1 + bc = 0 repeatedly)")

    psi = 2 * math.pi * rng.next_float()
    a = math.sqrt(abs(ad)) * complex(math.cos(psi), math.sin(psi))
    d = ad / a
    return lam, SL2Matrix(a, b, c, d)


def _row_values(index: int, lam: complex, h: SL2Matrix, emit_h: bool) -> list:
    mg = mg_of(lam)
    bound = wjc_bound(mg)
    bc = h.b * h.c
    abcd_sqrt = math.sqrt(abs(h.a * h.b * h.c * h.d))
    classical = classical_jorgensen(diagonal(lam), h)
    wjc_report = wjc_gate(lam, h).reports[0]
    cors = corollary_gates(lam, h)

    values: list = [
        index,
        lam.real,
        lam.imag,
        mg,
        bound,
        abcd_sqrt,
        math.sqrt(abs(bc)),
        math.sqrt(abs(1 + bc)),
        abs(1 + bc) + abs(bc),
        classical.lhs,
        int(wjc_report.fired),
        int(cors[0].fired),
        int(cors[1].fired),
        int(cors[2].fired),
        int(classical.fired),
        int(is_axis_preserving(h)),
    ]
    if emit_h:
        for entry in h.entries:
            values.extend([entry.real, entry.imag])
    return values


def _format_cell(v) -> str:
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def run_sample_command(cfg: SampleConfig) -> int:
    """Write the sweep CSV; returns the number of rows written.

    Row i draws from a child generator split off the root SplitMix64 in
    index order, so the file is a pure function of the config.
    """
    cfg.validate()
    header = CSV_COLUMNS + (CSV_H_COLUMNS if cfg.emit_h else [])
    root = SplitMix64(cfg.seed)
    lines = [",".join(header)]
    for i in range(cfg.count):
        lam, h = _draw_row(root.split(), cfg)
        values = _row_values(i, lam, h, cfg.emit_h)
        lines.append(",".join(_format_cell(v) for v in values))
    Path(cfg.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return cfg.count


# ---------------------------------------------------------------------------
# Pretty printers

def _pretty_gate_report(report: dict) -> str:
    lines = []
    g = report.get("g") or {}
    h = report.get("h") or {}
    if g.get("class"):
        lines.append(f"g: {g['class']}")
    if "lambda" in g and g["lambda"] is not None:
        lam = complex(*g["lambda"])
        lines.append(f"   lambda = {lam}   mg = {report.get('mg', g.get('mg'))}")
    if h:
        axis = "yes" if h.get("axisPreserving") else "no"
        lines.append(f"h: {h.get('class')}   axis-preserving: {axis}")
    if "wjcBound" in report:
        lines.append(f"bound (1-mg)/mg^2 = {report['wjcBound']}")
    for r in report.get("gates", []):
        mark = "FIRED" if r["fired"] else "quiet"
        extra = "  (equality)" if r.get("equality") else ""
        lines.append(
            f"  {r['gate']:<20} lhs = {r['lhs']:.9g}  {r['comparison']} "
            f"{r['bound']:.9g}  {mark}{extra}"
        )
    verdict = report["verdict"]
    reason = f" ({verdict['reason']})" if verdict.get("reason") else ""
    lines.append(f"verdict: {verdict['tag']}{reason}")
    return "\n".join(lines)


def _pretty_classify(report: dict) -> str:
    lines = [f"class: {report['class']}"]
    lines.append(f"trace = {complex(*report['trace'])}  trace^2 = {complex(*report['traceSquared'])}")
    pts = report["fixedPoints"]
    if pts is None:
        lines.append("fixed points: every boundary point")
    else:
        shown = ["inf" if p["type"] == "infinity" else str(complex(*p["z"])) for p in pts]
        lines.append("fixed points: " + ", ".join(shown))
    if report["class"] == "Loxodromic":
        lines.append(
            f"lambda = {complex(*report['lambda'])}  mg = {report['mg']}"
            f"  lift sign = {report['liftSign']:+d}"
        )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Command wiring

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise ParseError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jgate", description=__doc__.split("\n", 1)[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gate = sub.add_parser("gate", help="run every discreteness gate on a (g, h) document")
    gate.add_argument("file", help="JSON input document")
    gate.add_argument("--pretty", action="store_true", help="human-readable output")

    cls = sub.add_parser("classify", help="classify a single matrix")
    cls.add_argument("file", help="JSON matrix document")
    cls.add_argument("--pretty", action="store_true")

    it = sub.add_parser("iterate", help="trace the conjugation iteration h -> h g h^-1")
    it.add_argument("file", help="JSON input document")
    it.add_argument("--steps", type=int, default=None, help="iteration count (default: options.steps or 0)")
    it.add_argument("--csv", action="store_true", help="emit CSV rows instead of JSON")

    smp = sub.add_parser("sample", help="seeded random sweep, one CSV row per (lambda, h)")
    smp.add_argument("--seed", type=int, required=True)
    smp.add_argument("--count", type=int, required=True)
    smp.add_argument("--lambda-min", type=float, required=True)
    smp.add_argument("--lambda-max", type=float, required=True)
    smp.add_argument("--h-scale", type=float, required=True)
    smp.add_argument("--out", required=True)
    smp.add_argument("--emit-h", action="store_true", help="append the 8 h-entry columns")
    return parser


def _read_file(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _cmd_gate(args) -> int:
    doc = parse_input_document(_read_file(args.file), det_tol=_env_tolerance())
    report, code = run_gate_command(doc)
    print(_pretty_gate_report(report) if args.pretty else json.dumps(report, indent=2))
    return code


def _cmd_classify(args) -> int:
    report = run_classify_command(_read_file(args.file), det_tol=_env_tolerance())
    print(_pretty_classify(report) if args.pretty else json.dumps(report, indent=2))
    return 0


def _iterate_csv(report: dict) -> str:
    header = ["n"] + CSV_H_COLUMNS + ["offDiag", "commDefect"]
    lines = [",".join(header)]
    for s in report["steps"]:
        cells: list = [s["n"]]
        for re_im in s["h"]:
            cells.extend(re_im)
        cells.extend([s["offDiag"], s["commDefect"]])
        lines.append(",".join(_format_cell(v) for v in cells))
    return "\n".join(lines)


def _cmd_iterate(args) -> int:
    doc = parse_input_document(_read_file(args.file), det_tol=_env_tolerance())
    steps = args.steps
    if steps is None:
        steps = doc.options.steps if doc.options.steps is not None else 0
    report = run_iterate_command(doc, steps)
    if "exitCode" in report:  # not-applicable frame
        print(json.dumps(report, indent=2))
        return report["exitCode"]
    print(_iterate_csv(report) if args.csv else json.dumps(report, indent=2))
    return 0


def _cmd_sample(args) -> int:
    cfg = SampleConfig(
        seed=args.seed,
        count=args.count,
        lambda_min=args.lambda_min,
        lambda_max=args.lambda_max,
        h_scale=args.h_scale,
        out=args.out,
        emit_h=args.emit_h,
    )
    rows = run_sample_command(cfg)
    print(f"wrote {rows} rows to {cfg.out}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "gate": _cmd_gate,
            "classify": _cmd_classify,
            "iterate": _cmd_iterate,
            "sample": _cmd_sample,
        }[args.command]
        return handler(args)
    except JgateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
