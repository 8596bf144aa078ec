"""
Command-line front end.

    qconvmul multiply --a 8616 --b 4532 --algo conv --mode exact
    qconvmul demo --output-dir demo_out
    qconvmul resources --n 4,8,16 [--json]
    qconvmul amplify --a 8616 --b 4532 --max-iterations 4

Operands are decimal or 0x-prefixed hex of any length. Every failure
prints one line ``qconvmul: error[<code>]: <message>`` on stderr and exits
with 2 (usage), 3 (numeric failure) or 4 (resource cap). Histogram
bitstrings are written most-significant-first, like kets.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from functools import lru_cache
from pathlib import Path

from . import engine
from .amplification import amplification_sweep, amplified_multiply, plan_amplification
from .classical import next_power_of_two
from .convolution import multiply_exact, multiply_sampled, plan_registers
from .errors import (
    ImpossibleBranchError,
    InsufficientShotsError,
    MemoryCapError,
    PrecisionError,
)
from .resources import comparison_table
from .reversible import build_grade_school, build_karatsuba, multiply_reversible

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_RESOURCE = 0, 2, 3, 4
RESULT_SCHEMA = "qconvmul.multiply/1"
DEMO_SCHEMA = "qconvmul.demo/1"
SWEEP_SCHEMA = "qconvmul.sweep/1"

DEMO_A, DEMO_B = 8616, 4532
DEMO_PRODUCT = 39_047_712
DEMO_P = 0.06875
DEMO_SHOTS = 1_000_000
DEMO_SEED = 20240517
MAX_CIRCUIT_WIDTH = 256


class CliError(Exception):
    def __init__(self, code: int, tag: str, message: str):
        super().__init__(message)
        self.code, self.tag = code, tag


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, "usage", message)


def parse_natural(text: str) -> int:
    t = text.strip().replace("_", "")
    try:
        value = int(t, 16) if t.lower().startswith("0x") else int(t, 10)
    except ValueError:
        raise CliError(EXIT_USAGE, "usage", f"not a decimal or 0x-hex integer: {text!r}") from None
    if value < 0:
        raise CliError(EXIT_USAGE, "usage", f"operands must be non-negative: {text!r}")
    return value


def parse_widths(text: str) -> list[int]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    try:
        ns = [int(p) for p in parts]
    except ValueError:
        raise CliError(EXIT_USAGE, "usage", f"bad width list {text!r}") from None
    if any(n < 1 for n in ns):
        raise CliError(EXIT_USAGE, "usage", "widths must be >= 1")
    return ns


def _iterations(text: str):
    if text == "auto":
        return "auto"
    try:
        m = int(text)
    except ValueError:
        raise CliError(EXIT_USAGE, "usage", f"--iterations must be 'auto' or a count, got {text!r}") from None
    if m < 0:
        raise CliError(EXIT_USAGE, "usage", "--iterations must be non-negative")
    return m


@lru_cache(maxsize=16)
def _multiplier(algo: str, n: int):
    return build_grade_school(n) if algo == "grade" else build_karatsuba(n)


def _circuit_width(algo: str, a: int, b: int, requested: int | None) -> int:
    bits = max(a.bit_length(), b.bit_length(), 1)
    n = requested if requested is not None else (bits if algo == "grade" else max(4, next_power_of_two(bits)))
    if requested is not None and bits > requested:
        raise CliError(EXIT_USAGE, "usage", f"operands need {bits} bits, --width is {requested}")
    if n > MAX_CIRCUIT_WIDTH:
        raise CliError(EXIT_RESOURCE, "resource", f"{n}-bit {algo} circuit exceeds the {MAX_CIRCUIT_WIDTH}-bit limit")
    return n


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            for sub in sorted(value, key=lambda s: (len(s), s)):
                w.writerow([f"{key}[{sub}]", value[sub]])
        else:
            w.writerow([key, value])
    return buf.getvalue()


def _emit(text: str, output: str | None, stdout) -> None:
    if output:
        Path(output).write_text(text)
    else:
        stdout.write(text)


def cmd_multiply(args, stdout, stderr) -> int:
    a, b = parse_natural(args.a), parse_natural(args.b)
    algo = args.algo
    if args.mode == "sampled" and args.shots < 1:
        raise CliError(EXIT_USAGE, "usage", "sampled mode needs --shots >= 1")
    payload: dict
    if algo == "classical":
        payload = {"product": str(a * b)}
    elif algo in ("grade", "karatsuba"):
        n = _circuit_width(algo, a, b, args.width)
        mc = _multiplier(algo, n)
        payload = {"product": str(multiply_reversible(mc, a, b)), "n": n,
                   "qubits": mc.circuit.num_qubits}
    elif a == 0 or b == 0:
        stderr.write("qconvmul: notice: zero operand, product computed classically\n")
        payload = {"product": "0", "mode": "classical-short-circuit"}
    else:
        plan = plan_registers(a, b)
        try:
            if algo == "conv-amplified":
                outcome = amplified_multiply(a, b, _iterations(args.iterations))
            elif args.mode == "sampled":
                _, _, outcome = multiply_sampled(a, b, args.shots, args.seed)
            elif args.mode == "analytic":
                outcome = multiply_exact(a, b, mode="analytic")
            else:
                outcome = multiply_exact(a, b, mode="statevector")
        except MemoryCapError as exc:
            raise CliError(
                EXIT_RESOURCE, "resource",
                f"{exc}; D={plan.D} needs {2 * plan.k} qubits, rerun with --mode analytic",
            ) from None
        payload = outcome.to_dict()
        del payload["schema"]
    payload.update({"schema": RESULT_SCHEMA, "a": str(a), "b": str(b), "algo": algo})
    _emit(_render(payload, args.format), args.output, stdout)
    return EXIT_OK


def run_demo(shots: int = DEMO_SHOTS, seed: int = DEMO_SEED) -> tuple[dict, engine.Histogram]:
    hist, kept, outcome = multiply_sampled(DEMO_A, DEMO_B, shots, seed)
    sigma = math.sqrt(DEMO_P * (1 - DEMO_P) / shots)
    fraction = kept / shots
    summary = {
        "schema": DEMO_SCHEMA,
        "a": DEMO_A, "b": DEMO_B, "shots": shots, "seed": seed,
        "kept_shots": kept, "kept_fraction": fraction,
        "expected_fraction": DEMO_P, "three_sigma": 3 * sigma,
        "coefficients": {str(j): c for j, c in enumerate(outcome.coefficients) if c},
        "product": str(outcome.product),
        "checks": {
            "product": outcome.product == DEMO_PRODUCT,
            "kept_fraction_within_3_sigma": abs(fraction - DEMO_P) <= 3 * sigma,
        },
    }
    return summary, hist


def cmd_demo(args, stdout, stderr) -> int:
    summary, hist = run_demo(args.shots, args.seed)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "register_a_histogram.csv").write_text(hist.to_csv())
    (out / "register_a_histogram.json").write_text(hist.to_json())
    text = json.dumps(summary, indent=2) + "\n"
    (out / "summary.json").write_text(text)
    stdout.write(text)
    failed = [name for name, ok in summary["checks"].items() if not ok]
    if failed:
        raise CliError(EXIT_NUMERIC, "numeric", "demo check failed: " + ", ".join(failed))
    return EXIT_OK


def cmd_resources(args, stdout, stderr) -> int:
    report = comparison_table(parse_widths(args.n))
    text = report.to_json() if args.json or args.format == "json" else report.to_csv()
    _emit(text, args.output, stdout)
    return EXIT_OK


def cmd_amplify(args, stdout, stderr) -> int:
    a, b = parse_natural(args.a), parse_natural(args.b)
    if a == 0 or b == 0:
        raise CliError(EXIT_USAGE, "usage", "amplification needs non-zero operands")
    if args.max_iterations < 0:
        raise CliError(EXIT_USAGE, "usage", "--max-iterations must be non-negative")
    try:
        rows = amplification_sweep(a, b, args.max_iterations)
    except MemoryCapError as exc:
        raise CliError(EXIT_RESOURCE, "resource", str(exc)) from None
    plan = plan_amplification(rows[0]["measured"])
    if args.format == "json":
        text = json.dumps({"schema": SWEEP_SCHEMA, "a": str(a), "b": str(b),
                           "plan": {"p0": plan.p0, "theta": plan.theta, "n_opt": plan.n_opt,
                                    "p_final": plan.p_final},
                           "rows": rows}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["m", "measured", "closed_form"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    _emit(text, args.output, stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="qconvmul",
        description="Quantum integer multiplication lab.",
        epilog="Histogram bitstrings are most-significant-first. "
               f"Set {engine.MEMORY_CAP_ENV} to change the dense-simulation amplitude cap.",
    )
    p.add_argument("--memory-cap", type=lambda s: int(s, 0), default=None,
                   help="maximum amplitudes in a dense state (default 2**26)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("multiply", help="multiply two integers")
    m.add_argument("--a", required=True)
    m.add_argument("--b", required=True)
    m.add_argument("--algo", default="conv",
                   choices=["conv", "conv-amplified", "grade", "karatsuba", "classical"])
    m.add_argument("--mode", default="exact", choices=["exact", "sampled", "analytic"])
    m.add_argument("--shots", type=int, default=100_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--iterations", default="auto")
    m.add_argument("--width", type=int, default=None, help="circuit width for grade/karatsuba")
    m.add_argument("--output")
    m.add_argument("--format", default="json", choices=["json", "csv"])
    m.set_defaults(func=cmd_multiply)

    d = sub.add_parser("demo", help="reproduce the 8616 x 4532 sampling experiment")
    d.add_argument("--output-dir", default="demo_output")
    d.add_argument("--shots", type=int, default=DEMO_SHOTS)
    d.add_argument("--seed", type=int, default=DEMO_SEED)
    d.set_defaults(func=cmd_demo)

    r = sub.add_parser("resources", help="depth/cost/ancilla comparison table")
    r.add_argument("--n", default="", help="comma-separated bit widths")
    r.add_argument("--json", action="store_true")
    r.add_argument("--format", default="csv", choices=["csv", "json"])
    r.add_argument("--output")
    r.set_defaults(func=cmd_resources)

    s = sub.add_parser("amplify", help="good-branch probability per Grover iteration")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--max-iterations", type=int, default=6)
    s.add_argument("--output")
    s.add_argument("--format", default="csv", choices=["csv", "json"])
    s.set_defaults(func=cmd_amplify)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.memory_cap is not None:
            engine.set_memory_cap(args.memory_cap)
        try:
            return args.func(args, stdout, stderr)
        finally:
            engine.set_memory_cap(None)
    except CliError as exc:
        code, tag, msg = exc.code, exc.tag, str(exc)
    except MemoryCapError as exc:
        code, tag, msg = EXIT_RESOURCE, "resource", str(exc)
    except (PrecisionError, ImpossibleBranchError, InsufficientShotsError) as exc:
        code, tag, msg = EXIT_NUMERIC, "numeric", str(exc)
    except ValueError as exc:
        code, tag, msg = EXIT_USAGE, "usage", str(exc)
    stderr.write(f"qconvmul: error[{tag}]: {' '.join(msg.split())}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
