"""Command-line interface: ``dhtf <subcommand> ...``.

Exit status: 0 success, 1 semantic failure (counterexample), 2 usage or
parse error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .ast import atoms, converse_normal_form, size
from .closure import fl_closure
from .equilibrium import (
    check_dht_equivalence, check_strong_faithfulness, default_budget, del_models, dht_models,
    verify_normal_form,
)
from .errors import BudgetExceeded, DHTError, ParseError
from .parser import (
    emit_del, parse_formula, parse_ht_trace, parse_theory, print_formula, print_ht_trace,
    print_program, trace_to_json,
)
from .semantics import trivalue
from .translate import program_as_formulas, translate

OK, FAIL, USAGE, BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    budget: int
    json: bool = False
    seed: int = 0
    jobs: int = 1


@dataclass
class Outcome:
    status: int = OK
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)


def _read(source: str, stdin) -> str:
    if source == "-":
        return stdin.read()
    with open(source, encoding="utf-8") as fh:
        return fh.read()


def _expr(text: str, stdin) -> str:
    return stdin.read() if text == "-" else text


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _trace_lines(trace) -> list[str]:
    return print_ht_trace(trace).rstrip("\n").split("\n")


# -- subcommands -------------------------------------------------------------

def cmd_parse(cfg: RunConfig, stdin) -> Outcome:
    phi = parse_formula(_expr(cfg.args.expr, stdin))
    text = print_formula(phi)
    return Outcome(lines=[text], data={"formula": text, "size": size(phi), "atoms": list(atoms(phi))})


def cmd_cnf(cfg: RunConfig, stdin) -> Outcome:
    text = print_formula(converse_normal_form(parse_formula(_expr(cfg.args.expr, stdin))))
    return Outcome(lines=[text], data={"formula": text})


def cmd_closure(cfg: RunConfig, stdin) -> Outcome:
    gamma = converse_normal_form(parse_formula(_expr(cfg.args.expr, stdin)))
    items = [print_formula(mu) for mu in fl_closure(gamma)]
    return Outcome(lines=items, data={"closure": items})


def cmd_translate(cfg: RunConfig, stdin) -> Outcome:
    gamma = parse_formula(_expr(cfg.args.expr, stdin))
    if cfg.args.format == "telingo":
        text = emit_del(converse_normal_form(gamma))
        return Outcome(lines=[text], data={"format": "telingo", "atom": text})
    program = translate(gamma, as_constraint=cfg.args.as_constraint)
    data = {"format": cfg.args.format, "alphabet": list(program.alphabet),
            "extended": list(program.extended)}
    if cfg.args.format == "formulas":
        items = [print_formula(f) for f in program_as_formulas(program)]
        data["formulas"] = items
        return Outcome(lines=items, data=data)
    data["rules"] = [str(r) for r in program.rules]
    return Outcome(lines=print_program(program).rstrip("\n").split("\n"), data=data)


def cmd_eval(cfg: RunConfig, stdin) -> Outcome:
    trace = parse_ht_trace(_read(cfg.args.trace, stdin))
    phi = parse_formula(cfg.args.expr)
    k = cfg.args.k
    if not 0 <= k < len(trace):
        raise DHTError(f"time point {k} outside trace of length {len(trace)}")
    value = trivalue(trace, k, phi)
    holds = value == 2
    return Outcome(lines=[f"{str(holds).lower()} / {value}"],
                   data={"holds": holds, "value": value, "k": k})


def cmd_models(cfg: RunConfig, stdin) -> Outcome:
    theory = parse_theory(_read(cfg.args.file, stdin))
    alphabet = None
    if cfg.args.alphabet is not None:
        alphabet = [a.strip() for a in cfg.args.alphabet.split(",") if a.strip()]
    enumerate_ = del_models if cfg.args.equilibrium else dht_models
    models = enumerate_(theory, cfg.args.length, alphabet, budget=cfg.budget, jobs=cfg.jobs)
    kind = "stable models" if cfg.args.equilibrium else "models"
    lines = [f"# {len(models)} {kind} of length {cfg.args.length} over {{{', '.join(models.alphabet)}}}"]
    for i, trace in enumerate(models, 1):
        lines.append(f"model {i}:")
        lines.extend("  " + line for line in _trace_lines(trace))
    return Outcome(lines=lines, data={
        "equilibrium": cfg.args.equilibrium, "length": cfg.args.length,
        "alphabet": list(models.alphabet), "count": len(models),
        "models": [trace_to_json(t) for t in models],
    })


def cmd_check_nf(cfg: RunConfig, stdin) -> Outcome:
    gamma = parse_formula(_expr(cfg.args.expr, stdin))
    mode = "full" if cfg.args.full else "forced"
    out = Outcome(data={"mode": mode, "reports": []})
    for length in range(1, cfg.args.lambda_max + 1):
        report = verify_normal_form(gamma, length, mode, budget=cfg.budget)
        out.data["reports"].append(report.to_dict())
        verdict = "pass" if report.passed else "FAIL"
        out.lines.append(f"lambda={length} {mode}: {verdict} "
                         f"(models={report.models}, rules={report.rules})")
        for label, traces in (("missing", report.missing), ("extra", report.extra)):
            for t in traces:
                out.lines.append(f"  {label}: " + " ; ".join(_trace_lines(t)))
        if not report.passed:
            out.status = FAIL
    return out


def cmd_check_equiv(cfg: RunConfig, stdin) -> Outcome:
    phi = parse_formula(cfg.args.left)
    psi = parse_formula(cfg.args.right)
    result = check_dht_equivalence(phi, psi, cfg.args.lambda_max, budget=cfg.budget)
    if result.equivalent:
        return Outcome(lines=[f"equivalent up to lambda={cfg.args.lambda_max}"], data=result.to_dict())
    side = "left" if result.left_holds else "right"
    lines = [f"counterexample at k={result.point} (only the {side} formula holds):",
             *("  " + line for line in _trace_lines(result.trace))]
    return Outcome(FAIL, lines, result.to_dict())


def cmd_check_faithful(cfg: RunConfig, stdin) -> Outcome:
    gamma = parse_formula(cfg.args.formula)
    context = parse_formula(cfg.args.context)
    report = check_strong_faithfulness(gamma, context, cfg.args.length, budget=cfg.budget)
    verdict = "pass" if report.passed else "FAIL"
    lines = [f"lambda={cfg.args.length} {report.mode}: {verdict} ({len(report.original)} stable models)"]
    for label, traces in (("missing", report.missing), ("extra", report.extra)):
        for t in traces:
            lines.append(f"  {label}: " + " ; ".join(_trace_lines(t)))
    return Outcome(OK if report.passed else FAIL, lines, report.to_dict())


COMMANDS = {
    "parse": cmd_parse,
    "cnf": cmd_cnf,
    "closure": cmd_closure,
    "translate": cmd_translate,
    "eval": cmd_eval,
    "models": cmd_models,
    "check-nf": cmd_check_nf,
    "check-equiv": cmd_check_equiv,
    "check-faithful": cmd_check_faithful,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON document")
    common.add_argument("--budget", type=_positive, default=None,
                        help="max enumerated candidates (default: $DHTF_BUDGET or 10^7)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=_positive, default=1, help="enumeration worker threads")

    parser = argparse.ArgumentParser(prog="dhtf", description="Dynamic logic of here-and-there on finite traces.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (("parse", "parse and pretty-print a formula"),
                        ("cnf", "converse normal form"),
                        ("closure", "Fisher-Ladner closure, one formula per line")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("expr", help="formula, or - for stdin")

    p = sub.add_parser("translate", parents=[common], help="translate into a temporal logic program")
    p.add_argument("expr")
    p.add_argument("--format", choices=("program", "formulas", "telingo"), default="program")
    p.add_argument("--as-constraint", action="store_true",
                   help="emit the initial constraint 'l -> ' for a negated formula")

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula on an HT-trace")
    p.add_argument("--trace", required=True, help="trace file, or - for stdin")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("expr")

    p = sub.add_parser("models", parents=[common], help="enumerate models of a theory file")
    p.add_argument("file", help="theory file, or - for stdin")
    p.add_argument("--lambda", dest="length", type=_positive, required=True)
    p.add_argument("--alphabet", default=None, help="comma-separated atoms")
    p.add_argument("--equilibrium", action="store_true", help="stable models only")

    p = sub.add_parser("check-nf", parents=[common], help="check the translation preserves models")
    p.add_argument("expr")
    p.add_argument("--lambda-max", type=_positive, required=True)
    p.add_argument("--full", action="store_true", help="exact set comparison over the extended alphabet")

    p = sub.add_parser("check-equiv", parents=[common], help="bounded equivalence check")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--lambda-max", type=_positive, required=True)

    p = sub.add_parser("check-faithful", parents=[common], help="compare stable models under a context")
    p.add_argument("formula")
    p.add_argument("context")
    p.add_argument("--lambda", dest="length", type=_positive, required=True)
    return parser


def _describe(err: Exception) -> str:
    if isinstance(err, ParseError) and err.text:
        line_start = err.text.rfind("\n", 0, err.span.start) + 1
        line_end = err.text.find("\n", err.span.start)
        line = err.text[line_start:line_end if line_end >= 0 else None]
        caret = " " * (err.span.start - line_start) + "^" * max(1, min(err.span.end, len(line) + line_start) - err.span.start)
        return f"parse error: {err.message}\n  {line}\n  {caret}"
    return f"error: {err}"


def run(cfg: RunConfig, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        out = COMMANDS[cfg.command](cfg, stdin)
    except BudgetExceeded as e:
        status, message, data = BUDGET, f"error: {e}", {"required": e.required, "budget": e.budget}
    except (DHTError, OSError) as e:
        status, message, data = USAGE, _describe(e), {}
    else:
        if cfg.json:
            doc = {"command": cfg.command, "status": "ok" if out.status == OK else "fail", "data": out.data}
            stdout.write(json.dumps(doc, sort_keys=True) + "\n")
        else:
            stdout.write("".join(line + "\n" for line in out.lines))
        return out.status
    print(message, file=stderr)
    if cfg.json:
        data["message"] = message
        stdout.write(json.dumps({"command": cfg.command, "status": "error", "data": data}, sort_keys=True) + "\n")
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    budget = args.budget if args.budget is not None else default_budget()
    cfg = RunConfig(args.command, args, budget, args.json, args.seed, args.jobs)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
