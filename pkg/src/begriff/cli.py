"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
Every command builds a :class:`RunReport`; ``--json`` prints it in the
machine format, otherwise a short text rendering is printed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import List, Optional, Sequence

from .errors import BegriffError
from .kernel.script import read_header, run_script
from .kernel.theory import CLASSICAL, MODES
from .syntax.ops import FOL
from .syntax.parser import parse_formula
from .syntax.render import render

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


@dataclass
class RunReport:
    command: str
    inputs: List[str]
    mode: str = CLASSICAL
    steps: List[dict] = field(default_factory=list)
    inconsistency: List[List[str]] = field(default_factory=list)
    result: dict = field(default_factory=dict)
    timing: float = 0.0
    exit_code: int = EXIT_OK
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {data.get('schema_version')!r}")
        return cls(**data)

    def to_text(self) -> str:
        out = [f"{self.command} {' '.join(self.inputs)} [{self.mode}]"]
        for s in self.steps:
            line = f"  {s['id']:<10} {s['status']:<10} {s.get('rule') or '':<8}"
            if s.get("anchor"):
                line += f" @{s['anchor']}"
            if s.get("formula"):
                line += f"  {s['formula']}"
            if s.get("message"):
                line += f"  ({s['message']})"
            out.append(line.rstrip())
        for a, b in self.inconsistency:
            out.append(f"  inconsistent: {a} contradicts {b}")
        exps = self.result.get("expectations", [])
        if exps:
            out.append(f"  expectations: {sum(e['held'] for e in exps)}/{len(exps)} held")
            out += [f"  failed expectation {e['id']}: {e['message']}" for e in exps if not e["held"]]
        for k in sorted(set(self.result) - {"expectations"}):
            v = self.result[k]
            if isinstance(v, (list, dict)):
                v = json.dumps(v, sort_keys=True, ensure_ascii=False)
            out.append(f"  {k}: {v}")
        out.append(f"exit {self.exit_code} in {self.timing:.3f}s")
        return "\n".join(out) + "\n"


class _IOFailure(Exception):
    pass


# --- corpus ----------------------------------------------------------------


def corpus_dir() -> Path:
    env = os.environ.get("BEGRIFF_CORPUS_DIR")
    if env:
        return Path(env)
    return Path(str(resources.files("begriff") / "corpus"))


def resolve(path: str) -> Path:
    """A path as given, or relative to the corpus when it starts with ``corpus/``."""
    p = Path(path)
    if p.exists():
        return p
    parts = p.parts
    if parts and parts[0] == "corpus":
        alt = corpus_dir().joinpath(*parts[1:])
        if alt.exists():
            return alt
    raise _IOFailure(f"no such file: {path}")


def _read(path: str) -> tuple:
    p = resolve(path)
    try:
        return p, p.read_text(encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc}") from exc


def corpus_list(directory: Optional[Path] = None) -> List[dict]:
    d = corpus_dir() if directory is None else directory
    if not d.is_dir():
        return []
    out = []
    for p in sorted(d.glob("*.cs")):
        h = read_header(p.read_text(encoding="utf-8"))
        out.append({"file": p.name, "title": h.title, "anchors": list(h.anchors), "kind": h.kind, "mode": h.mode})
    return out


# --- commands ----------------------------------------------------------------


def _script_report(rep: RunReport, res, fail_on_inconsistent: bool, prefix: str = "") -> None:
    rep.steps += [{**s.as_dict(), "id": prefix + s.id} for s in res.steps]
    pairs = [list(p) for p in res.consistency.pairs] if res.consistency else []
    rep.inconsistency += pairs
    rep.result.setdefault("expectations", [])
    rep.result["expectations"] += [
        {"id": e.id, "kind": e.kind, "held": bool(e.held), "line": e.line, "message": e.message}
        for e in res.expectations
    ]
    if res.error:
        rep.result["error"] = res.error
    if not res.ok or (fail_on_inconsistent and pairs):
        rep.exit_code = EXIT_FAIL


def cmd_check(args, rep: RunReport) -> None:
    for path in args.files:
        p, text = _read(path)
        res = run_script(str(p), rep.mode, text=text)
        _script_report(rep, res, args.fail_on_inconsistent)


def _formula_lines(text: str):
    """``goal NAME: f`` and ``axiom NAME: f`` lines of a formula file."""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("layer "):
            continue
        head, sep, body = line.partition(":")
        words = head.split()
        if not sep or len(words) != 2 or words[0] not in ("goal", "axiom"):
            raise BegriffError(f"line {no}: expected 'goal NAME: formula' or 'axiom NAME: formula'")
        yield words[0], words[1], parse_formula(body.strip(), FOL)


def cmd_prove(args, rep: RunReport) -> None:
    from .prover.check import check_trace
    from .prover.tableau import Limits, Proved, close_universally, prove_from

    limits = Limits(depth=args.depth, gamma=args.gamma, seconds=args.timeout)
    for path in args.files:
        _, text = _read(path)
        items = list(_formula_lines(text))
        axioms = [close_universally(f) for k, _, f in items if k == "axiom"]
        for k, name, f in items:
            if k != "goal":
                continue
            t0 = time.perf_counter()
            res = prove_from(axioms, close_universally(f), limits)
            entry = {"id": name, "rule": "tableau", "formula": render(f), "seconds": round(time.perf_counter() - t0, 6)}
            if isinstance(res, Proved):
                ok = check_trace(res.trace)
                entry.update(status="proved" if ok else "failed", size=res.trace.tree.size(), replayed=ok)
                if not ok:
                    rep.exit_code = EXIT_FAIL
            else:
                entry.update(status="unknown", message=res.reason)
                rep.exit_code = EXIT_FAIL
            rep.steps.append(entry)


def cmd_models(args, rep: RunReport) -> None:
    from .prover.models import NoneUpTo, find_model

    size = args.max_model_size
    for path in args.files:
        _, text = _read(path)
        axioms = [f for k, _, f in _formula_lines(text) if k == "axiom"]
        res = find_model(axioms, size)
        key = Path(path).name
        if isinstance(res, NoneUpTo):
            rep.result[key] = {"verdict": "NoneUpTo", "max_size": res.max_size}
        else:
            rep.result[key] = {"verdict": "Model", "model": res.as_dict()}


def cmd_defs(args, rep: RunReport) -> None:
    from .defcheck import check_definition, read_definitions

    tp, ttext = _read(args.theory)
    base = run_script(str(tp), rep.mode, text=ttext)
    if base.error or not base.ok:
        rep.result["theory_error"] = base.error or "base theory does not check"
        rep.exit_code = EXIT_FAIL
        return
    th = base.theory
    _, dtext = _read(args.definitions)
    ops = [s for s, n in th.operations.items() if n > 0]
    consts = list(th.definitions) + [s for s, n in th.operations.items() if n == 0]
    reports = []
    for d in read_definitions(dtext, constants=consts, ops=ops):
        r = check_definition(th, d, use_prover=args.prove, max_size=args.max_model_size)
        reports.append(r.as_dict())
        creative = r.conservativity is not None and r.conservativity.kind == "Creative"
        if not r.proper or creative:
            rep.exit_code = EXIT_FAIL
        if r.proper:
            th.declare_operation(d.symbol, d.rank)
    rep.result["definitions"] = reports


def cmd_corpus(args, rep: RunReport) -> None:
    entries = corpus_list()
    if args.action == "list":
        rep.result["manifest"] = entries
        return
    for e in entries:
        if e["kind"] != "script":
            continue
        p = corpus_dir() / e["file"]
        mode = args.mode or e["mode"]
        res = run_script(str(p), mode)
        _script_report(rep, res, args.fail_on_inconsistent, f"{e['file']}:")
        rep.inputs.append(e["file"])


# --- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES, default=None, help="instantiation regime (default classical)")
    common.add_argument("--json", action="store_true", help="print the machine-format report")
    common.add_argument("--out", metavar="PATH", help="write the report to PATH instead of stdout")

    ap = argparse.ArgumentParser(prog="begriff", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="replay proof scripts")
    c.add_argument("files", nargs="+")
    c.add_argument("--fail-on-inconsistent", action="store_true")

    p = sub.add_parser("prove", parents=[common], help="run the tableau prover on goal lines")
    p.add_argument("files", nargs="+")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--gamma", type=int, default=100)
    p.add_argument("--timeout", type=float, default=None, metavar="SECONDS")

    m = sub.add_parser("models", parents=[common], help="search finite models of axiom lines")
    m.add_argument("files", nargs="+")
    m.add_argument("--max-model-size", "--max-size", dest="max_model_size", type=int, default=3)

    d = sub.add_parser("defs", parents=[common], help="check definitions against a theory")
    d.add_argument("action", choices=["check"])
    d.add_argument("theory")
    d.add_argument("definitions")
    d.add_argument("--max-model-size", "--max-size", dest="max_model_size", type=int, default=None)
    d.add_argument("--prove", action="store_true", help="try the prover when the store lacks the uniqueness theorem")

    k = sub.add_parser("corpus", parents=[common], help="list or check the bundled corpus")
    k.add_argument("action", choices=["list", "check"])
    k.add_argument("--fail-on-inconsistent", action="store_true")
    return ap


COMMANDS = {"check": cmd_check, "prove": cmd_prove, "models": cmd_models, "defs": cmd_defs, "corpus": cmd_corpus}


def run(argv: Optional[Sequence[str]] = None) -> tuple:
    """Parse ``argv`` and execute; returns ``(exit_code, report or None)``."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_USAGE), None
    for name in ("depth", "gamma", "max_model_size"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            print(f"begriff: --{name.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_USAGE, None
    inputs = list(getattr(args, "files", None) or [])
    if args.command == "defs":
        inputs = [args.theory, args.definitions]
    rep = RunReport(args.command, inputs, args.mode or CLASSICAL)
    t0 = time.perf_counter()
    try:
        COMMANDS[args.command](args, rep)
    except _IOFailure as exc:
        print(f"begriff: {exc}", file=sys.stderr)
        rep.exit_code = EXIT_IO
    except BegriffError as exc:
        rep.result["error"] = str(exc)
        rep.exit_code = EXIT_FAIL
    rep.timing = round(time.perf_counter() - t0, 6)
    text = rep.to_json() if args.json else rep.to_text()
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"begriff: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO, rep
    else:
        sys.stdout.write(text)
    return rep.exit_code, rep


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
