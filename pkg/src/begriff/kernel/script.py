"""Reader and runner for ``.cs`` proof scripts.

One directive per line, ``#`` starts a comment::

    layer frege
    let R := ext e. not e mem e
    subst i: f(%) := not % mem %
    step theta @θ: axiom P82 using i ii iii
    step iota @ι: Ig [theta]
    expect iota: not R mem R

Header comments ``# title:``, ``# anchors:`` and ``# mode:`` describe the
script for the corpus manifest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from ..errors import BegriffError, GuardBlocked, ModeError, ParseError
from ..substitution import DISTINCT, FREE, FunctionAbstract, SubstitutionPlan
from ..syntax.ast import Expr, Span
from ..syntax.ops import FOL, FREGE, normalize
from ..syntax.parser import Macro, parse_expr, parse_formula
from ..syntax.render import render
from .theory import CLASSICAL, GUARDED, ConsistencyReport, Theory

CERTIFIED = "certified"
BLOCKED = "blocked"
REJECTED = "rejected"
FAILED = "failed"
SKIPPED = "skipped"


@dataclass
class StepResult:
    id: str
    rule: str
    status: str
    line: int
    anchor: Optional[str] = None
    formula: Optional[str] = None
    message: Optional[str] = None
    blocked_by: Optional[str] = None
    sound: bool = True

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


@dataclass
class Expectation:
    id: str
    kind: str  # "formula" | "blocked" | "rejected"
    line: int
    formula: Optional[Expr] = None
    held: Optional[bool] = None
    message: str = ""


@dataclass
class ScriptHeader:
    title: str = ""
    anchors: Tuple[str, ...] = ()
    mode: str = CLASSICAL
    layer: str = FOL
    kind: str = "script"  # or "formulas", "definitions"
    theory: str = ""  # base script of a definitions file


@dataclass
class ScriptResult:
    path: str
    header: ScriptHeader
    mode: str
    theory: Theory
    steps: List[StepResult] = field(default_factory=list)
    expectations: List[Expectation] = field(default_factory=list)
    consistency: Optional[ConsistencyReport] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        if self.error:
            return False
        expected = {e.id: e.kind for e in self.expectations if e.kind in (BLOCKED, REJECTED)}
        for s in self.steps:
            if s.status in (CERTIFIED, SKIPPED):
                continue
            if expected.get(s.id) == s.status:
                continue
            return False
        return all(e.held for e in self.expectations)

    def step(self, sid: str) -> StepResult:
        for s in self.steps:
            if s.id == sid:
                return s
        raise KeyError(sid)


class ScriptError(BegriffError):
    """A malformed directive; carries the line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


_STEP_RE = re.compile(r"^step\s+(?P<id>[^\s:@]+)\s*(?:@\s*(?P<anchor>[^:]+?)\s*)?:\s*(?P<body>.*)$")
_HEAD_RE = re.compile(
    r"^(?P<rule>[A-Za-z][\w']*)"
    r"(?:\s+(?P<name>[A-Za-z%][\w']*))?"
    r"(?:\s*\[(?P<prems>[^\]]*)\])?"
    r"(?:\s+using\s+(?P<using>[^\s\[]+(?:\s+(?!at\b)[^\s\[]+)*))?"
    r"(?:\s+at\s+(?P<at>[\d,\s]+))?\s*$"
)


def read_header(text: str) -> ScriptHeader:
    h = ScriptHeader()
    for raw in text.splitlines():
        line = raw.strip()
        m = re.match(r"#\s*(title|anchors|mode|kind|theory)\s*:\s*(.*)$", line)
        if m:
            key, val = m.group(1), m.group(2).strip()
            if key == "title":
                h.title = val
            elif key == "anchors":
                h.anchors = tuple(a.strip() for a in val.split(",") if a.strip())
            else:
                setattr(h, key, val)
        elif line.startswith("layer "):
            h.layer = line.split()[1]
    return h


class ScriptRunner:
    def __init__(self, text: str, path: str = "<script>", mode: str = CLASSICAL):
        self.text = text
        self.path = path
        self.header = read_header(text)
        self.mode = mode
        self.theory: Optional[Theory] = None
        self.layer = FOL
        self.convention = DISTINCT
        self.macros: Dict[str, Macro] = {}
        self.labels: Dict[str, Tuple[Tuple[str, object], ...]] = {}
        self.result: Optional[ScriptResult] = None

    # --- parsing helpers ---------------------------------------------------

    def _kw(self) -> dict:
        th = self._th()
        return dict(
            layer=self.layer,
            file=self.path,
            constants=tuple(th.definitions) + tuple(s for s, n in th.operations.items() if n == 0),
            ops=tuple(s for s, n in th.operations.items() if n > 0),
            macros=self.macros,
        )

    def expr(self, text: str, line: int) -> Expr:
        try:
            return parse_expr(text.strip(), **self._kw())
        except ParseError as exc:
            raise ScriptError(str(exc), line) from exc

    def formula(self, text: str, line: int) -> Expr:
        try:
            return parse_formula(text.strip(), **self._kw())
        except ParseError as exc:
            raise ScriptError(str(exc), line) from exc

    def _th(self) -> Theory:
        if self.theory is None:
            self.theory = Theory(Path(self.path).stem, self.layer, self.mode, self.convention)
        return self.theory

    def bindings(self, text: str, line: int) -> Tuple[Tuple[str, object], ...]:
        out = []
        for part in _split_top(text, ";"):
            if not part.strip():
                continue
            if ":=" not in part:
                raise ScriptError(f"binding {part.strip()!r} lacks ':='", line)
            lhs, rhs = (s.strip() for s in part.split(":=", 1))
            if lhs == "occ":
                out.append(("occ", _selector(rhs, line)))
                continue
            m = re.match(r"^([A-Za-z][\w']*)\s*(?:\((.*)\))?$", lhs)
            if not m:
                raise ScriptError(f"bad binding target {lhs!r}", line)
            name, params = m.group(1), m.group(2)
            value = self.expr(rhs, line)
            if params is not None:
                ps = tuple(p.strip() for p in params.split(","))
                out.append((name, FunctionAbstract(ps, value)))
            else:
                out.append((name, value))
        return tuple(out)

    # --- directives --------------------------------------------------------

    def run(self) -> ScriptResult:
        self.result = ScriptResult(self.path, self.header, self.mode, None)  # type: ignore[arg-type]
        try:
            offset = 0
            for no, raw in enumerate(self.text.splitlines(keepends=True), start=1):
                line = _strip_comment(raw).strip()
                if line:
                    self.directive(line, no, Span(self.path, offset, offset + len(raw.rstrip("\r\n"))))
                offset += len(raw)
        except ScriptError as exc:
            self.result.error = str(exc)
        th = self._th()
        self.result.theory = th
        self._check_expectations()
        self.result.consistency = th.check_consistency()
        return self.result

    def directive(self, line: str, no: int, span: Span) -> None:
        word = line.split(None, 1)[0]
        rest = line[len(word):].strip()
        if word == "layer":
            if self.theory is not None:
                raise ScriptError("layer must come before any other directive", no)
            if rest not in (FOL, FREGE):
                raise ScriptError(f"unknown layer {rest!r}", no)
            self.layer = rest
        elif word == "convention":
            if rest not in (DISTINCT, FREE):
                raise ScriptError(f"unknown convention {rest!r}", no)
            self.convention = rest
            self._th().convention = rest
        elif word == "let":
            self._let(rest, no)
        elif word == "define":
            name, _, body = rest.partition(":=")
            if not body:
                raise ScriptError("define needs ':='", no)
            try:
                self._th().define(name.strip(), self.expr(body, no))
            except BegriffError as exc:
                raise ScriptError(str(exc), no) from exc
        elif word == "operation":
            m = re.match(r"^([A-Za-z][\w']*)\s*/\s*(\d+)$", rest)
            if not m:
                raise ScriptError("operation takes NAME/ARITY", no)
            self._th().declare_operation(m.group(1), int(m.group(2)))
        elif word == "subst":
            label, _, body = rest.partition(":")
            if not body:
                raise ScriptError("subst needs 'LABEL: bindings'", no)
            self.labels[label.strip()] = self.bindings(body, no)
        elif word == "step":
            self._step(line, no, span)
        elif word == "expect":
            self._expect(rest, no)
        elif word == "guard":
            self._guard(rest, no)
        else:
            raise ScriptError(f"unknown directive {word!r}", no)

    def _let(self, rest: str, no: int) -> None:
        m = re.match(r"^([A-Za-z][\w']*)\s*(?:\(([^)]*)\))?\s*:=\s*(.+)$", rest)
        if not m:
            raise ScriptError("let takes NAME[(params)] := expression", no)
        params = tuple(p.strip() for p in m.group(2).split(",")) if m.group(2) else ()
        self.macros[m.group(1)] = Macro(params, self.expr(m.group(3), no))

    def _guard(self, rest: str, no: int) -> None:
        th = self._th()
        sid = rest.strip()
        if th.mode != GUARDED:
            self.result.steps.append(StepResult(f"guard {sid}", "guard", SKIPPED, no, message="classical mode"))
            return
        try:
            g = th.register_guard(sid)
        except (BegriffError, ModeError) as exc:
            self.result.steps.append(StepResult(f"guard {sid}", "guard", FAILED, no, message=str(exc)))
            return
        self.result.steps.append(
            StepResult(f"guard {sid}", "guard", CERTIFIED, no, formula=render(g.term), message=f"guards {render(g.term)}")
        )

    def _expect(self, rest: str, no: int) -> None:
        m = re.match(r"^(\S+?)\s+(blocked|rejected)$", rest)
        if m:
            self.result.expectations.append(Expectation(m.group(1), m.group(2), no))
            return
        sid, sep, body = rest.partition(":")
        if not sep:
            raise ScriptError("expect takes 'ID: formula', 'ID blocked' or 'ID rejected'", no)
        self.result.expectations.append(Expectation(sid.strip(), "formula", no, self.formula(body, no)))

    def _step(self, line: str, no: int, span: Span) -> None:
        m = _STEP_RE.match(line)
        if not m:
            raise ScriptError("malformed step", no)
        sid, anchor, body = m.group("id"), m.group("anchor"), m.group("body")
        goal_text = None
        if "|-" in body:
            body, goal_text = body.split("|-", 1)
        with_text = None
        wm = re.search(r"\s+with\s+", body)
        if wm:
            body, with_text = body[: wm.start()], body[wm.end() :]
        h = _HEAD_RE.match(body.strip())
        if not h:
            raise ScriptError(f"cannot read step {body.strip()!r}", no)
        rule = h.group("rule")
        res = StepResult(sid, rule, FAILED, no, anchor=anchor)
        self.result.steps.append(res)
        try:
            bindings: Tuple[Tuple[str, object], ...] = ()
            if h.group("using"):
                for lab in h.group("using").split():
                    if lab not in self.labels:
                        raise ScriptError(f"unknown substitution label {lab!r}", no)
                    bindings += self.labels[lab]
            if with_text:
                bindings += self.bindings(with_text, no)
            th = self._th()
            plan = SubstitutionPlan(bindings, th.convention, tuple((h.group("using") or "").split())) if bindings else None
            prems = [p for p in re.split(r"[\s,]+", h.group("prems") or "") if p]
            args: dict = {}
            name = h.group("name")
            if name is not None:
                key = {"axiom": "schema", "gen": "var"}.get(rule, "name")
                args[key] = name
            if h.group("at"):
                args["at"] = tuple(int(k) for k in re.split(r"[\s,]+", h.group("at").strip()) if k)
            if goal_text is not None:
                args["goal"] = self.formula(goal_text, no)
            thm = th.infer(rule, prems, plan, id=sid, anchor=anchor, span=span, **args)
        except GuardBlocked as exc:
            res.status, res.message, res.blocked_by = BLOCKED, str(exc), exc.blocking_id
            return
        except ScriptError:
            raise
        except BegriffError as exc:
            res.status, res.message = REJECTED, str(exc)
            return
        res.status = CERTIFIED
        res.formula = render(thm.formula)
        res.sound = th.steps[sid].sound

    def _check_expectations(self) -> None:
        th = self.result.theory
        by_id = {s.id: s for s in self.result.steps}
        for e in self.result.expectations:
            s = by_id.get(e.id)
            if e.kind == "formula":
                if e.id not in th:
                    e.held, e.message = False, f"{e.id} was not certified"
                else:
                    got = th.theorem(e.id).formula
                    e.held = normalize(got) == normalize(e.formula)
                    if not e.held:
                        e.message = f"{e.id} is {render(got)}, expected {render(e.formula)}"
            elif s is None:
                e.held, e.message = False, f"no step {e.id}"
            elif e.kind == BLOCKED:
                want = BLOCKED if th.mode == GUARDED else CERTIFIED
                e.held = s.status == want
                if not e.held:
                    e.message = f"{e.id} is {s.status}, expected {want} in {th.mode} mode"
            else:
                e.held = s.status == REJECTED
                if not e.held:
                    e.message = f"{e.id} is {s.status}, expected rejected"


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _split_top(text: str, sep: str) -> List[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _selector(text: str, line: int) -> Tuple[int, ...]:
    text = text.strip().strip("{}").strip()
    if not text:
        return ()
    try:
        return tuple(int(k) for k in re.split(r"[\s,]+", text) if k)
    except ValueError as exc:
        raise ScriptError(f"bad occurrence selector {text!r}", line) from exc


def run_script(source: Union[str, Path], mode: str = CLASSICAL, *, text: Optional[str] = None) -> ScriptResult:
    """Run a script file (or ``text`` labelled with ``source``)."""
    if text is None:
        text = Path(source).read_text(encoding="utf-8")
    return ScriptRunner(text, str(source), mode).run()
