"""
Problem files and the command-line driver.

A problem file is line oriented; ``#`` starts a comment::

    field QQ                      # or: field GF 7
    vars e f h                    # smallest first: e < f < h
    mode lie                      # optional, inferred from bracket lines
    bracket [e,f] = h
    bracket [h,e] = 2e
    bracket [h,f] = -2f
    order grevlex et              # lex | grlex | grevlex, then et | deglex
    option max-deg 6
    ideal e^3, f^3
          h^3 - 4h

Polynomials of an ``ideal`` block are separated by commas, line breaks, or
simply by starting a new term without a sign. Products are read in the
order written (``f*e`` and ``e*f`` differ in Lie and free mode).
"""

import argparse
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from pydantic import ValidationError

from . import __version__
from .commands import CommandRegistry
from .config import Settings
from .envalg import LieStructure
from .exceptions import AcgbError, InfiniteUSetError, MathDomainError, ProblemError, ProblemParseError
from .freealg import NcPoly
from .kernel import QQ, Field, MonomialOrderKind, OrderSpec, Scalar, Word, WordOrderKind, add_into
from .logging_config import get_logger, log_system_info, setup_logging, struct_message
from .models import ErrorDocument
from .render import format_exponents, format_poly, render_json, render_text

logger = get_logger(__name__)

KEYWORDS = ("field", "vars", "mode", "bracket", "order", "option", "ideal")

# option name in a problem file -> Settings field
OPTIONS = {
    "max-deg": "max_degree",
    "seed": "seed",
    "verify": "verify",
    "term-cap": "term_cap",
    "basis-cap": "basis_cap",
    "u-set-degree-cap": "u_set_degree_cap",
    "random-basis-change": "random_basis_change",
    "workers": "workers",
}

_TOKEN = re.compile(
    r"(?P<space>\s+)|(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^,\[\]=()])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


@dataclass(frozen=True)
class Problem:
    """A parsed problem file."""

    field: Field
    variables: Tuple[str, ...]
    mode: str
    brackets: Tuple[Tuple[int, int, NcPoly], ...]
    generators: Tuple[NcPoly, ...]
    order: OrderSpec
    options: Tuple[Tuple[str, Any], ...] = ()

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def lie(self) -> LieStructure:
        table = {(a, b): {w[0]: c for w, c in form.items()} for a, b, form in self.brackets}
        return LieStructure(self.nvars, table, self.field)

    def settings_overrides(self) -> Dict[str, Any]:
        return {OPTIONS[name]: value for name, value in self.options}


def _tokenize(text: str, line: int, offset: int = 0) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ProblemParseError(f"unexpected character {text[pos]!r}", line, offset + pos + 1)
        kind = match.lastgroup
        if kind != "space":
            tokens.append(Token(kind, match.group(), offset + pos + 1))
        pos = match.end()
    return tokens


class _ExpressionParser:
    """Recursive-descent parser for the polynomial lists of one line."""

    def __init__(self, tokens: Sequence[Token], line: int, names: Dict[str, int], field: Field,
                 end_column: int):
        self.tokens = list(tokens)
        self.pos = 0
        self.line = line
        self.names = names
        self.field = field
        self.end_column = end_column

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message: str, token: Optional[Token] = None) -> ProblemParseError:
        token = token or self.peek()
        column = token.column if token is not None else self.end_column
        return ProblemParseError(message, self.line, column)

    def take(self, kind: str, text: Optional[str] = None, what: str = "") -> Token:
        token = self.peek()
        if token is None or token.kind != kind or (text is not None and token.text != text):
            raise self.error(f"expected {what or text or kind}")
        self.pos += 1
        return token

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        token = self.peek()
        return token is not None and token.kind == kind and (text is None or token.text == text)

    def polynomials(self) -> List[NcPoly]:
        polys: List[NcPoly] = []
        current: Optional[Dict[Word, Scalar]] = None
        n = len(self.names)
        while self.peek() is not None:
            if self.at("op", ","):
                if current is None:
                    raise self.error("expected a term before ','")
                polys.append(NcPoly(n, current))
                current = None
                self.pos += 1
                if self.peek() is None:
                    raise self.error("expected a term after ','")
                continue
            sign = 1
            if self.at("op", "+") or self.at("op", "-"):
                sign = -1 if self.take("op").text == "-" else 1
            elif current is not None:
                polys.append(NcPoly(n, current))
                current = None
            if current is None:
                current = {}
            coefficient, word = self.term()
            add_into(current, {word: coefficient}, sign)
        if current is not None:
            polys.append(NcPoly(n, current))
        return polys

    def coefficient(self) -> Scalar:
        num = self.take("number")
        den = 1
        if self.at("op", "/"):
            self.pos += 1
            token = self.take("number", what="a denominator")
            den = int(token.text)
            if den == 0:
                raise self.error("zero denominator", token)
        try:
            return self.field(Fraction(int(num.text), den))
        except ZeroDivisionError:
            raise self.error(f"{num.text}/{den} is not an element of {self.field.name}", num)

    def term(self) -> Tuple[Scalar, Word]:
        coefficient = self.field.one
        word: Word = ()
        if self.at("number"):
            coefficient = self.coefficient()
            starred = self.at("op", "*")
            if starred:
                self.pos += 1
            if not self.at("name"):
                if starred:
                    raise self.error("expected a variable after '*'")
                return coefficient, word
        word = self.factor()
        while self.at("op", "*"):
            self.pos += 1
            word += self.factor()
        return coefficient, word

    def factor(self) -> Word:
        token = self.take("name", what="a variable")
        if token.text not in self.names:
            raise self.error(f"unknown variable {token.text!r}", token)
        letter = self.names[token.text]
        power = 1
        if self.at("op", "^"):
            self.pos += 1
            if not self.at("number"):
                raise self.error("malformed exponent: expected a nonnegative integer")
            power = int(self.take("number").text)
        return (letter,) * power


def _parse_bool(text: str, line: int, column: int) -> bool:
    value = text.lower()
    if value in ("true", "yes", "on", "1"):
        return True
    if value in ("false", "no", "off", "0"):
        return False
    raise ProblemParseError(f"expected a boolean, got {text!r}", line, column)


def parse_problem(text: str) -> Problem:
    """Parse a problem file; errors carry line and column."""
    field = QQ
    field_seen = False
    variables: Optional[Tuple[str, ...]] = None
    names: Dict[str, int] = {}
    mode: Optional[str] = None
    brackets: List[Tuple[int, int, NcPoly]] = []
    bracket_lines: Dict[Tuple[int, int], int] = {}
    first_bracket_line = 0
    generators: List[NcPoly] = []
    order_kind, word_kind = MonomialOrderKind.GREVLEX, None
    options: List[Tuple[str, Any]] = []
    in_ideal = False

    def require_vars(line: int) -> None:
        if variables is None:
            raise ProblemError("'vars' must come first", line, 1)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        stripped = content.strip()
        if not stripped:
            continue
        indent = len(content) - len(content.lstrip())
        keyword = re.match(r"[A-Za-z_][A-Za-z0-9_]*", stripped)
        keyword = keyword.group() if keyword else ""
        rest_offset = indent + len(keyword)
        rest = content[rest_offset:]
        end_column = len(content.rstrip()) + 1

        if keyword not in KEYWORDS:
            if not in_ideal:
                raise ProblemParseError(f"unknown keyword {stripped.split()[0]!r}", lineno, indent + 1)
            require_vars(lineno)
            tokens = _tokenize(content, lineno)
            generators.extend(_ExpressionParser(tokens, lineno, names, field, end_column).polynomials())
            continue
        in_ideal = False
        tokens = _tokenize(rest, lineno, rest_offset)

        if keyword == "field":
            if field_seen or variables is not None:
                raise ProblemError("'field' must appear once, before 'vars'", lineno, indent + 1)
            field_seen = True
            if len(tokens) == 1 and tokens[0].text == "QQ":
                field = QQ
            elif len(tokens) == 2 and tokens[0].text == "GF" and tokens[1].kind == "number":
                try:
                    field = Field(int(tokens[1].text))
                except MathDomainError as exc:
                    raise ProblemError(exc.message, lineno, tokens[1].column)
            else:
                raise ProblemParseError("expected 'QQ' or 'GF p'", lineno, rest_offset + 1)
        elif keyword == "vars":
            if variables is not None:
                raise ProblemError("duplicate 'vars' line", lineno, indent + 1)
            if not tokens:
                raise ProblemParseError("expected variable names", lineno, end_column)
            for token in tokens:
                if token.kind != "name":
                    raise ProblemParseError(f"invalid variable name {token.text!r}", lineno, token.column)
                if token.text in names:
                    raise ProblemError(f"duplicate variable {token.text!r}", lineno, token.column)
                if token.text in KEYWORDS:
                    raise ProblemError(f"{token.text!r} is a keyword", lineno, token.column)
                names[token.text] = len(names)
            variables = tuple(names)
        elif keyword == "mode":
            if len(tokens) != 1 or tokens[0].text not in ("lie", "free"):
                raise ProblemParseError("expected 'lie' or 'free'", lineno, rest_offset + 1)
            mode = tokens[0].text
        elif keyword == "bracket":
            require_vars(lineno)
            p = _ExpressionParser(tokens, lineno, names, field, end_column)
            p.take("op", "[")
            left = p.take("name", what="a variable")
            p.take("op", ",")
            right = p.take("name", what="a variable")
            p.take("op", "]")
            p.take("op", "=")
            for token in (left, right):
                if token.text not in names:
                    raise ProblemError(f"unknown variable {token.text!r}", lineno, token.column)
            a, b = names[left.text], names[right.text]
            if a == b:
                raise ProblemError("a bracket needs two distinct variables", lineno, right.column)
            key = (max(a, b), min(a, b))
            if key in bracket_lines:
                raise ProblemError(
                    f"duplicate bracket, first given on line {bracket_lines[key]}", lineno, left.column)
            start = p.peek()
            forms = p.polynomials()
            if len(forms) != 1:
                raise ProblemParseError("expected one linear form", lineno,
                                        start.column if start is not None else end_column)
            form = forms[0]
            if any(len(w) != 1 for w in form):
                raise ProblemError("bracket values must be linear forms", lineno, start.column)
            bracket_lines[key] = lineno
            first_bracket_line = first_bracket_line or lineno
            brackets.append((a, b, form))
        elif keyword == "order":
            if not tokens or tokens[0].text not in {k.value for k in MonomialOrderKind}:
                raise ProblemParseError("expected 'lex', 'grlex' or 'grevlex'", lineno, rest_offset + 1)
            order_kind = MonomialOrderKind(tokens[0].text)
            word_names = {k.value for k in WordOrderKind}
            if len(tokens) > 2 or (len(tokens) == 2 and tokens[1].text not in word_names):
                column = tokens[1].column if len(tokens) > 1 else end_column
                raise ProblemParseError("expected 'et' or 'deglex' after the ordering", lineno, column)
            word_kind = WordOrderKind(tokens[1].text) if len(tokens) == 2 else None
            if word_kind is WordOrderKind.ET and order_kind is MonomialOrderKind.LEX:
                raise ProblemError("the et word ordering needs a graded ordering", lineno, tokens[1].column)
        elif keyword == "option":
            words = [(m.group(), rest_offset + m.start() + 1) for m in re.finditer(r"\S+", rest)]
            if len(words) != 2:
                column = words[2][1] if len(words) > 2 else end_column
                raise ProblemParseError("expected 'option <name> <value>'", lineno, column)
            (name, name_column), (raw, value_column) = words
            if name not in OPTIONS:
                raise ProblemError(f"unknown option {name!r}", lineno, name_column)
            target = OPTIONS[name]
            if target in ("verify", "random_basis_change"):
                value: Any = _parse_bool(raw, lineno, value_column)
            elif re.fullmatch(r"-?\d+", raw):
                value = int(raw)
            else:
                raise ProblemParseError(f"expected an integer for option {name!r}", lineno, value_column)
            try:
                Settings(**{target: value})
            except ValidationError as exc:
                raise ProblemError(f"invalid value for option {name!r}: {exc.errors()[0]['msg']}",
                                   lineno, value_column)
            options = [(k, v) for k, v in options if k != name] + [(name, value)]
        elif keyword == "ideal":
            require_vars(lineno)
            in_ideal = True
            generators.extend(_ExpressionParser(tokens, lineno, names, field, end_column).polynomials())

    if variables is None:
        raise ProblemError("missing 'vars' line")
    if mode is None:
        mode = "lie" if brackets else "free"
    elif mode == "free" and brackets:
        raise ProblemError("bracket lines are only allowed in Lie mode", first_bracket_line, 1)
    if word_kind is None:
        word_kind = WordOrderKind.DEGLEX if order_kind is MonomialOrderKind.LEX else WordOrderKind.ET
    order = OrderSpec(len(variables), order_kind, word_kind)
    return Problem(field, variables, mode, tuple(brackets), tuple(generators), order, tuple(options))


def _format_option(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_problem(problem: Problem) -> str:
    """Text that :func:`parse_problem` reads back to an equal problem."""
    names, order = problem.variables, problem.order
    lines = [
        f"field {problem.field.name}",
        "vars " + " ".join(names),
        f"mode {problem.mode}",
        f"order {order.kind.value} {order.word.value}",
    ]
    for a, b, form in problem.brackets:
        lines.append(f"bracket [{names[a]},{names[b]}] = {format_poly(form, names, order)}")
    for name, value in problem.options:
        lines.append(f"option {name} {_format_option(value)}")
    if problem.generators:
        lines.append("ideal " + ", ".join(format_poly(g, names, order) for g in problem.generators))
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acgb",
        description="Finite Groebner bases for almost commutative algebras",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=None,
        help="Logging level (default: ACGB_LOG_LEVEL or WARNING)",
    )
    parser.add_argument("--log-file", default=None, help="Also log to this file (rotated)")
    parser.add_argument("--debug", action="store_true", help="Shortcut for --log-level DEBUG")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="Problem file, or - for standard input")
    common.add_argument("--json", action="store_true", help="Print a structured document")
    common.add_argument("--no-verify", action="store_true", help="Skip verification")
    common.add_argument("--seed", type=int, default=None, help="Seed for the random change of Lie basis")
    common.add_argument("--random-basis-change", action="store_true",
                        help="Retry once after a random change of Lie basis on an infinite U-set")
    common.add_argument("--max-deg", type=int, default=None, help="Degree bound of free-algebra completion")
    common.add_argument("--term-cap", type=int, default=None, help="Maximum terms under reduction")
    common.add_argument("--basis-cap", type=int, default=None, help="Maximum basis size under completion")
    common.add_argument("--workers", type=int, default=None, help="Threads for verification checks")

    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for definition in CommandRegistry.definitions():
        sub.add_parser(definition.name, parents=[common], help=definition.help,
                       description=definition.help)
    return parser


def _settings(args: argparse.Namespace, problem: Problem) -> Settings:
    flags = {
        "seed": args.seed,
        "max_degree": args.max_deg,
        "term_cap": args.term_cap,
        "basis_cap": args.basis_cap,
        "workers": args.workers,
        "verify": False if args.no_verify else None,
        "random_basis_change": True if args.random_basis_change else None,
    }
    return Settings.from_env().merged(**problem.settings_overrides()).merged(**flags)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror or exc}")


def _describe(exc: AcgbError, problem: Optional[Problem]) -> str:
    message = exc.describe()
    if isinstance(exc, InfiniteUSetError) and exc.monomial is not None and problem is not None:
        message += f" (monomial {format_exponents(exc.monomial, problem.variables) or '1'})"
    witness = getattr(exc, "witness", None)
    if isinstance(witness, tuple) and problem is not None and len(witness) == 3:
        message += " (witness " + ", ".join(problem.variables[i] for i in witness) + ")"
    return message


def run(argv: Optional[Sequence[str]] = None, stderr: Optional[TextIO] = None) -> Tuple[int, str]:
    """Run the driver; returns the exit code and what belongs on stdout."""
    stderr = stderr or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), ""

    try:
        env_level = Settings.from_env().log_level
    except ValidationError as exc:
        print(f"error: invalid ACGB_* environment setting: {exc.errors()[0]['msg']}", file=stderr)
        return 2, ""
    level = "DEBUG" if args.debug else (args.log_level or env_level)
    setup_logging(level, log_file=args.log_file)
    log_system_info(logger)

    problem: Optional[Problem] = None
    try:
        problem = parse_problem(_read(args.file))
        try:
            settings = _settings(args, problem)
        except ValidationError as exc:
            raise ProblemError(f"invalid setting: {exc.errors()[0]['msg']}")
        logger.info("%s", struct_message(
            "running", command=args.command, mode=problem.mode, variables=len(problem.variables)))
        outcome = CommandRegistry.get(args.command)(problem, settings)
    except AcgbError as exc:
        message = _describe(exc, problem)
        print(f"error: {message}", file=stderr)
        output = ""
        if args.json:
            output = ErrorDocument(
                error=message,
                kind=type(exc).__name__,
                stage=exc.stage,
                exit_code=exc.exit_code,
                data=exc.data if isinstance(exc.data, dict) else {},
            ).model_dump_json(indent=2) + "\n"
        return exc.exit_code, output
    except Exception as exc:  # pragma: no cover - reported, not expected
        logger.exception("Unexpected error: %s", exc)
        print(f"error: unexpected {type(exc).__name__}: {exc}", file=stderr)
        return 1, ""

    if args.json:
        return 0, render_json(outcome, problem) + "\n"
    return 0, render_text(outcome, problem)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Console entry point."""
    code, output = run(argv)
    if output:
        sys.stdout.write(output)
    return code
