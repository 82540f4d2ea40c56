"""Parsers and renderers for machine files, amplitudes, and inputs.

Machine files are line based.  ``#`` starts a comment anywhere on a line.
The first meaningful line must be the format header (``qtm-spec v1`` for
quantum machines, ``tm-spec v1`` for classical ones), followed by the
``states:``, ``initial:``, ``halt:`` and ``alphabet:`` headers and any
number of ``rule:`` lines.

Amplitudes are exact-looking literals::

    amp  ::= part | part ('+'|'-') part 'i' | part 'i'
    part ::= ['-'] int [ ('/' int) | ('/sqrt(' int ')') ]

``*`` as a rule's read symbol expands the rule over the whole alphabet;
``*`` in the write slot means "write the symbol that was read".
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ParseError
from .machine import (
    BLANK,
    MOVES,
    InputSpec,
    MachineSpec,
    RuleTarget,
)
from .classical import ClassicalTM

# Characters that would collide with the file and input grammars if they
# appeared in a tape symbol.
_RESERVED_SYMBOL_CHARS = set("#|*:+->")

QTM_HEADER = "qtm-spec v1"
TM_HEADER = "tm-spec v1"


# ---------------------------------------------------------------------------
# amplitudes

def _parse_int(text: str, i: int) -> tuple[int, int]:
    start = i
    while i < len(text) and text[i].isdigit():
        i += 1
    if i == start:
        raise ParseError("expected an integer", offset=start)
    return int(text[start:i]), i


def _parse_part(text: str, i: int) -> tuple[float, int]:
    sign = 1.0
    if i < len(text) and text[i] == "-":
        sign = -1.0
        i += 1
    num, i = _parse_int(text, i)
    if i < len(text) and text[i] == "/":
        if text[i + 1 : i + 6] == "sqrt(":
            i += 6
            radicand, i = _parse_int(text, i)
            if i >= len(text) or text[i] != ")":
                raise ParseError("expected ')'", offset=i)
            i += 1
            if radicand < 1:
                raise ParseError("sqrt argument must be >= 1", offset=i)
            return sign * num / math.sqrt(radicand), i
        i += 1
        den, i = _parse_int(text, i)
        if den == 0:
            raise ParseError("division by zero", offset=i)
        # Fraction instead of int division: correctly rounded even when the
        # denominator alone is too large for a float (subnormal values).
        return sign * float(Fraction(num, den)), i
    return sign * num, i


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i].isspace():
        i += 1
    return i


def parse_amplitude(text: str) -> complex:
    """Evaluate an amplitude literal to a complex double."""
    i = _skip_ws(text, 0)
    first, i = _parse_part(text, i)
    i = _skip_ws(text, i)
    if i < len(text) and text[i] == "i":
        i = _skip_ws(text, i + 1)
        if i != len(text):
            raise ParseError("trailing characters after amplitude", offset=i)
        return complex(0.0, first)
    if i < len(text) and text[i] in "+-":
        sign = 1.0 if text[i] == "+" else -1.0
        i = _skip_ws(text, i + 1)
        second, i = _parse_part(text, i)
        i = _skip_ws(text, i)
        if i >= len(text) or text[i] != "i":
            raise ParseError("expected 'i' after imaginary part", offset=i)
        i = _skip_ws(text, i + 1)
        if i != len(text):
            raise ParseError("trailing characters after amplitude", offset=i)
        return complex(first, sign * second)
    if i != len(text):
        raise ParseError("trailing characters after amplitude", offset=i)
    return complex(first, 0.0)


def _render_real(x: float) -> str:
    if x == int(x) and abs(x) <= 2**53:
        return str(int(x))
    # prefer p/sqrt(r) for the common irrational amplitudes
    for r in range(2, 100):
        root = math.isqrt(r)
        if root * root == r:
            continue
        y = x * math.sqrt(r)
        p = round(y)
        if p != 0 and abs(y - p) < 1e-9 and p / math.sqrt(r) == x:
            return f"{p}/sqrt({r})"
    frac = Fraction(x)  # exact: every finite double is a dyadic rational
    return f"{frac.numerator}/{frac.denominator}"


def render_amplitude(value: complex) -> str:
    """Inverse of parse_amplitude: parse(render(z)) == z exactly."""
    re, im = value.real, value.imag
    if im == 0.0:
        return _render_real(re)
    if re == 0.0:
        return _render_real(im) + "i"
    op = "+" if im >= 0 else "-"
    return f"{_render_real(re)} {op} {_render_real(abs(im))}i"


# ---------------------------------------------------------------------------
# machine files

def _meaningful_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _check_symbol(token: str, lineno: int) -> str:
    if len(token) != 1 or token in _RESERVED_SYMBOL_CHARS and token != "_":
        if not (len(token) == 1 and token == BLANK):
            raise ParseError(
                f"bad tape symbol {token!r}: symbols are single characters "
                f"outside the reserved set",
                line=lineno,
            )
    if len(token) == 1 and token in _RESERVED_SYMBOL_CHARS:
        raise ParseError(f"reserved character {token!r} cannot be a symbol", line=lineno)
    return token


def _parse_headers(lines, expected_header: str):
    headers: dict[str, tuple] = {}
    rule_lines = []
    first = True
    for lineno, line in lines:
        if first:
            if line != expected_header:
                raise ParseError(
                    f"expected format header {expected_header!r}", line=lineno
                )
            first = False
            continue
        if line.startswith("rule:"):
            rule_lines.append((lineno, line[len("rule:"):].strip()))
            continue
        for name in ("states", "initial", "halt", "alphabet"):
            prefix = name + ":"
            if line.startswith(prefix):
                if name in headers:
                    raise ParseError(f"duplicate header {name!r}", line=lineno)
                headers[name] = (lineno, line[len(prefix):].split())
                break
        else:
            raise ParseError(f"unrecognized line {line!r}", line=lineno)
    if first:
        raise ParseError(f"empty file, expected {expected_header!r}", line=1)
    for name in ("states", "initial", "halt", "alphabet"):
        if name not in headers:
            raise ParseError(f"missing header {name!r}")
    return headers, rule_lines


def _common_header_fields(headers):
    lineno, states = headers["states"]
    if len(set(states)) != len(states) or not states:
        raise ParseError("states must be distinct and non-empty", line=lineno)
    lineno, initial = headers["initial"]
    if len(initial) != 1 or initial[0] not in states:
        raise ParseError("initial must name exactly one declared state", line=lineno)
    lineno, halt = headers["halt"]
    if len(halt) != 1 or halt[0] not in states:
        raise ParseError("halt must name exactly one declared state", line=lineno)
    if halt[0] == initial[0]:
        raise ParseError("initial and halt states must differ", line=lineno)
    lineno, alphabet = headers["alphabet"]
    symbols = [_check_symbol(tok, lineno) for tok in alphabet]
    if len(set(symbols)) != len(symbols):
        raise ParseError("alphabet symbols must be distinct", line=lineno)
    if BLANK not in symbols:
        raise ParseError(f"alphabet must contain the blank symbol {BLANK!r}", line=lineno)
    return tuple(states), initial[0], halt[0], tuple(symbols)


def _split_rule_lhs(lhs: str, states, alphabet, lineno):
    parts = lhs.split()
    if len(parts) != 2:
        raise ParseError("rule left side must be '<state> <symbol>'", line=lineno)
    state, symbol = parts
    if state not in states:
        raise ParseError(f"unknown state {state!r}", line=lineno)
    if symbol != "*" and symbol not in alphabet:
        raise ParseError(f"unknown symbol {symbol!r}", line=lineno)
    return state, symbol


def _expand(symbol: str, alphabet) -> tuple[str, ...]:
    return alphabet if symbol == "*" else (symbol,)


def parse_machine(text: str) -> MachineSpec:
    """Parse ``qtm-spec v1`` source into a MachineSpec.

    ``*`` read symbols expand to one rule group per alphabet symbol; a key
    produced twice (directly or via expansion) is a duplicate-rule error.
    """
    headers, rule_lines = _parse_headers(_meaningful_lines(text), QTM_HEADER)
    states, initial, halt, alphabet = _common_header_fields(headers)

    rules: dict = {}
    for lineno, body in rule_lines:
        if "->" not in body:
            raise ParseError("rule needs '->'", line=lineno)
        lhs, rhs = body.split("->", 1)
        state, symbol = _split_rule_lhs(lhs.strip(), states, alphabet, lineno)
        raw_targets = []
        for chunk in rhs.split("|"):
            chunk = chunk.strip()
            if ":" not in chunk:
                raise ParseError(
                    "target must be '<amplitude> : <state> <write> <move>'",
                    line=lineno,
                )
            amp_text, rest = chunk.split(":", 1)
            try:
                amplitude = parse_amplitude(amp_text.strip())
            except ParseError as exc:
                raise ParseError(f"bad amplitude: {exc}", line=lineno) from None
            fields = rest.split()
            if len(fields) != 3:
                raise ParseError(
                    "target must be '<amplitude> : <state> <write> <move>'",
                    line=lineno,
                )
            nstate, write, move = fields
            if nstate not in states:
                raise ParseError(f"unknown state {nstate!r}", line=lineno)
            if write != "*" and write not in alphabet:
                raise ParseError(f"unknown symbol {write!r}", line=lineno)
            if move not in MOVES:
                raise ParseError(f"move must be one of L N R, got {move!r}", line=lineno)
            raw_targets.append((amplitude, nstate, write, move))
        if not raw_targets:
            raise ParseError("rule has no targets", line=lineno)
        for sym in _expand(symbol, alphabet):
            key = (state, sym)
            if key in rules:
                raise ParseError(
                    f"duplicate rule for ({state}, {sym})", line=lineno
                )
            targets = tuple(
                RuleTarget(a, ns, sym if w == "*" else w, m)
                for a, ns, w, m in raw_targets
            )
            seen = set()
            for t in targets:
                sig = (t.state, t.write, t.move)
                if sig in seen:
                    raise ParseError(
                        f"duplicate target {sig} in rule ({state}, {sym})",
                        line=lineno,
                    )
                seen.add(sig)
            rules[key] = targets
    return MachineSpec(states, initial, halt, alphabet, rules)


def render_machine(spec: MachineSpec) -> str:
    """Write a MachineSpec back out; parse_machine(render_machine(s)) == s."""
    lines = [
        QTM_HEADER,
        "states: " + " ".join(spec.states),
        "initial: " + spec.initial,
        "halt: " + spec.halt,
        "alphabet: " + " ".join(spec.alphabet),
    ]
    for (state, symbol), targets in spec.rules.items():
        rendered = " | ".join(
            f"{render_amplitude(t.amplitude)} : {t.state} {t.write} {t.move}"
            for t in targets
        )
        lines.append(f"rule: {state} {symbol} -> {rendered}")
    return "\n".join(lines) + "\n"


def parse_classical(text: str) -> ClassicalTM:
    """Parse ``tm-spec v1`` source: single-target rules, no amplitudes."""
    headers, rule_lines = _parse_headers(_meaningful_lines(text), TM_HEADER)
    states, initial, halt, alphabet = _common_header_fields(headers)

    rules: dict = {}
    for lineno, body in rule_lines:
        if "->" not in body:
            raise ParseError("rule needs '->'", line=lineno)
        lhs, rhs = body.split("->", 1)
        state, symbol = _split_rule_lhs(lhs.strip(), states, alphabet, lineno)
        if state == halt:
            raise ParseError("classical rules may not start in the halt state", line=lineno)
        fields = rhs.split()
        if len(fields) != 3:
            raise ParseError("rule right side must be '<state> <write> <move>'", line=lineno)
        nstate, write, move = fields
        if nstate not in states:
            raise ParseError(f"unknown state {nstate!r}", line=lineno)
        if write != "*" and write not in alphabet:
            raise ParseError(f"unknown symbol {write!r}", line=lineno)
        if move not in MOVES:
            raise ParseError(f"move must be one of L N R, got {move!r}", line=lineno)
        for sym in _expand(symbol, alphabet):
            key = (state, sym)
            if key in rules:
                raise ParseError(f"duplicate rule for ({state}, {sym})", line=lineno)
            rules[key] = (nstate, sym if write == "*" else write, move)
    return ClassicalTM(states, initial, halt, alphabet, rules)


# ---------------------------------------------------------------------------
# inputs

def _is_bare_string(piece: str, spec: MachineSpec) -> bool:
    token = piece.strip()
    return token != "" and all(ch in spec.alphabet and ch != BLANK for ch in token)


def parse_input(text: str, spec: MachineSpec) -> InputSpec:
    """Parse ``input ::= term ('+' term)*``, ``term ::= [amp ':'] string``.

    A bare string is only allowed when it is the whole input (amplitude 1).
    ``+`` inside an amplitude (complex literals) is handled by joining
    pieces until a ``:`` appears.
    """
    pieces = text.split("+")
    segments: list[str] = []
    pending = ""
    for piece in pieces:
        pending = piece if pending == "" else pending + "+" + piece
        if ":" in pending or _is_bare_string(pending, spec):
            segments.append(pending)
            pending = ""
    if pending != "":
        segments.append(pending)

    terms = []
    for segment in segments:
        segment = segment.strip()
        if ":" in segment:
            amp_text, string = segment.rsplit(":", 1)
            amplitude = parse_amplitude(amp_text.strip())
            string = string.strip()
        else:
            amplitude = complex(1.0, 0.0)
            string = segment
        if string == "":
            raise ParseError("empty input string")
        terms.append((amplitude, string))
    if not terms:
        raise ParseError("empty input")
    if len(terms) > 1 and any(
        seg.strip() != "" and ":" not in seg for seg in segments
    ):
        raise ParseError("every term of a superposed input needs an amplitude")

    inp = InputSpec(tuple(terms))
    from .machine import validate_input

    validate_input(spec, inp)
    return inp
