"""
Textual element expressions.

    elt  := term ( ('*' | whitespace) term )*
    term := 's' label | 't[' int (',' int)* ']' | 'tau' [ '^' int ] | '1'

Translations are written in display coordinates of the root datum. Formatting produces a reduced
word followed by the length-zero part, which parses back to the same element.
"""
import re

from affine_weyl import AffineElt, AffineWeylGroup
from errors import DomainError, ExpressionError

TERM = re.compile(
    r"(?P<tau>tau(?:\s*\^\s*(?P<power>-?\d+))?)"
    r"|(?P<s>s(?P<label>\d+))"
    r"|(?P<t>t\s*\[(?P<coords>[^\]]*)\])"
    r"|(?P<one>1(?!\d))"
)


def parse_element(group: AffineWeylGroup, text: str) -> AffineElt:
    result = group.identity
    pos = 0
    expect_term = True
    seen_term = False
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        if text[pos] == "*":
            if expect_term:
                raise ExpressionError("unexpected '*'", pos)
            expect_term = True
            pos += 1
            continue
        match = TERM.match(text, pos)
        if not match:
            raise ExpressionError(f"unexpected '{text[pos]}'", pos)
        result = group.mul(result, _term(group, match))
        pos = match.end()
        expect_term = False
        seen_term = True
    if not seen_term:
        raise ExpressionError("empty element expression", 0)
    if expect_term:
        raise ExpressionError("expression ends with '*'", len(text))
    return result


def _term(group: AffineWeylGroup, match: re.Match) -> AffineElt:
    pos = match.start()
    if match.group("one"):
        return group.identity
    if match.group("s"):
        label = int(match.group("label"))
        if label not in group.simple_reflections:
            raise ExpressionError(f"s{label} is out of range: labels are {group.labels}", pos)
        return group.simple_reflections[label]
    if match.group("t"):
        coords = parse_int_vector(match.group("coords"), pos)
        try:
            internal = group.datum.frame.from_display(coords)
        except DomainError as e:
            raise ExpressionError(str(e), pos)
        return group.translation(internal)
    power = int(match.group("power") or 1)
    generators = group.omega_generators()
    if not generators:
        raise ExpressionError(f"{group.datum.name} has trivial Omega: 'tau' is undefined", pos)
    base = generators[0] if power >= 0 else group.inverse(generators[0])
    result = group.identity
    for _ in range(abs(power)):
        result = group.mul(result, base)
    return result


def parse_int_vector(text: str, pos: int = 0) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ExpressionError(f"expected comma-separated integers, got '{text}'", pos)


def parse_labels(text: str, pos: int = 0) -> frozenset[int]:
    stripped = text.strip()
    if stripped in ("", "-", "{}"):
        return frozenset()
    return frozenset(parse_int_vector(stripped.strip("{}"), pos))


def format_word(word) -> str:
    return "*".join(f"s{label}" for label in word)


def format_element(w: AffineElt) -> str:
    group = w.group
    word, tau = group.reduced_word(w)
    parts = [format_word(word)] if word else []
    if tau != group.identity:
        display = group.datum.frame.to_display(tau.translation)
        if any(display):
            parts.append("t[" + ",".join(str(c) for c in display) + "]")
        finite_word = group.weyl.word(tau.finite)
        if finite_word:
            parts.append(format_word(finite_word))
    return "*".join(parts) if parts else "1"


def format_labels(labels) -> str:
    return "{" + ",".join(str(s) for s in sorted(labels)) + "}"
