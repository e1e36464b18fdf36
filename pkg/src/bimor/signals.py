"""A tiny closed-form input-signal grammar for the CLI: sums of constants
and sinusoids such as "0.01*sin(5*t)" or "1 + 0.5*cos(2*t + 0.1)"."""

import re

import numpy as np

from .exceptions import ValidationError

__all__ = ["parse_signal"]

_NUM = r"[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?"
_TERM = re.compile(
    rf"^(?:(?P<coef>{_NUM})\*)?(?P<fn>sin|cos)\("
    rf"(?:(?P<freq>{_NUM})\*)?t(?:(?P<phsign>[+-])(?P<phase>{_NUM}))?\)$"
)
_CONST = re.compile(rf"^{_NUM}$")


def _split_terms(text):
    """Split on top-level + and - while keeping each term's sign."""
    terms = []
    sign, start = 1.0, 0
    i = 0
    depth = 0
    if text.startswith(("+", "-")):
        sign = -1.0 if text[0] == "-" else 1.0
        start = i = 1
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and text[i - 1] not in "eE*+-":
            terms.append((sign, text[start:i]))
            sign = -1.0 if ch == "-" else 1.0
            start = i + 1
        i += 1
    terms.append((sign, text[start:]))
    return terms


def parse_signal(expr):
    """Compile a signal expression into a callable t -> float."""
    text = expr.replace(" ", "")
    if not text:
        raise ValidationError("empty input-signal expression")
    parts = []
    for sign, term in _split_terms(text):
        if not term:
            raise ValidationError(f"malformed signal expression: {expr!r}")
        if _CONST.match(term):
            parts.append((sign * float(term), None, 0.0, 0.0))
            continue
        m = _TERM.match(term)
        if not m:
            raise ValidationError(
                f"unsupported term {term!r}; grammar allows constants and "
                "a*sin(w*t+p) / a*cos(w*t+p)"
            )
        coef = sign * float(m.group("coef") or 1.0)
        freq = float(m.group("freq") or 1.0)
        phase = float(m.group("phase") or 0.0)
        if m.group("phsign") == "-":
            phase = -phase
        parts.append((coef, m.group("fn"), freq, phase))

    def signal(t):
        val = 0.0
        for coef, fn, freq, phase in parts:
            if fn is None:
                val += coef
            elif fn == "sin":
                val += coef * np.sin(freq * t + phase)
            else:
                val += coef * np.cos(freq * t + phase)
        return val

    return signal
