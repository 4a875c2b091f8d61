"""Small shared helpers: rational literals, sign conventions, sparse vectors,
and the Report type used by every axiom/identity checker."""

from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse 'p' or 'p/q' (q > 0).  Decimals and exponents are rejected."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(s)


def format_rational(x) -> str:
    """Canonical text form: 'p' for integers, 'p/q' otherwise (q > 0)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def sign_pow(k: int) -> int:
    """(-1)**k."""
    return -1 if k & 1 else 1


def koszul(deg_a: int, deg_b: int) -> int:
    """Sign picked up when an element of degree deg_a moves past degree deg_b."""
    return -1 if (deg_a & 1) and (deg_b & 1) else 1


# Sparse vectors are dicts index -> Fraction with no zero values stored.

def vadd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, ZERO) + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def vscale(c, a: dict) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


def vsub(a: dict, b: dict) -> dict:
    return vadd(a, vscale(-ONE, b))


def vaddto(acc: dict, c, a: dict) -> None:
    """In-place acc += c*a, pruning zeros."""
    if not c:
        return
    for k, v in a.items():
        w = acc.get(k, ZERO) + c * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


class Report:
    """Accumulates named pass/fail checks with witnesses for the failures.

    Checkers return one of these instead of raising, so callers can show
    everything that went wrong at once.
    """

    def __init__(self, title: str):
        self.title = title
        self.checks: list[tuple[str, bool, str | None]] = []

    def record(self, name: str, ok, witness: str | None = None) -> bool:
        ok = bool(ok)
        self.checks.append((name, ok, None if ok else witness))
        return ok

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> list[tuple[str, str | None]]:
        return [(name, w) for name, ok, w in self.checks if not ok]

    def merge(self, other: "Report") -> None:
        for name, ok, w in other.checks:
            self.checks.append((f"{other.title}/{name}", ok, w))

    def summary(self) -> str:
        head = f"{self.title}: {'ok' if self.ok else 'FAIL'} ({len(self.checks)} checks)"
        lines = [head]
        for name, w in self.failures():
            lines.append(f"  FAIL {name}" + (f": {w}" if w else ""))
        return "\n".join(lines)

    def __repr__(self):
        return f"<Report {self.title!r} ok={self.ok} checks={len(self.checks)}>"
