"""Deterministic report emission.

JSON and CSV writers with fixed float formatting (17 significant digits)
so that identical inputs produce byte-identical files.  Timing never goes
into report files; callers print wall time separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Check", "Report", "dumps", "format_float", "csv_lines"]


def format_float(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def dumps(obj, indent=0):
    """Minimal JSON emitter over dict/list/str/bool/int/float/None.

    Floats are rendered with %.17g; key order is preserved as given, so
    the caller controls byte layout completely.
    """
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}"{k}": {dumps(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    raise TypeError(f"cannot serialize {type(obj)!r}")


@dataclass(frozen=True)
class Check:
    """One verification line: a measured residual against its tolerance.

    ``lower_bound`` flips the sense for negative controls, where the
    measurement must stay ABOVE the threshold to pass.
    """

    name: str
    n: int
    max_residual: float
    tol: float
    lower_bound: bool = False

    @property
    def passed(self):
        if self.lower_bound:
            return self.max_residual >= self.tol
        return self.max_residual <= self.tol

    def to_record(self):
        return {
            "name": self.name,
            "n": int(self.n),
            "max_residual": float(self.max_residual),
            "tol": float(self.tol),
            "pass": self.passed,
        }


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)

    def add(self, name, n, max_residual, tol, lower_bound=False):
        self.checks.append(Check(name, n, float(max_residual), float(tol),
                                 lower_bound))

    def extend(self, other):
        self.checks.extend(other.checks)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_json(self):
        record = {
            "suite": self.suite,
            "checks": [c.to_record() for c in self.checks],
        }
        return dumps(record) + "\n"


def csv_lines(header, rows):
    """One header row plus %.17g-formatted data rows."""
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(format_float(float(v)) for v in row))
    return "\n".join(out) + "\n"
