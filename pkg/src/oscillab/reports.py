"""Deterministic report serialization: canonical JSON, CSV sample tables, markdown.

Two runs with the same inputs must produce byte-identical files, so every
writer here sorts keys, fixes float formatting, and never embeds timestamps.
"""

from __future__ import annotations

import io
import json
from typing import Iterable, Mapping, Sequence

from .quad import OscillatorySample

__all__ = [
    "format_float",
    "canonical_json",
    "samples_to_csv",
    "samples_from_csv",
    "markdown_summary",
]

CSV_HEADER = "tau,re,im,abs,err"


def format_float(x: float) -> str:
    """17 significant digits: enough to round-trip an IEEE double exactly."""
    return format(float(x), ".17g")


def canonical_json(obj) -> str:
    """Sorted-key JSON with a trailing newline; floats round-trip exactly."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def samples_to_csv(samples: Iterable[OscillatorySample]) -> str:
    lines = [CSV_HEADER]
    for s in samples:
        lines.append(
            ",".join(
                format_float(v)
                for v in (s.tau, s.value.real, s.value.imag, abs(s.value), s.error_estimate)
            )
        )
    return "\n".join(lines) + "\n"


def samples_from_csv(text: str) -> list:
    reader = io.StringIO(text)
    header = reader.readline().strip()
    if header != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}, got {header!r}")
    out = []
    for line in reader:
        line = line.strip()
        if not line:
            continue
        tau, re, im, _, err = (float(p) for p in line.split(","))
        out.append(OscillatorySample(tau=tau, value=complex(re, im), error_estimate=err))
    return out


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return format(v, ".6g")
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_fmt_value(x) for x in v) + ")"
    return str(v)


def markdown_summary(report: Mapping) -> str:
    """One-page summary: config block, key numbers, one verdict line per claim."""
    lines = [f"# {report.get('kind', 'report')}", ""]
    if "config" in report:
        lines.append("## configuration")
        lines.append("")
        for key in sorted(report["config"]):
            lines.append(f"- {key}: {_fmt_value(report['config'][key])}")
        lines.append("")
    scalars = {
        k: v
        for k, v in report.items()
        if k not in ("kind", "config", "claims", "rows", "samples")
        and isinstance(v, (int, float, str, bool))
    }
    if scalars:
        lines.append("## results")
        lines.append("")
        for key in sorted(scalars):
            lines.append(f"- {key}: {_fmt_value(scalars[key])}")
        lines.append("")
    if "rows" in report:
        lines.append("## rows")
        lines.append("")
        for row in report["rows"]:
            status = row.get("status", "")
            label = row.get("label", row.get("phase", "?"))
            lines.append(f"- {label}: {status}")
        lines.append("")
    if "claims" in report:
        lines.append("## claims")
        lines.append("")
        for claim in report["claims"]:
            lines.append(
                f"- **{claim['name']}** [{claim['verdict']}]: {claim['statement']}"
            )
        lines.append("")
    return "\n".join(lines)
