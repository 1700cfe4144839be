import json

import pytest

from oscillab.quad import OscillatorySample
from oscillab.reports import (
    CSV_HEADER,
    canonical_json,
    format_float,
    markdown_summary,
    samples_from_csv,
    samples_to_csv,
)


def test_format_float_round_trips_doubles():
    for x in (1.0, -0.1, 3.141592653589793, 1e-300, 7.0 / 3.0):
        assert float(format_float(x)) == x


def test_canonical_json_sorted_and_newline_terminated():
    text = canonical_json({"b": 1, "a": {"d": 2, "c": 3}})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert text.index('"c"') < text.index('"d"')
    assert json.loads(text) == {"b": 1, "a": {"d": 2, "c": 3}}
    # byte-identical on repeat
    assert text == canonical_json({"a": {"c": 3, "d": 2}, "b": 1})


def test_samples_csv_round_trip():
    samples = [
        OscillatorySample(tau=10.0, value=0.1 - 0.25j, error_estimate=1e-12),
        OscillatorySample(tau=1e4 / 3.0, value=complex(7.0 / 3.0, -1e-7),
                          error_estimate=2.5e-11),
    ]
    text = samples_to_csv(samples)
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER == "tau,re,im,abs,err"
    assert len(lines) == 3
    back = samples_from_csv(text)
    for orig, rt in zip(samples, back):
        assert rt.tau == orig.tau
        assert rt.value == orig.value
        assert rt.error_estimate == orig.error_estimate


def test_samples_from_csv_rejects_wrong_header():
    with pytest.raises(ValueError):
        samples_from_csv("t,x,y\n1,2,3\n")


def test_markdown_summary_sections():
    report = {
        "kind": "demo",
        "config": {"tol": 1e-10, "dim": 2},
        "passed": True,
        "rows": [{"label": "fixture-a", "status": "pass"}],
        "claims": [
            {"name": "bound", "verdict": "supports", "statement": "alpha below bound"},
        ],
    }
    text = markdown_summary(report)
    assert text.startswith("# demo")
    assert "## configuration" in text
    assert "- dim: 2" in text
    assert "- fixture-a: pass" in text
    assert "- **bound** [supports]: alpha below bound" in text
