"""Real log canonical threshold computations.

Three routes, all exact rationals: from user-supplied resolution data
(min (k_j + 1) / m_j), from the single point-blowup of a homogeneous
polynomial (n / d), and as the Newton principal-face candidate 1 / t0 with
the even/odd parity bookkeeping that governs when the candidate is expected
to be attained.  The candidate route reports, it never asserts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .nondegen import SearchOptions, check_R_nondegenerate
from .poly import Polynomial
from .polytope import is_convenient, newton_distance, newton_polytope

__all__ = [
    "ResolutionDatum",
    "RlctReport",
    "BlowupChart",
    "gamma_from_resolution",
    "rlct_homogeneous",
    "rlct_newton_candidate",
    "blowup_charts",
    "load_resolution_data",
]


@dataclass(frozen=True)
class ResolutionDatum:
    """Per-divisor multiplicities (m_j of the pulled-back function, k_j of the form)."""

    components: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("resolution data must be non-empty")
        comps = tuple((int(m), int(k)) for m, k in self.components)
        for m, k in comps:
            if m < 1 or k < 0:
                raise ValueError(f"invalid multiplicities (m={m}, k={k})")
        object.__setattr__(self, "components", comps)


@dataclass(frozen=True)
class FaceParity:
    dj: int
    rj: int
    dj_even: bool
    rj_odd: bool


@dataclass(frozen=True)
class RlctReport:
    value: Fraction
    method: str  # "resolution" | "homogeneous" | "newton-candidate"
    flags: Dict[str, bool] = field(default_factory=dict)
    parity: Tuple[FaceParity, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "value": str(self.value),
            "method": self.method,
            "flags": dict(sorted(self.flags.items())),
            "parity": [
                {"dj": p.dj, "rj": p.rj, "dj_even": p.dj_even, "rj_odd": p.rj_odd}
                for p in self.parity
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


@dataclass(frozen=True)
class BlowupChart:
    index: int                 # which variable is the chart's radial coordinate
    h: Polynomial              # f with x_index = 1, in the remaining variables
    f_multiplicity: int        # d
    jacobian_multiplicity: int  # n - 1


def gamma_from_resolution(data: ResolutionDatum) -> Fraction:
    """min over divisors of (k_j + 1) / m_j."""
    return min(Fraction(k + 1, m) for m, k in data.components)


def load_resolution_data(text: str) -> ResolutionDatum:
    """Parse the JSON array [{"m": int, "k": int}, ...]."""
    raw = json.loads(text)
    return ResolutionDatum(tuple((item["m"], item["k"]) for item in raw))


def blowup_charts(f: Polynomial) -> List[BlowupChart]:
    """Charts of the origin blowup of a homogeneous f: pullback (y_i)^d h_i."""
    d = f.homogeneous_degree()
    if d is None:
        raise ValueError("blowup charts require a homogeneous polynomial")
    if f.n < 2:
        raise ValueError("blowup charts require n >= 2")
    return [
        BlowupChart(
            index=i,
            h=f.substitute_one(i),
            f_multiplicity=d,
            jacobian_multiplicity=f.n - 1,
        )
        for i in range(1, f.n + 1)
    ]


def _validity_flags(f: Polynomial, nondegen_opts: Optional[SearchOptions]) -> Dict[str, bool]:
    poly = newton_polytope(f)
    convenient, _ = is_convenient(poly)
    flags = {"convenient": convenient}
    flags["homogeneous"] = f.homogeneous_degree() is not None
    if nondegen_opts is not None and convenient:
        verdict = check_R_nondegenerate(f, nondegen_opts)
        flags["likely_R_nondegenerate"] = not verdict.degenerate
    return flags


def rlct_homogeneous(
    f: Polynomial,
    nondegen_opts: Optional[SearchOptions] = SearchOptions(starts=40),
) -> RlctReport:
    """rlct = n/d for a convenient homogeneous polynomial (point-blowup route).

    The nondegeneracy verdict is attached as a validity flag, not a gate.
    """
    d = f.homogeneous_degree()
    if d is None:
        raise ValueError("rlct_homogeneous requires a homogeneous polynomial")
    poly = newton_polytope(f)
    convenient, _ = is_convenient(poly)
    if not convenient:
        raise ValueError("rlct_homogeneous requires a convenient polynomial")
    value = Fraction(f.n, d)
    flags = _validity_flags(f, nondegen_opts)
    flags["value_at_most_one"] = value <= 1
    return RlctReport(value=value, method="homogeneous", flags=flags)


def rlct_newton_candidate(
    f: Polynomial,
    nondegen_opts: Optional[SearchOptions] = SearchOptions(starts=40),
) -> RlctReport:
    """Candidate rlct = 1/t0 from the principal faces, with parity data.

    The value is a CANDIDATE: it is the reciprocal Newton distance, valid as
    the actual threshold only under nondegeneracy and further sign/parity
    hypotheses, which are reported in ``flags`` and ``parity`` for downstream
    interpretation rather than asserted here.
    """
    poly = newton_polytope(f)
    convenient, _ = is_convenient(poly)
    if not convenient:
        raise ValueError("newton candidate requires a convenient polynomial")
    t0, principal = newton_distance(poly)
    if t0 == 0:
        raise ValueError("newton distance is zero (constant term present)")
    value = 1 / t0
    parity = tuple(
        FaceParity(
            dj=p.denominator,
            rj=p.r_value,
            dj_even=p.denominator % 2 == 0,
            rj_odd=p.r_value % 2 == 1,
        )
        for p in principal
    )
    flags = _validity_flags(f, nondegen_opts)
    flags["value_at_most_one"] = value <= 1
    flags["candidate_below_one"] = value < 1
    flags["parity_condition_some_face"] = any(p.dj_even and p.rj_odd for p in parity)
    return RlctReport(value=value, method="newton-candidate", flags=flags, parity=parity)
