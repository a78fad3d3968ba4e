"""The orbital fuzzy system: admissibility checks, the fuzzy
Hutchinson-Barnsley operator, iteration to the fixed point and the a-priori
error bounds that certify convergence.

One application of the operator pushes the fuzzy set through every map,
reweights levels with the map's grey level map and joins the results
pointwise. Iterates form a Cauchy sequence whenever the declared contraction
constant C is valid; the distance from the m-th iterate to the limit is at
most C^m/(1-C) times the diameter of supp(u) together with its image, which
is what `a_priori_bound` computes and what tolerance-mode iteration stops
on. The stopping rule uses the bound rather than the residual alone, so the
certificate stays sound even when consecutive iterates happen to coincide
early.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .fuzzy import (
    EmptySupportError,
    FuzzySet,
    GreyLevelMap,
    apply_grey,
    d_infinity,
    join,
    zadeh_pushforward,
)
from .geometry import FinitePointSet, diameter
from .ifs import DEFAULT_SUPPORT_CAP, IteratedFunctionSystem, SupportCapError
from .numeric import DEDUP_DECIMALS, DEFAULT_TOL, Scalar, scale

_MAX_TOLERANCE_STEPS = 10_000


class AdmissibilityError(ValueError):
    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of an operator iteration run.

    d_history holds the distances between consecutive iterates;
    a_priori is the bound at the final step count; certified_residual is the
    measured distance between the final iterate and its image.
    """

    iterations: int
    d_history: Tuple[Scalar, ...]
    a_priori: Scalar
    certified_residual: Scalar


@dataclass(frozen=True)
class OrbitalFuzzySystem:
    """An affine system paired with one grey level map per map."""

    ifs: IteratedFunctionSystem
    grey_maps: Tuple[GreyLevelMap, ...]

    def __post_init__(self):
        if len(self.grey_maps) != len(self.ifs.maps):
            raise ValueError("need exactly one grey map per affine map")
        if any(g.exact != self.ifs.exact for g in self.grey_maps):
            raise ValueError("cannot mix numeric modes")

    @property
    def exact(self) -> bool:
        return self.ifs.exact

    @property
    def dimension(self) -> int:
        return self.ifs.dimension

    def to_float(self) -> "OrbitalFuzzySystem":
        return OrbitalFuzzySystem(
            ifs=self.ifs.to_float(),
            grey_maps=tuple(g.to_float() for g in self.grey_maps),
        )

    def validate(self) -> list:
        """Admissibility violations; an empty list means the system is fine.

        Monotonicity and right continuity hold for every GreyLevelMap by
        construction, so the structural checks left are: nonzero maps,
        rho(0) = 0 for all of them and rho(1) = 1 for at least one.
        """
        violations = []
        for i, g in enumerate(self.grey_maps):
            if not g.is_nonzero:
                violations.append(f"grey map {i} is identically zero")
            if g.value_at_zero != 0:
                violations.append(f"grey map {i} has rho(0) = {g.value_at_zero}, expected 0")
        if not any(g.value_at_one == 1 for g in self.grey_maps):
            violations.append("no grey map attains rho(1) = 1")
        return violations

    def _require_admissible(self):
        violations = self.validate()
        if violations:
            raise AdmissibilityError(violations)

    def step(self, u: FuzzySet) -> FuzzySet:
        """One application of the fuzzy operator: join of the grey-weighted
        images of u under every map."""
        self._require_admissible()
        if u.exact != self.exact:
            raise ValueError("fuzzy set and system use different numeric modes")
        if not u.exact:
            return self._step_float(u)
        parts = []
        for f, g in zip(self.ifs.maps, self.grey_maps):
            parts.append(apply_grey(g, zadeh_pushforward(f, u)))
        return join(parts)

    def _step_float(self, u: FuzzySet) -> FuzzySet:
        pts = u.points_array()
        lv = u.levels_array()
        out_pts = []
        out_lv = []
        for f, g in zip(self.ifs.maps, self.grey_maps):
            lin = np.array([[float(v) for v in row] for row in f.linear])
            off = np.array([float(v) for v in f.offset])
            moved = pts @ lin.T + off
            relit = g.eval_array(lv)
            keep = relit > 0.0
            out_pts.append(moved[keep])
            out_lv.append(relit[keep])
        allp = np.round(np.vstack(out_pts), DEDUP_DECIMALS) + 0.0
        alll = np.concatenate(out_lv)
        if not len(allp):
            raise EmptySupportError("the operator erased the whole support")
        uniq, inverse = np.unique(allp, axis=0, return_inverse=True)
        merged = np.zeros(len(uniq))
        np.maximum.at(merged, inverse.reshape(-1), alll)
        return FuzzySet._from_float_arrays(uniq, merged)

    def a_priori_bound(self, u: FuzzySet, m: int) -> Scalar:
        """C^m/(1-C) times diam(image of supp(u) together with supp(u))."""
        if m < 0:
            raise ValueError("m must be >= 0")
        c = self.ifs.contraction_constant
        supp = u.support_set()
        reach = supp.union(self.ifs.step(supp))
        diam = diameter(reach)
        factor = c ** m / (1 - c)
        return scale(diam, factor)

    def _steps_for_tolerance(self, u: FuzzySet, tolerance: Scalar) -> int:
        if tolerance <= 0:
            raise ValueError("tolerance must be positive")
        c = self.ifs.contraction_constant
        supp = u.support_set()
        diam = diameter(supp.union(self.ifs.step(supp)))
        for m in range(_MAX_TOLERANCE_STEPS + 1):
            if scale(diam, c ** m / (1 - c)) <= tolerance:
                return m
        raise RuntimeError("tolerance unreachable within the step guard")

    def iterate(
        self,
        u0: FuzzySet,
        steps: Optional[int] = None,
        tolerance: Optional[Scalar] = None,
        support_cap: int = DEFAULT_SUPPORT_CAP,
        on_step: Optional[Callable[[int, FuzzySet], None]] = None,
    ) -> Tuple[FuzzySet, ConvergenceReport]:
        """Iterate the operator for a fixed step count or to a tolerance.

        In tolerance mode the run stops at the first m whose a-priori bound
        falls within the tolerance, which certifies that the final iterate is
        that close to its limit.
        """
        if (steps is None) == (tolerance is None):
            raise ValueError("choose exactly one of steps or tolerance")
        self._require_admissible()
        if not u0.normal:
            raise ValueError("initial fuzzy set must be normal (some level 1)")
        if steps is not None and steps < 0:
            raise ValueError("steps must be >= 0")
        m = steps if steps is not None else self._steps_for_tolerance(u0, tolerance)
        current = u0
        history = []
        for n in range(1, m + 1):
            nxt = self.step(current)
            if len(nxt) > support_cap:
                raise SupportCapError(
                    f"support grew past the cap of {support_cap} points",
                    partial=(current, ConvergenceReport(
                        iterations=n - 1,
                        d_history=tuple(history),
                        a_priori=self.a_priori_bound(u0, n - 1),
                        certified_residual=None,
                    )),
                )
            history.append(d_infinity(current, nxt))
            if on_step is not None:
                on_step(n, nxt)
            current = nxt
        residual = d_infinity(self.step(current), current)
        report = ConvergenceReport(
            iterations=m,
            d_history=tuple(history),
            a_priori=self.a_priori_bound(u0, m),
            certified_residual=residual,
        )
        return current, report

    def fixed_point(
        self,
        u0: FuzzySet,
        tolerance: Scalar,
        support_cap: int = DEFAULT_SUPPORT_CAP,
    ) -> Tuple[FuzzySet, ConvergenceReport]:
        """Iterate until the a-priori bound certifies the requested tolerance."""
        final, report = self.iterate(u0, tolerance=tolerance, support_cap=support_cap)
        # The bound at m dominates the residual, so this cannot fire unless
        # the declared contraction constant is wrong for the scene.
        if report.certified_residual > tolerance:
            raise RuntimeError(
                "residual exceeds the certified tolerance; "
                "the declared contraction constant looks invalid"
            )
        return final, report


def invariant_domain_check(
    system: OrbitalFuzzySystem,
    u: FuzzySet,
    depth: int = 6,
    tol: Optional[float] = None,
) -> str:
    """Best-effort test that every positive-level point sits in an orbit
    closure that also carries a level-1 point.

    Returns "yes" when witnesses were found for every support point, "no" on
    a certified obstruction (a non-normal set cannot qualify) and "unknown"
    when the search was inconclusive at this depth.
    """
    if not u.normal:
        return "no"
    if tol is None:
        tol = 0.0 if u.exact else DEFAULT_TOL
    one = Fraction(1) if u.exact else 1.0 - DEFAULT_TOL
    level_one_points = [p for p, l in u.items() if l >= one]
    orbits: Dict = {}

    def orbit_points(w):
        if w not in orbits:
            base = FinitePointSet(points=(w,), exact=u.exact)
            orbits[w] = system.ifs.orbit(base, depth).points
        return orbits[w]

    support = list(u.support_points())
    for x in support:
        witnesses = [x] + [w for w in support if w != x]
        found = False
        for w in witnesses:
            pts = orbit_points(w)
            if pts.contains(x, tol) and any(pts.contains(y, tol) for y in level_one_points):
                found = True
                break
        if not found:
            return "unknown"
    return "yes"
