"""Randomized property suites and the closed-form oracle equivalence check.

Every suite runs in exact arithmetic, so the inequalities under test are
theorems and any reported failure is a genuine bug, not rounding noise. Each
suite function takes its own RNG and a trial count and returns a list of
failure descriptions, empty on success. The same functions back the CLI
`verify` command and the acceptance tests.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from .dyadic import band_start, enumerated_levels, reference_system, slice_start
from .fuzzy import (
    FuzzySet,
    GreyLevelMap,
    alpha_cut,
    apply_grey,
    d_infinity,
    d_infinity_level_sweep,
    join,
    zadeh_pushforward,
)
from .geometry import FinitePointSet, diameter, hausdorff
from .ifs import AffineMap, IteratedFunctionSystem
from .system import OrbitalFuzzySystem

_MAX_REPORTED = 8


def _rational(rng: random.Random, span: int = 12) -> Fraction:
    return Fraction(rng.randrange(-span, span + 1), rng.choice((1, 2, 3, 4, 8, 16)))


def _level(rng: random.Random) -> Fraction:
    den = rng.choice((2, 3, 4, 5, 8))
    return Fraction(rng.randrange(1, den + 1), den)


def _point(rng: random.Random, dim: int):
    return tuple(_rational(rng) for _ in range(dim))


def _point_set(rng: random.Random, dim: int, max_points: int = 5) -> FinitePointSet:
    count = rng.randrange(1, max_points + 1)
    return FinitePointSet.from_points([_point(rng, dim) for _ in range(count)], exact=True)


def _fuzzy(rng: random.Random, dim: int, max_points: int = 4, normal: bool = True) -> FuzzySet:
    count = rng.randrange(1, max_points + 1)
    pairs = [(_point(rng, dim), _level(rng)) for _ in range(count)]
    if normal:
        k = rng.randrange(len(pairs))
        pairs[k] = (pairs[k][0], Fraction(1))
    return FuzzySet(pairs, exact=True)


def _grey(rng: random.Random, reach_one: bool = False) -> GreyLevelMap:
    """Random admissible-style map: rho(0) = 0, nondecreasing, optional jump."""
    interior = sorted({Fraction(rng.randrange(1, 16), 16) for _ in range(rng.randrange(0, 3))})
    ts = [Fraction(0)] + interior + [Fraction(1)]
    top = Fraction(1) if reach_one else _level(rng)
    inner = sorted(top * Fraction(rng.randrange(0, 17), 16) for _ in range(len(ts) - 2))
    points = list(zip(ts, [Fraction(0)] + inner + [top]))
    if len(ts) > 2 and rng.random() < 0.4:
        # turn one interior breakpoint into a jump
        k = rng.randrange(1, len(ts) - 1)
        t, low = points[k]
        following = points[k + 1][1]
        if following > low:
            points.insert(k + 1, (t, low + (following - low) / 2))
    return GreyLevelMap.from_breakpoints(points, exact=True)


def _affine(rng: random.Random, dim: int, singular_chance: float = 0.25) -> AffineMap:
    rows = [[_rational(rng, span=4) for _ in range(dim)] for _ in range(dim)]
    if rng.random() < singular_chance and dim > 1:
        factor = _rational(rng, span=2)
        rows[-1] = [factor * v for v in rows[0]]
    return AffineMap(
        linear=tuple(tuple(row) for row in rows),
        offset=_point(rng, dim),
    )


def _system(rng: random.Random, dim: int, max_maps: int = 3) -> OrbitalFuzzySystem:
    n = rng.randrange(1, max_maps + 1)
    maps = tuple(_affine(rng, dim) for _ in range(n))
    greys = tuple(_grey(rng, reach_one=(i == 0)) for i in range(n))
    ifs = IteratedFunctionSystem(maps=maps, contraction_constant=Fraction(1, 2))
    return OrbitalFuzzySystem(ifs=ifs, grey_maps=greys)


def _collect(check: Callable[[random.Random], Optional[str]], rng: random.Random,
             trials: int) -> List[str]:
    failures = []
    for i in range(trials):
        message = check(rng)
        if message is not None:
            failures.append(f"trial {i}: {message}")
            if len(failures) >= _MAX_REPORTED:
                break
    return failures


# --- geometry suites -------------------------------------------------------

def union_bound_failures(rng: random.Random, trials: int) -> List[str]:
    """h(union A_i, union B_i) <= max_i h(A_i, B_i)."""

    def check(rng):
        dim = rng.choice((1, 2, 3))
        k = rng.randrange(1, 5)
        a_sets = [_point_set(rng, dim) for _ in range(k)]
        b_sets = [_point_set(rng, dim) for _ in range(k)]
        lhs = hausdorff(a_sets[0].union(*a_sets[1:]), b_sets[0].union(*b_sets[1:]))
        rhs = max(hausdorff(a, b) for a, b in zip(a_sets, b_sets))
        if not lhs <= rhs:
            return f"h(unions) = {lhs!r} > max = {rhs!r}"
        return None

    return _collect(check, rng, trials)


def diam_bound_failures(rng: random.Random, trials: int) -> List[str]:
    """h(A, B) <= diam(A union B)."""

    def check(rng):
        dim = rng.choice((1, 2, 3))
        a = _point_set(rng, dim)
        b = _point_set(rng, dim)
        h = hausdorff(a, b)
        d = diameter(a.union(b))
        if not h <= d:
            return f"h = {h!r} > diam = {d!r}"
        return None

    return _collect(check, rng, trials)


# --- fuzzy suites ----------------------------------------------------------

def level_sweep_failures(rng: random.Random, trials: int) -> List[str]:
    """The finite level sweep equals a dense alpha sweep and the fast path."""

    def check(rng):
        dim = rng.choice((1, 2))
        u = _fuzzy(rng, dim)
        v = _fuzzy(rng, dim)
        by_levels = d_infinity_level_sweep(u, v)
        fast = d_infinity(u, v)
        levels = sorted(set(u.level_values()) | set(v.level_values()))
        dense = set(levels)
        dense.update(Fraction(k, 16) for k in range(1, 17))
        dense.update((a + b) / 2 for a, b in zip(levels, levels[1:]))
        swept = max(hausdorff(alpha_cut(u, a), alpha_cut(v, a)) for a in sorted(dense))
        if not (by_levels == swept == fast):
            return f"sweep {by_levels!r}, dense {swept!r}, fast {fast!r}"
        return None

    return _collect(check, rng, trials)


def dinf_diameter_failures(rng: random.Random, trials: int) -> List[str]:
    """d_infinity(u, v) <= diam(supp u union supp v)."""

    def check(rng):
        dim = rng.choice((1, 2))
        u = _fuzzy(rng, dim)
        v = _fuzzy(rng, dim)
        d = d_infinity(u, v)
        bound = diameter(u.support_set().union(v.support_set()))
        if not d <= bound:
            return f"d_infinity = {d!r} > diam = {bound!r}"
        return None

    return _collect(check, rng, trials)


def pushforward_join_exchange_failures(rng: random.Random, trials: int) -> List[str]:
    """Images of a pointwise max equal the pointwise max of the images."""

    def check(rng):
        dim = rng.choice((1, 2))
        f = _affine(rng, dim)
        family = [_fuzzy(rng, dim, normal=False) for _ in range(rng.randrange(1, 4))]
        left = zadeh_pushforward(f, join(family))
        right = join([zadeh_pushforward(f, u) for u in family])
        if left != right:
            return f"pushforward(join) != join(pushforwards) for {len(family)} sets"
        return None

    return _collect(check, rng, trials)


def join_distance_failures(rng: random.Random, trials: int) -> List[str]:
    """d_infinity of joins is bounded by the worst member distance."""

    def check(rng):
        dim = rng.choice((1, 2))
        k = rng.randrange(1, 4)
        us = [_fuzzy(rng, dim) for _ in range(k)]
        vs = [_fuzzy(rng, dim) for _ in range(k)]
        lhs = d_infinity(join(us), join(vs))
        rhs = max(d_infinity(u, v) for u, v in zip(us, vs))
        if not lhs <= rhs:
            return f"d(joins) = {lhs!r} > max member distance = {rhs!r}"
        return None

    return _collect(check, rng, trials)


def grey_cut_identity_failures(rng: random.Random, trials: int) -> List[str]:
    """Cuts of a grey-composed set are cuts of the original at the preimage
    level, and cut distances never exceed d_infinity."""

    def check(rng):
        dim = rng.choice((1, 2))
        rho = _grey(rng, reach_one=rng.random() < 0.5)
        u = _fuzzy(rng, dim)
        v = _fuzzy(rng, dim)
        try:
            ru = apply_grey(rho, u)
            rv = apply_grey(rho, v)
        except ValueError:
            return None  # grey map erased a support; nothing to test
        for alpha in ru.level_values():
            beta = rho.level_preimage(alpha)
            if alpha > rho.value_at_one:
                continue
            cut_left = alpha_cut(ru, alpha)
            cut_right = alpha_cut(u, beta)
            if not cut_left.same_points(cut_right):
                return f"cut identity fails at alpha = {alpha}"
            if rv.max_level >= alpha:
                h = hausdorff(alpha_cut(ru, alpha), alpha_cut(rv, alpha))
                if not h <= d_infinity(u, v):
                    return f"cut distance at alpha = {alpha} exceeds d_infinity"
        return None

    return _collect(check, rng, trials)


# --- operator suites -------------------------------------------------------

def support_image_inclusion_failures(rng: random.Random, trials: int) -> List[str]:
    """The support of a stepped set sits inside the set image of the support."""

    def check(rng):
        dim = rng.choice((1, 2))
        system = _system(rng, dim)
        u = _fuzzy(rng, dim)
        stepped = system.step(u)
        image = system.ifs.step(u.support_set())
        if not stepped.support_set().issubset(image):
            return "support of the stepped set escapes the image of the support"
        return None

    return _collect(check, rng, trials)


def step_majorant_failures(rng: random.Random, trials: int) -> List[str]:
    """One operator step is nonexpansive against the worst per-map image
    distance: d_infinity(step(u), step(v)) <= max over maps f of
    d_infinity(f(u), f(v))."""

    def check(rng):
        dim = rng.choice((1, 2))
        system = _system(rng, dim)
        u = _fuzzy(rng, dim)
        v = _fuzzy(rng, dim)
        lhs = d_infinity(system.step(u), system.step(v))
        rhs = max(
            d_infinity(zadeh_pushforward(f, u), zadeh_pushforward(f, v))
            for f in system.ifs.maps
        )
        if not lhs <= rhs:
            return f"d(step(u), step(v)) = {lhs!r} > majorant = {rhs!r}"
        return None

    return _collect(check, rng, trials)


# --- bound checks ----------------------------------------------------------

def _contractive_float_system(rng: random.Random, n_maps: int, c_target: float) -> OrbitalFuzzySystem:
    maps = []
    for _ in range(n_maps):
        strength = c_target * (0.2 + 0.779 * rng.random())
        m = np.array([[rng.uniform(-1, 1) for _ in range(2)] for _ in range(2)])
        norm = np.linalg.svd(m, compute_uv=False)[0]
        if norm == 0:
            m = np.eye(2)
            norm = 1.0
        m = m * (strength / norm)
        offset = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        maps.append(AffineMap(
            linear=tuple(tuple(float(v) for v in row) for row in m),
            offset=tuple(float(v) for v in offset),
        ))
    greys = [GreyLevelMap.identity(exact=False)]
    for _ in range(n_maps - 1):
        if rng.random() < 0.3:
            t = rng.uniform(0.2, 0.8)
            hi = rng.uniform(0.5, 1.0)
            greys.append(GreyLevelMap.from_breakpoints(
                [(0.0, 0.0), (t, 0.0), (t, hi), (1.0, hi)], exact=False))
        else:
            greys.append(GreyLevelMap.linear_ramp(rng.uniform(0.3, 1.0), exact=False))
    ifs = IteratedFunctionSystem(maps=tuple(maps), contraction_constant=float(c_target))
    return OrbitalFuzzySystem(ifs=ifs, grey_maps=tuple(greys))


def geometric_decay_failures(rng: random.Random, cases: int, n_max: int = 8) -> List[str]:
    """Consecutive iterate distances decay like C^n for starts supported
    inside one orbit.

    Systems are random float-mode affine contractions with spectral norms
    below the declared constant; the start set takes its support from an
    orbit approximation of a random base point.
    """
    failures = []
    for case in range(cases):
        r = rng.random()
        n_maps = 1 if r < 0.35 else (2 if r < 0.95 else 3)
        c = rng.uniform(0.1, 0.9)
        system = _contractive_float_system(rng, n_maps, c)
        base = FinitePointSet.from_points([(rng.uniform(-1, 1), rng.uniform(-1, 1))], exact=False)
        orbit_pts = list(system.ifs.orbit(base, 3).points)
        size = rng.randrange(1, min(3, len(orbit_pts)) + 1)
        chosen = rng.sample(orbit_pts, size)
        pairs = [(p, rng.uniform(0.1, 1.0)) for p in chosen]
        pairs[0] = (pairs[0][0], 1.0)
        u = FuzzySet(pairs, exact=False)
        iterates = [u]
        for _ in range(n_max + 1):
            iterates.append(system.step(iterates[-1]))
        d0 = d_infinity(iterates[1], iterates[0])
        if d0 == 0.0:
            continue  # already fixed; nothing to measure
        for n in range(n_max + 1):
            dn = d_infinity(iterates[n + 1], iterates[n])
            allowed = (c ** n) * d0 * (1 + 1e-9)
            if dn > allowed:
                failures.append(
                    f"case {case}: step {n} moved {dn:.3e} > C^n bound {allowed:.3e}"
                )
                break
        if len(failures) >= _MAX_REPORTED:
            break
    return failures


def cauchy_bound_failures(m_max: int = 10) -> List[str]:
    """Distances between iterates of the reference band start obey the
    geometric-series bound with C = 1/2 and reach diameter sqrt(5)/2."""
    system = reference_system(exact=False)
    u0 = band_start([0.0, 0.5, 1.0], exact=False)
    iterates = [u0]
    for _ in range(m_max):
        iterates.append(system.step(iterates[-1]))
    c = 0.5
    diam = math.sqrt(5.0) / 2.0
    failures = []
    for m in range(m_max):
        for n in range(m + 1, m_max + 1):
            measured = d_infinity(iterates[m], iterates[n])
            bound = (c ** m - c ** n) / (1 - c) * diam
            if measured > bound + 1e-9:
                failures.append(f"m={m}, n={n}: {measured} > {bound}")
    return failures


# --- oracle equivalence ----------------------------------------------------

def oracle_equivalence_failures(depth: int = 8, system: Optional[OrbitalFuzzySystem] = None,
                                x=Fraction(1, 2)) -> List[str]:
    """Engine iterates versus the word-enumeration closed form, exactly.

    Runs the bundled system (or a caller-supplied variant, for fault
    injection) on the start with level 1 at (x, 0) and compares every
    support level at every step up to `depth`.
    """
    if system is None:
        system = reference_system(exact=True)
    u = slice_start(Fraction(x), exact=True)
    x = Fraction(x)
    failures = []
    for n in range(depth + 1):
        expected = enumerated_levels(n)
        got = {p[1]: level for p, level in u.items()}
        if any(p[0] != x for p, _ in u.items()):
            failures.append(f"n={n}: a support point left the column x={x}")
        for y in sorted(set(expected) | set(got)):
            if expected.get(y) != got.get(y):
                failures.append(
                    f"n={n} y={y}: engine {got.get(y, 0)} != closed form {expected.get(y, 0)}"
                )
        if len(failures) >= _MAX_REPORTED:
            break
        if n < depth:
            u = system.step(u)
    return failures


_SUITES = (
    ("union_bound", union_bound_failures),
    ("diam_bound", diam_bound_failures),
    ("level_sweep_equality", level_sweep_failures),
    ("dinf_diameter_bound", dinf_diameter_failures),
    ("pushforward_join_exchange", pushforward_join_exchange_failures),
    ("join_distance_bound", join_distance_failures),
    ("grey_cut_identity", grey_cut_identity_failures),
    ("support_image_inclusion", support_image_inclusion_failures),
    ("step_distance_majorant", step_majorant_failures),
)


def suite_names():
    return [name for name, _ in _SUITES]


def run_suite(name: str, rng: random.Random, trials: int) -> List[str]:
    for suite_name, fn in _SUITES:
        if suite_name == name:
            return fn(rng, trials)
    raise KeyError(name)


def run_all(trials: int = 200, depth: int = 8, seed: int = 0) -> Dict[str, List[str]]:
    """Every suite with per-suite RNGs derived from one seed.

    The geometric-decay check is far heavier per case than the rest, so it
    runs at a reduced case count.
    """
    master = random.Random(seed)
    results: Dict[str, List[str]] = {}
    for name, fn in _SUITES:
        results[name] = fn(random.Random(master.randrange(2 ** 32)), trials)
    results["geometric_decay"] = geometric_decay_failures(
        random.Random(master.randrange(2 ** 32)), cases=max(5, trials // 20), n_max=6
    )
    results["cauchy_bound"] = cauchy_bound_failures(m_max=8)
    results["oracle_equivalence"] = oracle_equivalence_failures(depth)
    return results
