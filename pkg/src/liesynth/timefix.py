"""Replace backward evolutions with forward ones, with certified error bounds.

A negative-duration step exp(B t), t < 0, is repaired two ways:

* the one-parameter subgroup {exp(B s)} is closed: shift t by a whole number
  of periods -- an exact replacement;
* otherwise: simultaneous rational approximation of the eigenfrequencies
  finds a forward time tbar with ||exp(B t) - exp(B tbar)|| below a budget.
  The defect is exactly sqrt(2 sum_j (1 - cos(omega_j (tbar + |t|)))), so
  driving every frequency phase within g = arccos(1 - eps^2/(2 dim)) of a
  multiple of 2 pi certifies the bound.

The search is exhaustive (a compiled kernel scans candidates in order).  Two
candidate grids are tried: multiples of |t| (tbar = (a-1)|t|), and, when
that grid's guaranteed range does not fit the cap, whole periods of one
anchor frequency (tbar = 2 pi p / omega_anchor - |t|), which zeroes the
anchor's defect and drops the search dimension by one.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import scan
from .errors import InvalidInput, SearchBudgetExceeded
from .linalg import AlgebraElement, expm, frob_norm
from .program import PulseSchedule

log = logging.getLogger("liesynth.timefix")

PERIOD_TOL = 1e-12
EXACT_BOUND = 1e-10
DEFAULT_CAP = 1_000_000_000
GRID_FALLBACK_BUDGET = 1_000_000
MAX_RATIO_DENOMINATOR = 1_000_000
MAX_PERIOD_MULTIPLE = 1_000_000_000


@dataclass(frozen=True)
class FrequencySet:
    """Eigenvalue phases i*omega_j of a generator, with multiplicity."""

    omegas: Tuple[float, ...]

    @classmethod
    def of(cls, b: AlgebraElement) -> "FrequencySet":
        return cls(tuple(float(w) for w in b.omegas))

    @property
    def dim(self) -> int:
        return len(self.omegas)

    def defect(self, delta_t: float) -> float:
        """||1 - exp(B delta_t)|| from the frequencies alone."""
        vals = 1.0 - np.cos(np.array(self.omegas) * delta_t)
        return float(np.sqrt(2.0 * max(vals.sum(), 0.0)))

    def unique_magnitudes(self) -> List[float]:
        mags = sorted(abs(w) for w in self.omegas)
        top = mags[-1] if mags else 0.0
        floor = 1e-12 * max(1.0, top)
        uniq: List[float] = []
        for w in mags:
            if w <= floor:
                continue
            if not uniq or abs(w - uniq[-1]) > 1e-9 * max(1.0, w):
                uniq.append(w)
        return uniq


@dataclass(frozen=True)
class Replacement:
    """Forward time with a certified deviation bound."""

    t_bar: float
    bound: float
    exact: bool


def _convergents(x: float, max_q: int):
    """Continued-fraction convergents p/q of x with q <= max_q."""
    p_prev, q_prev = 1, 0
    p_cur, q_cur = int(math.floor(x)), 1
    yield p_cur, q_cur
    rem = x - math.floor(x)
    while q_cur <= max_q and rem > 1e-15:
        x = 1.0 / rem
        a = int(math.floor(x))
        rem = x - a
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur
        if q_cur > max_q:
            return
        yield p_cur, q_cur


def _best_rational(x: float, max_q: int, tol: float) -> Optional[Tuple[int, int]]:
    for p, q in _convergents(x, max_q):
        if abs(x - p / q) < tol:
            return p, q
    return None


def detect_period(b: AlgebraElement, tol: float = PERIOD_TOL) -> Optional[float]:
    """Smallest T > 0 with exp(B T) = 1 within tol, or None.

    Frequency ratios are matched to rationals with denominators up to
    MAX_RATIO_DENOMINATOR via continued fractions; the candidate period is
    then verified against the actual exponential, so a spuriously accepted
    ratio cannot slip through.
    """
    freqs = FrequencySet.of(b)
    uniq = freqs.unique_magnitudes()
    if not uniq:
        return None  # zero generator: exp(B t) = 1 for every t, no minimal period
    base = uniq[0]
    numerators: List[int] = []
    denominators: List[int] = []
    for w in uniq:
        approx = _best_rational(w / base, MAX_RATIO_DENOMINATOR, 1e-9)
        if approx is None:
            return None
        numerators.append(approx[0])
        denominators.append(approx[1])
    lcm = 1
    for q in denominators:
        lcm = lcm * q // math.gcd(lcm, q)
        if lcm > MAX_PERIOD_MULTIPLE:
            return None
    counts = [lcm // q * p for p, q in zip(numerators, denominators)]
    g = 0
    for c in counts:
        g = math.gcd(g, c)
    period = 2.0 * math.pi * (lcm / g) / base
    if frob_norm(expm(b, period) - np.eye(b.dim)) <= tol:
        return period
    return None


def _exact_replacement(b: AlgebraElement, t: float) -> Optional[Replacement]:
    freqs = FrequencySet.of(b)
    if not freqs.unique_magnitudes():
        return Replacement(0.0, 0.0, exact=True)
    period = detect_period(b)
    if period is None:
        return None
    t_bar = t % period
    bound = freqs.defect(t_bar - t)
    if bound <= EXACT_BOUND:
        return Replacement(t_bar, bound, exact=True)
    return None  # |t| spans so many periods that rounding ate the exactness


def positive_time(
    b: AlgebraElement, t: float, eps: float, cap: int = DEFAULT_CAP
) -> Replacement:
    """Forward time tbar >= 0 with ||exp(B t) - exp(B tbar)|| < eps, for t < 0.

    Closed subgroups are handled exactly.  Otherwise the per-frequency phase
    target g = arccos(1 - eps^2/(2 dim)) fixes the scan tolerance 1/k, and
    candidates are scanned exhaustively as described in the module docstring.
    Raises SearchBudgetExceeded when no grid yields a hit within cap
    candidates (eps too small for exhaustive search; relax it).
    """
    if t >= 0:
        raise InvalidInput(f"duration must be negative, got {t}")
    if eps <= 0:
        raise InvalidInput(f"tolerance must be positive, got {eps}")
    exact = _exact_replacement(b, t)
    if exact is not None and exact.bound <= eps:
        return exact

    freqs = FrequencySet.of(b)
    n = freqs.dim
    abst = abs(t)
    arg = max(1.0 - eps * eps / (2.0 * n), -1.0)
    g = math.acos(arg)
    k = int(math.floor(2.0 * math.pi / g)) + 1
    tol = 1.0 / k
    uniq = freqs.unique_magnitudes()
    log.debug("dirichlet search: %d frequencies, k=%d, cap=%d", len(uniq), k, cap)

    # Stage 1: multiples of |t|.  Guaranteed hit within k^m candidates; scan
    # that far when it fits the cap, otherwise spend a small fixed budget in
    # case |t| is nearly commensurate with the frequencies.
    guaranteed = k ** len(uniq)
    stage1_stop = (guaranteed if guaranteed <= cap else min(cap, GRID_FALLBACK_BUDGET)) + 1
    alphas = [(w * abst / (2.0 * math.pi)) % 1.0 for w in uniq]
    a = scan.first_hit(alphas, tol, 1, stage1_stop)
    if a > 0:
        t_bar = (a - 1) * abst
        bound = freqs.defect(t_bar + abst)
        if bound <= eps:
            log.debug("grid hit at a=%d", a)
            return Replacement(t_bar, bound, exact=False)

    # Stage 2: whole periods of an anchor frequency (largest first), which
    # zeroes that frequency's defect and searches only the others.
    for anchor in reversed(uniq):
        anchor_period = 2.0 * math.pi / anchor
        p_min = max(1, math.ceil(abst / anchor_period - 1e-12))
        others = [(w / anchor) % 1.0 for w in uniq if w != anchor]
        p = scan.first_hit(others, tol, p_min, p_min + cap)
        if p < 0:
            continue
        t_total = 2.0 * math.pi * p / anchor
        t_bar = max(t_total - abst, 0.0)
        bound = freqs.defect(t_bar + abst)
        if bound <= eps:
            log.debug("anchored hit at p=%d (anchor %.6g)", p, anchor)
            return Replacement(t_bar, bound, exact=False)
    raise SearchBudgetExceeded(
        f"no forward time within {cap} candidates for eps={eps:.2e}; relax eps"
    )


def rewrite_schedule(
    schedule: PulseSchedule,
    generators: Sequence[AlgebraElement],
    eps_total: float,
    n_reps: int = 1,
    cap: int = DEFAULT_CAP,
) -> Tuple[PulseSchedule, float, List[dict]]:
    """Replace every negative step; return (schedule, certified bound, report).

    Exact (periodic) replacements are free.  The eps_total budget is split
    uniformly over the negative non-periodic steps as
    eps_total / (n_reps * n_neg * 2): each replaced factor contributes at
    most twice its defect to the product error (telescoping), and repeating
    the product n_reps times amplifies linearly (unitary power inequality).
    The returned bound is that accumulated certificate.
    """
    if eps_total <= 0:
        raise InvalidInput(f"error budget must be positive, got {eps_total}")
    if n_reps < 1:
        raise InvalidInput(f"repetition count must be >= 1, got {n_reps}")

    exact_cache: dict = {}

    def exact_for(gen: int, dur: float) -> Optional[Replacement]:
        key = (gen, dur)
        if key not in exact_cache:
            exact_cache[key] = _exact_replacement(generators[gen], dur)
        return exact_cache[key]

    n_neg = sum(
        1
        for gen, dur in schedule.steps
        if dur < 0 and exact_for(gen, dur) is None
    )
    eps_step = eps_total / (n_reps * n_neg * 2) if n_neg else eps_total

    new_steps: List[Tuple[int, float]] = []
    report: List[dict] = []
    total = 0.0
    for i, (gen, dur) in enumerate(schedule.steps):
        if dur >= 0:
            new_steps.append((gen, dur))
            continue
        rep = exact_for(gen, dur)
        if rep is None:
            rep = positive_time(generators[gen], dur, eps_step, cap=cap)
        new_steps.append((gen, rep.t_bar))
        total += 2.0 * rep.bound
        report.append(
            {
                "step_index": i,
                "gen": gen,
                "t_old": dur,
                "t_new": rep.t_bar,
                "exact": rep.exact,
                "bound": rep.bound,
            }
        )
    return PulseSchedule(tuple(new_steps)), n_reps * total, report
