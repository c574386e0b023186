"""Executable affine invariant point prescribed on one orbit.

Given a body K and a point x fixed by every affine symmetry of K, the map

    p(A) = w(A) * g*(A) x + (1 - w(A)) * b(A)

is affine-equivariant with p(K) = x. Here ``g*(A) K`` is the orbit member
nearest to A, the weight ``w`` ramps from 1 on the orbit to 0 outside an invariant
neighbourhood, and ``b`` is a built-in invariant point used far away.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .corpus import regular_polygon
from .errors import (
    AffinvError,
    EvaluationUnstable,
    MinDeltaReached,
    TargetNotFixed,
    TargetNotInterior,
    ValidationError,
)
from .geometry import ConvexBody, apply_affine, contains_point, facet_clearance, invert, relative_depth
from .orbit import DEFAULT_CONFIG, AlignmentResult, BumpParams, SolverConfig, orbit_distance, ramp
from .points import BaseInvariantPointId, evaluate_base
from .sampling import RandomSpec, random_affine, random_body, random_polygon
from .symmetry import DEFAULT_TOL_FIX, affine_symmetry_group, max_displacement

log = logging.getLogger(__name__)

ORBIT_TOL = 1e-4
MIXED_TOL = 1e-2
CAL_STREAM = 7
MIN_OUTER = 1e-4
CAL_MAX_NOISE = 4e-2


@dataclass(frozen=True, eq=False)
class InvariantPointDescriptor:
    base_body: ConvexBody
    target: tuple
    bump: BumpParams
    base_point: BaseInvariantPointId = BaseInvariantPointId.CENTROID
    proper_mode: bool = False
    interior_margin: float = 0.0
    calibration: dict | None = field(default=None, compare=False)

    @property
    def x(self) -> np.ndarray:
        return np.array(self.target)

    def to_dict(self) -> dict:
        return {
            "base_body": self.base_body.to_dict(),
            "target": list(self.target),
            "bump": self.bump.to_dict(),
            "base_point": self.base_point.value,
            "proper": self.proper_mode,
            "margin": self.interior_margin,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InvariantPointDescriptor":
        """Load and re-validate a serialized descriptor."""
        try:
            K = ConvexBody.from_dict(data["base_body"])
            desc = cls(K, tuple(float(c) for c in data["target"]), BumpParams.from_dict(data["bump"]),
                       BaseInvariantPointId.parse(data.get("base_point", "centroid")),
                       bool(data.get("proper", False)), float(data.get("margin", 0.0)))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed descriptor: {exc}") from None
        _check_fixed(desc.base_body, desc.x)
        if desc.proper_mode and not (desc.interior_margin > 0
                                     and contains_point(K, desc.x, desc.interior_margin)):
            raise TargetNotInterior("descriptor margin ball is not inside the base body")
        return desc


def _check_fixed(K: ConvexBody, x: np.ndarray, tol_fix: float = DEFAULT_TOL_FIX):
    if x.shape != (K.dim,):
        raise ValidationError("target has wrong dimension")
    G = affine_symmetry_group(K)
    disp, g = max_displacement(G, x)
    if disp > tol_fix * K.diameter:
        raise TargetNotFixed(
            f"target is moved by a symmetry of the base body (displacement {disp:.3e}): {g!r}",
            element=g, displacement=disp)
    return G


def build(K: ConvexBody, x, base_point="centroid", bump: BumpParams = BumpParams(),
          tol_fix: float = DEFAULT_TOL_FIX) -> InvariantPointDescriptor:
    """Descriptor for p with p(K) = x; x must be fixed by K's stabilizer."""
    x = np.asarray(x, dtype=float)
    _check_fixed(K, x, tol_fix)
    return InvariantPointDescriptor(K, tuple(x.tolist()), bump, BaseInvariantPointId.parse(base_point))


def _calibration_bodies(K: ConvexBody, count: int, seed: int, max_noise: float = CAL_MAX_NOISE):
    spec = RandomSpec(seed)
    levels = np.geomspace(1e-3, max_noise, count)
    for i, level in enumerate(levels):
        yield random_body(spec.rng(CAL_STREAM, i), K, float(level), condition_cap=10.0)


def build_proper(K: ConvexBody, x, base_point="centroid", bump: BumpParams = BumpParams(),
                 cfg: SolverConfig = DEFAULT_CONFIG, samples: int = 24, seed: int = 0,
                 margin_factor: float = 0.5, tol_fix: float = DEFAULT_TOL_FIX,
                 max_noise: float = CAL_MAX_NOISE) -> InvariantPointDescriptor:
    """Like :func:`build`, additionally guaranteeing p(A) is interior to A.

    Each calibration body A is pulled back into K's frame by its nearest orbit
    map g*, and the ball of radius ``margin`` around ``g*^-1 f(r(A))`` must lie
    inside ``g*^-1 A``. The bump thresholds are halved until every calibration
    body below the outer level passes.
    """
    if not 0.0 < margin_factor < 1.0:
        raise ValidationError("margin_factor must lie in (0, 1)")
    desc = build(K, x, base_point, bump, tol_fix)
    xv = desc.x
    clearance = facet_clearance(K, xv)
    if clearance <= 1e-9 * K.diameter:
        raise TargetNotInterior(f"target is not interior to the base body (clearance {clearance:.3e})")
    margin = margin_factor * clearance

    scored = []
    for A in _calibration_bodies(K, samples, seed, max_noise):
        res = orbit_distance(A, K, cfg)
        back = invert(res.best_map)
        scored.append((res.objective, facet_clearance(apply_affine(back, A), back(res.orbit_point(xv)))))

    inner, outer = bump.inner, bump.outer
    halvings = 0
    while True:
        bad = [D for D, room in scored if D < outer and room < margin]
        if not bad:
            break
        inner, outer = 0.5 * inner, 0.5 * outer
        halvings += 1
        if outer < MIN_OUTER:
            raise MinDeltaReached(
                f"interior calibration failed: the outer level fell below {MIN_OUTER:g} "
                f"with {len(bad)} failing samples")
    inside = sum(D < outer for D, _ in scored)
    calib = {"halvings": halvings, "samples": len(scored), "samples_inside": inside,
             "margin": margin, "outer": outer, "inner": inner}
    log.info("proper calibration: %s", calib)
    return InvariantPointDescriptor(K, desc.target, BumpParams(inner, outer), desc.base_point,
                                    True, margin, calib)


@dataclass(frozen=True, eq=False)
class EvaluationTrace:
    point: np.ndarray
    weight: float
    objective: float
    orbit_point: np.ndarray | None   # g* x, when weight > 0
    base_value: np.ndarray           # built-in point of A
    alignment: AlignmentResult | None


def evaluate_detailed(desc: InvariantPointDescriptor, A: ConvexBody,
                      cfg: SolverConfig = DEFAULT_CONFIG) -> EvaluationTrace:
    if A.dim != desc.base_body.dim:
        raise ValidationError("body dimension differs from descriptor")
    base = evaluate_base(desc.base_point, A)
    try:
        res = orbit_distance(A, desc.base_body, cfg)
    except AffinvError as exc:
        log.warning("orbit distance failed (%s); falling back to base point", exc)
        return EvaluationTrace(base, 0.0, float("inf"), None, base, None)
    weight = ramp(res.objective, desc.bump)
    if weight == 0.0:
        return EvaluationTrace(base, 0.0, res.objective, None, base, res)
    fx = res.orbit_point(desc.x)
    if not np.isfinite(fx).all():
        raise EvaluationUnstable(f"retraction produced a non-finite image (objective {res.objective:.3e})")
    point = weight * fx + (1.0 - weight) * base
    return EvaluationTrace(point, weight, res.objective, fx, base, res)


def evaluate(desc: InvariantPointDescriptor, A: ConvexBody, cfg: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
    return evaluate_detailed(desc, A, cfg).point


@dataclass
class TrialRecord:
    index: int
    kind: str
    rel_err: float | None
    weight: float | None = None
    weight_image: float | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class EquivarianceReport:
    trials: list

    @property
    def failures(self) -> int:
        return sum(t.error is not None for t in self.trials)

    def _max(self, kinds=None) -> float:
        vals = [t.rel_err for t in self.trials
                if t.rel_err is not None and (kinds is None or t.kind in kinds)]
        return max(vals) if vals else 0.0

    @property
    def max_rel_err(self) -> float:
        return self._max()

    @property
    def max_orbit_err(self) -> float:
        return self._max({"orbit"})

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.max_rel_err <= MIXED_TOL and self.max_orbit_err <= ORBIT_TOL

    def to_dict(self) -> dict:
        return {
            "max_rel_err": self.max_rel_err,
            "max_orbit_err": self.max_orbit_err,
            "by_kind": {k: self._max({k}) for k in ("orbit", "perturbed", "far")},
            "failures": self.failures,
            "tolerances": {"overall": MIXED_TOL, "orbit": ORBIT_TOL},
            "note": "optimizer basin noise dominates off-orbit, hence the looser overall tolerance",
            "pass": self.passed,
            "trials": [t.to_dict() for t in self.trials],
        }


KINDS = ("orbit", "perturbed", "far")


def _trial_body(kind: str, rng, K: ConvexBody, noise_level: float) -> ConvexBody:
    if kind == "orbit":
        return random_body(rng, K, 0.0, condition_cap=10.0)
    if kind == "perturbed":
        return random_body(rng, K, noise_level, condition_cap=10.0)
    return random_polygon(rng)


def equivariance_report(desc: InvariantPointDescriptor, trials: int = 90, seed: int = 0,
                        cfg: SolverConfig = DEFAULT_CONFIG, noise_level: float = 0.005,
                        condition_cap: float = 20.0) -> EquivarianceReport:
    """Compare p(hA) with h p(A) over orbit, perturbed and far bodies (1:1:1)."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    spec = RandomSpec(seed, condition_cap, noise_level)
    records = []
    for i in range(trials):
        kind = KINDS[i % 3]
        rng = spec.rng(i)
        try:
            A = _trial_body(kind, rng, desc.base_body, noise_level)
            h = random_affine(rng, A.dim, condition_cap)
            hA = apply_affine(h, A)
            ta = evaluate_detailed(desc, A, cfg)
            tb = evaluate_detailed(desc, hA, cfg)
            err = float(np.linalg.norm(tb.point - h(ta.point)) / hA.diameter)
            records.append(TrialRecord(i, kind, err, ta.weight, tb.weight))
        except AffinvError as exc:
            records.append(TrialRecord(i, kind, None, error=f"{type(exc).__name__}: {exc}"))
    return EquivarianceReport(records)


@dataclass
class PropernessReport:
    violations: int
    regimes: dict
    min_clearance: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {"violations": self.violations, "regimes": self.regimes,
                "min_relative_clearance": self.min_clearance, "samples": self.samples,
                "pass": self.passed}


def _farthest_shape(K: ConvexBody, cfg: SolverConfig) -> ConvexBody:
    """Of a triangle, a square and a 12-gon, the one worst approximated by K's orbit."""
    shapes = [regular_polygon(k) for k in (3, 4, 12)]
    return max(shapes, key=lambda S: orbit_distance(S, K, cfg).objective)


def properness_report(desc: InvariantPointDescriptor, trials: int = 200, seed: int = 0,
                      cfg: SolverConfig = DEFAULT_CONFIG) -> PropernessReport:
    """Count bodies A for which p(A) is not strictly interior to A."""
    if not desc.proper_mode:
        raise ValidationError("properness report needs a proper-mode descriptor")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    K = desc.base_body
    spec = RandomSpec(seed)
    # noise levels reaching from deep inside the inner level out past the outer one
    lo = max(desc.bump.inner * 0.02, 1e-5)
    hi = max(desc.bump.outer * 0.5, 4e-2)
    far_shape = _farthest_shape(K, cfg)
    regimes = {"weight=1": 0, "0<weight<1": 0, "weight=0": 0}
    violations, worst = 0, np.inf
    for i in range(trials):
        rng = spec.rng(11, i)
        kind = i % 4
        if kind == 0:
            A = random_body(rng, K, 0.0, condition_cap=10.0)
        elif kind == 3:
            A = random_polygon(rng) if (i // 4) % 2 == 0 else random_body(rng, far_shape, 0.01, 10.0)
        else:
            A = random_body(rng, K, float(np.exp(rng.uniform(np.log(lo), np.log(hi)))), condition_cap=10.0)
        tr = evaluate_detailed(desc, A, cfg)
        regimes["weight=1" if tr.weight == 1.0 else "weight=0" if tr.weight == 0.0 else "0<weight<1"] += 1
        depth = relative_depth(A, tr.point)
        worst = min(worst, depth)
        if not facet_clearance(A, tr.point) > 0.0:
            violations += 1
    return PropernessReport(violations, regimes, float(worst), trials)
