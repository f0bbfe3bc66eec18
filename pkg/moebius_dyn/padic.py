"""p-adic dynamics of f: fixed-point character, Siegel disks, basins and radius maps.

Parameters and orbit points are rationals. Fixed points live in Q or in a
quadratic extension Q(sqrt(D)), so every norm below is computed exactly as
a PVal.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .errors import ConsistencyError, InvalidRationalError, NeedsPointError, WrongCaseError
from .exact import PVal, QuadExt, padic_val, quad_val, require_prime, valuation
from .moebius import (
    DEFAULT_QMAX,
    BadPointSet,
    FixedPointSet,
    MoebiusMap,
    Value,
    Which,
    alpha_beta,
    apply,
    bad_points,
    fixed_points,
    iterate_naive,
    min_period,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionFails:
    """A sufficient condition did not hold; ``clause`` is the first failing clause (1-based)."""

    condition: str
    clause: int
    detail: str

    @property
    def success(self) -> bool:
        return False


@dataclass(frozen=True)
class PadicContext:
    """Exact data of f over Q_p, fixed once at construction.

    Build with ``PadicContext.create(f, p)``.
    """

    f: MoebiusMap
    p: int
    fixed: FixedPointSet
    alpha: Value
    beta: Value
    norm_alpha: PVal
    norm_beta: PVal
    norm_b: PVal
    norm_det: PVal

    @classmethod
    def create(cls, f: MoebiusMap, p: int) -> "PadicContext":
        """Compute fixed points, alpha, beta and their norms for f over Q_p.

        Raises:
            InvalidPrimeError: p is not prime.
            InvalidRationalError: f has float parameters.
            ConsistencyError: |alpha|*|beta| != |c - ab|.
        """
        require_prime(p)
        if not f.is_exact:
            raise InvalidRationalError("p-adic contexts need exact parameters")

        fixed = fixed_points(f, closed=True)
        alpha, beta = alpha_beta(f)
        ctx = cls(
            f=f,
            p=p,
            fixed=fixed,
            alpha=alpha,
            beta=beta,
            norm_alpha=valuation(alpha, p),
            norm_beta=valuation(beta, p),
            norm_b=padic_val(f.b, p),
            norm_det=padic_val(f.determinant, p),
        )
        if ctx.norm_alpha * ctx.norm_beta != ctx.norm_det:
            raise ConsistencyError(
                f"|alpha|*|beta| = {ctx.norm_alpha * ctx.norm_beta} but |c-ab| = {ctx.norm_det}"
            )
        log.debug("p-adic context p=%d: |alpha|=%s |beta|=%s", p, ctx.norm_alpha, ctx.norm_beta)
        return ctx

    @property
    def discriminant(self) -> Fraction:
        return self.f.discriminant

    @property
    def double(self) -> bool:
        return self.fixed.double

    def point(self, which: Which) -> Value:
        return self.fixed.point(which)

    def other(self, which: Which) -> Optional[Which]:
        """The other fixed point's label, None in the D = 0 case."""
        if self.double:
            return None
        return Which.X2 if which == Which.X1 else Which.X1

    def norm(self, x: Value) -> PVal:
        return valuation(x, self.p)

    def multiplier_value(self, which: Which) -> Value:
        """b*x* + c at a fixed point: alpha at x1 (and x0), beta at x2."""
        return self.beta if which == Which.X2 else self.alpha

    @property
    def separation(self) -> PVal:
        """|x1 - x2|_p = |sqrt(D)/b|_p."""
        return padic_val(self.discriminant, self.p).sqrt() / self.norm_b

    def distance(self, x: Union[Fraction, int], which: Which) -> PVal:
        """|x - x*|_p for a rational x.

        Rational fixed points are handled directly. For a fixed point in a
        quadratic extension, |x - x1|*|x - x2| = |P(x)/b| with
        P(x) = b*x^2 + (c-1)*x - a, and |x1 - x2| = |sqrt(D)/b|. If
        sqrt(|P(x)/b|) reaches the separation both distances are equal;
        otherwise one of them is the separation and the other the quotient,
        and the pinned embedding tells which.
        """
        target = self.point(which)
        if not isinstance(target, QuadExt):
            return padic_val(Fraction(x) - target, self.p)

        f = self.f
        x = Fraction(x)
        product = padic_val(f.b * x * x + (f.c - 1) * x - f.a, self.p) / self.norm_b
        half = product.sqrt()
        if half >= self.separation:
            return half

        near = product / self.separation
        own = quad_val(x - target, self.p)
        if own not in (near, self.separation):
            raise ConsistencyError(f"|{x} - {target}|_{self.p} = {own} fits neither {near} nor {self.separation}")
        return own

    def psi_map(self, alpha_star: Optional[PVal] = None) -> "RadiusMapPsi":
        """Radius map about x0 (D = 0): alpha = |(c+1)/(2b)|_p."""
        if not self.double:
            raise WrongCaseError("psi is the D = 0 radius map")
        return RadiusMapPsi(self.norm_alpha / self.norm_b, alpha_star)

    def phi_map(self, which: Which, beta_star: Optional[PVal] = None) -> "RadiusMapPhi":
        """Radius map about x_i: alpha_i = |(1 - b*x_i)/b|_p, beta_i = |(b*x_i + c)/b|_p."""
        if self.double:
            raise WrongCaseError("phi needs two distinct fixed points")
        # 1 - b*x1 = beta and 1 - b*x2 = alpha
        if which == Which.X1:
            return RadiusMapPhi(self.norm_beta / self.norm_b, self.norm_alpha / self.norm_b, beta_star)
        return RadiusMapPhi(self.norm_alpha / self.norm_b, self.norm_beta / self.norm_b, beta_star)

    def bad_points(self, depth: int) -> BadPointSet:
        return bad_points(self.f, depth)


class Kind(str, Enum):
    ATTRACTING = "attracting"
    INDIFFERENT = "indifferent"
    REPELLING = "repelling"


@dataclass(frozen=True)
class FixedPointCharacter:
    which: Which
    point: Value
    multiplier_norm: PVal
    kind: Kind


def fp_character(ctx: PadicContext, which: Which) -> FixedPointCharacter:
    """|f'(x*)|_p = |c - ab|_p / |b*x* + c|_p^2 and the resulting kind."""
    lead = ctx.norm(ctx.multiplier_value(which))
    multiplier = ctx.norm_det / (lead * lead)
    one = PVal.one(ctx.p)
    if multiplier < one:
        kind = Kind.ATTRACTING
    elif multiplier == one:
        kind = Kind.INDIFFERENT
    else:
        kind = Kind.REPELLING
    return FixedPointCharacter(which, ctx.point(which), multiplier, kind)


@dataclass(frozen=True)
class SiegelReport:
    """Siegel disk data.

    For D = 0 the disk is U_radius(x0) and ``escape_steps``/``return_steps``
    record that points outside the disk reach the sphere S_radius(x0) after
    one step and sphere points are back on the sphere within two steps.
    For D != 0 ``relation`` says whether SI(x1) and SI(x2) are "disjoint"
    or "equal".
    """

    centers: tuple
    points: tuple
    radius: PVal
    relation: Optional[str] = None
    separation: Optional[PVal] = None
    escape_steps: Optional[int] = None
    return_steps: Optional[int] = None

    @property
    def success(self) -> bool:
        return True


def siegel_unique(ctx: PadicContext) -> SiegelReport:
    """Siegel disk about the unique fixed point: radius |(c+1)/(2b)|_p.

    Raises:
        WrongCaseError: D != 0.
    """
    if not ctx.double:
        raise WrongCaseError("siegel_unique needs D = 0")
    radius = ctx.psi_map().alpha
    return SiegelReport(
        centers=(Which.UNIQUE,),
        points=ctx.fixed.points,
        radius=radius,
        escape_steps=1,
        return_steps=2,
    )


def siegel_known(ctx: PadicContext) -> Union[SiegelReport, ConditionFails]:
    """Common Siegel radius |sqrt(c-ab)/b|_p of x1 and x2 under condition c1.

    c1 requires |b/sqrt(c-ab)|_p < 1 (clause 1) and both fixed points
    indifferent (clause 2).

    Raises:
        WrongCaseError: D = 0.
    """
    if ctx.double:
        raise WrongCaseError("siegel_known needs D != 0")

    radius = ctx.norm_det.sqrt() / ctx.norm_b
    if not radius > PVal.one(ctx.p):
        return ConditionFails("c1", 1, f"|b/sqrt(c-ab)|_{ctx.p} = {PVal.one(ctx.p) / radius} is not below 1")

    for which in (Which.X1, Which.X2):
        character = fp_character(ctx, which)
        if character.kind is not Kind.INDIFFERENT:
            return ConditionFails(
                "c1", 2, f"|f'({which.value})|_{ctx.p} = {character.multiplier_norm} is not 1"
            )

    separation = ctx.separation
    relation = "disjoint" if separation >= radius else "equal"
    return SiegelReport(
        centers=(Which.X1, Which.X2),
        points=ctx.fixed.points,
        radius=radius,
        relation=relation,
        separation=separation,
    )


@dataclass(frozen=True)
class BasinReport:
    """Basin of an attracting fixed point: everything except ``excluded``.

    ``sphere_radius`` is |(b*x* + c)/b|_p, the radius of the sphere about
    x* whose points are shown to lie in the basin.
    """

    which: Which
    point: Value
    excluded: tuple
    sphere_radius: PVal

    @property
    def success(self) -> bool:
        return True


def basin_check(ctx: PadicContext, which: Which = Which.X1) -> Union[BasinReport, ConditionFails]:
    """Condition c2 at the fixed point ``which``.

    Clause 1: |(c-ab)/(b*x*+c)^2|_p < 1. Clause 2: |b/(b*x*+c)|_p < 1.

    Raises:
        WrongCaseError: D = 0.
    """
    if ctx.double:
        raise WrongCaseError("basin_check needs D != 0")

    character = fp_character(ctx, which)
    one = PVal.one(ctx.p)
    if not character.multiplier_norm < one:
        return ConditionFails("c2", 1, f"|f'({which.value})|_{ctx.p} = {character.multiplier_norm} is not below 1")

    lead = ctx.norm(ctx.multiplier_value(which))
    if not ctx.norm_b / lead < one:
        return ConditionFails("c2", 2, f"|b/(b*{which.value}+c)|_{ctx.p} = {ctx.norm_b / lead} is not below 1")

    other = ctx.other(which)
    return BasinReport(
        which=which,
        point=ctx.point(which),
        excluded=(ctx.f.pole, ctx.point(other)),
        sphere_radius=lead / ctx.norm_b,
    )


@dataclass(frozen=True)
class RadiusMapPsi:
    """psi(r) = r for r < alpha, alpha for r > alpha, alpha* at r = alpha."""

    alpha: PVal
    alpha_star: Optional[PVal] = None


@dataclass(frozen=True)
class RadiusMapPhi:
    """phi(r) = (alpha/beta)*r for r < beta, alpha for r > beta, beta* at r = beta."""

    alpha: PVal
    beta: PVal
    beta_star: Optional[PVal] = None


def psi_step(m: RadiusMapPsi, r: PVal, star: Optional[PVal] = None) -> PVal:
    """One step of psi. ``star`` overrides the map's alpha* on the sphere r = alpha.

    Raises:
        NeedsPointError: r = alpha and no alpha* is known.
    """
    if r < m.alpha:
        return r
    if r > m.alpha:
        return m.alpha
    value = star if star is not None else m.alpha_star
    if value is None:
        raise NeedsPointError(f"psi at its sphere radius {m.alpha} depends on the point")
    if value < m.alpha:
        raise ValueError(f"alpha* = {value} is below alpha = {m.alpha}")
    return value


def psi_orbit(m: RadiusMapPsi, r: PVal, n: int) -> list[PVal]:
    """[r, psi(r), ..., psi^n(r)] using the map's fixed alpha*."""
    radii = [r]
    for _ in range(n):
        radii.append(psi_step(m, radii[-1]))
    return radii


def phi_step(m: RadiusMapPhi, r: PVal, star: Optional[PVal] = None) -> PVal:
    """One step of phi. ``star`` overrides the map's beta* on the sphere r = beta.

    Raises:
        NeedsPointError: r = beta and no beta* is known.
    """
    if r < m.beta:
        return m.alpha / m.beta * r
    if r > m.beta:
        return m.alpha
    value = star if star is not None else m.beta_star
    if value is None:
        raise NeedsPointError(f"phi at its sphere radius {m.beta} depends on the point")
    return value


@dataclass(frozen=True)
class PhiLimit:
    """Limit of phi^n(r) for every r >= 0, and the fixed radii of phi."""

    limit: PVal
    fixed: tuple = field(default_factory=tuple)


def phi_limit(m: RadiusMapPhi) -> PhiLimit:
    """0 with Fix {0} when alpha < beta; alpha with Fix {0, alpha} when alpha > beta.

    Raises:
        WrongCaseError: alpha = beta (the psi case).
    """
    zero = PVal.zero(m.alpha.prime)
    if m.alpha < m.beta:
        return PhiLimit(zero, (zero,))
    if m.alpha > m.beta:
        return PhiLimit(m.alpha, (zero, m.alpha))
    raise WrongCaseError("phi_limit needs alpha != beta")


def radius_trajectory(ctx: PadicContext, x: Union[Fraction, int], which: Which, n: int) -> list[PVal]:
    """[|f^k(x) - x*|_p for k = 0..n] from the exact orbit.

    Every step is checked against the radius map (psi for D = 0, phi about
    x_i otherwise), with the sphere value taken from the orbit itself.

    Raises:
        PoleHit: the orbit reaches the pole.
        ValueError: x is the other fixed point.
        ConsistencyError: a radius disagrees with the radius map.
    """
    x = Fraction(x)
    other = ctx.other(which)
    if other is not None and ctx.point(other) == x:
        raise ValueError(f"x = {x} is the other fixed point {other.value}")

    orbit = iterate_naive(ctx.f, x, n)
    radii = [ctx.distance(y, which) for y in orbit]

    if ctx.double:
        m = ctx.psi_map()
        step = psi_step
    else:
        m = ctx.phi_map(which)
        step = phi_step
    for k in range(n):
        expected = step(m, radii[k], star=radii[k + 1])
        if expected != radii[k + 1]:
            raise ConsistencyError(
                f"radius {radii[k + 1]} at step {k + 1} but the radius map gives {expected}"
            )
    return radii


def sphere_return_steps(ctx: PadicContext, x: Union[Fraction, int], horizon: int = 2) -> Optional[int]:
    """First k in 1..horizon with f^k(x) on the sphere S_alpha(x0), or None (D = 0 only)."""
    if not ctx.double:
        raise WrongCaseError("sphere_return_steps needs D = 0")
    radius = ctx.psi_map().alpha
    y = Fraction(x)
    for k in range(1, horizon + 1):
        y = apply(ctx.f, y, index=k - 1)
        if ctx.distance(y, Which.UNIQUE) == radius:
            return k
    return None


class PadicVerdict(str, Enum):
    PERIODIC = "globally-periodic"
    CONVERGES = "converges-to"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class PadicClassification:
    """Fate of p-adic orbits outside the bad-point set.

    ``ratio`` is |alpha/beta|_p. CONVERGES names the limit; INDIFFERENT
    carries the Siegel report (or the failed condition) of its regime.
    ``excluded`` lists the points outside the statement: the pole and, for
    convergence, the other fixed point.
    """

    verdict: PadicVerdict
    p: int
    qmax: int
    ratio: PVal
    period: Optional[int] = None
    which: Optional[Which] = None
    point: Optional[Value] = None
    excluded: tuple = ()
    siegel: Optional[Union[SiegelReport, ConditionFails]] = None


def classify_padic(ctx: PadicContext, qmax: int = DEFAULT_QMAX) -> PadicClassification:
    """Periodic, convergent or indifferent behaviour over Q_p.

    The parabolic case D = 0 has an indifferent fixed point and is reported
    as INDIFFERENT with its Siegel disk: the spheres about x0 are invariant,
    so no other orbit converges to x0 p-adically.
    """
    ratio = ctx.norm_alpha / ctx.norm_beta
    pole = ctx.f.pole

    period = min_period(ctx.f, qmax)
    if period is not None:
        return PadicClassification(PadicVerdict.PERIODIC, ctx.p, qmax, ratio, period=period, excluded=(pole,))

    if ctx.double:
        return PadicClassification(
            PadicVerdict.INDIFFERENT,
            ctx.p,
            qmax,
            ratio,
            which=Which.UNIQUE,
            point=ctx.point(Which.UNIQUE),
            excluded=(pole,),
            siegel=siegel_unique(ctx),
        )

    one = PVal.one(ctx.p)
    if ratio == one:
        return PadicClassification(
            PadicVerdict.INDIFFERENT, ctx.p, qmax, ratio, excluded=(pole,), siegel=siegel_known(ctx)
        )

    # |alpha/beta| < 1: x2 attracts; > 1: x1 attracts
    which = Which.X2 if ratio < one else Which.X1
    other = ctx.other(which)
    return PadicClassification(
        PadicVerdict.CONVERGES,
        ctx.p,
        qmax,
        ratio,
        which=which,
        point=ctx.point(which),
        excluded=(pole, ctx.point(other)),
    )
