"""p-adic fixed-point character, Siegel disks, basins and radius maps."""

from fractions import Fraction

import pytest

from moebius_dyn.errors import InvalidPrimeError, InvalidRationalError, NeedsPointError, PoleHit, WrongCaseError
from moebius_dyn.exact import PVal, padic_val, quad_val
from moebius_dyn.moebius import MoebiusMap, Which
from moebius_dyn.padic import (
    BasinReport,
    ConditionFails,
    Kind,
    PadicContext,
    PadicVerdict,
    RadiusMapPhi,
    RadiusMapPsi,
    SiegelReport,
    basin_check,
    classify_padic,
    fp_character,
    phi_limit,
    phi_step,
    psi_orbit,
    psi_step,
    radius_trajectory,
    siegel_known,
    siegel_unique,
    sphere_return_steps,
)

F = Fraction
PRIMES = [2, 3, 5, 7]


def context(a, b, c, p) -> PadicContext:
    return PadicContext.create(MoebiusMap.exact(a, b, c), p)


# === Context ===

def test_context_needs_prime():
    with pytest.raises(InvalidPrimeError):
        context(0, 1, 5, 4)


def test_context_needs_exact_map():
    with pytest.raises(InvalidRationalError):
        PadicContext.create(MoebiusMap.numeric(0, 1, 5), 5)


def test_norms_are_multiplicative(rng):
    for _ in range(60):
        a, b, c = (rng.randint(-6, 6) for _ in range(3))
        if b == 0 or c == a * b:
            continue
        for p in PRIMES:
            ctx = context(a, b, c, p)
            assert ctx.norm_alpha * ctx.norm_beta == padic_val(c - a * b, p)


def test_distances_multiply_to_the_quadratic(rng):
    for _ in range(40):
        a, b, c = (rng.randint(-6, 6) for _ in range(3))
        if b == 0 or c == a * b or (c - 1) ** 2 + 4 * a * b == 0:
            continue
        f = MoebiusMap.exact(a, b, c)
        for p in PRIMES:
            ctx = PadicContext.create(f, p)
            x = F(rng.randint(-30, 30), rng.randint(1, 8))
            if x in ctx.fixed.points:
                continue
            quadratic = padic_val(f.b * x * x + (f.c - 1) * x - f.a, p) / ctx.norm_b
            assert ctx.distance(x, Which.X1) * ctx.distance(x, Which.X2) == quadratic


def test_distance_in_a_ramified_extension():
    ctx = context(1, 3, 1, 3)
    x1 = ctx.point(Which.X1)
    assert ctx.distance(0, Which.X1) == quad_val(0 - x1, 3) == PVal(3, F(-1, 2))


def test_distance_at_a_split_prime():
    # D = 13 splits at 3; the pinned embedding decides which point is near
    ctx = context(3, 1, 0, 3)
    assert ctx.distance(0, Which.X1) == PVal.one(3)
    assert ctx.distance(0, Which.X2) == PVal(3, 1)
    assert ctx.distance(1, Which.X1) == PVal(3, 1)
    assert ctx.separation == PVal.one(3)


# === Fixed-point character ===

@pytest.mark.parametrize("p", PRIMES)
def test_character_of_x_over_x_plus_p(p):
    ctx = context(0, 1, p, p)
    assert ctx.fixed.points == (0, 1 - p)
    x1 = fp_character(ctx, Which.X1)
    x2 = fp_character(ctx, Which.X2)
    assert (x1.kind, x1.multiplier_norm) == (Kind.REPELLING, PVal(p, -1))
    assert (x2.kind, x2.multiplier_norm) == (Kind.ATTRACTING, PVal(p, 1))


def test_character_indifferent():
    ctx = context(1, 3, 1, 3)
    assert {fp_character(ctx, w).kind for w in (Which.X1, Which.X2)} == {Kind.INDIFFERENT}


# === Siegel disks ===

def test_siegel_known_equal_disks():
    report = siegel_known(context(1, 3, 1, 3))
    assert isinstance(report, SiegelReport)
    assert report.success
    assert report.radius == PVal(3, -1)
    assert report.separation == PVal(3, F(-1, 2))
    assert report.relation == "equal"


@pytest.mark.parametrize("params,p,clause", [
    ((1, 1, 2), 3, 1),
    ((0, 1, 5), 5, 1),
    ((0, 3, 3), 3, 2),
])
def test_siegel_known_condition_fails(params, p, clause):
    result = siegel_known(context(*params, p))
    assert isinstance(result, ConditionFails)
    assert not result.success
    assert (result.condition, result.clause) == ("c1", clause)


def test_siegel_unique():
    report = siegel_unique(context(1, -1, 3, 2))
    assert report.centers == (Which.UNIQUE,)
    assert report.points == (1,)
    assert report.radius == PVal(2, 1)
    assert (report.escape_steps, report.return_steps) == (1, 2)
    assert siegel_unique(context(1, -1, 3, 3)).radius == PVal.one(3)


def test_siegel_regime_errors():
    with pytest.raises(WrongCaseError):
        siegel_unique(context(1, 3, 1, 3))
    with pytest.raises(WrongCaseError):
        siegel_known(context(1, -1, 3, 2))


# === Basins ===

@pytest.mark.parametrize("p", PRIMES)
def test_basin_of_zero_for_c_one_over_p(p):
    ctx = context(0, 1, F(1, p), p)
    report = basin_check(ctx, Which.X2)
    assert isinstance(report, BasinReport)
    assert report.point == 0
    assert report.excluded == (F(-1, p), 1 - F(1, p))
    assert report.sphere_radius == PVal(p, -1)


@pytest.mark.parametrize("params,p,which,clause", [
    ((0, 1, 5), 5, Which.X2, 2),
    ((0, 1, 5), 5, Which.X1, 1),
    ((3, 1, 0), 3, Which.X1, 2),
])
def test_basin_condition_fails(params, p, which, clause):
    result = basin_check(context(*params, p), which)
    assert isinstance(result, ConditionFails)
    assert (result.condition, result.clause) == ("c2", clause)


def test_basin_needs_two_fixed_points():
    with pytest.raises(WrongCaseError):
        basin_check(context(1, -1, 3, 2))


# === Radius maps ===

def test_psi_step_cases():
    m = RadiusMapPsi(PVal(2, 1))
    assert psi_step(m, PVal(2, 3)) == PVal(2, 3)
    assert psi_step(m, PVal(2, -4)) == PVal(2, 1)
    with pytest.raises(NeedsPointError):
        psi_step(m, PVal(2, 1))
    assert psi_step(m, PVal(2, 1), star=PVal(2, 0)) == PVal(2, 0)
    with pytest.raises(ValueError):
        psi_step(m, PVal(2, 1), star=PVal(2, 2))


def test_psi_orbit_with_known_sphere_value():
    m = RadiusMapPsi(PVal(2, 1), alpha_star=PVal.one(2))
    assert psi_orbit(m, PVal(2, -2), 3) == [PVal(2, -2), PVal(2, 1), PVal.one(2), PVal(2, 1)]


def test_phi_step_cases():
    m = RadiusMapPhi(PVal(5, 1), PVal.one(5))
    assert phi_step(m, PVal(5, 1)) == PVal(5, 2)
    assert phi_step(m, PVal(5, -3)) == PVal(5, 1)
    with pytest.raises(NeedsPointError):
        phi_step(m, PVal.one(5))
    assert phi_step(m, PVal.one(5), star=PVal(5, 7)) == PVal(5, 7)


def test_phi_limits():
    ctx = context(0, 1, 5, 5)
    toward = phi_limit(ctx.phi_map(Which.X2))
    assert toward.limit == PVal.zero(5)
    assert toward.fixed == (PVal.zero(5),)
    away = phi_limit(ctx.phi_map(Which.X1))
    assert away.limit == PVal.one(5)
    assert away.fixed == (PVal.zero(5), PVal.one(5))
    with pytest.raises(WrongCaseError):
        phi_limit(RadiusMapPhi(PVal(3, 1), PVal(3, 1)))


def test_radius_map_regimes():
    with pytest.raises(WrongCaseError):
        context(0, 1, 5, 5).psi_map()
    with pytest.raises(WrongCaseError):
        context(1, -1, 3, 2).phi_map(Which.X1)


# === Exact radius trajectories ===

def test_trajectory_toward_attracting_point():
    radii = radius_trajectory(context(0, 1, 5, 5), 1, Which.X2, 5)
    assert radii == [PVal(5, k + 1) for k in range(6)]


def test_attraction_exponents_grow_for_thirty_steps():
    radii = radius_trajectory(context(0, 1, 5, 5), 1, Which.X2, 30)
    exponents = [r.exponent for r in radii]
    assert exponents == sorted(exponents)
    assert all(e >= n - 2 for n, e in enumerate(exponents))


@pytest.mark.parametrize("params,p", [
    ((0, 1, 5), 5),
    ((0, 1, F(1, 3)), 3),
    ((3, 1, 0), 3),
    ((1, 3, 1), 3),
    ((1, 2, 3), 5),
    ((1, -1, 3), 2),
])
def test_trajectories_follow_the_radius_map(params, p, rng):
    ctx = context(*params, p)
    seen = 0
    for which in ctx.fixed.labels:
        for _ in range(8):
            x = F(rng.randint(-30, 30), rng.randint(1, 7))
            if x in ctx.fixed.points:
                continue
            try:
                radii = radius_trajectory(ctx, x, which, 20)
            except PoleHit:
                continue
            assert len(radii) == 21
            seen += 1
    assert seen > 0


def test_trajectory_about_repelling_point_settles_at_alpha():
    radii = radius_trajectory(context(0, 1, 5, 5), 1, Which.X1, 4)
    assert radii == [PVal.one(5)] * 5


def test_trajectory_with_split_prime():
    radii = radius_trajectory(context(3, 1, 0, 3), 1, Which.X1, 3)
    assert radii == [PVal(3, k + 1) for k in range(4)]


def test_trajectory_in_a_siegel_disk_is_constant():
    radii = radius_trajectory(context(1, 3, 1, 3), 0, Which.X1, 6)
    assert radii == [PVal(3, F(-1, 2))] * 7


def test_parabolic_trajectories():
    ctx = context(1, -1, 3, 2)
    # inside the disk the radius is kept
    assert radius_trajectory(ctx, 5, Which.UNIQUE, 3) == [PVal(2, 2)] * 4
    # outside it lands on the sphere, then leaves it
    assert radius_trajectory(ctx, F(3, 2), Which.UNIQUE, 2) == [PVal(2, -1), PVal(2, 1), PVal.one(2)]


def test_siegel_disk_spheres_are_invariant(rng):
    ctx = context(1, -1, 3, 2)
    for _ in range(10):
        x = 1 + F(4 * rng.randint(1, 40), 2 * rng.randint(0, 20) + 1)
        radii = radius_trajectory(ctx, x, Which.UNIQUE, 20)
        assert len(set(radii)) == 1
        assert radii[0] < PVal(2, 1)


def test_trajectory_rejects_other_fixed_point():
    with pytest.raises(ValueError):
        radius_trajectory(context(0, 1, 5, 5), -4, Which.X1, 3)


def test_trajectory_hits_pole():
    with pytest.raises(PoleHit):
        radius_trajectory(context(1, -1, 3, 2), F(3, 2), Which.UNIQUE, 4)


def test_sphere_return_steps():
    ctx = context(1, -1, 3, 2)
    assert sphere_return_steps(ctx, F(3, 2)) == 1
    assert sphere_return_steps(ctx, -1) == 2
    assert sphere_return_steps(ctx, 5) is None
    with pytest.raises(WrongCaseError):
        sphere_return_steps(context(0, 1, 5, 5), 1)


# === Classification ===

@pytest.mark.parametrize("p", PRIMES)
def test_classify_converges_to_x2(p):
    ctx = context(0, 1, p, p)
    result = classify_padic(ctx)
    assert result.verdict is PadicVerdict.CONVERGES
    assert result.which is Which.X2
    assert result.point == 1 - p
    assert result.excluded == (-p, 0)
    assert result.ratio == PVal(p, 1)


def test_classify_split_prime_converges_to_x1():
    result = classify_padic(context(3, 1, 0, 3))
    assert result.verdict is PadicVerdict.CONVERGES
    assert result.which is Which.X1


def test_classify_periodic():
    result = classify_padic(context(1, 1, -1, 3))
    assert result.verdict is PadicVerdict.PERIODIC
    assert result.period == 2
    assert result.excluded == (1,)


def test_classify_indifferent_regimes():
    known = classify_padic(context(1, 3, 1, 3))
    assert known.verdict is PadicVerdict.INDIFFERENT
    assert isinstance(known.siegel, SiegelReport)

    failed = classify_padic(context(1, 1, 2, 3))
    assert failed.verdict is PadicVerdict.INDIFFERENT
    assert isinstance(failed.siegel, ConditionFails)

    parabolic = classify_padic(context(1, -1, 3, 2))
    assert parabolic.verdict is PadicVerdict.INDIFFERENT
    assert parabolic.which is Which.UNIQUE
    assert parabolic.point == 1
    assert parabolic.siegel.radius == PVal(2, 1)


def test_parabolic_orbits_never_approach_the_fixed_point(rng):
    ctx = context(1, -1, 3, 2)
    result = classify_padic(ctx)
    assert result.verdict is PadicVerdict.INDIFFERENT
    radius = result.siegel.radius
    checked = 0
    for _ in range(20):
        x = F(rng.randint(-40, 40), rng.randint(1, 9))
        if x == 1:
            continue
        try:
            radii = radius_trajectory(ctx, x, Which.UNIQUE, 15)
        except PoleHit:
            continue
        assert min(radii) >= min(radii[0], radius)
        assert not radii[-1].is_zero
        checked += 1
    assert checked > 10


def test_bad_points_from_context():
    assert context(1, 1, -1, 3).bad_points(4).points == (1,)
