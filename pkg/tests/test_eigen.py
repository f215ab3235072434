import numpy as np
import pytest

from analysis.eigen import (
    check_weight,
    eigen_functional,
    euler_lagrange_residual,
    p2_oracle,
    principal_eigen,
    rayleigh,
    tilde_u,
)
from analysis.energy import seminorm_p, weighted_mass
from analysis.grid import build_grid
from analysis.kernel import KernelSpec, assemble
from analysis.rearrange import class_from_spec
from analysis.validate import check_eigen_oracle
from core import ConvergenceError, EigenConfig


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_two_cells_with_constant_weight(interval, pure_assembly, p):
    grid, assembly = interval(2), pure_assembly(2, p, 0.3)
    result = principal_eigen(assembly, grid, np.ones(2))
    assert result.lambda_ == pytest.approx(2.0 * assembly.kappa[0] / grid.cell_measure, rel=1e-10)
    assert result.u[0] == pytest.approx(result.u[1], rel=1e-10)


def test_matches_dense_oracle(setup_1d, rng):
    grid, assembly = setup_1d(16, p=2.0, s=0.4)
    g = class_from_spec("binary{0.25}", grid).random_member(rng)
    result = principal_eigen(assembly, grid, g)
    assert result.lambda_ == pytest.approx(p2_oracle(assembly, grid, g), rel=1e-8)
    assert np.all(result.u > 0)
    assert result.normalization_defect <= 1e-10


def test_dense_oracle_with_full_support(setup_1d):
    grid, assembly = setup_1d(8, p=2.0, s=0.4)
    g = np.linspace(0.5, 1.5, 8)
    result = principal_eigen(assembly, grid, g)
    assert result.lambda_ == pytest.approx(p2_oracle(assembly, grid, g), rel=1e-8)


@pytest.mark.parametrize("p, s", [(3.0, 0.3), (2.5, 0.3)])
def test_eigenpair_satisfies_first_order_condition(setup_1d, p, s):
    grid, assembly = setup_1d(16, p=p, s=s)
    g = np.zeros(16)
    g[4:12] = 1.0
    result = principal_eigen(assembly, grid, g)
    assert np.all(result.u > 0)
    assert rayleigh(assembly, grid, g, result.u) == pytest.approx(result.lambda_, rel=1e-12)
    residual = euler_lagrange_residual(assembly, grid, g, result.u, result.lambda_)
    assert residual <= 1e-8 * result.lambda_


@pytest.mark.parametrize("c", [0.5, 2.0, 10.0])
def test_scaling_the_weight(setup_1d, c):
    grid, assembly = setup_1d(16, p=3.0, s=0.3)
    g = np.linspace(0.0, 1.0, 16)
    base = principal_eigen(assembly, grid, g).lambda_
    assert principal_eigen(assembly, grid, c * g).lambda_ == pytest.approx(base / c, rel=1e-9)


def test_larger_weight_lowers_the_eigenvalue(setup_1d):
    grid, assembly = setup_1d(16, p=2.0, s=0.4)
    small = np.zeros(16)
    small[6:10] = 1.0
    large = small.copy()
    large[4:12] = 1.0
    assert principal_eigen(assembly, grid, large).lambda_ < principal_eigen(assembly, grid, small).lambda_


def test_functional_supremum_at_tilde_u(setup_1d):
    grid, assembly = setup_1d(8, p=3.0, s=0.3)
    g = np.linspace(1.0, 0.2, 8)
    result = principal_eigen(assembly, grid, g)
    peak = eigen_functional(assembly, grid, g, tilde_u(result, 3.0))
    assert peak == pytest.approx(1.0 / result.lambda_**2, rel=1e-9)
    assert eigen_functional(assembly, grid, g, 1.1 * tilde_u(result, 3.0)) < peak
    assert eigen_functional(assembly, grid, g, 0.9 * tilde_u(result, 3.0)) < peak


def test_multiple_starts_keep_the_lowest(setup_1d):
    grid, assembly = setup_1d(8, p=2.0, s=0.4)
    g = np.ones(8)
    result = principal_eigen(assembly, grid, g, EigenConfig(starts=3, seed=7))
    assert len(result.start_lambdas) == 3
    assert result.lambda_ == min(result.start_lambdas)
    np.testing.assert_allclose(result.start_lambdas, result.lambda_, rtol=1e-8)


def test_warm_start_is_accepted(setup_1d):
    grid, assembly = setup_1d(8, p=2.0, s=0.4)
    g = np.ones(8)
    cold = principal_eigen(assembly, grid, g)
    warm = principal_eigen(assembly, grid, g, initial=cold.u)
    assert warm.lambda_ == pytest.approx(cold.lambda_, rel=1e-10)
    assert warm.iterations <= cold.iterations
    # A start that misses the support of g falls back to the indicator
    g_left = np.zeros(8)
    g_left[:2] = 1.0
    start = np.zeros(8)
    start[-1] = 1.0
    assert principal_eigen(assembly, grid, g_left, initial=start).lambda_ > 0


def test_iteration_budget(setup_1d):
    grid, assembly = setup_1d(16, p=3.0, s=0.3)
    g = np.linspace(0.0, 1.0, 16)
    with pytest.raises(ConvergenceError) as info:
        principal_eigen(assembly, grid, g, EigenConfig(max_iters=2))
    assert info.value.diagnostics["solver"] == "principal_eigen"
    assert info.value.diagnostics["iterations"] == 2


@pytest.mark.parametrize("g", [[1.0, -1.0, 1.0, 1.0], [0.0, 0.0, 0.0, 0.0], [1.0, np.nan, 0.0, 0.0]])
def test_invalid_weights(interval, g):
    with pytest.raises(ValueError):
        check_weight(interval(4), g)


def test_dense_oracle_needs_p2(setup_1d):
    grid, assembly = setup_1d(4, p=3.0, s=0.3)
    with pytest.raises(ValueError):
        p2_oracle(assembly, grid, np.ones(4))


def test_built_in_eigen_checks(rng):
    checks = check_eigen_oracle(rng, n=16)
    assert [c.check for c in checks] == [
        "eigen_p2_oracle",
        "eigen_homogeneity",
        "eigen_positivity",
        "eigen_normalization",
    ]
    assert all(c.passed for c in checks)


@pytest.mark.slow
def test_fine_grid_random_weights(setup_1d, rng):
    grid, assembly = setup_1d(128, p=2.0, s=0.4)
    cls = class_from_spec("binary{0.25}", grid)
    for _ in range(20):
        g = cls.random_member(rng)
        result = principal_eigen(assembly, grid, g)
        assert result.lambda_ == pytest.approx(p2_oracle(assembly, grid, g), rel=1e-8)


def test_random_starts_agree_away_from_p2(setup_1d, rng):
    grid, assembly = setup_1d(16, p=3.0, s=0.3)
    g = class_from_spec("binary{0.25}", grid).random_member(rng)
    result = principal_eigen(assembly, grid, g, EigenConfig(starts=4, seed=3))
    np.testing.assert_allclose(result.start_lambdas, result.lambda_, rtol=1e-8)
    assert np.all(result.u > 0)


def test_functional_never_exceeds_its_supremum(setup_1d, rng):
    grid, assembly = setup_1d(8, p=3.0, s=0.3)
    g = class_from_spec("linear-ramp{0,1}", grid).random_member(rng)
    result = principal_eigen(assembly, grid, g)
    best = tilde_u(result, 3.0)
    peak = eigen_functional(assembly, grid, g, best)
    assert peak == pytest.approx(1.0 / result.lambda_**2, rel=1e-9)

    fields = [rng.uniform(0.01, 1.0, 8) for _ in range(60)]
    fields += [np.abs(best * (1.0 + 0.05 * rng.normal(size=8))) for _ in range(60)]
    for v in fields:
        # Best multiple of v: t^p = M / S^2
        t = (weighted_mass(grid, g, v, 3.0) / seminorm_p(assembly, v) ** 2) ** (1.0 / 3.0)
        assert eigen_functional(assembly, grid, g, t * v) <= peak * (1 + 1e-10)
        assert eigen_functional(assembly, grid, g, v) <= peak * (1 + 1e-10)


def test_square_matches_dense_oracle(rng):
    grid = build_grid(2, [[0.0, 1.0], [0.0, 1.0]], [4, 4])
    assembly = assemble(grid, KernelSpec(p=2.0, s=0.3))
    g = class_from_spec("binary{0.25}", grid).random_member(rng)
    result = principal_eigen(assembly, grid, g)
    assert result.lambda_ == pytest.approx(p2_oracle(assembly, grid, g), rel=1e-8)
    assert np.all(result.u > 0)
