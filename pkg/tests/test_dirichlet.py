import numpy as np
import pytest

from analysis.dirichlet import (
    ReactionSpec,
    energy_E,
    default_reaction_exponent,
    linear_solve_oracle,
    objective_and_gradient,
    reaction_from_config,
    solve_dirichlet,
    weak_solution_defect,
)
from analysis.validate import check_dirichlet_oracle
from core import ConvergenceError, DirichletConfig, ReactionConfig


def test_linear_case_matches_dense_solve(setup_1d):
    grid, assembly = setup_1d(16, p=2.0, s=0.4)
    g = np.linspace(0.0, 1.0, 16)
    result = solve_dirichlet(assembly, grid, g, options=DirichletConfig(tol=1e-12))
    np.testing.assert_allclose(result.u, linear_solve_oracle(assembly, grid, g), rtol=0, atol=1e-8)
    assert np.all(result.u > 0)


@pytest.mark.parametrize("p, s", [(2.0, 0.4), (3.0, 0.3), (2.5, 0.3)])
def test_energy_and_compliance_without_reaction(setup_1d, p, s):
    grid, assembly = setup_1d(16, p=p, s=s)
    g = np.ones(16)
    result = solve_dirichlet(assembly, grid, g)
    assert result.residual <= 1e-9
    # At the maximizer, seminorm_p(u) equals the compliance
    assert result.energy == pytest.approx((1.0 - 1.0 / p) * result.compliance, rel=1e-6)
    assert np.max(np.abs(weak_solution_defect(assembly, grid, g, ReactionSpec.zero(grid, q=1.2), result.u))) <= 1e-9


def test_solution_maximizes_energy(setup_1d, rng):
    grid, assembly = setup_1d(8, p=3.0, s=0.3)
    g = rng.uniform(0.0, 1.0, 8)
    reaction = ReactionSpec(c=np.full(8, 0.5), q=1.5)
    result = solve_dirichlet(assembly, grid, g, reaction)
    assert energy_E(assembly, grid, g, reaction, result.u) == pytest.approx(result.energy, rel=1e-12)
    for scale in (1e-2, 1e-1, 1.0, 10.0):
        for _ in range(25):
            perturbed = result.u + scale * rng.normal(size=8)
            assert energy_E(assembly, grid, g, reaction, perturbed) < result.energy


def test_reaction_lowers_energy(setup_1d):
    grid, assembly = setup_1d(8, p=2.0, s=0.4)
    g = np.ones(8)
    free = solve_dirichlet(assembly, grid, g)
    damped = solve_dirichlet(assembly, grid, g, ReactionSpec(c=np.full(8, 5.0), q=1.5))
    assert damped.energy < free.energy
    assert np.all(damped.u < free.u)
    assert np.all(damped.u > 0)


def test_zero_datum_gives_zero(setup_1d):
    grid, assembly = setup_1d(8)
    result = solve_dirichlet(assembly, grid, np.zeros(8))
    np.testing.assert_array_equal(result.u, 0.0)
    assert result.energy == 0.0
    assert result.iterations == 0


def test_reaction_spec():
    reaction = ReactionSpec(c=[0.0, 2.0], q=3.0)
    np.testing.assert_allclose(reaction.h(np.array([1.0, 2.0])), [0.0, 8.0])
    np.testing.assert_allclose(reaction.H(np.array([1.0, -2.0])), [0.0, 0.0])
    np.testing.assert_allclose(reaction.H(np.array([1.0, 3.0])), [0.0, 18.0])
    assert reaction.bound == 2.0
    with pytest.raises(ValueError):
        ReactionSpec(c=[-1.0, 0.0], q=1.5)
    with pytest.raises(ValueError):
        ReactionSpec(c=[1.0, 0.0], q=1.0)


def test_reaction_from_config(interval):
    grid = interval(4)
    assert not np.any(reaction_from_config(None, grid).c)
    broadcast = reaction_from_config(ReactionConfig(c=0.5, q=1.3), grid)
    np.testing.assert_array_equal(broadcast.c, 0.5)
    assert broadcast.q == 1.3
    explicit = reaction_from_config(ReactionConfig(c=[0.0, 1.0, 2.0, 3.0]), grid)
    np.testing.assert_array_equal(explicit.c, [0.0, 1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        reaction_from_config(ReactionConfig(c=[1.0, 2.0]), grid)


def test_invalid_inputs(setup_1d):
    grid, assembly = setup_1d(4, p=2.0, s=0.4)
    with pytest.raises(ValueError, match="nonnegative"):
        solve_dirichlet(assembly, grid, [1.0, -1.0, 0.0, 0.0])
    with pytest.raises(ValueError, match="< p"):
        solve_dirichlet(assembly, grid, np.ones(4), ReactionSpec(c=np.ones(4), q=2.5))
    with pytest.raises(ValueError):
        solve_dirichlet(assembly, grid, np.ones(4), ReactionSpec(c=np.ones(3), q=1.5))


def test_iteration_budget(setup_1d):
    grid, assembly = setup_1d(16, p=3.0, s=0.3)
    with pytest.raises(ConvergenceError) as info:
        solve_dirichlet(assembly, grid, np.ones(16), options=DirichletConfig(max_iters=1))
    assert info.value.diagnostics["solver"] == "solve_dirichlet"


def test_built_in_dirichlet_checks(rng):
    checks = check_dirichlet_oracle(rng, n=16)
    assert all(c.passed for c in checks)


def test_dense_solve_needs_p2(setup_1d):
    grid, assembly = setup_1d(4, p=3.0, s=0.3)
    with pytest.raises(ValueError):
        linear_solve_oracle(assembly, grid, np.ones(4))


def test_default_reaction_stays_below_p(setup_1d):
    grid, assembly = setup_1d(8, p=1.4, s=0.4)
    reaction = reaction_from_config(None, grid, assembly.p)
    assert reaction.q == pytest.approx(1.2)
    assert reaction.q == default_reaction_exponent(assembly.p)
    assert default_reaction_exponent(3.0) == 1.5

    g = np.linspace(0.2, 1.0, 8)
    options = DirichletConfig(tol=1e-7)
    result = solve_dirichlet(assembly, grid, g, reaction, options)
    assert np.all(result.u > 0)
    assert result.energy == pytest.approx((1.0 - 1.0 / assembly.p) * result.compliance, rel=1e-4)
    assert solve_dirichlet(assembly, grid, g, options=options).energy == pytest.approx(result.energy, rel=1e-9)


def test_zero_reaction_ignores_its_exponent(setup_1d):
    grid, assembly = setup_1d(4, p=1.4, s=0.4)
    result = solve_dirichlet(assembly, grid, np.ones(4), ReactionSpec.zero(grid, q=1.5), DirichletConfig(tol=1e-7))
    assert np.all(result.u > 0)


def test_solution_is_independent_of_the_start(setup_1d, rng):
    grid, assembly = setup_1d(8, p=3.0, s=0.3)
    g = rng.uniform(0.0, 1.0, 8)
    reaction = ReactionSpec(c=np.full(8, 0.5), q=1.5)
    base = solve_dirichlet(assembly, grid, g, reaction)
    for _ in range(3):
        other = solve_dirichlet(assembly, grid, g, reaction, initial=rng.uniform(-1.0, 2.0, 8))
        np.testing.assert_allclose(other.u, base.u, rtol=0, atol=1e-6)


@pytest.mark.parametrize("p, s", [(2.0, 0.4), (3.0, 0.3)])
def test_objective_gradient_matches_finite_differences(setup_1d, rng, p, s):
    grid, assembly = setup_1d(8, p=p, s=s)
    g = rng.uniform(0.0, 1.0, 8)
    reaction = ReactionSpec(c=rng.uniform(0.0, 1.0, 8), q=1.5)
    u = rng.uniform(0.2, 1.0, 8)
    _, grad = objective_and_gradient(assembly, grid, g, reaction, u)
    step = 1e-6
    fd = np.empty(8)
    for i in range(8):
        e = np.zeros(8)
        e[i] = step
        J_plus, _ = objective_and_gradient(assembly, grid, g, reaction, u + e)
        J_minus, _ = objective_and_gradient(assembly, grid, g, reaction, u - e)
        fd[i] = (J_plus - J_minus) / (2.0 * step)
    assert np.max(np.abs(fd - grad)) <= 1e-6 * np.max(np.abs(grad))
