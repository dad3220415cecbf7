"""Test transferred actions, the shuffle operator and R∞-maps."""

import itertools

import pytest

from equichain.algebra import Chain, DgaPresentation, RingElement, cyclic_group
from equichain.bar import RInftyModuleAction, perturbed_bar, strict_action, trivial_action
from equichain.complexes import MEMO_SIZE, GradedMap, graded_commutator, point_complex
from equichain.errors import InvalidComplexError, ReductionError
from equichain.reduction import Reduction, identity_reduction
from equichain.transfer import (
    RInftyMap,
    ShuffleOperator,
    bar_maps,
    check_structure_equations,
    extend_homotopic,
    extend_nullhomotopic,
    is_chain_map,
    rinfty_map_apply,
    rinfty_map_compose,
    rinfty_map_delta,
    shuffle_action,
    shuffle_differential,
    strictify_reduction_maps,
    transfer_basic,
    transfer_easy,
)
from equichain.workbench import gen_bar_resolution, gen_lens_complex


@pytest.fixture
def resolution():
    """Bar resolution of Z/2, its strict action and the contraction to a point."""
    module, se = gen_bar_resolution(cyclic_group(2), 3)
    return module, se, strict_action(module)


def test_shuffle_differential_closed_form(resolution):
    """Test [d, Sh(t)] against the closed form on low-degree cells."""
    module, se, action = resolution
    sh = ShuffleOperator(se.right, action)
    for m in range(3):
        for tup in itertools.product((0, 1), repeat=m + 1):
            commutator = graded_commutator(sh.as_map(tup))
            for n in range(2):
                for cell in module.cells(n):
                    x = Chain.basis(cell)
                    assert commutator(x) == shuffle_differential(sh, tup, x), (tup, cell)


def test_shuffle_of_a_single_element_is_the_action(resolution):
    """Test Sh(r) = (r)."""
    module, se, action = resolution
    sh = ShuffleOperator(se.right, action)
    x = module.embed((1,))
    assert sh.apply((1,), x) == module.act(1, x)


def test_transfer_along_the_identity(resolution):
    """Test that transferring along id reproduces the strict action."""
    module, _, action = resolution
    transferred = transfer_basic(identity_reduction(module), action)
    x = module.embed((1, 0))
    assert transferred.act((1,), x) == module.act(1, x)
    assert transferred.act((1, 1), x) == 0
    assert transferred.shuffle is not None


def test_transfer_to_a_point(resolution):
    """Test the action transferred to the point is the augmentation."""
    _, se, action = resolution
    transferred = transfer_basic(se.right, action)
    point = Chain.basis(0)
    assert transferred.act((1,), point) == point
    assert transferred.act((0,), point) == point
    assert transferred.act((1, 1), point) == 0


def test_transfer_requires_side_conditions(resolution):
    """Test that an unnormalized homotopy is rejected."""
    module, se, action = resolution
    unit = module.ring.unit
    raw = GradedMap(
        1,
        lambda cell: Chain.basis((unit, (cell[0],) + cell[1])),
        source=module,
        target=module,
        name="cone",
    )
    red = Reduction(module, se.right.target, se.right.alpha, se.right.beta, raw, name="raw")
    with pytest.raises(ReductionError, match="side condition"):
        transfer_basic(red, action)


def test_easy_transfer_makes_alpha_linear(resolution):
    """Test alpha((r)x) = (r) alpha(x) for the augmentation transfer."""
    module, se, _ = resolution
    point = se.right.target
    easy = transfer_easy(se.right, trivial_action(point, module.ring))
    for n in range(2):
        for cell in module.cells(n):
            x = Chain.basis(cell)
            for g in (0, 1):
                assert se.right.alpha(easy.act((g,), x)) == trivial_action(
                    point, module.ring
                ).act((g,), se.right.alpha(x))
    assert easy.act((1,), module.embed((1,))) == module.embed((1,))


def test_easy_transfer_needs_an_augmentation():
    """Test that a dga without augmentation is rejected."""
    ring = DgaPresentation(degrees=(0,), unit=0, product=lambda g, h: RingElement.basis(0))
    point = point_complex()
    action = RInftyModuleAction(point, ring, lambda tup, cell: Chain())
    with pytest.raises(InvalidComplexError, match="augmentation"):
        transfer_easy(identity_reduction(point), action)


def test_identity_is_an_rinfty_chain_map():
    """Test that the identity of a strict module has vanishing structure equations."""
    lens = gen_lens_complex(2, 2)
    identity = RInftyMap.identity(strict_action(lens))
    assert is_chain_map(identity, max_length=2, samples=5)


def test_composition_with_identity(resolution):
    """Test id ∘ f = f componentwise."""
    module, se, action = resolution
    alpha, _ = strictify_reduction_maps(se.right, action)
    composed = RInftyMap.identity(alpha.target).compose(alpha)
    x = module.embed((1, 1))
    for tail in [(), (1,), (0, 1), (1, 1)]:
        assert composed.component(tail, x) == alpha.component(tail, x)


def test_strictified_maps_satisfy_structure_equations(resolution):
    """Test alpha* and beta* are R∞-chain maps."""
    _, se, action = resolution
    alpha, beta = strictify_reduction_maps(se.right, action)
    for f in (alpha, beta):
        report = check_structure_equations(f, max_length=2, samples=4, max_degree=2)
        assert report.ok, report.violated()


def test_nullhomotopic_extension(resolution):
    """Test the extension of [d, eta] is an R∞-chain map."""
    _, se, action = resolution
    extension = extend_nullhomotopic(se.right.eta, action)
    assert extension.degree == 0
    report = check_structure_equations(extension, max_length=2, samples=4, max_degree=2)
    assert report.ok, report.violated()


def test_bar_maps_split():
    """Test eps* zeta* = id: only the empty tail survives."""
    lens = gen_lens_complex(2, 2)
    maps = bar_maps(strict_action(lens))
    composed = maps.epsilon.compose(maps.zeta)
    x = lens.embed((1,))
    assert composed.component((), x) == x
    for tail in [(1,), (0,), (1, 1)]:
        assert composed.component(tail, x) == 0


def test_bar_homotopy_bounds_the_split():
    """Test [d, eta*] = id - zeta* eps* componentwise for tails of length at most 2."""
    lens = gen_lens_complex(2, 2)
    maps = bar_maps(strict_action(lens))
    delta = maps.eta.delta()
    expected = RInftyMap.identity(maps.eta.source) - maps.zeta.compose(maps.epsilon)
    assert delta.degree == expected.degree == 0
    checked = 0
    for n in range(3):
        for cell in maps.bar.cells(n):
            x = Chain.basis(cell)
            for ell in range(3):
                for tail in itertools.product(lens.ring.generators, repeat=ell):
                    assert delta.component(tail, x) == expected.component(tail, x), (tail, cell)
                    checked += 1
    assert checked > 100


def test_induced_map_of_identity():
    """Test that id* is the identity of the perturbed bar construction."""
    lens = gen_lens_complex(2, 2)
    action = strict_action(lens)
    bar = perturbed_bar(lens, action)
    induced = RInftyMap.identity(action, bar).induced()
    for n in range(3):
        for label in bar.labels(n):
            x = bar.embed(label)
            assert induced(x) == x


def test_induced_needs_bars(resolution):
    """Test that bar constructions must be attached before inducing."""
    _, _, action = resolution
    with pytest.raises(ReductionError, match="no bar constructions"):
        RInftyMap.identity(action).induced()


def test_homotopic_extension(resolution):
    """Test id + [d, eta] extends to an R∞-chain map with that linear part."""
    module, se, action = resolution
    eta = se.right.eta
    extension = extend_homotopic(RInftyMap.identity(action), eta)
    x = module.embed((1, 0))
    assert extension.component((), x) == x + graded_commutator(eta)(x)
    report = check_structure_equations(extension, max_length=2, samples=4, max_degree=2)
    assert report.ok, report.violated()


def test_operation_wrappers(resolution):
    """Test the functional forms agree with the methods."""
    module, se, action = resolution
    x = module.embed((1,))
    assert shuffle_action(se.right, action, (1,))(x) == module.act(1, x)
    identity = RInftyMap.identity(action)
    assert rinfty_map_compose(identity, identity).component((1,), x) == 0
    assert rinfty_map_delta(identity).component((), x) == 0
    lens = gen_lens_complex(2, 2)
    lens_action = strict_action(lens)
    bar = perturbed_bar(lens, lens_action)
    label = bar.labels(1)[0]
    assert rinfty_map_apply(RInftyMap.identity(lens_action, bar), bar.embed(label)) == bar.embed(
        label
    )


def test_memo_caches_are_bounded(resolution):
    """Test component and cell memos keep at most MEMO_SIZE values."""
    module, se, action = resolution
    identity = RInftyMap.identity(action)
    x = module.embed((1,))
    identity.component((), x)
    identity.component((), x)
    info = identity.cache_info()
    assert info.maxsize == MEMO_SIZE
    assert info.hits == 1
    assert se.right.alpha.on_cell.cache_info().maxsize == MEMO_SIZE
    assert ShuffleOperator(se.right, action)._on_cell.cache_info().maxsize == MEMO_SIZE
