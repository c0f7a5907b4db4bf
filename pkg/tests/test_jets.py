import random

import pytest

from jetcalc.connections import extend_flat
from jetcalc.elements import Space, TensorElement
from jetcalc.hasse import hasse_from_extended
from jetcalc.jets import (JetElement, check_kernel, in_truncation_kernel, jet_equal, jet_is_zero, jet_product,
                          kernel_part, tau, truncate)
from jetcalc.sampling import random_homogeneous_pair, random_tensor, tensor_weights


@pytest.fixture(scope="module", params=["curve", "free"])
def setup(request):
    s = request.getfixturevalue(request.param)
    return s, hasse_from_extended(extend_flat(s.gamma, 3), 4)


def random_jet(pres, N, rng):
    comps = []
    for i in range(N + 1):
        sp = Space("S", i)
        lo = i * min(pres.module.weights)
        ws = tensor_weights(pres, sp, lo, lo + 8)
        comps.append(random_tensor(pres, sp, rng.choice(ws), rng) if ws else TensorElement.zero(sp, pres.nvars))
    return JetElement(tuple(comps))


def test_tau_of_one(setup):
    s, h = setup
    t = tau(h, s.pres.ring.one())
    assert jet_equal(s.pres, t, JetElement.scalar(s.pres.ring.one(), 4))


def test_tau_is_multiplicative(setup):
    s, h = setup
    rng = random.Random(11)
    for _ in range(20):
        a, b = random_homogeneous_pair(s.pres, rng, 10)
        assert jet_equal(s.pres, jet_product(tau(h, a), tau(h, b)), tau(h, a * b))


def test_truncation_is_compatible_with_tau(setup):
    s, h = setup
    rng = random.Random(2)
    for _ in range(10):
        a, _ = random_homogeneous_pair(s.pres, rng, 10)
        assert jet_equal(s.pres, truncate(tau(h, a), 3), tau(h, a, 3))


def test_truncation_is_an_algebra_map(setup):
    s, _ = setup
    rng = random.Random(5)
    for _ in range(10):
        u, v = random_jet(s.pres, 4, rng), random_jet(s.pres, 4, rng)
        assert jet_equal(s.pres, truncate(jet_product(u, v), 3), jet_product(truncate(u, 3), truncate(v, 3)))


def test_kernel_structure(setup):
    s, _ = setup
    rng = random.Random(9)
    samples = [random_jet(s.pres, 4, rng) for _ in range(15)]
    assert check_kernel(s.pres, samples) == []
    top = JetElement.top(kernel_part(samples[0]))
    assert in_truncation_kernel(s.pres, top)
    assert jet_is_zero(s.pres, jet_product(top, top))


def test_component_lengths_checked(curve):
    with pytest.raises(ValueError):
        JetElement((TensorElement.zero(Space("S", 1), 3),))
