"""Resource-count contracts and determinism of the ansatz builders."""

import pytest

from qaekit.ansatz import FAMILIES, AnsatzSpec, build, expected_resources, init_params
from qaekit.circuits import resource_count, to_text

SCALABLE = ("circuit1", "circuit2", "circuit3")


class TestSpecValidation:
    def test_rejects_unknown_family(self):
        with pytest.raises(ValueError):
            AnsatzSpec("circuit9", 4, 3)

    def test_dev3q_requires_three_qubits(self):
        with pytest.raises(ValueError):
            AnsatzSpec("circuit1-dev3q", 4, 3)

    def test_limits(self):
        with pytest.raises(ValueError):
            AnsatzSpec("circuit1", 1, 3)
        with pytest.raises(ValueError):
            AnsatzSpec("circuit1", 4, 0)


@pytest.mark.parametrize("family", SCALABLE)
@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("layers", range(1, 9))
def test_resource_count_matches_closed_forms(family, n, layers):
    spec = AnsatzSpec(family, n, layers)
    rc = resource_count(build(spec))
    assert (rc.num_params, rc.two_qubit_gates, rc.depth) == expected_resources(spec)


def test_closed_form_examples():
    assert expected_resources(AnsatzSpec("circuit1", 4, 7))[0] == 32
    assert expected_resources(AnsatzSpec("circuit1", 4, 3)) == (16, 12, 16)
    assert expected_resources(AnsatzSpec("circuit2", 4, 3)) == (36, 9, 18)
    assert expected_resources(AnsatzSpec("circuit3", 4, 3)) == (36, 12, 21)


def test_dev3q_parameter_count():
    rc = resource_count(build(AnsatzSpec("circuit1-dev3q", 3, 3)))
    assert rc.num_params == 12


@pytest.mark.parametrize("family", FAMILIES)
def test_every_slot_used_exactly_once(family):
    n = 3 if family == "circuit1-dev3q" else 4
    c = build(AnsatzSpec(family, n, 3))
    slots = [op.param_slot for op in c.ops if op.param_slot is not None]
    assert sorted(slots) == list(range(c.num_params))


@pytest.mark.parametrize("family", FAMILIES)
def test_build_is_deterministic(family):
    n = 3 if family == "circuit1-dev3q" else 5
    a = to_text(build(AnsatzSpec(family, n, 4)))
    b = to_text(build(AnsatzSpec(family, n, 4)))
    assert a == b


def test_init_params_seeded_uniform():
    c = build(AnsatzSpec("circuit3", 4, 3))
    a = init_params(c, 9)
    b = init_params(c, 9)
    assert (a == b).all()
    assert a.shape == (c.num_params,)
    assert (a >= 0).all() and (a < 2 * 3.15).all()
