"""Expressibility and entangling-capability descriptor tests."""

import numpy as np
import pytest

from qaekit.ansatz import AnsatzSpec, build
from qaekit.circuits import Circuit, GateKind, GateOp
from qaekit.descriptors import (
    DescriptorConfig,
    entangling_capability,
    expressibility,
    expressibility_from_fidelities,
    fidelity_samples,
    haar_bin_mass,
    histogram_rows,
)


def rot_only_circuit(n=4):
    ops = tuple(
        GateOp(kind, (q,), param_slot=q * 3 + k)
        for q in range(n)
        for k, kind in enumerate((GateKind.RX, GateKind.RY, GateKind.RZ))
    )
    return Circuit(n, ops, 3 * n)


class TestHaarBinMass:
    def test_full_interval(self):
        assert haar_bin_mass(0.0, 1.0, 16) == pytest.approx(1.0, abs=1e-15)

    def test_single_qubit_uniform(self):
        assert haar_bin_mass(0.0, 0.5, 2) == pytest.approx(0.5, abs=1e-15)

    def test_partition_sums_to_one(self):
        for bins in (10, 75, 137):
            edges = np.linspace(0, 1, bins + 1)
            total = sum(haar_bin_mass(edges[i], edges[i + 1], 16) for i in range(bins))
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_mean_fidelity_is_one_over_dimension(self):
        # Analytic integral F (N-1)(1-F)^(N-2) dF = 1/N; cross-check by a
        # Monte Carlo average over Haar-distributed pairs of real+imag
        # Gaussian states.
        n_dim = 16
        edges = np.linspace(0, 1, 4000 + 1)
        mids = (edges[:-1] + edges[1:]) / 2
        masses = np.array([haar_bin_mass(edges[i], edges[i + 1], n_dim) for i in range(4000)])
        assert float(mids @ masses) == pytest.approx(1 / n_dim, abs=1e-4)

        rng = np.random.default_rng(0)
        samples = 200_000
        a = rng.normal(size=(samples, n_dim)) + 1j * rng.normal(size=(samples, n_dim))
        b = rng.normal(size=(samples, n_dim)) + 1j * rng.normal(size=(samples, n_dim))
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        b /= np.linalg.norm(b, axis=1, keepdims=True)
        mc = np.mean(np.abs(np.einsum("ij,ij->i", a.conj(), b)) ** 2)
        assert mc == pytest.approx(1 / n_dim, rel=0.02)

    def test_invalid_interval(self):
        with pytest.raises(ValueError):
            haar_bin_mass(0.5, 0.5, 4)
        with pytest.raises(ValueError):
            haar_bin_mass(-0.1, 0.5, 4)


class TestExpressibility:
    def test_idle_circuit_is_maximally_inexpressive(self):
        # All sampled fidelities equal 1: a point mass in the last bin.
        idle = Circuit(4, (), 0)
        cfg = DescriptorConfig(num_samples=500, num_bins=75, seed=0)
        eps = expressibility(idle, cfg)
        # Closed form: - log2 of the Haar mass of the last bin.
        want = -np.log2(haar_bin_mass(74 / 75, 1.0, 16))
        assert eps == pytest.approx(want, rel=1e-12)
        assert eps > 3.0

    def test_nonnegative_and_deterministic(self):
        c = build(AnsatzSpec("circuit2", 4, 2))
        cfg = DescriptorConfig(num_samples=400, num_bins=75, seed=5)
        a = expressibility(c, cfg)
        assert a >= 0.0
        assert a == expressibility(c, cfg)

    def test_idle_worse_than_every_ansatz_family(self):
        cfg = DescriptorConfig(num_samples=400, num_bins=75, seed=2)
        idle_eps = expressibility(Circuit(4, (), 0), cfg)
        for family in ("circuit1", "circuit2", "circuit3"):
            eps = expressibility(build(AnsatzSpec(family, 4, 3)), cfg)
            assert eps < idle_eps

    def test_zero_count_bins_contribute_zero(self):
        fids = np.full(200, 0.999)  # everything in the top bin
        eps = expressibility_from_fidelities(fids, 4, 75)
        assert np.isfinite(eps)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DescriptorConfig(num_samples=50)
        with pytest.raises(ValueError):
            DescriptorConfig(num_bins=5)


class TestEntanglingCapability:
    def test_rotations_only_give_zero(self):
        cfg = DescriptorConfig(num_samples=200, seed=1)
        e = entangling_capability(rot_only_circuit(), cfg)
        assert e == pytest.approx(0.0, abs=1e-10)

    def test_bell_pair_circuit_gives_one(self):
        ops = (GateOp(GateKind.H, (0,)), GateOp(GateKind.CNOT, (1,), control=0))
        cfg = DescriptorConfig(num_samples=150, seed=2)
        e = entangling_capability(Circuit(2, ops, 0), cfg)
        assert e == pytest.approx(1.0, abs=1e-10)

    def test_invariant_under_appended_local_rotations(self):
        base = build(AnsatzSpec("circuit1", 4, 2))
        ops = list(base.ops)
        slot = base.num_params
        for q in range(4):
            ops.append(GateOp(GateKind.RZ, (q,), param_slot=slot))
            slot += 1
        extended = Circuit(4, tuple(ops), slot)
        cfg = DescriptorConfig(num_samples=800, seed=3)
        # Same seed draws matched prefixes of parameters, so the marginal
        # purity spectra match sample by sample up to the extra draws.
        e_base = entangling_capability(base, cfg)
        e_ext = entangling_capability(extended, cfg)
        assert abs(e_base - e_ext) < 0.03

    def test_single_qubit_rejected(self):
        c = Circuit(1, (GateOp(GateKind.RY, (0,), param_slot=0),), 1)
        with pytest.raises(ValueError):
            entangling_capability(c, DescriptorConfig(num_samples=100))

    def test_range(self):
        cfg = DescriptorConfig(num_samples=200, seed=4)
        for family in ("circuit1", "circuit2", "circuit3"):
            e = entangling_capability(build(AnsatzSpec(family, 4, 2)), cfg)
            assert 0.0 <= e <= 1.0


class TestHistogram:
    def test_rows_schema_and_consistency(self):
        c = build(AnsatzSpec("circuit1", 4, 1))
        cfg = DescriptorConfig(num_samples=300, num_bins=20, seed=6)
        rows = histogram_rows(c, cfg)
        assert len(rows) == 20
        assert sum(r[2] for r in rows) == 300
        assert sum(r[3] for r in rows) == pytest.approx(1.0, abs=1e-12)
        fids = fidelity_samples(c, cfg)
        assert ((fids >= 0) & (fids <= 1 + 1e-12)).all()
