"""Monte Carlo harness: enumeration oracles, sampling, tableau cross-checks."""

import numpy as np
import pytest

from ringrepeater.analytics import (
    bare_ring_fusion_success,
    concat_fusion_distribution,
    logical_transmission,
    pauli_meas_stats,
)
from ringrepeater.montecarlo import (
    TrialConfig,
    enumerate_fusion,
    enumerate_pauli,
    enumerate_small,
    simulate_logical_fusion,
    simulate_pauli_measurement,
    _sample_trial,
    _walk_fusion,
)
from ringrepeater.paulis import Pauli, PauliOp
from ringrepeater.ringcodes import (
    RingCodeSpec,
    encoded_pair_generators,
    lifted_code_ops,
)
from ringrepeater.stabilizer import tableau_from_generators


class TestEnumerationOracle:
    def test_reproduces_bare_ring_closed_form(self):
        # the independent enumeration over losses, errors, and coins must
        # match the closed form exactly
        spec = RingCodeSpec(4, 1)
        for eta in np.linspace(0.0, 1.0, 101):
            d = enumerate_fusion(spec, float(eta), 0.0)
            assert abs(d["success"] - bare_ring_fusion_success(float(eta))) < 1e-12

    def test_outcomes_partition_unity(self):
        for eta, lam in ((1.0, 0.0), (0.9, 0.05), (0.7, 0.2)):
            d = enumerate_fusion(RingCodeSpec(4, 1), eta, lam)
            total = sum(d[k] for k in ("success", "fail_x", "fail_y", "fail_z", "loss"))
            assert abs(total - 1.0) < 1e-12

    def test_degenerate_point_single_branch(self):
        d = enumerate_fusion(RingCodeSpec(4, 1), 1.0, 0.0)
        assert abs(d["success"] - 0.9375) < 1e-15
        assert abs(d["fail_x"] - 0.0625) < 1e-15
        assert d["loss"] == 0.0 and d["error"] == 0.0 and d["detected"] == 0.0

    def test_pauli_enumeration_matches_recursion_exactly(self):
        for N in (1, 2):
            for eta in (1.0, 0.9, 0.75):
                for lam in (0.0, 0.05, 0.15):
                    d = enumerate_pauli(RingCodeSpec(4, N), eta, lam, Pauli.X)
                    s = pauli_meas_stats(eta, lam, N)
                    trans = 1.0 - d["loss"]
                    assert abs(trans - s.eta_bar) < 1e-12
                    if trans > 0:
                        assert abs(d["error"] / trans - s.eps) < 1e-12
                        assert abs(d["detected"] / trans - s.eps_d) < 1e-12

    def test_enumerate_small_dispatch(self):
        cfg = TrialConfig(RingCodeSpec(4, 1), 0.9, 0.0, trials=1)
        assert enumerate_small(cfg, "fusion")["success"] == pytest.approx(
            bare_ring_fusion_success(0.9), abs=1e-12
        )
        p = enumerate_small(cfg, "pauli", Pauli.Z)
        assert abs((1 - p["loss"]) - logical_transmission(0.9, 1)) < 1e-12
        with pytest.raises(ValueError):
            enumerate_small(cfg, "bogus")

    def test_enumeration_depth_bound(self):
        with pytest.raises(ValueError):
            enumerate_fusion(RingCodeSpec(4, 3), 0.9, 0.0)


class TestSampling:
    def test_fusion_matches_enumeration(self):
        for N, eta, lam in ((1, 0.9, 0.0), (1, 0.8, 0.05), (2, 0.9, 0.0)):
            cfg = TrialConfig(RingCodeSpec(4, N), eta, lam, trials=20_000, seed=11)
            st = simulate_logical_fusion(cfg)
            ex = enumerate_fusion(cfg.spec, eta, lam)
            for cls in ("success", "loss"):
                p, se = st.rate(cls), st.stderr(cls)
                assert abs(p - ex[cls]) < max(3 * se, 1e-9), (N, eta, cls)

    def test_pauli_matches_analytics(self):
        for N in (1, 2):
            cfg = TrialConfig(RingCodeSpec(4, N), 0.9, 0.05, trials=20_000, seed=13)
            st = simulate_pauli_measurement(cfg, Pauli.X)
            ana = pauli_meas_stats(0.9, 0.05, N)
            trans = 1 - st.rate("loss")
            assert abs(trans - ana.eta_bar) < 3 * st.stderr("loss") + 1e-9
            transmitted = cfg.trials - st.counts["loss"]
            for cls, ref in (("error", ana.eps), ("detected", ana.eps_d)):
                p = st.rate(cls, transmitted)
                se = st.stderr(cls, transmitted)
                assert abs(p - ref) < max(3 * se, 1e-9)

    def test_zero_noise_means_no_errors(self):
        cfg = TrialConfig(RingCodeSpec(4, 1), 0.9, 0.0, trials=5_000, seed=2)
        st = simulate_pauli_measurement(cfg, Pauli.Y)
        assert st.counts["error"] == 0 and st.counts["detected"] == 0
        stf = simulate_logical_fusion(cfg)
        assert stf.counts["error"] == 0 and stf.counts["detected"] == 0

    def test_zero_transmission_all_loss(self):
        cfg = TrialConfig(RingCodeSpec(4, 1), 0.0, 0.0, trials=500, seed=3)
        assert simulate_logical_fusion(cfg).rate("loss") == 1.0

    def test_seed_determinism(self):
        cfg = TrialConfig(RingCodeSpec(4, 1), 0.85, 0.03, trials=9_000, seed=77)
        a = simulate_logical_fusion(cfg)
        b = simulate_logical_fusion(cfg)
        assert a.counts == b.counts
        # byte-identical serialization too
        assert a.to_json() == b.to_json()

    def test_worker_count_independence(self):
        cfg = TrialConfig(RingCodeSpec(4, 1), 0.87, 0.01, trials=9_000, seed=21)
        assert (simulate_logical_fusion(cfg, threads=1).counts
                == simulate_logical_fusion(cfg, threads=3).counts)
        assert (simulate_pauli_measurement(cfg, Pauli.Z, threads=1).counts
                == simulate_pauli_measurement(cfg, Pauli.Z, threads=4).counts)

    def test_counts_partition_trials(self):
        cfg = TrialConfig(RingCodeSpec(4, 2), 0.9, 0.02, trials=4_000, seed=5)
        st = simulate_logical_fusion(cfg)
        classes = ("success", "fail_x", "fail_y", "fail_z", "loss")
        assert sum(st.counts[c] for c in classes) == cfg.trials

    def test_csv_rows_schema(self):
        cfg = TrialConfig(RingCodeSpec(4, 1), 0.9, 0.01, trials=2_000, seed=8)
        st = simulate_logical_fusion(cfg)
        rows = st.csv_rows(depth=1, eta=0.9, lam=0.01)
        assert rows and set(rows[0]) == {"depth", "eta", "lambda", "trials",
                                         "outcome", "count", "rate", "stderr"}
        assert sum(r["count"] for r in rows if r["outcome"] in
                   ("success", "fail_x", "fail_y", "fail_z", "loss")) == cfg.trials

    def test_config_validation(self):
        with pytest.raises(ValueError):
            TrialConfig(RingCodeSpec(4, 1), 1.5, 0.0)
        with pytest.raises(ValueError):
            TrialConfig(RingCodeSpec(4, 1), 0.9, 0.9)
        with pytest.raises(ValueError):
            TrialConfig(RingCodeSpec(4, 1), 0.9, 0.0, trials=0)
        with pytest.raises(ResourceWarning):
            TrialConfig(RingCodeSpec(4, 6), 0.9, 0.0)


class TestTableauCrossValidation:
    """Replay sampled strategy walks on an exact stabilizer tableau.

    The two rings hold a logical Bell pair, so every parity estimate the
    walker marks as recovered must be a stabilizer of the state, and the
    product of the corresponding measured outcomes must equal its sign.
    """

    @pytest.mark.parametrize("eta", [1.0, 0.85])
    def test_noiseless_fusion_estimates_are_deterministic(self, eta):
        spec = RingCodeSpec(4, 1)
        gens = encoded_pair_generators(spec)
        base = tableau_from_generators(gens)
        rng = np.random.default_rng(42)
        cfg = TrialConfig(spec, eta, 0.0, trials=1)
        q = spec.photon_count
        checked = 0
        for _ in range(150):
            trial = _sample_trial(cfg, 2 * q, rng)
            res = _walk_fusion(trial, spec, 1, 0, q, None)
            t = base.copy()
            values = []
            for (kind, *rest) in res["ops"]:
                if kind == "atom":
                    slot, letter = rest
                    op = (PauliOp.single(2 * q, slot - 1, Pauli(letter))
                          * PauliOp.single(2 * q, q + slot - 1, Pauli(letter)))
                elif kind == "single":
                    side, slot, letter = rest
                    photon = (slot - 1) + (q if side else 0)
                    op = PauliOp.single(2 * q, photon, Pauli(letter))
                values.append(t.measure_operator(op, rng)[0])
            for name, rep in (("x", res["solution"]["x"]),
                              ("y", res["solution"]["y"]),
                              ("z", res["solution"]["z"])):
                if rep is None:
                    continue
                prod_op = PauliOp.identity(2 * q)
                prod_val = 1
                for i in rep:
                    kind, *rest = res["ops"][i]
                    if kind == "atom":
                        slot, letter = rest
                        op = (PauliOp.single(2 * q, slot - 1, Pauli(letter))
                              * PauliOp.single(2 * q, q + slot - 1, Pauli(letter)))
                    else:
                        side, slot, letter = rest
                        photon = (slot - 1) + (q if side else 0)
                        op = PauliOp.single(2 * q, photon, Pauli(letter))
                    prod_op = prod_op * op
                    prod_val *= values[i]
                # measured product equals the state's exact eigenvalue
                assert base.contains(prod_op) == prod_val
                # and the estimated operator is the logical parity (mod code)
                ops_ring = lifted_code_ops(1)
                parity = (ops_ring[name.upper()].embed(2 * q, 0)
                          * ops_ring[name.upper()].embed(2 * q, q))
                quotient = prod_op * parity
                code = tableau_from_generators(gens)
                assert code.contains(quotient) is not None
                checked += 1
        assert checked > 100

    def test_classification_consistent_with_parities(self):
        spec = RingCodeSpec(4, 1)
        rng = np.random.default_rng(9)
        cfg = TrialConfig(spec, 0.8, 0.0, trials=1)
        for _ in range(300):
            trial = _sample_trial(cfg, 8, rng)
            res = _walk_fusion(trial, spec, 1, 0, 4, None)
            rec = sorted(res["parities"])
            if res["class"] == "success":
                assert len(rec) == 3  # two independent parities imply all three
            elif res["class"].startswith("fail"):
                assert rec == [res["class"][-1]]
            else:
                assert rec == []
