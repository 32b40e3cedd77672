import math

import numpy as np
import pytest

from laqe.circuit import Circuit, SegmentRange, cx, h, rz, t, x
from laqe.errors import VerificationInfeasible
from laqe.optimizer import OptimizerConfig, compact, oac, segopt
from laqe.verify import (
    JudgmentResult,
    equivalent,
    equivalent_randomized,
    is_compact,
    is_locally_optimal,
    is_segment_optimal,
    segment_windows,
    to_unitary,
)

from support import kron_unitary, phase_equal, random_circuit, suite


def test_unitary_matches_kron_oracle():
    for c in suite(60, max_qubits=5, max_gates=40, seed=11):
        assert np.allclose(to_unitary(c), kron_unitary(c), atol=1e-12)


def test_empty_is_identity():
    assert np.allclose(to_unitary(Circuit(3)), np.eye(8))


def test_hh_identity():
    assert np.allclose(to_unitary(Circuit.from_gates(1, [h(0), h(0)])), np.eye(2), atol=1e-12)


def test_qubit0_is_lsb():
    u = to_unitary(Circuit(2, [[x(0)]]))
    # X on qubit 0 maps |00> (index 0) to |01> (index 1)
    assert u[1, 0] == pytest.approx(1)


def test_cnot_rz_cnot_equals_rz():
    theta = 0.83
    a = to_unitary(Circuit.from_gates(2, [cx(0, 1), rz(theta, 0), cx(0, 1)]))
    b = to_unitary(Circuit(2, [[rz(theta, 0)]]))
    assert np.allclose(a, b, atol=1e-12)


def test_unitary_is_unitary():
    u = to_unitary(random_circuit(5, 100, seed=1))
    assert np.linalg.norm(u.conj().T @ u - np.eye(32)) < 1e-9


def test_composition_order():
    for k in range(10):
        a = random_circuit(3, 20, seed=2 * k)
        b = random_circuit(3, 20, seed=2 * k + 1)
        assert np.allclose(to_unitary(a + b), to_unitary(b) @ to_unitary(a), atol=1e-9)


def test_cap():
    with pytest.raises(VerificationInfeasible, match="randomized"):
        to_unitary(Circuit(13))


class TestEquivalent:
    def test_reflexive(self):
        c = random_circuit(4, 60, seed=3)
        assert equivalent(c, c, 1e-12)

    def test_extra_t_detected(self):
        c = random_circuit(4, 60, seed=3)
        assert not equivalent(c, c + Circuit(4, [[t(2)]]))

    def test_global_phase_ignored(self):
        # Rz(2pi - x) vs Rz(-x) differ by nothing after reduction; Z vs Rz(pi) differ by a phase
        from laqe.circuit import z

        assert equivalent(Circuit(1, [[z(0)]]), Circuit(1, [[rz(math.pi, 0)]]))

    def test_symmetric_and_agrees_with_brute_force(self):
        cs = suite(40, max_qubits=3, max_gates=6, seed=12)
        for a in cs[:20]:
            for b in cs[20:]:
                if a.num_qubits != b.num_qubits:
                    continue
                want = phase_equal(kron_unitary(a), kron_unitary(b))
                assert equivalent(a, b) == equivalent(b, a) == want

    def test_randomized(self):
        c = random_circuit(14, 300, seed=5)
        assert equivalent_randomized(c, c)
        assert not equivalent_randomized(c, c + Circuit(14, [[t(13)]]))
        small = random_circuit(4, 50, seed=6)
        out, _ = oac(small, OptimizerConfig(omega=3, epsilon=0))
        assert equivalent_randomized(small, out)


class TestJudgments:
    def test_compact_witnesses(self):
        assert is_compact(Circuit(2, [[h(0)]]))
        assert is_compact(Circuit(2))
        res = is_compact(Circuit(2, [[h(0)], [], [h(0)]]))
        assert not res and res.witness == (1, None)
        res = is_compact(Circuit(2, [[h(0)], [h(1)]]))
        assert not res and res.witness == (1, h(1))
        assert res.describe() == "FAIL compact layer=1 gate=h q[1]"

    def test_compact_output_is_compact(self):
        for c in suite(20, seed=13):
            assert is_compact(compact(c))

    def test_segment_optimal_hh(self):
        c = Circuit(2, [[x(1)], [h(0)], [h(0)], [x(0)]])
        conf = OptimizerConfig(omega=2)
        res = is_segment_optimal(c, conf)
        assert not res
        i, j = res.witness.clamp(c.length)
        assert i <= 1 and j >= 3
        assert res.describe().startswith("FAIL segment_optimal window=")

    def test_empty_holds(self):
        conf = OptimizerConfig(omega=2)
        assert is_segment_optimal(Circuit(2), conf)
        assert is_locally_optimal(Circuit(2), conf)
        assert is_locally_optimal(Circuit(2), conf).describe() == "PASS locally_optimal"

    def test_segopt_and_oac_outputs(self):
        for c in suite(15, seed=14):
            conf = OptimizerConfig(omega=3)
            assert is_segment_optimal(segopt(c, conf), conf)
            out, _ = oac(c, conf)
            assert is_locally_optimal(out, conf)

    def test_windows(self):
        assert segment_windows(0, 3) == [SegmentRange(0, 3)]
        assert segment_windows(2, 3) == [SegmentRange(0, 3)]
        assert segment_windows(5, 3) == [SegmentRange(0, 3), SegmentRange(1, 4), SegmentRange(2, 5)]

    def test_failed_needs_witness(self):
        with pytest.raises(ValueError):
            JudgmentResult("x", False)
