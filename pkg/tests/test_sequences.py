"""Tests for pulse timing rules and pulse operators."""

import json

import numpy as np
import pytest

from iswapdd.algebra import IDENTITY_2, IDENTITY_4, SIGMA_Y, SIGMA_Z, kron, unitarity_defect
from iswapdd.errors import InvalidCount, InvalidSpec
from iswapdd.model import GateParams, noise_hamiltonian, static_hamiltonian
from iswapdd.sequences import (
    SequenceSpec,
    build_schedule,
    pulse_fractions,
    pulse_unitary,
    schedule_records,
    toggled_average,
)


def test_pdd_fractions_equally_spaced():
    # Equal spacing t_e/m with the last pulse exactly at t_e.
    np.testing.assert_allclose(pulse_fractions("pdd", 4), [0.25, 0.5, 0.75, 1.0])
    np.testing.assert_allclose(pulse_fractions("pdd", 2), [0.5, 1.0])


def test_cp_fractions_half_offset():
    # (i - 1/2)/m: centred in each of the m equal segments.
    np.testing.assert_allclose(
        pulse_fractions("cp", 4), [1.0 / 8.0, 3.0 / 8.0, 5.0 / 8.0, 7.0 / 8.0]
    )
    np.testing.assert_allclose(
        pulse_fractions("cp", 6), (2.0 * np.arange(1, 7) - 1.0) / 12.0
    )


def test_udd_fractions_m4():
    # sin^2(pi i / 10) for i = 1..4.
    np.testing.assert_allclose(
        pulse_fractions("udd", 4),
        [0.09549150281252627, 0.3454915028125263, 0.6545084971874737, 0.9045084971874737],
        rtol=1e-12,
    )


def test_fractions_mirror_symmetry():
    for kind in ("cp", "udd"):
        for m in (2, 4, 10, 40):
            f = pulse_fractions(kind, m)
            np.testing.assert_allclose(f + f[::-1], np.ones(m), atol=1e-15)
            assert np.all(np.diff(f) > 0.0)
            assert f[0] > 0.0 and f[-1] < 1.0


def test_udd_m2_equals_cp_bitwise():
    np.testing.assert_array_equal(pulse_fractions("udd", 2), pulse_fractions("cp", 2))


def test_fraction_validation():
    with pytest.raises(InvalidCount):
        pulse_fractions("pdd", 3)
    with pytest.raises(InvalidCount):
        pulse_fractions("cp", 0)
    with pytest.raises(InvalidCount):
        pulse_fractions("udd", -2)
    with pytest.raises(InvalidSpec):
        pulse_fractions("xy4", 4)


def test_spec_validation():
    with pytest.raises(InvalidCount):
        SequenceSpec(kind="pdd", axis="z", pulse_count=5)
    with pytest.raises(InvalidCount):
        SequenceSpec(kind="none", axis="z", pulse_count=2)
    with pytest.raises(InvalidSpec):
        SequenceSpec(kind="pdd", axis="x", pulse_count=2)
    spec = SequenceSpec(kind="cp", axis="y", pulse_count=8)
    assert spec.pairs == 4


def test_pulse_unitaries():
    pz = pulse_unitary("z")
    py = pulse_unitary("y")
    np.testing.assert_allclose(pz, kron(SIGMA_Z, SIGMA_Z), atol=0.0)
    np.testing.assert_allclose(py, kron(SIGMA_Y, SIGMA_Y), atol=0.0)
    for pulse in (pz, py):
        assert unitarity_defect(pulse) < 1e-15
        np.testing.assert_allclose(pulse @ pulse, IDENTITY_4, atol=1e-15)
    with pytest.raises(InvalidSpec):
        pulse_unitary("x")


def test_build_schedule_times_and_ops():
    t_e = 4e-10
    spec = SequenceSpec(kind="pdd", axis="z", pulse_count=4)
    sched = build_schedule(spec, t_e)
    np.testing.assert_allclose(sched.times, [1e-10, 2e-10, 3e-10, 4e-10], rtol=1e-15)
    assert sched.pulse_count == 4
    assert sched.axis == "z"
    empty = build_schedule(SequenceSpec(kind="none"), t_e)
    assert len(empty.times) == 0


def test_schedule_records_json_round_trip():
    t_e = 3.14e-10
    spec = SequenceSpec(kind="udd", axis="y", pulse_count=4)
    records = schedule_records(spec, t_e)
    back = json.loads(json.dumps(records))
    assert len(back) == 4
    assert [rec["index"] for rec in back] == [1, 2, 3, 4]
    fractions = pulse_fractions("udd", 4)
    for rec, delta in zip(back, fractions):
        assert rec["delta"] == delta
        assert rec["time"] == delta * t_e
        assert 0.0 < rec["time"] < t_e
    assert schedule_records(SequenceSpec(kind="none"), t_e) == []


def test_toggled_average_z_keeps_static_kills_noise(desk_gate):
    h0 = static_hamiltonian(desk_gate)
    np.testing.assert_allclose(toggled_average(h0, "z"), h0, atol=1e-3)
    dh = noise_hamiltonian(1e9, -2e9)
    np.testing.assert_allclose(toggled_average(dh, "z"), np.zeros((4, 4)), atol=1e-6)


def test_toggled_average_y_keeps_coupling(desk_gate):
    # y-pulses preserve the exchange coupling but flip the sigma_z splitting.
    coupling = 0.5 * desk_gate.omega_c * kron(
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
    )
    split = static_hamiltonian(desk_gate) - coupling
    np.testing.assert_allclose(toggled_average(coupling, "y"), coupling, atol=1e-3)
    np.testing.assert_allclose(toggled_average(split, "y"), np.zeros((4, 4)), atol=1e-3)
    dh = noise_hamiltonian(3e9, 5e9)
    np.testing.assert_allclose(toggled_average(dh, "y"), np.zeros((4, 4)), atol=1e-6)
