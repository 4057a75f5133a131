# Copyright 2026 The fqcontrol Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import math

import pytest

import fqcontrol as fq


def test_capacities():
    assert fq.capacity_control_channel(0, 0) == pytest.approx(1, abs=1e-9)
    assert fq.capacity_control_channel(math.pi / 4, math.pi / 4) == pytest.approx(0, abs=1e-9)
    assert fq.capacity_gaussian(2) == pytest.approx(1, abs=1e-12)
    assert fq.capacity_gaussian(0.5) == 0
    assert math.isinf(fq.capacity_gaussian(1))


def test_states_and_fidelity():
    rho = fq.DensityMatrix(0.7, 0.2)
    assert fq.uhlmann_fidelity(rho, rho) == pytest.approx(1)
    mixed = fq.DensityMatrix.maximally_mixed()
    assert fq.uhlmann_fidelity(mixed, fq.DensityMatrix(1, 0)) == pytest.approx(1 / math.sqrt(2))
    assert fq.binary_entropy(0.5) == 1
    with pytest.raises(fq.NotAState):
        fq.DensityMatrix(0.5, 0.6)
    with pytest.raises(fq.FqcError):
        fq.binary_entropy(2)


def test_qubit_control():
    y, z, physical = fq.analytic_control_state(0, 0, fq.DensityMatrix(0.7, 0.2))
    assert (y, z, physical) == (pytest.approx(0.7), pytest.approx(-0.2), True)
    sol = fq.solve_qubit_control(math.pi / 12, math.pi / 6, fq.DensityMatrix(0.5, 0.5))
    assert not sol.reachable
    assert 0 < sol.error < 1
    with pytest.raises(fq.DomainError):
        fq.solve_qubit_control(1.0, 0.1, fq.DensityMatrix(0.5, 0.5))


def test_gaussian_control():
    vac = fq.CovarianceMatrix.identity()
    sq = fq.squeezed_thermal(0, 0.5, 0)
    assert fq.gaussian_fidelity(vac, sq) == pytest.approx(1 / math.sqrt(math.cosh(0.5)))
    assert fq.solve_gaussian_control(2, fq.CovarianceMatrix(3, 0, 3)).reachable
    sol = fq.solve_gaussian_control(2, vac)
    assert not sol.reachable and sol.error > 0
    with pytest.raises(fq.NonPhysicalInput):
        fq.gaussian_fidelity(vac, fq.CovarianceMatrix(0.5, 0, 0.5))


def test_sweeps_are_deterministic():
    a = fq.qubit_sweep(n_targets=5, threads=1)
    b = fq.qubit_sweep(n_targets=5, threads=2)
    assert a == b
    assert len(a) == 36
    g = fq.gaussian_sweep(q_grid=[0.5, 1.0, 2.0], n_targets=5)
    assert math.isinf(g[1]["Q"])


def test_fit():
    caps = [0.1 * i for i in range(1, 11)]
    res = fq.fit("i", caps, [7 * c + 2 for c in caps])
    assert res["coefficients"] == [pytest.approx(7), pytest.approx(2)]
    assert res["zeta"] < 1e-12
    with pytest.raises(fq.InsufficientData):
        fq.fit("ii", caps[:3], caps[:3])
    assert fq.shannon_hartley_bound(2, 4, 3, 1) == pytest.approx(-1)
