# Copyright 2026 The qcontract Authors
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

"""Quantum circuits with runtime state and measurement contracts.

States are 1-D complex numpy arrays; qubit i is bit i of the amplitude index.
"""

from ._core import (
    Circuit,
    ContractViolation,
    DslError,
    EntangledSubsetError,
    Gate,
    apply_gate,
    controlled_u_circuit,
    decode_phase,
    decompose_1q,
    decompose_controlled,
    dft_matrix,
    eq_state,
    estimate_real_expectation,
    evaluate_expression,
    fidelity,
    format_source,
    gate,
    gate_names,
    hadamard_test,
    hadamard_test_circuit,
    inverse_qft_circuit,
    load_circuit,
    marginal_probabilities,
    matrix_gate,
    partial_state,
    phase_estimation,
    purity,
    qft_circuit,
    run_cli,
    run_source,
    sample_counts,
    seeded_random_state,
    zero_state,
    zyz_angles,
)

__version__ = "0.1.0"


def main(argv=None):
    """Console entry point mirroring the `qcontract` executable."""
    import sys

    code, out, err = run_cli(list(sys.argv[1:] if argv is None else argv))
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
