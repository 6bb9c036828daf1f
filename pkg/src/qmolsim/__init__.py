"""qmolsim: state-vector simulation and quantum algorithms for molecular
electronic structure."""

from .circuits import Circuit, exponentiate_pauli_string
from .computer import CapacityError, StateVector, new_computer
from .fermion import SecondQuantizedOperator, jw_transform
from .gates import Gate, GateError, make_gate
from .paulis import (
    PauliString,
    QubitOperator,
    pauli_multiply,
    qubit_operator_matrix,
)
from .solvers import (
    GeneralizedEigProblem,
    fci_oracle,
    minimize,
    solve_generalized_eig,
    solve_linear_regularized,
)
from .system import (
    MolecularSystem,
    OperatorPool,
    build_pool,
    build_qubit_hamiltonian,
    load_fcidump,
    load_hamiltonian_json,
    prepare_reference,
    reference_circuit,
)

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "CapacityError",
    "Gate",
    "GateError",
    "GeneralizedEigProblem",
    "MolecularSystem",
    "OperatorPool",
    "PauliString",
    "QubitOperator",
    "SecondQuantizedOperator",
    "StateVector",
    "build_pool",
    "build_qubit_hamiltonian",
    "exponentiate_pauli_string",
    "fci_oracle",
    "jw_transform",
    "load_fcidump",
    "load_hamiltonian_json",
    "make_gate",
    "minimize",
    "new_computer",
    "pauli_multiply",
    "prepare_reference",
    "qubit_operator_matrix",
    "reference_circuit",
    "solve_generalized_eig",
    "solve_linear_regularized",
]
