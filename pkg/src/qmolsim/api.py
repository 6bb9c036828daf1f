"""JSON wire protocol used by external bindings.

One request document on stdin (``qmolsim api``), one JSON response on
stdout. A request is either a single operation object or
``{"ops": [...]}`` for a batch (answered with ``{"results": [...]}``).
All numeric complex values cross the wire as [re, im] pairs. No algorithm
logic lives here: every operation delegates to the library.

Operations:
  simulate      {n_qubits, circuit, operator?, shots?, seed?}
                -> {amplitudes, expectation?, measured?}
  sample        {n_qubits, circuit, shots, seed} -> {counts}
  jw_transform  {terms: [{coeff, creators, annihilators}]} -> {terms, text}
  exponentiate  {factor, paulis} -> {circuit, phase, n_cnot}
  load_system   {fcidump} -> {n_qubits, n_electrons, hf_reference, ...}
  run           {algorithm, fcidump, params?} -> CLI-equivalent result
"""
from __future__ import annotations

import json
from typing import Any


def _c2pair(value: complex) -> list[float]:
    value = complex(value)
    return [value.real, value.imag]


def _gate_to_wire(gate) -> list:
    return [gate.kind, gate.target, gate.control, gate.parameter]


def _circuit_from_wire(spec: list) -> "Circuit":
    from .circuits import Circuit
    from .gates import make_gate

    circ = Circuit()
    for entry in spec:
        kind, target = entry[0], int(entry[1])
        control = entry[2] if len(entry) > 2 and entry[2] is not None else None
        parameter = entry[3] if len(entry) > 3 and entry[3] is not None else None
        circ.add(make_gate(kind, target,
                           None if control is None else int(control),
                           None if parameter is None else float(parameter)))
    return circ


def _operator_from_wire(terms: list[dict]) -> "QubitOperator":
    from .paulis import PauliString, QubitOperator

    collected = []
    for term in terms:
        re_part, im_part = term["coeff"]
        string = PauliString.from_factors(
            (int(q), axis) for q, axis in term.get("paulis", [])
        )
        collected.append((complex(re_part, im_part), string))
    return QubitOperator(collected)


def _operator_to_wire(op) -> list[dict]:
    return [
        {"coeff": _c2pair(coeff), "paulis": [[q, axis] for q, axis in string.factors()]}
        for coeff, string in op
    ]


def _op_simulate(request: dict) -> dict:
    from .computer import StateVector

    state = StateVector(int(request["n_qubits"]))
    state.apply_circuit(_circuit_from_wire(request.get("circuit", [])))
    response: dict[str, Any] = {
        "amplitudes": [_c2pair(a) for a in state.amplitudes]
    }
    if "operator" in request:
        op = _operator_from_wire(request["operator"])
        response["expectation"] = _c2pair(state.expectation(op))
        if request.get("shots"):
            response["measured"] = _c2pair(
                state.measure(op, int(request["shots"]), int(request.get("seed", 0)))
            )
    return response


def _op_sample(request: dict) -> dict:
    from .computer import StateVector

    state = StateVector(int(request["n_qubits"]))
    state.apply_circuit(_circuit_from_wire(request.get("circuit", [])))
    outcomes = state.sample_basis_states(
        int(request["shots"]), int(request.get("seed", 0))
    )
    counts: dict[str, int] = {}
    for outcome in outcomes:
        counts[str(int(outcome))] = counts.get(str(int(outcome)), 0) + 1
    return {"counts": counts}


def _op_jw_transform(request: dict) -> dict:
    from .fermion import SecondQuantizedOperator

    sq = SecondQuantizedOperator()
    for term in request["terms"]:
        re_part, im_part = term["coeff"]
        sq.add_term(complex(re_part, im_part), term["creators"], term["annihilators"])
    op = sq.jw_transform()
    return {"terms": _operator_to_wire(op), "text": str(op)}


def _op_exponentiate(request: dict) -> dict:
    from .circuits import exponentiate_pauli_string
    from .paulis import PauliString

    re_part, im_part = request["factor"]
    string = PauliString.from_factors(
        (int(q), axis) for q, axis in request.get("paulis", [])
    )
    circuit, phase = exponentiate_pauli_string(complex(re_part, im_part), string)
    return {
        "circuit": [_gate_to_wire(g) for g in circuit],
        "phase": _c2pair(phase),
        "n_cnot": circuit.n_cnot(),
    }


def _op_load_system(request: dict) -> dict:
    from .system import load_fcidump

    system = load_fcidump(request["fcidump"])
    return {
        "n_qubits": system.n_qubits,
        "n_spatial": system.n_spatial,
        "n_electrons": system.n_electrons,
        "hf_reference": system.hf_reference,
        "hf_energy": system.hf_energy(),
        "nuclear_repulsion": system.e_nuclear,
        "n_pauli_strings": system.qubit_hamiltonian.n_pauli_strings(),
    }


def _op_run(request: dict) -> dict:
    from .cli import _run_single, build_parser

    algorithm = request["algorithm"]
    argv = [algorithm]
    if "fcidump" in request:
        argv += ["--fcidump", str(request["fcidump"])]
    for key, value in request.get("params", {}).items():
        argv += [f"--{key.replace('_', '-')}", str(value)]
    args = build_parser().parse_args(argv)
    return _run_single(algorithm, args)


_OPERATIONS = {
    "simulate": _op_simulate,
    "sample": _op_sample,
    "jw_transform": _op_jw_transform,
    "exponentiate": _op_exponentiate,
    "load_system": _op_load_system,
    "run": _op_run,
}


def serve_request(request_text: str) -> dict:
    """Answer one wire request; errors come back as {"error": message}."""
    try:
        request = json.loads(request_text)
    except json.JSONDecodeError as exc:
        return {"error": f"malformed request JSON: {exc}"}
    if "ops" in request:
        return {"results": [_serve_one(op) for op in request["ops"]]}
    return _serve_one(request)


def _serve_one(request: dict) -> dict:
    name = request.get("op")
    handler = _OPERATIONS.get(name)
    if handler is None:
        return {"error": f"unknown operation '{name}'"}
    try:
        return handler(request)
    except Exception as exc:  # surface core errors with their message
        return {"error": f"{type(exc).__name__}: {exc}"}
