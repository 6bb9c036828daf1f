/**
 * Walkthrough of the scripting API: registers and gates, Bell states,
 * Pauli exponentials, expectation values, second-quantized operators, and
 * a black-box VQE run on a bundled molecular system.
 *
 *   npx ts-node examples/tutorial.ts
 */
import * as path from "path";

import {
  Circuit,
  Computer,
  QubitOperator,
  SQOperator,
  exponentiatePauliString,
  gate,
  loadSystem,
  runVqe,
} from "../src/index";

const fixture = path.resolve(
  __dirname,
  "../../src/qmolsim/data/fcidump/H2_0.75.fcidump"
);

// --- a four-qubit register -------------------------------------------------
const qcomp = new Computer(4);
console.log("fresh 4-qubit register, amplitude[0]:", qcomp.getCoeffVec()[0]);

// --- single gates ------------------------------------------------------------
const x4 = gate("X", 4);
console.log("gate:", x4);

// --- Bell state --------------------------------------------------------------
const qbell = new Computer(2);
qbell.applyGate(gate("H", 0));
qbell.applyGate(gate("CNOT", 1, 0));
console.log("Bell amplitudes:", qbell.getCoeffVec());

// --- exponential of a Pauli string -------------------------------------------
const { circuit, phase } = exponentiatePauliString(
  [0, -0.5],
  [
    [0, "Z"],
    [1, "Z"],
    [2, "X"],
  ]
);
console.log("exp(-0.5i X2 Z1 Z0) circuit:", circuit, "phase:", phase);

// --- expectation values -------------------------------------------------------
const xSum = new QubitOperator().addTerm(1.0, [[0, "X"]]).addTerm(1.0, [[1, "X"]]);
console.log("<Bell| X0 + X1 |Bell> =", qbell.directOpExpVal(xSum));

// --- second quantization ------------------------------------------------------
const sqOp = new SQOperator();
sqOp.addTerm(0.5, [1], [2]);
sqOp.addTerm([0, -0.25], [4, 2], [3, 1]);
console.log("JW transform:\n" + sqOp.jwTransform().text);

// --- molecular systems and algorithms ------------------------------------------
const info = loadSystem(fixture);
console.log("H2 system:", info);
const vqe = runVqe(fixture, { pool: "SD" });
console.log("VQE energy:", vqe.energy, "resources:", vqe.resources);
