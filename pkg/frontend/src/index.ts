/**
 * Scripting layer over the qmolsim core: computers, gates, circuits,
 * operators and one runner per algorithm. Every method delegates 1:1 to the
 * core through the JSON wire; this file holds object plumbing only.
 */
import { callWire, Complex, WireGate, WirePauliTerm } from "./wire";

export { Complex } from "./wire";

export interface Gate {
  kind: string;
  target: number;
  control: number | null;
  parameter: number | null;
}

/** Build a gate record; CNOT convention: gate('CNOT', t, c) flips t when c is 1. */
export function gate(
  kind: string,
  target: number,
  control: number | null = null,
  parameter: number | null = null
): Gate {
  return { kind, target, control, parameter };
}

function toWire(g: Gate): WireGate {
  return [g.kind, g.target, g.control, g.parameter];
}

export class Circuit {
  readonly gates: Gate[] = [];

  addGate(g: Gate): this {
    this.gates.push(g);
    return this;
  }

  toWire(): WireGate[] {
    return this.gates.map(toWire);
  }
}

/** Linear combination of Pauli strings; factors are [qubit, axis] pairs. */
export class QubitOperator {
  readonly terms: WirePauliTerm[] = [];

  addTerm(coeff: number | Complex, paulis: [number, string][]): this {
    const c: Complex = typeof coeff === "number" ? [coeff, 0] : coeff;
    this.terms.push({ coeff: c, paulis });
    return this;
  }
}

/** Normal-ordered second-quantized operator. */
export class SQOperator {
  readonly terms: {
    coeff: Complex;
    creators: number[];
    annihilators: number[];
  }[] = [];

  addTerm(
    coeff: number | Complex,
    creators: number[],
    annihilators: number[]
  ): this {
    const c: Complex = typeof coeff === "number" ? [coeff, 0] : coeff;
    this.terms.push({ coeff: c, creators, annihilators });
    return this;
  }

  /** Jordan-Wigner image, computed by the core. */
  jwTransform(): { terms: WirePauliTerm[]; text: string } {
    const response = callWire({ op: "jw_transform", terms: this.terms });
    return { terms: response.terms, text: response.text };
  }
}

/** State-vector register; gates accumulate client-side and every readout
 * replays the program on the core simulator. */
export class Computer {
  private readonly program: Gate[] = [];

  constructor(readonly nQubits: number) {}

  applyGate(g: Gate): void {
    this.program.push(g);
  }

  applyCircuit(circuit: Circuit): void {
    for (const g of circuit.gates) {
      this.program.push(g);
    }
  }

  private simulate(extra: object = {}): any {
    return callWire({
      op: "simulate",
      n_qubits: this.nQubits,
      circuit: this.program.map(toWire),
      ...extra,
    });
  }

  /** Complex amplitudes as [re, im] pairs, indexed by basis address. */
  getCoeffVec(): Complex[] {
    return this.simulate().amplitudes;
  }

  /** Exact expectation value of a QubitOperator. */
  directOpExpVal(operator: QubitOperator): Complex {
    return this.simulate({ operator: operator.terms }).expectation;
  }

  /** Shot-sampled expectation value (deterministic for a fixed seed). */
  measure(operator: QubitOperator, shots: number, seed = 0): Complex {
    return this.simulate({ operator: operator.terms, shots, seed }).measured;
  }

  /** Sample basis addresses from |C|^2; returns address -> count. */
  sampleBasisStates(shots: number, seed = 0): Record<string, number> {
    return callWire({
      op: "sample",
      n_qubits: this.nQubits,
      circuit: this.program.map(toWire),
      shots,
      seed,
    }).counts;
  }
}

/** Circuit for exp(factor * P) with purely imaginary factor. */
export function exponentiatePauliString(
  factor: Complex,
  paulis: [number, string][]
): { circuit: WireGate[]; phase: Complex; nCnot: number } {
  const response = callWire({ op: "exponentiate", factor, paulis });
  return {
    circuit: response.circuit,
    phase: response.phase,
    nCnot: response.n_cnot,
  };
}

export interface SystemInfo {
  n_qubits: number;
  n_spatial: number;
  n_electrons: number;
  hf_reference: number;
  hf_energy: number;
  nuclear_repulsion: number;
  n_pauli_strings: number;
}

/** Load an FCIDUMP molecular system in the core; returns its summary. */
export function loadSystem(fcidumpPath: string): SystemInfo {
  return callWire({ op: "load_system", fcidump: fcidumpPath });
}

export interface RunResult {
  algorithm: string;
  energy: number;
  resources: Record<string, number>;
  [key: string]: unknown;
}

function runAlgorithm(
  algorithm: string,
  fcidumpPath: string,
  params: Record<string, string | number> = {}
): RunResult {
  return callWire({ op: "run", algorithm, fcidump: fcidumpPath, params });
}

export const runVqe = (path: string, params = {}) =>
  runAlgorithm("vqe", path, params);
export const runAdaptVqe = (path: string, params = {}) =>
  runAlgorithm("adapt-vqe", path, params);
export const runPqe = (path: string, params = {}) =>
  runAlgorithm("pqe", path, params);
export const runSpqe = (path: string, params = {}) =>
  runAlgorithm("spqe", path, params);
export const runQite = (path: string, params = {}) =>
  runAlgorithm("qite", path, params);
export const runQlanczos = (path: string, params = {}) =>
  runAlgorithm("qlanczos", path, params);
export const runQk = (path: string, params = {}) =>
  runAlgorithm("qk", path, params);
export const runMrsqk = (path: string, params = {}) =>
  runAlgorithm("mrsqk", path, params);
export const runQpe = (path: string, params = {}) =>
  runAlgorithm("qpe", path, params);
