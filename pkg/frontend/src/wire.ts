/**
 * JSON wire transport to the core package.
 *
 * Every request is served by `python3 -m qmolsim.cli api`, which reads one
 * JSON document from stdin and answers on stdout. Complex numbers cross the
 * wire as [re, im] pairs. No simulation logic lives on this side.
 */
import { spawnSync } from "child_process";

export type Complex = [number, number];
export type WireGate = [string, number, number | null, number | null];
export interface WirePauliTerm {
  coeff: Complex;
  paulis: [number, string][];
}

const PYTHON = process.env.QMOLSIM_PYTHON ?? "python3";

export function callWire(request: object): any {
  const proc = spawnSync(PYTHON, ["-m", "qmolsim.cli", "api"], {
    input: JSON.stringify(request),
    encoding: "utf-8",
    maxBuffer: 64 * 1024 * 1024,
  });
  if (proc.status !== 0) {
    throw new Error(
      `qmolsim api exited with status ${proc.status}: ${proc.stderr}`
    );
  }
  const response = JSON.parse(proc.stdout);
  if (response.error !== undefined) {
    throw new Error(response.error);
  }
  return response;
}
