/**
 * Query state and its round-trip through URL parameters, so a permalink
 * fully reconstructs any view.
 */

export const DEPTH_CAP = 4;
export const ALGORITHMS = ["greedy", "community", "spectral"] as const;
export type AlgorithmName = (typeof ALGORITHMS)[number];

export interface QueryState {
  seeds: number[];
  depth: number;
  algorithm: AlgorithmName;
  seed: number;
  groups: number | null;
  gammaPos: number;
  gammaNeg: number;
  dim: number;
}

export function defaultState(): QueryState {
  return {
    seeds: [],
    depth: 0,
    algorithm: "community",
    seed: 0,
    groups: null,
    gammaPos: 1,
    gammaNeg: 1,
    dim: 8,
  };
}

/** Human-readable validation problem, or null when the state is submittable. */
export function validate(state: QueryState): string | null {
  if (state.seeds.length === 0) return "add at least one person to the seed set";
  if (!Number.isInteger(state.depth) || state.depth < 0 || state.depth > DEPTH_CAP) {
    return `depth must be between 0 and ${DEPTH_CAP}`;
  }
  if ((state.algorithm === "greedy" || state.algorithm === "spectral")
      && (state.groups === null || state.groups < 1)) {
    return `the ${state.algorithm} strategy needs a group count`;
  }
  return null;
}

export function stateToParams(state: QueryState): URLSearchParams {
  const params = new URLSearchParams();
  params.set("seeds", state.seeds.join(","));
  params.set("depth", String(state.depth));
  params.set("algorithm", state.algorithm);
  params.set("seed", String(state.seed));
  if (state.groups !== null) params.set("groups", String(state.groups));
  if (state.gammaPos !== 1) params.set("gamma_pos", String(state.gammaPos));
  if (state.gammaNeg !== 1) params.set("gamma_neg", String(state.gammaNeg));
  if (state.dim !== 8) params.set("dim", String(state.dim));
  return params;
}

export function stateFromParams(params: URLSearchParams): QueryState | null {
  const raw = params.get("seeds");
  if (raw === null) return null;
  const seeds = raw
    .split(",")
    .filter((s) => s.trim() !== "")
    .map((s) => Number.parseInt(s, 10));
  if (seeds.length === 0 || seeds.some((s) => Number.isNaN(s))) return null;
  const algorithm = params.get("algorithm") ?? "community";
  if (!(ALGORITHMS as readonly string[]).includes(algorithm)) return null;
  const num = (key: string, fallback: number): number => {
    const value = params.get(key);
    if (value === null) return fallback;
    const parsed = Number(value);
    return Number.isFinite(parsed) ? parsed : fallback;
  };
  const groupsRaw = params.get("groups");
  return {
    seeds,
    depth: num("depth", 0),
    algorithm: algorithm as AlgorithmName,
    seed: num("seed", 0),
    groups: groupsRaw === null ? null : Number.parseInt(groupsRaw, 10),
    gammaPos: num("gamma_pos", 1),
    gammaNeg: num("gamma_neg", 1),
    dim: num("dim", 8),
  };
}

export function toReportBody(state: QueryState) {
  return {
    seeds: state.seeds,
    depth: state.depth,
    algorithm: state.algorithm,
    seed: state.seed,
    groups: state.groups,
    gamma_pos: state.gammaPos,
    gamma_neg: state.gammaNeg,
    dim: state.dim,
  };
}
