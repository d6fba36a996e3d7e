/**
 * Typed client for the campnet read-only HTTP API.
 *
 * Every rendered number in the UI originates from these responses; the
 * client never recomputes analytics. Requests issued under the same key
 * cancel any in-flight predecessor, so a stale search or report can never
 * overwrite a newer one.
 */

export interface PersonHit {
  person_id: number;
  name_cn: string;
  name_en: string;
  dynasty: string | null;
  birth_year: number | null;
  death_year: number | null;
  degree: number;
}

export interface PersonsResponse {
  query: string;
  total: number;
  offset: number;
  items: PersonHit[];
}

export interface CentralityRow {
  person_id: number;
  name: string;
  degree: number;
  betweenness: number;
  closeness: number;
  eigenvector: number;
}

export interface EvidenceRecord {
  rel_code: string;
  rel_name: string;
  sign: "positive" | "negative" | "neutral";
  count: number;
}

export interface PairReport {
  u: number;
  v: number;
  u_name: string;
  v_name: string;
  records: EvidenceRecord[];
  pos_total: number;
  neg_total: number;
  neu_total: number;
  net_sign: "positive" | "negative" | "neutral";
}

export interface PartitionResult {
  assignment: Record<string, number>;
  l: number;
  imbalance: number;
  objective: string;
  score: number;
  algorithm: string;
  seed: number;
  groups: number[][];
}

export interface ThreePartReport {
  query: Record<string, unknown>;
  subgraph: { node_count: number; edge_count: number };
  central: CentralityRow[];
  centrality_meta: { eigenvector_converged: boolean; notes: string[] };
  pairs: PairReport[];
  partition: PartitionResult;
}

export interface SnapshotPerson {
  person_id: number;
  name_cn: string;
  name_en: string;
}

export interface SnapshotEdge {
  u: number;
  v: number;
  weight: number;
  sign: "positive" | "negative" | "neutral";
}

export interface Subgraph {
  node_count: number;
  edge_count: number;
  persons: SnapshotPerson[];
  edges: SnapshotEdge[];
  ball_sizes: number[];
}

export interface ReportQuery {
  seeds: number[];
  depth: number;
  algorithm: "greedy" | "community" | "spectral";
  seed: number;
  groups?: number | null;
  restarts?: number;
  gamma_pos?: number;
  gamma_neg?: number;
  dim?: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public kind: string,
    message: string,
    public rawBody: string,
  ) {
    super(message);
  }
}

/** Thrown when a response was superseded by a newer request under the same key. */
export class Cancelled extends Error {
  constructor() {
    super("request cancelled");
  }
}

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(private baseUrl: string = "") {}

  private async request<T>(key: string, path: string, init?: RequestInit): Promise<T> {
    this.inflight.get(key)?.abort();
    const controller = new AbortController();
    this.inflight.set(key, controller);
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, { ...init, signal: controller.signal });
    } catch (err) {
      if (controller.signal.aborted) throw new Cancelled();
      throw err;
    } finally {
      if (this.inflight.get(key) === controller) this.inflight.delete(key);
    }
    const text = await response.text();
    if (!response.ok) {
      let kind = "error";
      let message = `HTTP ${response.status}`;
      try {
        const body = JSON.parse(text) as { error?: { type?: string; message?: string } };
        kind = body.error?.type ?? kind;
        message = body.error?.message ?? message;
      } catch {
        /* non-JSON error body: keep the generic message */
      }
      throw new ApiError(response.status, kind, message, text);
    }
    try {
      return JSON.parse(text) as T;
    } catch {
      throw new ApiError(response.status, "malformed_payload", "response is not valid JSON", text);
    }
  }

  searchPersons(q: string, limit = 8): Promise<PersonsResponse> {
    const params = new URLSearchParams({ q, limit: String(limit) });
    return this.request<PersonsResponse>("persons", `/api/persons?${params}`);
  }

  report(query: ReportQuery): Promise<ThreePartReport> {
    return this.request<ThreePartReport>("report", "/api/report", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(query),
    });
  }

  subgraph(seeds: number[], depth: number): Promise<Subgraph> {
    const params = new URLSearchParams({ seeds: seeds.join(","), depth: String(depth) });
    return this.request<Subgraph>("subgraph", `/api/subgraph?${params}`);
  }

  stats(): Promise<Record<string, unknown>> {
    return this.request<Record<string, unknown>>("stats", "/api/stats");
  }
}
