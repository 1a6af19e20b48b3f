// Typed client for the game-session HTTP API.

export interface MoveSchema {
  kind: "choose-left" | "choose-right" | "choose-constant" | "replicate";
  owner: "T" | "B";
  prefix: string;
  slot: number | null;
  address: string | null;
  path: number[];
  var: string | null;
}

export interface LeafView {
  address: string;
  formula: string;
}

export interface AntecedentView {
  slot: number;
  leaves: LeafView[];
}

export interface PositionState {
  closurePending: string[];
  valuation: Record<string, string>;
  succedent: string;
  antecedent: AntecedentView[];
}

export interface LabMove {
  player: "T" | "B";
  move: string;
}

export interface SessionState {
  id: string;
  sequent: string;
  position: PositionState;
  schemas: MoveSchema[];
  run: LabMove[];
  status: "awaiting-env" | "finished";
  verdict: "T" | "B" | "unknown" | null;
  tick: number;
}

export interface NewSessionSpec {
  sequent: string;
  proof: unknown;
  interpretation: unknown;
  humanSide: "env";
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class SessionApi {
  constructor(private baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      const text = await response.text();
      throw new ApiError(response.status, `${method} ${path}: ${response.status} ${text}`);
    }
    return response.json() as Promise<T>;
  }

  async createSession(spec: NewSessionSpec): Promise<SessionState> {
    const out = await this.request<{ id: string; state: SessionState }>(
      "POST", "/sessions", spec);
    return out.state;
  }

  getSession(id: string): Promise<SessionState> {
    return this.request("GET", `/sessions/${id}`);
  }

  submitMoves(id: string, moves: string[]): Promise<SessionState> {
    return this.request("POST", `/sessions/${id}/moves`, { moves });
  }

  undo(id: string, toTick: number): Promise<SessionState> {
    return this.request("POST", `/sessions/${id}/undo`, { toTick });
  }
}

// The move string a schema stands for, given the constant where one is needed.
export function instantiateSchema(schema: MoveSchema, constant?: string): string {
  switch (schema.kind) {
    case "replicate":
      return schema.prefix;
    case "choose-left":
      return schema.prefix + "0";
    case "choose-right":
      return schema.prefix + "1";
    case "choose-constant":
      if (!constant || !/^(0|1[01]*)$/.test(constant)) {
        throw new Error(`a binary numeral is required, got ${JSON.stringify(constant)}`);
      }
      return schema.prefix + constant;
  }
}
