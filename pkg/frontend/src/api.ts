// Typed client for the game service. The UI performs no game math: every
// number it shows comes out of one of these responses.

export type StrategyWire = string | { theta: number; phi: number } | { p: number };
export type Variant = "entangled" | "separable" | "classical_limit";
export type Backend = "circuit" | "box" | "wafer";

export interface Distribution {
  p_cc: number;
  p_cd: number;
  p_dc: number;
  p_dd: number;
}

export interface PlayRequest {
  strategy_a: StrategyWire;
  strategy_b: StrategyWire;
  variant: Variant;
  backend: Backend;
  shots?: number;
  seed?: number;
}

export interface PlayResponse {
  distribution: Distribution;
  payoffs: { a: number; b: number };
  postselection_probability: number | null;
  sampled_outcomes: string[] | null;
}

export interface SurfaceResponse {
  steps: number;
  variant: string;
  rows: number[][]; // [p_a, p_b, payoff_a, payoff_b]
}

export interface NoisePoint {
  sigma: number;
  gap_a: number;
  stderr_a: number;
  negativity: number;
}

export interface NoiseResponse {
  ideal_payoff_a: number;
  points: NoisePoint[];
}

export interface MixedResponse {
  x: number;
  distribution: Distribution;
  payoffs: { a: number; b: number };
  ppt: boolean;
  negativity: number;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export interface GameApi {
  play(req: PlayRequest): Promise<PlayResponse>;
  surface(steps: number, variant: Variant): Promise<SurfaceResponse>;
  noise(req: { strategy_a: StrategyWire; strategy_b: StrategyWire; sigma: number }): Promise<NoiseResponse>;
  mixed(req: { x: number; strategy_a: StrategyWire; strategy_b: StrategyWire }): Promise<MixedResponse>;
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, init);
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const message =
      typeof body.error === "string" ? body.error : `HTTP ${response.status}`;
    throw new ApiError(response.status, message);
  }
  return body as T;
}

function post<T>(base: string, path: string, payload: unknown): Promise<T> {
  return request<T>(base, path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export function createApi(base = ""): GameApi {
  return {
    play: (req) => post<PlayResponse>(base, "/api/play", req),
    surface: (steps, variant) =>
      request<SurfaceResponse>(base, `/api/surface?steps=${steps}&variant=${variant}`),
    noise: (req) => post<NoiseResponse>(base, "/api/noise", req),
    mixed: (req) => post<MixedResponse>(base, "/api/mixed", req),
  };
}
