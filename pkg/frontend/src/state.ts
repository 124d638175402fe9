// Hot-seat session state: an append-only round history plus the settings of
// the round being prepared. Cumulative scores are always recomputed from the
// history, so they cannot drift from what is displayed per round.

import type { Backend, GameApi, PlayResponse, StrategyWire, Variant } from "./api.js";
import { ApiError } from "./api.js";

export interface RoundSettings {
  strategyA: StrategyWire;
  strategyB: StrategyWire;
  variant: Variant;
  backend: Backend;
  shots: number;
  seed?: number;
}

export interface RoundRecord {
  settings: RoundSettings;
  response: PlayResponse;
}

export interface SessionState {
  history: readonly RoundRecord[];
  error: string | null;
}

export function initialState(): SessionState {
  return { history: [], error: null };
}

export function cumulativeScores(history: readonly RoundRecord[]): { a: number; b: number } {
  let a = 0;
  let b = 0;
  for (const round of history) {
    a += round.response.payoffs.a;
    b += round.response.payoffs.b;
  }
  return { a, b };
}

export async function submitRound(
  state: SessionState,
  settings: RoundSettings,
  api: GameApi,
): Promise<SessionState> {
  try {
    const response = await api.play({
      strategy_a: settings.strategyA,
      strategy_b: settings.strategyB,
      variant: settings.variant,
      backend: settings.backend,
      shots: settings.shots > 0 ? settings.shots : undefined,
      seed: settings.seed,
    });
    return {
      history: [...state.history, { settings, response }],
      error: null,
    };
  } catch (err) {
    if (err instanceof ApiError) {
      return { history: state.history, error: err.message };
    }
    throw err;
  }
}

export function lastRound(state: SessionState): RoundRecord | null {
  return state.history.length > 0 ? state.history[state.history.length - 1]! : null;
}

// Presentation helpers: formatting only, never arithmetic on game values
// beyond the cumulative sum above.

export function formatPayoff(value: number): string {
  return (Math.round(value * 1000) / 1000).toString();
}

export function distributionBars(
  response: PlayResponse,
): { label: string; probability: number }[] {
  const d = response.distribution;
  return [
    { label: "cc", probability: d.p_cc },
    { label: "cd", probability: d.p_cd },
    { label: "dc", probability: d.p_dc },
    { label: "dd", probability: d.p_dd },
  ];
}

export function sampledSummary(response: PlayResponse): string {
  if (!response.sampled_outcomes || response.sampled_outcomes.length === 0) {
    return "";
  }
  const counts = new Map<string, number>();
  for (const outcome of response.sampled_outcomes) {
    counts.set(outcome, (counts.get(outcome) ?? 0) + 1);
  }
  return [...counts.entries()]
    .sort((x, y) => x[0].localeCompare(y[0]))
    .map(([label, count]) => `${label}:${count}`)
    .join(" ");
}
