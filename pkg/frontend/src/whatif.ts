// What-if overlays for the imperfection sliders. Slider moves are debounced
// so at most one request per settle period reaches the service.

import type { GameApi, StrategyWire } from "./api.js";

export interface NoiseOverlay {
  sigma: number;
  averagePayoffA: number;
  gap: number;
  negativity: number;
}

export interface MixedOverlay {
  x: number;
  payoffA: number;
  payoffB: number;
  separable: boolean;
  negativity: number;
  badge: string;
}

export async function noiseOverlay(
  api: GameApi,
  strategyA: StrategyWire,
  strategyB: StrategyWire,
  sigma: number,
): Promise<NoiseOverlay> {
  const response = await api.noise({ strategy_a: strategyA, strategy_b: strategyB, sigma });
  const point = response.points[0]!;
  return {
    sigma: point.sigma,
    averagePayoffA: response.ideal_payoff_a - point.gap_a,
    gap: point.gap_a,
    negativity: point.negativity,
  };
}

export async function mixedOverlay(
  api: GameApi,
  strategyA: StrategyWire,
  strategyB: StrategyWire,
  x: number,
): Promise<MixedOverlay> {
  const response = await api.mixed({ x, strategy_a: strategyA, strategy_b: strategyB });
  return {
    x: response.x,
    payoffA: response.payoffs.a,
    payoffB: response.payoffs.b,
    separable: response.ppt,
    negativity: response.negativity,
    badge: response.ppt ? "classically correlated (separable)" : "entangled resource",
  };
}

export function debounce<Args extends unknown[]>(
  fn: (...args: Args) => void,
  waitMs: number,
  timers: { set: typeof setTimeout; clear: typeof clearTimeout } = {
    set: setTimeout,
    clear: clearTimeout,
  },
): { call: (...args: Args) => void; cancel: () => void } {
  let handle: ReturnType<typeof setTimeout> | null = null;
  return {
    call(...args: Args) {
      if (handle !== null) timers.clear(handle);
      handle = timers.set(() => {
        handle = null;
        fn(...args);
      }, waitMs);
    },
    cancel() {
      if (handle !== null) timers.clear(handle);
      handle = null;
    },
  };
}
