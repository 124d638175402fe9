// Integration against a running service. Skipped unless QPD_API_URL is set,
// e.g.  QPD_API_URL=http://127.0.0.1:8000 npm test
import { describe, expect, it } from "vitest";

import { createApi } from "../src/api.js";
import { initialState, lastRound, submitRound, type RoundSettings } from "../src/state.js";

const base = process.env.QPD_API_URL;

describe.skipIf(!base)("live service", () => {
  const api = createApi(base!);
  const settings: RoundSettings = {
    strategyA: "d",
    strategyB: "d",
    variant: "entangled",
    backend: "circuit",
    shots: 10,
    seed: 424242,
  };

  it("a hot-seat (d,d) round displays 3 / 3", async () => {
    const state = await submitRound(initialState(), settings, api);
    const round = lastRound(state)!;
    expect(round.response.payoffs.a).toBeCloseTo(3, 9);
    expect(round.response.payoffs.b).toBeCloseTo(3, 9);
  });

  it("seeded replay reproduces the sampled outcomes", async () => {
    const first = await submitRound(initialState(), settings, api);
    const second = await submitRound(first, settings, api);
    const [a, b] = [first.history[0]!, second.history[1]!];
    expect(a.response.sampled_outcomes).toEqual(b.response.sampled_outcomes);
  });

  it("box backend reports its postselection probability", async () => {
    const state = await submitRound(
      initialState(),
      { ...settings, backend: "box" },
      api,
    );
    const round = lastRound(state)!;
    expect(round.response.postselection_probability).toBeCloseTo(0.25, 9);
  });
});
