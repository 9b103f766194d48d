/**
 * One-click table setups for the scenarios the solver harness verifies:
 * each preset pins n to the value from which the named alliance shape is
 * guaranteed its result.
 */

import type { NewGameBody } from "./api.js";

export interface Preset {
  id: string;
  label: string;
  n: number;
  players: number;
  alliances: number[][];
  humanSeat: number;
}

export const PRESETS: Preset[] = [
  {
    id: "two-player",
    label: "Two players (second to move wins)",
    n: 10,
    players: 2,
    alliances: [[1], [2]],
    humanSeat: 1,
  },
  {
    id: "three-solo",
    label: "Three solo players (nobody can force it)",
    n: 5,
    players: 3,
    alliances: [[1], [2], [3]],
    humanSeat: 1,
  },
  {
    id: "alliance-4v2",
    label: "4 vs 2 (big four win from n=30)",
    n: 30,
    players: 6,
    alliances: [
      [1, 2, 3, 4],
      [5, 6],
    ],
    humanSeat: 5,
  },
  {
    id: "alliance-5v2",
    label: "5 vs 2 (big five win from n=32)",
    n: 32,
    players: 7,
    alliances: [
      [1, 2, 3, 4, 5],
      [6, 7],
    ],
    humanSeat: 6,
  },
  {
    id: "big-2d-vs-d",
    label: "2d vs d, d=1 (pair beats the solo from n=16)",
    n: 16,
    players: 3,
    alliances: [[1, 2], [3]],
    humanSeat: 3,
  },
  {
    id: "offset-b1",
    label: "3-in-a-row vs 1, b=1 (trio wins from n=12)",
    n: 12,
    players: 4,
    alliances: [[1, 2, 3], [4]],
    humanSeat: 4,
  },
  {
    id: "teams-3x2",
    label: "Three teams of two (no team can force it at n=30)",
    n: 30,
    players: 6,
    alliances: [
      [1, 2],
      [3, 4],
      [5, 6],
    ],
    humanSeat: 1,
  },
];

export function presetById(id: string): Preset | undefined {
  return PRESETS.find((preset) => preset.id === id);
}

export function presetBody(preset: Preset): NewGameBody {
  return {
    n: preset.n,
    players: preset.players,
    alliances: preset.alliances.map((team) => [...team]),
    human_players: [preset.humanSeat],
  };
}
