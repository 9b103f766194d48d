/**
 * Wires the page: new-game form with seating editor and presets, the
 * confirmed-state board, move buttons, hint badge, and history.
 */

import { ApiClient, ApiError } from "./api.js";
import { renderBanner, renderBoard, renderHistory, renderMoveButtons } from "./board.js";
import { GameController, Snapshot } from "./controller.js";
import { PRESETS, presetById } from "./presets.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const nInput = el<HTMLInputElement>("n-input");
const playersInput = el<HTMLInputElement>("players-input");
const presetSelect = el<HTMLSelectElement>("preset-select");
const seatingEditor = el<HTMLDivElement>("seating-editor");
const rotateButton = el<HTMLButtonElement>("rotate-button");
const humanSelect = el<HTMLSelectElement>("human-select");
const startButton = el<HTMLButtonElement>("start-button");
const banner = el<HTMLDivElement>("banner");
const board = el<HTMLDivElement>("board");
const moveButtons = el<HTMLDivElement>("move-buttons");
const hintButton = el<HTMLButtonElement>("hint-button");
const hintBadge = el<HTMLSpanElement>("hint-badge");
const historyList = el<HTMLOListElement>("history");
const toastArea = el<HTMLDivElement>("toasts");

// Team number per seat, edited by clicking seat chips.
let teamOfSeat: number[] = [1, 2];
let inFlight = false;

function toast(message: string): void {
  const node = document.createElement("div");
  node.className = "toast";
  node.textContent = message;
  toastArea.appendChild(node);
  setTimeout(() => node.remove(), 6000);
}

function alliancesFromSeats(): number[][] {
  const teams = new Map<number, number[]>();
  teamOfSeat.forEach((team, seatIndex) => {
    if (!teams.has(team)) {
      teams.set(team, []);
    }
    teams.get(team)!.push(seatIndex + 1);
  });
  return [...teams.entries()].sort((a, b) => a[0] - b[0]).map(([, seats]) => seats);
}

function renderSeatingEditor(): void {
  seatingEditor.innerHTML = "";
  teamOfSeat.forEach((team, seatIndex) => {
    const chip = document.createElement("button");
    chip.type = "button";
    chip.className = `seat-chip team-${((team - 1) % 6) + 1}`;
    chip.textContent = `P${seatIndex + 1} / T${team}`;
    chip.title = "click to move this seat to the next team";
    chip.addEventListener("click", () => {
      teamOfSeat[seatIndex] = (team % teamOfSeat.length) + 1;
      renderSeatingEditor();
    });
    seatingEditor.appendChild(chip);
  });
}

function syncSeatCount(): void {
  const players = Math.max(1, Number(playersInput.value) || 1);
  while (teamOfSeat.length < players) {
    teamOfSeat.push(teamOfSeat.length + 1);
  }
  teamOfSeat = teamOfSeat.slice(0, players).map((team) => Math.min(team, players));
  humanSelect.innerHTML = "";
  for (let seat = 1; seat <= players; seat++) {
    const option = document.createElement("option");
    option.value = String(seat);
    option.textContent = `player ${seat}`;
    humanSelect.appendChild(option);
  }
  renderSeatingEditor();
}

function rotateSeating(): void {
  if (teamOfSeat.length > 1) {
    teamOfSeat.unshift(teamOfSeat.pop()!);
    renderSeatingEditor();
  }
}

function applyPreset(id: string): void {
  const preset = presetById(id);
  if (!preset) {
    return;
  }
  nInput.value = String(preset.n);
  playersInput.value = String(preset.players);
  teamOfSeat = new Array(preset.players).fill(1);
  preset.alliances.forEach((team, teamIndex) => {
    for (const seat of team) {
      teamOfSeat[seat - 1] = teamIndex + 1;
    }
  });
  syncSeatCount();
  humanSelect.value = String(preset.humanSeat);
}

function setBusy(busy: boolean): void {
  inFlight = busy;
  startButton.disabled = busy;
  hintButton.disabled = busy || controller.current === null;
  for (const button of moveButtons.querySelectorAll("button")) {
    (button as HTMLButtonElement).disabled = busy || !controller.humanToMove();
  }
}

function render(snapshot: Snapshot): void {
  renderBanner(banner, snapshot.view);
  renderBoard(board, snapshot.view.state);
  renderHistory(historyList, snapshot.view.moves);
  renderMoveButtons(
    moveButtons,
    snapshot.legal,
    controller.humanToMove() && !inFlight,
    (token) => void playHuman(token),
  );
  hintBadge.textContent = "";
  hintBadge.className = "badge";
}

const controller = new GameController(api, { onRender: render });

async function guard(work: () => Promise<void>): Promise<void> {
  if (inFlight) {
    return;
  }
  setBusy(true);
  try {
    await work();
  } catch (error) {
    toast(error instanceof ApiError ? error.message : String(error));
  } finally {
    setBusy(false);
  }
}

async function runMachines(): Promise<void> {
  while (await controller.stepMachine()) {
    // one confirmed render per machine move; keep looping to the next
    // human turn or the end of the game.
  }
}

async function startGame(): Promise<void> {
  await guard(async () => {
    const humanSeat = Number(humanSelect.value) || 1;
    await controller.start({
      n: Number(nInput.value),
      players: Number(playersInput.value),
      alliances: alliancesFromSeats(),
      human_players: [humanSeat],
    });
  });
  await guard(runMachines);
}

async function playHuman(token: string): Promise<void> {
  await guard(async () => {
    await controller.playHuman(token);
  });
  await guard(runMachines);
}

async function showHint(): Promise<void> {
  await guard(async () => {
    const analysis = await controller.hint();
    const coalition = controller.referenceCoalition();
    hintBadge.textContent = analysis.win
      ? `${coalition} is winning${analysis.best_move ? `: try ${analysis.best_move}` : ""}`
      : `${coalition} cannot force it from here`;
    hintBadge.className = analysis.win ? "badge winning" : "badge losing";
  });
}

for (const preset of PRESETS) {
  const option = document.createElement("option");
  option.value = preset.id;
  option.textContent = preset.label;
  presetSelect.appendChild(option);
}
presetSelect.addEventListener("change", () => applyPreset(presetSelect.value));
playersInput.addEventListener("change", syncSeatCount);
rotateButton.addEventListener("click", rotateSeating);
startButton.addEventListener("click", () => void startGame());
hintButton.addEventListener("click", () => void showHint());

syncSeatCount();
applyPreset(PRESETS[0].id);
presetSelect.value = PRESETS[0].id;
