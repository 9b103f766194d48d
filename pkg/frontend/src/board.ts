/** DOM rendering for the board, move buttons, banner, and history. */

import { SessionView, StateJson } from "./api.js";
import { describeToken, fibValue } from "./moves.js";

/** One column per Fibonacci index up to the board capacity. */
export function renderBoard(container: HTMLElement, state: StateJson): void {
  container.innerHTML = "";
  const capacity = Math.max(state.counts.length, 4);
  for (let index = 1; index <= capacity; index++) {
    const count = state.counts[index - 1] ?? 0;
    const column = document.createElement("div");
    column.className = "board-column" + (count > 0 ? " occupied" : "");
    const tiles = document.createElement("div");
    tiles.className = "tiles";
    for (let t = 0; t < count; t++) {
      const tile = document.createElement("div");
      tile.className = "tile";
      tile.textContent = String(fibValue(index));
      tiles.appendChild(tile);
    }
    const label = document.createElement("div");
    label.className = "column-label";
    label.textContent = `F${index} = ${fibValue(index)}`;
    const counter = document.createElement("div");
    counter.className = "column-count";
    counter.textContent = count > 0 ? `x${count}` : "";
    column.append(tiles, counter, label);
    container.appendChild(column);
  }
}

export function renderMoveButtons(
  container: HTMLElement,
  tokens: string[],
  enabled: boolean,
  onPick: (token: string) => void,
): void {
  container.innerHTML = "";
  for (const token of tokens) {
    const button = document.createElement("button");
    button.className = "move-button";
    button.dataset.token = token;
    button.textContent = describeToken(token);
    button.title = token;
    button.disabled = !enabled;
    button.addEventListener("click", () => onPick(token));
    container.appendChild(button);
  }
  if (tokens.length === 0) {
    const note = document.createElement("span");
    note.className = "no-moves";
    note.textContent = "no moves: the position is final";
    container.appendChild(note);
  }
}

export function renderBanner(container: HTMLElement, view: SessionView): void {
  if (view.finished) {
    if (view.winner === null) {
      container.textContent = "The start position is already final; nobody moved.";
    } else {
      container.textContent =
        `Player ${view.winner.player} (team ${view.winner.team}) ` +
        "made the final move and wins!";
    }
    container.className = "banner finished";
    return;
  }
  const seat = view.to_move;
  container.textContent = seat
    ? `Turn ${view.turn}: player ${seat.player} (team ${seat.team}) to move`
    : "";
  container.className = "banner";
}

export function renderHistory(container: HTMLElement, moves: string[]): void {
  container.innerHTML = "";
  moves.forEach((token, index) => {
    const row = document.createElement("li");
    row.textContent = `${index + 1}. ${describeToken(token)} (${token})`;
    container.appendChild(row);
  });
}
