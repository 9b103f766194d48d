/** Move-token display helpers (the tokens themselves come from the server). */

/** Fibonacci value under the game's indexing: F_1 = 1, F_2 = 2, F_3 = 3, ... */
export function fibValue(i: number): number {
  if (i < 1 || !Number.isInteger(i)) {
    throw new Error(`bad Fibonacci index ${i}`);
  }
  let a = 1;
  let b = 2;
  for (let step = 1; step < i; step++) {
    [a, b] = [b, a + b];
  }
  return a;
}

/** Human-readable equation for a move token, e.g. "adj:2" -> "2+3=5". */
export function describeToken(token: string): string {
  if (token === "c1") {
    return "1+1=2";
  }
  if (token === "s2") {
    return "2+2=1+3";
  }
  const [kind, arg] = token.split(":");
  const i = Number(arg);
  if (kind === "adj" && Number.isInteger(i) && i >= 1) {
    return `${fibValue(i)}+${fibValue(i + 1)}=${fibValue(i + 2)}`;
  }
  if (kind === "split" && Number.isInteger(i) && i >= 3) {
    return `${fibValue(i)}+${fibValue(i)}=${fibValue(i - 2)}+${fibValue(i + 1)}`;
  }
  throw new Error(`unknown move token ${token}`);
}
