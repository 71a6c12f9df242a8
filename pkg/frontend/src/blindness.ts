/**
 * Client-side blindness guard.
 *
 * The server must never tell an evaluator which system produced which
 * output. This check rejects any payload whose key names could carry
 * that information, so a regression on the server fails loudly in the
 * client instead of silently deanonymizing the session.
 */

const FORBIDDEN_KEYS = new Set([
  "system",
  "systems",
  "system_id",
  "system_ids",
  "systemid",
  "permutation",
  "permutations",
  "seed",
]);

export class BlindnessViolation extends Error {
  constructor(readonly path: string) {
    super(`payload exposes forbidden key at ${path}`);
    this.name = "BlindnessViolation";
  }
}

function walk(value: unknown, path: string): void {
  if (Array.isArray(value)) {
    value.forEach((v, i) => walk(v, `${path}[${i}]`));
    return;
  }
  if (value !== null && typeof value === "object") {
    for (const [key, v] of Object.entries(value as Record<string, unknown>)) {
      if (FORBIDDEN_KEYS.has(key.toLowerCase())) {
        throw new BlindnessViolation(`${path}.${key}`);
      }
      walk(v, `${path}.${key}`);
    }
  }
}

/** Throws BlindnessViolation if the payload leaks session internals. */
export function assertBlind<T>(payload: T): T {
  walk(payload, "$");
  return payload;
}
