import type { SearchEntry } from "./types.js";

/** Rank tiers, best first: exact name, name prefix, name substring,
 * short-text substring. Within a tier: importance descending, key
 * ascending. Everything is case-insensitive. */
export function rankSearch(query: string, entries: SearchEntry[]): SearchEntry[] {
  const q = query.trim().toLowerCase();
  if (!q) return [];
  const tiers: SearchEntry[][] = [[], [], [], []];
  for (const entry of entries) {
    const name = entry[1].toLowerCase();
    const shortText = entry[2].toLowerCase();
    if (name === q) tiers[0].push(entry);
    else if (name.startsWith(q)) tiers[1].push(entry);
    else if (name.includes(q)) tiers[2].push(entry);
    else if (shortText.includes(q)) tiers[3].push(entry);
  }
  for (const tier of tiers) {
    tier.sort(compareWithinTier);
  }
  return tiers.flat();
}

export function compareWithinTier(a: SearchEntry, b: SearchEntry): number {
  if (a[3] !== b[3]) return b[3] - a[3];
  return a[0] < b[0] ? -1 : a[0] > b[0] ? 1 : 0;
}

/** Jump-box completions come from the name tiers only, never from shorts. */
export function completions(query: string, entries: SearchEntry[], limit = 10): SearchEntry[] {
  const q = query.trim().toLowerCase();
  if (!q) return [];
  return rankSearch(q, entries)
    .filter((entry) => entry[1].toLowerCase().includes(q))
    .slice(0, limit);
}
