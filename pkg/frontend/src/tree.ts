import type { ManualIndex } from "./types.js";

/** The navigation root: a key that is nobody's child. Prefers the key whose
 * bare name is TOP, then falls back to the alphabetically first root. */
export function rootKey(index: ManualIndex): string {
  const isChild = new Set<string>();
  for (const children of Object.values(index.tree)) {
    for (const child of children) isChild.add(child);
  }
  const roots = Object.keys(index.tree)
    .filter((key) => !isChild.has(key))
    .sort();
  for (const key of roots) {
    if (key.split("____")[1] === "TOP") return key;
  }
  return roots[0];
}

/** Descendants of a key in depth-first tree order, each listed once. */
export function expansionOrder(key: string, tree: Record<string, string[]>): string[] {
  const out: string[] = [];
  const seen = new Set<string>([key]);
  const visit = (node: string): void => {
    for (const child of tree[node] ?? []) {
      if (seen.has(child)) continue;
      seen.add(child);
      out.push(child);
      visit(child);
    }
  };
  visit(key);
  return out;
}
