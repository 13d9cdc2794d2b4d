import type { ManualIndex } from "./types.js";

/** Navigation state: the current topic, visit history, and which topics are
 * expanded inline. Keys are validated against the loaded index. */
export class ViewerState {
  current: string | null = null;
  readonly history: string[] = [];
  readonly expanded = new Set<string>();
  private known: Set<string>;

  constructor(index: ManualIndex) {
    this.known = new Set(Object.keys(index.tree));
  }

  knows(key: string): boolean {
    return this.known.has(key);
  }

  visit(key: string): boolean {
    if (!this.known.has(key)) return false;
    if (this.current !== null && this.current !== key) {
      this.history.push(this.current);
    }
    this.current = key;
    return true;
  }

  back(): string | null {
    const previous = this.history.pop() ?? null;
    if (previous !== null) this.current = previous;
    return previous;
  }

  /** Toggle inline expansion; returns the new expansion state. */
  toggle(key: string): boolean {
    if (this.expanded.has(key)) {
      this.expanded.delete(key);
      return false;
    }
    this.expanded.add(key);
    return true;
  }

  isExpanded(key: string): boolean {
    return this.expanded.has(key);
  }
}
