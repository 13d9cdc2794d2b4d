import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { ManualIndex, Manifest, TopicRecord } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function loadJson<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf8")) as T;
}

export const fixtureIndex = (): ManualIndex => loadJson<ManualIndex>("xindex.json");
export const fixtureData = (): Record<string, TopicRecord> =>
  loadJson<Record<string, TopicRecord>>("xdata.json");
export const fixtureManifest = (): Manifest => loadJson<Manifest>("manifest.json");
