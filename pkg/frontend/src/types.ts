/** Wire formats of an exported manual. */

/** One xdata.json record. */
export interface TopicRecord {
  name: string;
  package: string;
  parents: string[];
  children: string[];
  short_html: string;
  long_html: string;
  origin: string;
  importance: number;
}

/** One xindex.json search entry: [key, name, short_text, importance]. */
export type SearchEntry = [string, string, string, number];

export interface ManualIndex {
  search: SearchEntry[];
  tree: Record<string, string[]>;
}

export interface ManifestFile {
  path: string;
  bytes: number;
  sha256: string;
}

export interface Manifest {
  version: string;
  topic_count: number;
  warning_count: number;
  files: ManifestFile[];
}
