import type { ManualIndex, Manifest, TopicRecord } from "./types.js";

export interface FetchLike {
  (url: string): Promise<{
    ok: boolean;
    status: number;
    json(): Promise<unknown>;
  }>;
}

/** Data access for a manual, in either delivery mode.
 *
 * Server mode is detected by probing api/index; topics are then fetched one
 * at a time and cached, so each distinct topic costs at most one request.
 * Static mode loads xdata.json once at startup.
 */
export class ManualClient {
  readonly index: ManualIndex;
  readonly serverMode: boolean;
  readonly manifest: Manifest | null;
  private data: Record<string, TopicRecord> | null;
  private cache = new Map<string, TopicRecord | null>();
  private pending = new Map<string, Promise<TopicRecord | null>>();
  private fetchFn: FetchLike;
  private base: string;

  private constructor(
    base: string,
    fetchFn: FetchLike,
    index: ManualIndex,
    serverMode: boolean,
    data: Record<string, TopicRecord> | null,
    manifest: Manifest | null,
  ) {
    this.base = base;
    this.fetchFn = fetchFn;
    this.index = index;
    this.serverMode = serverMode;
    this.data = data;
    this.manifest = manifest;
  }

  static async load(baseUrl = "", fetchFn: FetchLike = fetch): Promise<ManualClient> {
    const base = baseUrl && !baseUrl.endsWith("/") ? baseUrl + "/" : baseUrl;
    const manifest = await ManualClient.tryJson<Manifest>(fetchFn, base + "manifest.json");
    const probe = await ManualClient.tryJson<ManualIndex>(fetchFn, base + "api/index");
    if (probe !== null) {
      return new ManualClient(base, fetchFn, probe, true, null, manifest);
    }
    const index = await ManualClient.tryJson<ManualIndex>(fetchFn, base + "xindex.json");
    if (index === null) {
      throw new Error("cannot load the manual index (xindex.json)");
    }
    const data = await ManualClient.tryJson<Record<string, TopicRecord>>(
      fetchFn,
      base + "xdata.json",
    );
    if (data === null) {
      throw new Error("cannot load the manual contents (xdata.json)");
    }
    return new ManualClient(base, fetchFn, index, false, data, manifest);
  }

  private static async tryJson<T>(fetchFn: FetchLike, url: string): Promise<T | null> {
    try {
      const resp = await fetchFn(url);
      if (!resp.ok) return null;
      return (await resp.json()) as T;
    } catch {
      return null;
    }
  }

  /** The stored record for a key, or null when the key is unknown. */
  async topic(key: string): Promise<TopicRecord | null> {
    if (!this.serverMode) {
      return this.data?.[key] ?? null;
    }
    if (this.cache.has(key)) {
      return this.cache.get(key) ?? null;
    }
    const inFlight = this.pending.get(key);
    if (inFlight) return inFlight;
    const request = (async () => {
      const record = await ManualClient.tryJson<TopicRecord>(
        this.fetchFn,
        this.base + "api/topic/" + encodeURIComponent(key),
      );
      this.cache.set(key, record);
      this.pending.delete(key);
      return record;
    })();
    this.pending.set(key, request);
    return request;
  }

  /** True when the manifest lists a downloadable archive. */
  hasDownload(): boolean {
    return (
      this.manifest?.files.some((f) => f.path === "download/manual.zip") ?? false
    );
  }
}
