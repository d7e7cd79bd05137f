/** Shared session state.
 *
 * Views never mutate data locally: every interaction goes through the API,
 * and the store refetches the payloads of the generation the server
 * reports. At most one refresh is in flight; a refresh started while
 * another runs supersedes it (the stale one's results are discarded).
 */

import { ApiClient } from "./api.js";
import type {
  FiltersPayload,
  OverviewPayload,
  PropertiesPayload,
  SessionSummary,
} from "./types.js";

export interface ViewParams {
  scaling: "independent" | "absolute";
  condensed: boolean;
  sort: "sequence" | "frequency" | "hydrophobicity" | "charge";
  isoFraction: number;
  spacing: number;
  gap: number;
  xProperty: string | null;
  yProperty: string | null;
}

export interface StoreData {
  summary: SessionSummary | null;
  overview: OverviewPayload | null;
  properties: PropertiesPayload | null;
  filters: FiltersPayload | null;
}

type Listener = (store: SessionStore) => void;

export class SessionStore {
  readonly api: ApiClient;
  params: ViewParams = {
    scaling: "independent",
    condensed: false,
    sort: "sequence",
    isoFraction: 0.1,
    spacing: 1.0,
    gap: 10.0,
    xProperty: null,
    yProperty: null,
  };
  data: StoreData = { summary: null, overview: null, properties: null, filters: null };
  generation = 0;

  private listeners: Listener[] = [];
  private refreshToken = 0;

  constructor(api: ApiClient) {
    this.api = api;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this);
  }

  /** Refetch the shared payloads; a newer refresh supersedes this one. */
  async refresh(): Promise<void> {
    const token = ++this.refreshToken;
    const [summary, overview, properties, filters] = await Promise.all([
      this.api.summary(),
      this.api.overview(this.params.scaling),
      this.api.properties(),
      this.api.filters(),
    ]);
    if (token !== this.refreshToken) return; // superseded mid-flight
    this.data = { summary, overview, properties, filters };
    this.generation = filters.generation;
    if (!this.params.xProperty && summary.property_names.length > 0) {
      this.params.xProperty = summary.property_names[0];
      this.params.yProperty =
        summary.property_names[1] ?? summary.property_names[0];
    }
    this.notify();
  }

  /** Run a mutation against the API, then refresh every shared payload. */
  async mutate<T extends { generation: number }>(action: () => Promise<T>): Promise<T> {
    const result = await action();
    await this.refresh();
    return result;
  }

  get primaryProtein(): string | null {
    return this.data.summary?.primary.protein ?? null;
  }

  get primaryPpe(): [string, string] | null {
    return this.data.summary?.primary.ppe ?? null;
  }
}
