/** Thin typed client over the session HTTP API. */

import type {
  ContactListsPayload,
  DensityPayload,
  ExplodedPayload,
  FilterSubject,
  FiltersPayload,
  MatrixPayload,
  MeshPayload,
  OverviewPayload,
  PropertiesPayload,
  ProteinViewPayload,
  SelectionPayload,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let code = "http_error";
    let message = `${response.status} ${response.statusText}`;
    try {
      const body = (await response.json()) as { error?: { code: string; message: string } };
      if (body.error) {
        code = body.error.code;
        message = body.error.message;
      }
    } catch {
      // not JSON: keep the generic message
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export interface LoadOptions {
  input: string;
  mapping?: string;
  mapping_entries?: (string | number)[][];
  properties?: string;
  cutoff?: number;
}

export class ApiClient {
  constructor(
    public base: string,
    public sessionId: string | null = null,
  ) {}

  private session(): string {
    if (!this.sessionId) throw new Error("no session created yet");
    return `${this.base}/sessions/${this.sessionId}`;
  }

  async createSession(load?: LoadOptions): Promise<SessionSummary> {
    const summary = await request<SessionSummary>(`${this.base}/sessions`, {
      method: "POST",
      body: load ? JSON.stringify(load) : JSON.stringify(null),
    });
    this.sessionId = summary.session;
    return summary;
  }

  summary(): Promise<SessionSummary> {
    return request(this.session());
  }

  overview(scaling = "independent"): Promise<OverviewPayload> {
    return request(`${this.session()}/overview?scaling=${scaling}`);
  }

  properties(): Promise<PropertiesPayload> {
    return request(`${this.session()}/properties`);
  }

  proteinView(primary?: string, condensed = false): Promise<ProteinViewPayload> {
    const params = new URLSearchParams();
    if (primary) params.set("primary", primary);
    params.set("condensed", String(condensed));
    return request(`${this.session()}/protein-view?${params}`);
  }

  residueMatrix(pair?: [string, string], sort = "sequence"): Promise<MatrixPayload> {
    const params = new URLSearchParams({ sort });
    if (pair) {
      params.set("p", pair[0]);
      params.set("q", pair[1]);
    }
    return request(`${this.session()}/residue-matrix?${params}`);
  }

  contactLists(ccs: string[], pair?: [string, string]): Promise<ContactListsPayload> {
    const params = new URLSearchParams({ ccs: ccs.join(",") });
    if (pair) {
      params.set("p", pair[0]);
      params.set("q", pair[1]);
    }
    return request(`${this.session()}/contact-lists?${params}`);
  }

  density(primary?: string, iso = 0.1, spacing = 1.0): Promise<DensityPayload> {
    const params = new URLSearchParams({ iso: String(iso), spacing: String(spacing) });
    if (primary) params.set("primary", primary);
    return request(`${this.session()}/density-mesh?${params}`);
  }

  densityMesh(protein: string, iso = 0.1, spacing = 1.0): Promise<MeshPayload> {
    return request(
      `${this.session()}/density-mesh/${protein}.json?iso=${iso}&spacing=${spacing}`,
    );
  }

  explodedCc(cc: string, gap = 10): Promise<ExplodedPayload> {
    return request(`${this.session()}/exploded-cc?cc=${encodeURIComponent(cc)}&gap=${gap}`);
  }

  filters(): Promise<FiltersPayload> {
    return request(`${this.session()}/filters`);
  }

  addFilter(kind: string, subject: FilterSubject): Promise<FiltersPayload> {
    return request(`${this.session()}/filters`, {
      method: "POST",
      body: JSON.stringify({ kind, subject }),
    });
  }

  patchFilter(
    id: number,
    patch: { enabled?: boolean; min?: number; max?: number },
  ): Promise<FiltersPayload> {
    return request(`${this.session()}/filters/${id}`, {
      method: "PATCH",
      body: JSON.stringify(patch),
    });
  }

  deleteFilter(id: number): Promise<FiltersPayload> {
    return request(`${this.session()}/filters/${id}`, { method: "DELETE" });
  }

  clearFilters(): Promise<FiltersPayload> {
    return request(`${this.session()}/filters`, { method: "DELETE" });
  }

  runScript(script: string): Promise<FiltersPayload> {
    return request(`${this.session()}/filters/script`, {
      method: "POST",
      body: JSON.stringify({ script }),
    });
  }

  setSelection(selection: {
    cc_ids?: string[];
    ppe_pairs?: [string, string][];
    ppc_ids?: [[string, string], string][];
    aap_keys?: [[string, number], [string, number]][];
    aa_ids?: [string, number][];
  }): Promise<SelectionPayload> {
    return request(`${this.session()}/selection`, {
      method: "POST",
      body: JSON.stringify(selection),
    });
  }

  propagateSelection(down: boolean): Promise<SelectionPayload> {
    return request(`${this.session()}/selection/propagate`, {
      method: "POST",
      body: JSON.stringify({ down }),
    });
  }

  setPrimary(primary: {
    protein?: string;
    ppe?: [string, string];
    cc?: string;
    ppc?: [[string, string], string];
  }): Promise<SessionSummary> {
    return request(`${this.session()}/primary`, {
      method: "POST",
      body: JSON.stringify(primary),
    });
  }
}
