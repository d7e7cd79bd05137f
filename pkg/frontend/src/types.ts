/** Wire types of the session API payloads. */

export type Mark = "normal" | "partially_affected" | "fully_affected";
export type CcState = "visible" | "hidden" | "affected";

export interface ProteinInfo {
  name: string;
  color_index: number;
  chain: string;
  n_residues: number;
}

export interface SessionSummary {
  session: string;
  generation: number;
  proteins: ProteinInfo[];
  cc_count: number;
  cutoff: number;
  property_names: string[];
  primary: {
    protein: string | null;
    ppe: [string, string] | null;
    cc: string | null;
    ppc: [[string, string], string] | null;
  };
}

export interface OverviewInterface {
  partner: string;
  size: number;
  size_norm: number;
  consistency: number | null;
  size_unaffected: number;
  consistency_unaffected: number | null;
  n_ppcs: number;
}

export interface OverviewNode {
  protein: string;
  color_index: number;
  n_residues: number;
  interfaces: OverviewInterface[];
}

export interface OverviewEdge {
  pair: [string, string];
  weight: number;
  weight_total: number;
  weight_affected: number;
}

export interface OverviewPayload {
  generation: number;
  scaling: string;
  consistency_reference: number;
  nodes: OverviewNode[];
  edges: OverviewEdge[];
  primary_protein: string | null;
  primary_ppe: [string, string] | null;
}

export interface PropertyRow {
  cc: string;
  state: CcState;
  affected_by: number[];
  properties: Record<string, number>;
  selected: boolean;
}

export interface PropertiesPayload {
  generation: number;
  property_names: string[];
  configurations: PropertyRow[];
}

export interface ProteinViewEntry {
  kind: "aa" | "gap";
  seq?: number;
  name?: string;
  total?: number;
  hydrophobicity?: number;
  charge?: string;
  mark?: Mark;
  from_seq?: number;
  to_seq?: number;
  length?: number;
}

export interface ProteinViewPartnerRow {
  protein: string;
  color_index: number;
  counts: (number | null)[];
  marks: (Mark | null)[];
}

export interface ProteinViewPayload {
  generation: number;
  primary: string;
  condensed: boolean;
  ruler: number[];
  entries: ProteinViewEntry[];
  partners: ProteinViewPartnerRow[];
}

export interface MatrixAxisEntry {
  seq: number;
  name: string;
  frequency: number;
  hydrophobicity: number;
  charge: string;
}

export interface MatrixCell {
  row_seq: number;
  col_seq: number;
  count: number;
  mark: Mark;
}

export interface MatrixPayload {
  generation: number;
  pair: [string, string];
  sort: string;
  rows: MatrixAxisEntry[];
  cols: MatrixAxisEntry[];
  cells: MatrixCell[];
}

export interface ContactAa {
  seq: number;
  name: string;
  hydrophobicity: number;
  charge: string;
  shared: boolean;
}

export interface ContactColumn {
  label: string;
  aas: Record<string, ContactAa[]>;
  aaps: { key: [[string, number], [string, number]]; shared: boolean }[];
  missing_from_reference: [[string, number], [string, number]][];
  similarity: number;
}

export interface ContactListsPayload {
  generation: number;
  pair: [string, string];
  reference: ContactColumn;
  candidates: ContactColumn[];
  order: string[];
}

export interface FilterEntry {
  id: number;
  kind: string;
  label: string;
  enabled: boolean;
  eval_order: number;
  subject: Record<string, unknown>;
  subject_cc_count: number;
  delta: number | null;
}

export interface FilterStatus {
  cc_total: number;
  cc_visible: number;
  cc_hidden: number;
  ppc_total: number;
  ppc_visible: number;
  ppc_hidden: number;
  affected_by_disabled: number;
}

export interface FiltersPayload {
  generation: number;
  filters: FilterEntry[];
  status: FilterStatus;
}

export interface DensityChannel {
  protein: string;
  color_index: number;
  peak: number;
  iso: number;
  dims: number[];
  vertex_count: number;
  triangle_count: number;
}

export interface DensityPayload {
  generation: number;
  primary: string;
  iso_fraction: number;
  spacing: number;
  channels: DensityChannel[];
}

export interface MeshPayload {
  channel: string | null;
  iso: number;
  vertex_count: number;
  triangle_count: number;
  vertices: number[];
  normals: number[];
  triangles: number[];
}

export interface ExplodedProtein {
  protein: string;
  color_index: number;
  offset: [number, number, number];
  interacting_seqs: number[];
}

export interface ExplodedPayload {
  generation: number;
  cc: string;
  gap: number;
  converged: boolean;
  iterations: number;
  proteins: ExplodedProtein[];
}

export interface SelectionPayload {
  generation: number;
  cc_ids: string[];
  ppe_pairs: [string, string][];
  ppc_ids: [[string, string], string][];
  aap_keys: [[string, number], [string, number]][];
  aa_ids: [string, number][];
}

export type FilterSubject =
  | { level: "cc"; ids: string[] }
  | { level: "ppe"; pair: [string, string] }
  | { level: "ppc"; ids: [[string, string], string][] }
  | { level: "aap"; keys: [[string, number], [string, number]][] }
  | { level: "aa"; ids: [string, number][] }
  | {
      level: "cc" | "aa" | "aap";
      property: string;
      min?: number;
      max?: number;
      scope?: string[];
    };
