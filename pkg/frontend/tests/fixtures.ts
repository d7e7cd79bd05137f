/** Canned payloads for view tests (shapes mirror the session API). */

import type {
  ContactListsPayload,
  FiltersPayload,
  MatrixPayload,
  OverviewPayload,
  PropertiesPayload,
  ProteinViewPayload,
  SessionSummary,
} from "../src/types.js";

export function overviewPayload(nProteins = 8): OverviewPayload {
  const names = Array.from({ length: nProteins }, (_, i) => `H${i}`);
  return {
    generation: 3,
    scaling: "independent",
    consistency_reference: 1.0,
    primary_protein: names[0],
    primary_ppe: [names[0], names[1]],
    nodes: names.map((name, i) => ({
      protein: name,
      color_index: i,
      n_residues: 100,
      interfaces: names
        .filter((other) => other !== name)
        .slice(0, 3)
        .map((partner, j) => ({
          partner,
          size: 10 - j,
          size_norm: (10 - j) / 10,
          consistency: 0.5 + 0.1 * j,
          size_unaffected: 9 - j,
          consistency_unaffected: 0.5,
          n_ppcs: 5,
        })),
    })),
    edges: [
      { pair: [names[0], names[1]], weight: 20, weight_total: 30, weight_affected: 5 },
      { pair: [names[1], names[2]], weight: 0, weight_total: 8, weight_affected: 0 },
    ],
  };
}

export function propertiesPayload(): PropertiesPayload {
  return {
    generation: 3,
    property_names: ["score", "energy"],
    configurations: [
      { cc: "a", state: "visible", affected_by: [], properties: { score: 1, energy: 5 }, selected: false },
      { cc: "b", state: "affected", affected_by: [1], properties: { score: 2, energy: 7 }, selected: false },
      { cc: "c", state: "visible", affected_by: [], properties: { score: 3, energy: 2 }, selected: true },
      { cc: "d", state: "visible", affected_by: [], properties: { score: 4 }, selected: false },
    ],
  };
}

export function proteinViewPayload(): ProteinViewPayload {
  return {
    generation: 3,
    primary: "H0",
    condensed: true,
    ruler: [10],
    entries: [
      { kind: "aa", seq: 9, name: "ALA", total: 2, hydrophobicity: 1.8, charge: "neutral", mark: "normal" },
      { kind: "aa", seq: 10, name: "ARG", total: 3, hydrophobicity: -4.5, charge: "positive", mark: "partially_affected" },
      { kind: "gap", from_seq: 11, to_seq: 40, length: 30 },
      { kind: "aa", seq: 41, name: "HIS", total: 1, hydrophobicity: -3.2, charge: "positive", mark: "fully_affected" },
    ],
    partners: [
      {
        protein: "H1",
        color_index: 1,
        counts: [2, 1, null, 1],
        marks: ["normal", "partially_affected", null, "fully_affected"],
      },
    ],
  };
}

export function matrixPayload(): MatrixPayload {
  return {
    generation: 3,
    pair: ["H0", "H1"],
    sort: "sequence",
    rows: [
      { seq: 5, name: "LYS", frequency: 20, hydrophobicity: -3.9, charge: "positive" },
      { seq: 9, name: "GLY", frequency: 4, hydrophobicity: -0.4, charge: "neutral" },
    ],
    cols: [
      { seq: 7, name: "ASP", frequency: 21, hydrophobicity: -3.5, charge: "negative" },
      { seq: 8, name: "SER", frequency: 3, hydrophobicity: -0.8, charge: "neutral" },
    ],
    cells: [
      { row_seq: 5, col_seq: 7, count: 20, mark: "partially_affected" },
      { row_seq: 5, col_seq: 8, count: 1, mark: "fully_affected" },
      { row_seq: 9, col_seq: 7, count: 4, mark: "normal" },
    ],
  };
}

export function contactListsPayload(): ContactListsPayload {
  return {
    generation: 3,
    pair: ["H0", "H1"],
    order: ["x", "y"],
    reference: {
      label: "cc r",
      similarity: 1.0,
      aas: {
        H0: [
          { seq: 49, name: "LYS", hydrophobicity: -3.9, charge: "positive", shared: true },
          { seq: 57, name: "ARG", hydrophobicity: -4.5, charge: "positive", shared: true },
        ],
        H1: [{ seq: 66, name: "LEU", hydrophobicity: 3.8, charge: "neutral", shared: true }],
      },
      aaps: [{ key: [["H0", 49], ["H1", 66]], shared: true }],
      missing_from_reference: [],
    },
    candidates: [
      {
        label: "x",
        similarity: 0.5,
        aas: {
          H0: [{ seq: 49, name: "LYS", hydrophobicity: -3.9, charge: "positive", shared: true }],
          H1: [{ seq: 66, name: "LEU", hydrophobicity: 3.8, charge: "neutral", shared: true }],
        },
        aaps: [{ key: [["H0", 49], ["H1", 66]], shared: true }],
        missing_from_reference: [[["H0", 57], ["H1", 66]]],
      },
      {
        label: "y",
        similarity: 0.0,
        aas: {
          H0: [{ seq: 12, name: "VAL", hydrophobicity: 4.2, charge: "neutral", shared: false }],
          H1: [{ seq: 90, name: "GLU", hydrophobicity: -3.5, charge: "negative", shared: false }],
        },
        aaps: [{ key: [["H0", 12], ["H1", 90]], shared: false }],
        missing_from_reference: [[["H0", 49], ["H1", 66]]],
      },
    ],
  };
}

export function filtersPayload(): FiltersPayload {
  return {
    generation: 3,
    filters: [
      {
        id: 1,
        kind: "remove_complement",
        label: "remove_complement: AAP H0:49-H1:66",
        enabled: false,
        eval_order: 1,
        subject: { level: "aap" },
        subject_cc_count: 35,
        delta: null,
      },
      {
        id: 2,
        kind: "remove",
        label: "remove: 3 CCs",
        enabled: true,
        eval_order: 2,
        subject: { level: "cc" },
        subject_cc_count: 3,
        delta: 3,
      },
    ],
    status: {
      cc_total: 200,
      cc_visible: 197,
      cc_hidden: 3,
      ppc_total: 366,
      ppc_visible: 360,
      ppc_hidden: 6,
      affected_by_disabled: 165,
    },
  };
}

export function summaryPayload(): SessionSummary {
  return {
    session: "s",
    generation: 3,
    cc_count: 200,
    cutoff: 5,
    property_names: ["score", "energy"],
    proteins: Array.from({ length: 8 }, (_, i) => ({
      name: `H${i}`,
      color_index: i,
      chain: "ABCDEFGH"[i],
      n_residues: 100,
    })),
    primary: { protein: "H0", ppe: ["H0", "H1"], cc: null, ppc: null },
  };
}
