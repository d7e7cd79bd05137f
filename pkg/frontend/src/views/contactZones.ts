/** Contact zone list: selected pair configurations side by side, ordered by
 * similarity to the reference interface. In comparison mode the amino
 * acids a candidate shares with the reference are highlighted green and
 * the reference elements it misses render as empty cells. */

import { CHARGE_COLORS, hydrophobicityColor, svgElement } from "../palette.js";
import type { SessionStore } from "../state.js";
import type { ContactColumn, ContactListsPayload } from "../types.js";

const BOX = 17;
const COLUMN_WIDTH = 108;

type ColorMode = "none" | "hydrophobicity" | "charge";

export class ContactZoneListView {
  readonly root: HTMLElement;
  payload: ContactListsPayload | null = null;
  candidates: string[] = [];
  colorMode: ColorMode = "none";

  constructor(
    container: HTMLElement,
    private store: SessionStore,
  ) {
    this.root = document.createElement("div");
    this.root.className = "view contact-zone-view";
    container.appendChild(this.root);
    store.subscribe(() => void this.refetch());
  }

  setCandidates(ccs: string[]): void {
    this.candidates = ccs;
    void this.refetch();
  }

  async refetch(): Promise<void> {
    const pair = this.store.primaryPpe;
    if (!pair || this.candidates.length === 0) {
      this.payload = null;
      this.render();
      return;
    }
    try {
      this.payload = await this.store.api.contactLists(this.candidates, pair);
    } catch {
      this.payload = null; // no reference interface designated yet
    }
    this.render();
  }

  render(): void {
    this.root.textContent = "";
    const header = document.createElement("div");
    header.className = "view-header";
    header.textContent = "Contact Zone List";
    this.root.appendChild(header);

    if (!this.payload) {
      const note = document.createElement("div");
      note.className = "empty-note";
      note.textContent =
        "select comparison configurations (property view) and a reference PPC";
      this.root.appendChild(note);
      return;
    }
    const payload = this.payload;
    header.appendChild(this.colorPicker());

    const columns = [payload.reference, ...payload.candidates];
    const maxRows = Math.max(
      ...columns.map((c) =>
        Math.max(...payload.pair.map((p) => c.aas[p]?.length ?? 0)),
      ),
    );
    const width = columns.length * (COLUMN_WIDTH + 10);
    const height = 46 + maxRows * BOX + 10;
    const svg = svgElement("svg", {
      viewBox: `0 0 ${width} ${height}`,
      class: "contact-zone-svg",
    });
    this.root.appendChild(svg as unknown as HTMLElement);

    columns.forEach((column, index) => {
      svg.appendChild(
        this.renderColumn(column, payload, index * (COLUMN_WIDTH + 10), index === 0),
      );
    });
  }

  private renderColumn(
    column: ContactColumn,
    payload: ContactListsPayload,
    x: number,
    isReference: boolean,
  ): SVGGElement {
    const group = svgElement("g", {
      class: `contact-column${isReference ? " reference-column" : ""}`,
      transform: `translate(${x}, 0)`,
      "data-label": column.label,
    });
    const title = svgElement("text", { x: 2, y: 14, class: "column-title" });
    title.textContent = isReference
      ? `reference (${column.label})`
      : `${column.label}  sim ${column.similarity.toFixed(2)}`;
    group.appendChild(title);

    // the reference's elements this candidate misses render as empty boxes
    const missingBySide = new Map<string, Set<number>>();
    if (!isReference) {
      for (const [a, b] of column.missing_from_reference) {
        for (const [protein, seq] of [a, b]) {
          if (!missingBySide.has(protein)) missingBySide.set(protein, new Set());
          missingBySide.get(protein)!.add(seq);
        }
      }
    }

    payload.pair.forEach((protein, side) => {
      const sideX = 2 + side * (COLUMN_WIDTH / 2);
      const label = svgElement("text", {
        x: sideX, y: 30, class: "side-label",
      });
      label.textContent = protein;
      group.appendChild(label);

      const present = column.aas[protein] ?? [];
      let y = 38;
      for (const aa of present) {
        const box = svgElement("rect", {
          x: sideX, y, width: BOX * 2.6, height: BOX - 2,
          fill: this.aaFill(aa),
          stroke: aa.shared ? "#2ca02c" : "#aaaaaa",
          "stroke-width": aa.shared ? 2.5 : 1,
          class: `aa-box${aa.shared ? " shared" : ""}`,
          "data-seq": aa.seq,
        });
        group.appendChild(box);
        const text = svgElement("text", {
          x: sideX + 3, y: y + BOX - 6, class: "aa-box-label",
        });
        text.textContent = `${aa.name}${aa.seq}`;
        group.appendChild(text);
        y += BOX;
      }
      for (const seq of missingBySide.get(protein) ?? []) {
        if (present.some((aa) => aa.seq === seq)) continue;
        const empty = svgElement("rect", {
          x: sideX, y, width: BOX * 2.6, height: BOX - 2,
          fill: "none",
          stroke: "#cccccc",
          "stroke-dasharray": "3 2",
          class: "aa-box missing",
          "data-seq": seq,
        });
        group.appendChild(empty);
        y += BOX;
      }
    });
    return group;
  }

  private aaFill(aa: { hydrophobicity: number; charge: string }): string {
    if (this.colorMode === "hydrophobicity") return hydrophobicityColor(aa.hydrophobicity);
    if (this.colorMode === "charge") return CHARGE_COLORS[aa.charge] ?? "#f0f0f0";
    return "#f7f7f7";
  }

  private colorPicker(): HTMLElement {
    const select = document.createElement("select");
    select.className = "color-picker";
    for (const mode of ["none", "hydrophobicity", "charge"] as ColorMode[]) {
      const option = document.createElement("option");
      option.value = mode;
      option.textContent = `color: ${mode}`;
      option.selected = this.colorMode === mode;
      select.appendChild(option);
    }
    select.addEventListener("change", () => {
      this.colorMode = select.value as ColorMode;
      this.render();
    });
    return select;
  }
}
