/** Residue matrix: amino-acid-pair frequencies of the primary protein pair.
 * Colored lines along the axes identify the two proteins; axes can be
 * sorted (sequence / frequency / hydrophobicity / charge) and recolored;
 * cells carry white cross/diagonal marks when disabled filters affect
 * them. Cell clicks select the pair; the context buttons issue
 * remove / keep-only / fix filters on the selected pairs. */

import {
  appendMark,
  CHARGE_COLORS,
  hydrophobicityColor,
  proteinColor,
  purpleRamp,
  svgElement,
} from "../palette.js";
import type { SessionStore } from "../state.js";
import type { MatrixAxisEntry, MatrixPayload } from "../types.js";

const CELL = 17;
const AXIS = 56;

type ColorMode = "frequency" | "hydrophobicity" | "charge";

export class ResidueMatrixView {
  readonly root: HTMLElement;
  payload: MatrixPayload | null = null;
  colorMode: ColorMode = "frequency";
  private selectedKeys: [[string, number], [string, number]][] = [];

  constructor(
    container: HTMLElement,
    private store: SessionStore,
  ) {
    this.root = document.createElement("div");
    this.root.className = "view matrix-view";
    container.appendChild(this.root);
    store.subscribe(() => void this.refetch());
  }

  async refetch(): Promise<void> {
    const pair = this.store.primaryPpe;
    if (!pair) {
      this.payload = null;
      this.render();
      return;
    }
    this.payload = await this.store.api.residueMatrix(pair, this.store.params.sort);
    this.render();
  }

  render(): void {
    this.root.textContent = "";
    const header = document.createElement("div");
    header.className = "view-header";
    header.textContent = "Residue Matrix";
    this.root.appendChild(header);

    if (!this.payload) {
      const note = document.createElement("div");
      note.className = "empty-note";
      note.textContent = "select a primary protein pair (overview edge or protein-view row)";
      this.root.appendChild(note);
      return;
    }
    const payload = this.payload;

    header.appendChild(this.sortPicker());
    header.appendChild(this.colorPicker());

    const colorOf = (node: { color_index: number }) => proteinColor(node.color_index);
    const summary = this.store.data.summary;
    const colors: Record<string, string> = {};
    for (const protein of summary?.proteins ?? []) {
      colors[protein.name] = colorOf(protein);
    }

    const width = AXIS + payload.cols.length * CELL + 8;
    const height = AXIS + payload.rows.length * CELL + 8;
    const svg = svgElement("svg", {
      viewBox: `0 0 ${width} ${height}`,
      class: "matrix-svg",
    });
    this.root.appendChild(svg as unknown as HTMLElement);

    // colored protein identity lines along both axes
    svg.appendChild(svgElement("rect", {
      x: AXIS, y: AXIS - 6, width: payload.cols.length * CELL, height: 4,
      fill: colors[payload.pair[1]] ?? "#999", class: "axis-line axis-line-cols",
    }));
    svg.appendChild(svgElement("rect", {
      x: AXIS - 6, y: AXIS, width: 4, height: payload.rows.length * CELL,
      fill: colors[payload.pair[0]] ?? "#999", class: "axis-line axis-line-rows",
    }));

    payload.cols.forEach((aa, j) => {
      const label = svgElement("text", {
        x: AXIS + j * CELL + CELL / 2, y: AXIS - 10,
        "text-anchor": "start", class: "axis-label col-label",
        transform: `rotate(-60, ${AXIS + j * CELL + CELL / 2}, ${AXIS - 10})`,
        fill: this.axisColor(aa),
      });
      label.textContent = `${aa.name}${aa.seq}`;
      svg.appendChild(label);
    });
    payload.rows.forEach((aa, i) => {
      const label = svgElement("text", {
        x: AXIS - 9, y: AXIS + i * CELL + CELL - 4,
        "text-anchor": "end", class: "axis-label row-label",
        fill: this.axisColor(aa),
      });
      label.textContent = `${aa.name}${aa.seq}`;
      svg.appendChild(label);
    });

    const maxCount = Math.max(1, ...payload.cells.map((c) => c.count));
    const rowIndex = new Map(payload.rows.map((aa, i) => [aa.seq, i]));
    const colIndex = new Map(payload.cols.map((aa, j) => [aa.seq, j]));
    for (const cell of payload.cells) {
      const i = rowIndex.get(cell.row_seq);
      const j = colIndex.get(cell.col_seq);
      if (i === undefined || j === undefined) continue;
      const x = AXIS + j * CELL;
      const y = AXIS + i * CELL;
      const rect = svgElement("rect", {
        x, y, width: CELL - 1, height: CELL - 1,
        fill: purpleRamp(cell.count / maxCount),
        class: "matrix-cell",
        "data-row": cell.row_seq,
        "data-col": cell.col_seq,
        "data-count": cell.count,
        "data-mark": cell.mark,
      });
      const key: [[string, number], [string, number]] = [
        [payload.pair[0], cell.row_seq],
        [payload.pair[1], cell.col_seq],
      ];
      rect.addEventListener("click", () => {
        this.selectedKeys = [key];
        void this.store.mutate(() => this.store.api.setSelection({ aap_keys: [key] }));
      });
      svg.appendChild(rect);
      if (cell.mark !== "normal") {
        appendMark(svg, cell.mark, x, y, CELL - 1);
      }
    }

    this.root.appendChild(this.contextActions());
  }

  private axisColor(aa: MatrixAxisEntry): string {
    if (this.colorMode === "charge") return CHARGE_COLORS[aa.charge] ?? "#333";
    if (this.colorMode === "hydrophobicity") return hydrophobicityColor(aa.hydrophobicity);
    return "#333333";
  }

  private sortPicker(): HTMLElement {
    const select = document.createElement("select");
    select.className = "sort-picker";
    for (const mode of ["sequence", "frequency", "hydrophobicity", "charge"]) {
      const option = document.createElement("option");
      option.value = mode;
      option.textContent = `sort: ${mode}`;
      option.selected = this.store.params.sort === mode;
      select.appendChild(option);
    }
    select.addEventListener("change", () => {
      this.store.params.sort = select.value as typeof this.store.params.sort;
      void this.refetch();
    });
    return select;
  }

  private colorPicker(): HTMLElement {
    const select = document.createElement("select");
    select.className = "color-picker";
    for (const mode of ["frequency", "hydrophobicity", "charge"] as ColorMode[]) {
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

  private contextActions(): HTMLElement {
    const bar = document.createElement("div");
    bar.className = "matrix-actions";
    const act = (label: string, kind: string) => {
      const button = document.createElement("button");
      button.textContent = label;
      button.addEventListener("click", () => {
        if (this.selectedKeys.length === 0) return;
        void this.store.mutate(() =>
          this.store.api.addFilter(kind, { level: "aap", keys: this.selectedKeys }),
        );
      });
      bar.appendChild(button);
    };
    act("remove selected pair", "remove");
    act("keep only selected pair", "remove_complement");
    act("fix selected pair", "fix");
    return bar;
  }
}
