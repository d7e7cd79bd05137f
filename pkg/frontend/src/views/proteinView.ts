/** Protein view: the primary protein's amino acids in the first row
 * (green = total interaction count), one purple row per partner protein,
 * a ruler marking every 10th sequence number, gap markers in condensed
 * mode, and white cross/diagonal marks where disabled filters bite.
 * Clicking a partner row's name sets the primary pair; clicking cells
 * selects the amino acid. */

import {
  appendMark,
  greenRamp,
  proteinColor,
  purpleRamp,
  svgElement,
} from "../palette.js";
import type { SessionStore } from "../state.js";
import type { ProteinViewPayload } from "../types.js";

const CELL = 16;
const GAP_WIDTH = 26;
const LABEL_WIDTH = 78;
const RULER_HEIGHT = 16;

export class ProteinView {
  readonly root: HTMLElement;
  payload: ProteinViewPayload | null = null;

  constructor(
    container: HTMLElement,
    private store: SessionStore,
  ) {
    this.root = document.createElement("div");
    this.root.className = "view protein-view";
    container.appendChild(this.root);
    store.subscribe(() => void this.refetch());
  }

  async refetch(): Promise<void> {
    const primary = this.store.primaryProtein;
    if (!primary) {
      this.payload = null;
      this.render();
      return;
    }
    this.payload = await this.store.api.proteinView(
      primary,
      this.store.params.condensed,
    );
    this.render();
  }

  render(): void {
    this.root.textContent = "";
    const header = document.createElement("div");
    header.className = "view-header";
    header.textContent = "Protein View";
    this.root.appendChild(header);

    if (!this.payload) {
      const note = document.createElement("div");
      note.className = "empty-note";
      note.textContent = "select a primary protein in the overview graph";
      this.root.appendChild(note);
      return;
    }
    const payload = this.payload;

    const condensed = document.createElement("label");
    condensed.className = "condensed-toggle";
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.checked = this.store.params.condensed;
    checkbox.addEventListener("change", () => {
      this.store.params.condensed = checkbox.checked;
      void this.refetch();
    });
    condensed.append(checkbox, document.createTextNode(" condensed"));
    header.appendChild(condensed);

    const widths = payload.entries.map((e) => (e.kind === "aa" ? CELL : GAP_WIDTH));
    const totalWidth = LABEL_WIDTH + widths.reduce((a, b) => a + b, 0) + 8;
    const rows = 1 + payload.partners.length;
    const height = RULER_HEIGHT + rows * (CELL + 3) + 8;
    const svg = svgElement("svg", {
      viewBox: `0 0 ${totalWidth} ${height}`,
      class: "protein-svg",
    });
    this.root.appendChild(svg as unknown as HTMLElement);

    const maxTotal = Math.max(1, ...payload.entries.map((e) => e.total ?? 0));

    // ruler: sequence number of every 10th amino acid
    let x = LABEL_WIDTH;
    payload.entries.forEach((entry, i) => {
      if (entry.kind === "aa" && payload.ruler.includes(entry.seq!)) {
        const tick = svgElement("text", {
          x: x + CELL / 2,
          y: RULER_HEIGHT - 5,
          "text-anchor": "middle",
          class: "ruler-tick",
        });
        tick.textContent = String(entry.seq);
        svg.appendChild(tick);
      }
      x += widths[i];
    });

    const drawRow = (
      label: string,
      color: string | null,
      y: number,
      cellFill: (index: number) => string | null,
      mark: (index: number) => string | null,
      onRowClick: (() => void) | null,
      rowClass: string,
    ) => {
      const group = svgElement("g", { class: `pv-row ${rowClass}` });
      const text = svgElement("text", {
        x: 2,
        y: y + CELL - 4,
        class: "row-label",
      });
      text.textContent = label;
      if (onRowClick) {
        text.setAttribute("class", "row-label clickable");
        text.addEventListener("click", onRowClick);
      }
      group.appendChild(text);
      if (color) {
        group.appendChild(
          svgElement("rect", {
            x: LABEL_WIDTH - 10, y, width: 6, height: CELL, fill: color,
            class: "row-color-chip",
          }),
        );
      }
      let cx = LABEL_WIDTH;
      payload.entries.forEach((entry, i) => {
        if (entry.kind === "gap") {
          if (rowClass === "total-row") {
            const gap = svgElement("text", {
              x: cx + GAP_WIDTH / 2, y: y + CELL - 4,
              "text-anchor": "middle", class: "gap-marker",
            });
            gap.textContent = `··${entry.length}··`;
            group.appendChild(gap);
          }
          cx += GAP_WIDTH;
          return;
        }
        const fill = cellFill(i);
        if (fill !== null) {
          const cell = svgElement("rect", {
            x: cx, y, width: CELL - 1, height: CELL,
            fill,
            class: "pv-cell",
            "data-seq": entry.seq!,
          });
          cell.addEventListener("click", () => {
            void this.store.mutate(() =>
              this.store.api.setSelection({ aa_ids: [[payload.primary, entry.seq!]] }),
            );
          });
          group.appendChild(cell);
          const cellMark = mark(i);
          if (cellMark === "partially_affected" || cellMark === "fully_affected") {
            appendMark(group, cellMark, cx, y, CELL - 1);
          }
        }
        cx += CELL;
      });
      svg.appendChild(group);
    };

    let y = RULER_HEIGHT;
    drawRow(
      payload.primary,
      null,
      y,
      (i) => {
        const entry = payload.entries[i];
        return greenRamp((entry.total ?? 0) / maxTotal);
      },
      (i) => payload.entries[i].mark ?? null,
      null,
      "total-row",
    );
    y += CELL + 3;

    for (const partner of payload.partners) {
      const maxPartner = Math.max(1, ...partner.counts.map((c) => c ?? 0));
      drawRow(
        partner.protein,
        proteinColor(partner.color_index),
        y,
        (i) => {
          const count = partner.counts[i];
          return count === null || count === undefined
            ? null
            : purpleRamp(count / maxPartner);
        },
        (i) => partner.marks[i],
        () => {
          void this.store.mutate(() =>
            this.store.api.setPrimary({ ppe: [payload.primary, partner.protein] }),
          );
        },
        "partner-row",
      );
      y += CELL + 3;
    }

    this.root.appendChild(this.presencePanel(payload));
  }

  /** Presence / absence / property filters over the primary's amino acids. */
  private presencePanel(payload: ProteinViewPayload): HTMLElement {
    const details = document.createElement("details");
    details.className = "filter-panel";
    const summary = document.createElement("summary");
    summary.textContent = "amino-acid filters";
    details.appendChild(summary);

    const row = document.createElement("div");
    row.className = "range-row";
    const seqInput = document.createElement("input");
    seqInput.placeholder = "seq, e.g. 261";
    const presence = document.createElement("button");
    presence.textContent = "require interaction";
    presence.addEventListener("click", () => {
      const seq = Number(seqInput.value);
      if (!Number.isFinite(seq)) return;
      void this.store.mutate(() =>
        this.store.api.addFilter("remove_complement", {
          level: "aa",
          ids: [[payload.primary, seq]],
        }),
      );
    });
    const absence = document.createElement("button");
    absence.textContent = "forbid interaction";
    absence.addEventListener("click", () => {
      const seq = Number(seqInput.value);
      if (!Number.isFinite(seq)) return;
      void this.store.mutate(() =>
        this.store.api.addFilter("remove", {
          level: "aa",
          ids: [[payload.primary, seq]],
        }),
      );
    });
    row.append(seqInput, presence, absence);
    details.appendChild(row);

    const hydro = document.createElement("div");
    hydro.className = "range-row";
    const lo = document.createElement("input");
    lo.placeholder = "hydrophobicity min";
    const hi = document.createElement("input");
    hi.placeholder = "max";
    const apply = document.createElement("button");
    apply.textContent = "range filter";
    apply.addEventListener("click", () => {
      void this.store.mutate(() =>
        this.store.api.addFilter("range", {
          level: "aa",
          property: "hydrophobicity",
          min: lo.value === "" ? undefined : Number(lo.value),
          max: hi.value === "" ? undefined : Number(hi.value),
          scope: [payload.primary],
        }),
      );
    });
    hydro.append(lo, hi, apply);
    details.appendChild(hydro);
    return details;
  }
}
