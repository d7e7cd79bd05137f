/** Overview graph: proteins on a circle, pair-contact edges, and per-node
 * bar charts for interface sizes (upper) and consistencies (lower), each
 * framed by a light reference border (the full bar / consistency 1). The
 * filtered-or-affected share of an edge renders as a grey segment. */

import {
  proteinColor,
  svgElement,
} from "../palette.js";
import type { SessionStore } from "../state.js";
import type { OverviewNode, OverviewPayload } from "../types.js";

const SIZE = 460;
const RADIUS = 150;
const NODE_RADIUS = 26;
const BAR_WIDTH = 7;
const BAR_MAX = 24;

export class OverviewGraphView {
  readonly root: HTMLElement;
  private popup: HTMLElement | null = null;

  constructor(
    container: HTMLElement,
    private store: SessionStore,
  ) {
    this.root = document.createElement("div");
    this.root.className = "view overview-view";
    container.appendChild(this.root);
    store.subscribe(() => this.render());
  }

  render(): void {
    const payload = this.store.data.overview;
    this.root.textContent = "";
    this.closePopup();
    if (!payload) return;

    const header = document.createElement("div");
    header.className = "view-header";
    header.textContent = "Overview Graph";
    const scaling = document.createElement("select");
    scaling.className = "scaling-select";
    for (const mode of ["independent", "absolute"]) {
      const option = document.createElement("option");
      option.value = mode;
      option.textContent = `${mode} scaling`;
      option.selected = this.store.params.scaling === mode;
      scaling.appendChild(option);
    }
    scaling.addEventListener("change", () => {
      this.store.params.scaling = scaling.value as "independent" | "absolute";
      void this.store.refresh();
    });
    header.appendChild(scaling);
    this.root.appendChild(header);

    if (payload.nodes.length > 12) {
      const warning = document.createElement("div");
      warning.className = "palette-warning";
      warning.textContent =
        `${payload.nodes.length} proteins exceed the 12-hue palette; hues repeat`;
      this.root.appendChild(warning);
    }

    const svg = svgElement("svg", {
      viewBox: `0 0 ${SIZE} ${SIZE}`,
      class: "overview-svg",
    });
    this.root.appendChild(svg as unknown as HTMLElement);

    const center = SIZE / 2;
    const positions = new Map<string, { x: number; y: number }>();
    payload.nodes.forEach((node, i) => {
      const angle = (2 * Math.PI * i) / payload.nodes.length - Math.PI / 2;
      positions.set(node.protein, {
        x: center + RADIUS * Math.cos(angle),
        y: center + RADIUS * Math.sin(angle),
      });
    });

    const maxWeight = Math.max(1, ...payload.edges.map((e) => e.weight_total));
    for (const edge of payload.edges) {
      const a = positions.get(edge.pair[0]);
      const b = positions.get(edge.pair[1]);
      if (!a || !b) continue;
      const isPrimary =
        payload.primary_ppe !== null &&
        edge.pair[0] === payload.primary_ppe[0] &&
        edge.pair[1] === payload.primary_ppe[1];
      const group = svgElement("g", {
        class: `edge${isPrimary ? " primary-edge" : ""}`,
        "data-pair": edge.pair.join("-"),
      });
      // total width encodes the unfiltered pair weight; the visible part is
      // drawn on top, so the grey underlay reads as the filtered portion
      const total = svgElement("line", {
        x1: a.x, y1: a.y, x2: b.x, y2: b.y,
        stroke: "#d9d9d9",
        "stroke-width": 1 + (11 * edge.weight_total) / maxWeight,
        class: "edge-total",
      });
      const visible = svgElement("line", {
        x1: a.x, y1: a.y, x2: b.x, y2: b.y,
        stroke: isPrimary ? "#333333" : "#8a8a8a",
        "stroke-width": Math.max(0, 1 + (11 * edge.weight) / maxWeight) * (edge.weight > 0 ? 1 : 0),
        class: "edge-visible",
        "data-weight": edge.weight,
      });
      group.appendChild(total);
      if (edge.weight > 0) group.appendChild(visible);
      if (edge.weight_affected > 0) {
        const affected = svgElement("line", {
          x1: a.x, y1: a.y, x2: b.x, y2: b.y,
          stroke: "#bbbbbb",
          "stroke-dasharray": "4 3",
          "stroke-width": 1 + (11 * edge.weight_affected) / maxWeight,
          class: "edge-affected",
        });
        group.appendChild(affected);
      }
      group.addEventListener("click", (event) =>
        this.openEdgePopup(edge.pair, event as MouseEvent),
      );
      svg.appendChild(group);
    }

    for (const node of payload.nodes) {
      const pos = positions.get(node.protein)!;
      svg.appendChild(this.renderNode(node, pos, payload));
    }
  }

  private renderNode(
    node: OverviewNode,
    pos: { x: number; y: number },
    payload: OverviewPayload,
  ): SVGGElement {
    const isPrimary = payload.primary_protein === node.protein;
    const group = svgElement("g", {
      class: `node${isPrimary ? " primary-node" : ""}`,
      "data-protein": node.protein,
      transform: `translate(${pos.x}, ${pos.y})`,
    });

    const core = svgElement("circle", {
      r: NODE_RADIUS,
      fill: proteinColor(node.color_index),
      stroke: isPrimary ? "#222222" : "#888888",
      "stroke-width": isPrimary ? 3 : 1,
      class: "node-core",
    });
    group.appendChild(core);

    const label = svgElement("text", {
      y: 4,
      "text-anchor": "middle",
      class: "node-label",
    });
    label.textContent = node.protein;
    group.appendChild(label);

    // per-partner bar pairs: interface size above the node, consistency
    // below; light border rects carry the reference values (full scale / 1)
    const n = node.interfaces.length;
    const barsWidth = n * (BAR_WIDTH + 2);
    node.interfaces.forEach((iface, i) => {
      const x = -barsWidth / 2 + i * (BAR_WIDTH + 2);
      const sizeReference = svgElement("rect", {
        x, y: -NODE_RADIUS - 4 - BAR_MAX,
        width: BAR_WIDTH, height: BAR_MAX,
        fill: "none",
        stroke: "#cccccc",
        class: "size-bar-reference",
      });
      const sizeHeight = BAR_MAX * iface.size_norm;
      const sizeBar = svgElement("rect", {
        x, y: -NODE_RADIUS - 4 - sizeHeight,
        width: BAR_WIDTH, height: sizeHeight,
        fill: proteinColorOf(payload, iface.partner),
        class: "size-bar",
        "data-partner": iface.partner,
        "data-size": iface.size,
      });
      const consistencyReference = svgElement("rect", {
        x, y: NODE_RADIUS + 4,
        width: BAR_WIDTH, height: BAR_MAX,
        fill: "none",
        stroke: "#cccccc",
        class: "consistency-bar-reference",
      });
      const consistencyHeight = BAR_MAX * (iface.consistency ?? 0);
      const consistencyBar = svgElement("rect", {
        x, y: NODE_RADIUS + 4,
        width: BAR_WIDTH, height: consistencyHeight,
        fill: proteinColorOf(payload, iface.partner),
        class: "consistency-bar",
        "data-partner": iface.partner,
        "data-consistency": iface.consistency ?? "",
      });
      group.append(sizeReference, sizeBar, consistencyReference, consistencyBar);
    });

    group.addEventListener("click", () => {
      void this.store.mutate(() => this.store.api.setPrimary({ protein: node.protein }));
    });
    return group;
  }

  private openEdgePopup(pair: [string, string], event: MouseEvent): void {
    this.closePopup();
    const popup = document.createElement("div");
    popup.className = "edge-popup";
    popup.style.left = `${event.clientX}px`;
    popup.style.top = `${event.clientY}px`;
    const actions: [string, () => Promise<unknown>][] = [
      ["set primary pair", () => this.store.mutate(() => this.store.api.setPrimary({ ppe: pair }))],
      ["select contacting", () => this.store.mutate(() => this.store.api.setSelection({ ppe_pairs: [pair] }))],
      ["remove contacting", () => this.store.mutate(() => this.store.api.addFilter("remove", { level: "ppe", pair }))],
      ["keep only contacting", () => this.store.mutate(() => this.store.api.addFilter("remove_complement", { level: "ppe", pair }))],
    ];
    for (const [text, action] of actions) {
      const button = document.createElement("button");
      button.textContent = text;
      button.addEventListener("click", () => {
        void action();
        this.closePopup();
      });
      popup.appendChild(button);
    }
    this.root.appendChild(popup);
    this.popup = popup;
  }

  private closePopup(): void {
    this.popup?.remove();
    this.popup = null;
  }
}

function proteinColorOf(payload: OverviewPayload, protein: string): string {
  const node = payload.nodes.find((n) => n.protein === protein);
  return proteinColor(node ? node.color_index : 0);
}
