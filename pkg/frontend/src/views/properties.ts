/** Property view: scatterplot of configurations over two chosen property
 * axes. Unaffected configurations are green, selected red, reappearances
 * from temporarily disabled filters grey; points missing either property
 * are omitted with a count badge. Rectangular brushing or clicks select;
 * the panel below issues range filters on the axis properties. */

import { STATE_COLORS, svgElement } from "../palette.js";
import type { SessionStore } from "../state.js";
import type { PropertiesPayload, PropertyRow } from "../types.js";

const WIDTH = 430;
const HEIGHT = 300;
const PAD = 42;

export class PropertyView {
  readonly root: HTMLElement;

  constructor(
    container: HTMLElement,
    private store: SessionStore,
  ) {
    this.root = document.createElement("div");
    this.root.className = "view property-view";
    container.appendChild(this.root);
    store.subscribe(() => this.render());
  }

  render(): void {
    const payload = this.store.data.properties;
    this.root.textContent = "";
    if (!payload) return;

    const header = document.createElement("div");
    header.className = "view-header";
    header.textContent = "Property View";
    this.root.appendChild(header);

    if (payload.property_names.length === 0) {
      const empty = document.createElement("div");
      empty.className = "empty-note";
      empty.textContent =
        "no properties loaded; set a primary configuration to get the similarity column";
      this.root.appendChild(empty);
      return;
    }

    const xName = this.store.params.xProperty ?? payload.property_names[0];
    const yName = this.store.params.yProperty ?? payload.property_names[0];
    this.root.appendChild(this.axisPicker("x", xName, payload));
    this.root.appendChild(this.axisPicker("y", yName, payload));

    const usable = payload.configurations.filter(
      (row) => xName in row.properties && yName in row.properties,
    );
    const omitted = payload.configurations.length - usable.length;
    if (omitted > 0) {
      const badge = document.createElement("span");
      badge.className = "omitted-badge";
      badge.textContent = `${omitted} without both properties`;
      this.root.appendChild(badge);
    }

    const svg = svgElement("svg", {
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
      class: "scatter-svg",
    });
    this.root.appendChild(svg as unknown as HTMLElement);
    if (usable.length === 0) return;

    const xs = usable.map((r) => r.properties[xName]);
    const ys = usable.map((r) => r.properties[yName]);
    const scaleX = makeScale(Math.min(...xs), Math.max(...xs), PAD, WIDTH - 12);
    const scaleY = makeScale(Math.min(...ys), Math.max(...ys), HEIGHT - PAD, 12);

    svg.appendChild(svgElement("line", {
      x1: PAD, y1: HEIGHT - PAD, x2: WIDTH - 12, y2: HEIGHT - PAD, stroke: "#999",
    }));
    svg.appendChild(svgElement("line", {
      x1: PAD, y1: 12, x2: PAD, y2: HEIGHT - PAD, stroke: "#999",
    }));
    const xLabel = svgElement("text", {
      x: (PAD + WIDTH) / 2, y: HEIGHT - 6, "text-anchor": "middle", class: "axis-label",
    });
    xLabel.textContent = xName;
    const yLabel = svgElement("text", {
      x: 12, y: HEIGHT / 2, class: "axis-label",
      transform: `rotate(-90, 12, ${HEIGHT / 2})`,
      "text-anchor": "middle",
    });
    yLabel.textContent = yName;
    svg.append(xLabel, yLabel);

    for (const row of usable) {
      const color = row.selected
        ? STATE_COLORS.selected
        : row.state === "affected"
          ? STATE_COLORS.affected
          : STATE_COLORS.visible;
      const point = svgElement("circle", {
        cx: scaleX(row.properties[xName]),
        cy: scaleY(row.properties[yName]),
        r: 3.5,
        fill: color,
        class: `point point-${row.selected ? "selected" : row.state}`,
        "data-cc": row.cc,
      });
      point.addEventListener("click", () => {
        void this.store.mutate(() => this.store.api.setSelection({ cc_ids: [row.cc] }));
      });
      svg.appendChild(point);
    }

    this.installBrush(svg, usable, xName, yName, scaleX, scaleY);
    this.root.appendChild(this.rangeFilterPanel(xName, yName));
  }

  private axisPicker(axis: "x" | "y", current: string, payload: PropertiesPayload): HTMLElement {
    const select = document.createElement("select");
    select.className = `axis-picker axis-picker-${axis}`;
    for (const name of payload.property_names) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = `${axis}: ${name}`;
      option.selected = name === current;
      select.appendChild(option);
    }
    select.addEventListener("change", () => {
      if (axis === "x") this.store.params.xProperty = select.value;
      else this.store.params.yProperty = select.value;
      this.render();
    });
    return select;
  }

  private installBrush(
    svg: SVGSVGElement,
    rows: PropertyRow[],
    xName: string,
    yName: string,
    scaleX: (v: number) => number,
    scaleY: (v: number) => number,
  ): void {
    let start: { x: number; y: number } | null = null;
    let rect: SVGRectElement | null = null;
    const localPoint = (event: MouseEvent) => {
      const box = svg.getBoundingClientRect();
      const width = box.width || WIDTH;
      const height = box.height || HEIGHT;
      return {
        x: ((event.clientX - box.left) / width) * WIDTH,
        y: ((event.clientY - box.top) / height) * HEIGHT,
      };
    };
    svg.addEventListener("mousedown", (event) => {
      start = localPoint(event as MouseEvent);
      rect = svgElement("rect", { class: "brush", fill: "rgba(100,100,200,0.2)", stroke: "#667" });
      svg.appendChild(rect);
    });
    svg.addEventListener("mousemove", (event) => {
      if (!start || !rect) return;
      const now = localPoint(event as MouseEvent);
      rect.setAttribute("x", String(Math.min(start.x, now.x)));
      rect.setAttribute("y", String(Math.min(start.y, now.y)));
      rect.setAttribute("width", String(Math.abs(now.x - start.x)));
      rect.setAttribute("height", String(Math.abs(now.y - start.y)));
    });
    svg.addEventListener("mouseup", (event) => {
      if (!start || !rect) return;
      const end = localPoint(event as MouseEvent);
      const x0 = Math.min(start.x, end.x);
      const x1 = Math.max(start.x, end.x);
      const y0 = Math.min(start.y, end.y);
      const y1 = Math.max(start.y, end.y);
      rect.remove();
      start = null;
      rect = null;
      if (x1 - x0 < 3 && y1 - y0 < 3) return; // click, not a brush
      const hit = rows
        .filter((row) => {
          const px = scaleX(row.properties[xName]);
          const py = scaleY(row.properties[yName]);
          return px >= x0 && px <= x1 && py >= y0 && py <= y1;
        })
        .map((row) => row.cc);
      // an empty brush is an empty selection, never a filter side effect
      void this.store.mutate(() => this.store.api.setSelection({ cc_ids: hit }));
    });
  }

  private rangeFilterPanel(xName: string, yName: string): HTMLElement {
    const details = document.createElement("details");
    details.className = "filter-panel";
    const summary = document.createElement("summary");
    summary.textContent = "range filters";
    details.appendChild(summary);
    for (const name of new Set([xName, yName])) {
      const row = document.createElement("div");
      row.className = "range-row";
      const label = document.createElement("span");
      label.textContent = name;
      const lo = document.createElement("input");
      lo.placeholder = "min";
      const hi = document.createElement("input");
      hi.placeholder = "max";
      const apply = document.createElement("button");
      apply.textContent = "apply";
      apply.addEventListener("click", () => {
        void this.store.mutate(() =>
          this.store.api.addFilter("range", {
            level: "cc",
            property: name,
            min: lo.value === "" ? undefined : Number(lo.value),
            max: hi.value === "" ? undefined : Number(hi.value),
          }),
        );
      });
      row.append(label, lo, hi, apply);
      details.appendChild(row);
    }
    return details;
  }
}

function makeScale(lo: number, hi: number, from: number, to: number) {
  const span = hi - lo || 1;
  return (value: number) => from + ((value - lo) / span) * (to - from);
}
