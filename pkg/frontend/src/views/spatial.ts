/** 3D views rendered as SVG orthographic projections (no WebGL needed):
 *
 * - density overview: channel-colored transparent isosurface meshes of the
 *   partner-protein densities around the primary protein, with an iso
 *   slider (level = fraction of each channel's maximum);
 * - per-configuration view: residue centroids as discs, colored by protein
 *   or by contact, with an explode toggle applying the server layout.
 *
 * Triangles are depth-sorted (painter's algorithm) and flat-shaded from
 * their face normals. Dragging orbits the camera.
 */

import { proteinColor, svgElement } from "../palette.js";
import type { SessionStore } from "../state.js";
import type { DensityPayload, ExplodedPayload, MeshPayload } from "../types.js";

export interface Camera {
  yaw: number;
  pitch: number;
  scale: number;
}

export type Vec3 = [number, number, number];

/** Rotation matrix of the camera's yaw (around y) then pitch (around x). */
export function cameraMatrix(camera: Camera): number[] {
  const cy = Math.cos(camera.yaw);
  const sy = Math.sin(camera.yaw);
  const cp = Math.cos(camera.pitch);
  const sp = Math.sin(camera.pitch);
  // rows of R = Rx(pitch) * Ry(yaw)
  return [cy, 0, sy, sy * sp, cp, -cy * sp, -sy * cp, sp, cy * cp];
}

export function applyMatrix(m: number[], v: Vec3): Vec3 {
  return [
    m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
    m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
    m[6] * v[0] + m[7] * v[1] + m[8] * v[2],
  ];
}

export interface ProjectedTriangle {
  points: [number, number][];
  depth: number;
  shade: number; // 0..1 flat shading from the face normal
}

/** Project mesh triangles, returning them back-to-front. Shading is
 * Lambert-like from the camera-space z of the averaged vertex normals. */
export function projectMesh(
  mesh: {
    vertices: ArrayLike<number>;
    triangles: ArrayLike<number>;
    normals?: ArrayLike<number>;
  },
  camera: Camera,
  center: Vec3,
): ProjectedTriangle[] {
  const m = cameraMatrix(camera);
  const nVerts = mesh.vertices.length / 3;
  const projected = new Float64Array(nVerts * 3);
  const normalZ = new Float64Array(nVerts);
  for (let i = 0; i < nVerts; i++) {
    const v: Vec3 = [
      (mesh.vertices[3 * i] as number) - center[0],
      (mesh.vertices[3 * i + 1] as number) - center[1],
      (mesh.vertices[3 * i + 2] as number) - center[2],
    ];
    const r = applyMatrix(m, v);
    projected[3 * i] = r[0] * camera.scale;
    projected[3 * i + 1] = -r[1] * camera.scale;
    projected[3 * i + 2] = r[2];
    if (mesh.normals && mesh.normals.length === mesh.vertices.length) {
      const n = applyMatrix(m, [
        mesh.normals[3 * i] as number,
        mesh.normals[3 * i + 1] as number,
        mesh.normals[3 * i + 2] as number,
      ]);
      normalZ[i] = n[2];
    } else {
      normalZ[i] = 1;
    }
  }
  const out: ProjectedTriangle[] = [];
  const nTris = mesh.triangles.length / 3;
  for (let t = 0; t < nTris; t++) {
    const a = mesh.triangles[3 * t] as number;
    const b = mesh.triangles[3 * t + 1] as number;
    const c = mesh.triangles[3 * t + 2] as number;
    const ax = projected[3 * a], ay = projected[3 * a + 1], az = projected[3 * a + 2];
    const bx = projected[3 * b], by = projected[3 * b + 1], bz = projected[3 * b + 2];
    const cx = projected[3 * c], cy = projected[3 * c + 1], cz = projected[3 * c + 2];
    const doubleArea = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    if (Math.abs(doubleArea) < 1e-9) continue;
    const facing = Math.abs(normalZ[a] + normalZ[b] + normalZ[c]) / 3;
    out.push({
      points: [
        [ax, ay],
        [bx, by],
        [cx, cy],
      ],
      depth: (az + bz + cz) / 3,
      shade: 0.35 + 0.65 * Math.min(1, facing),
    });
  }
  out.sort((p, q) => p.depth - q.depth);
  return out;
}

export function meshCenter(vertices: ArrayLike<number>): Vec3 {
  const n = vertices.length / 3;
  if (n === 0) return [0, 0, 0];
  let x = 0, y = 0, z = 0;
  for (let i = 0; i < n; i++) {
    x += vertices[3 * i] as number;
    y += vertices[3 * i + 1] as number;
    z += vertices[3 * i + 2] as number;
  }
  return [x / n, y / n, z / n];
}

const VIEW = 340;

export class DensityOverviewView {
  readonly root: HTMLElement;
  payload: DensityPayload | null = null;
  meshes = new Map<string, MeshPayload>();
  camera: Camera = { yaw: 0.5, pitch: 0.35, scale: 4 };

  constructor(
    container: HTMLElement,
    private store: SessionStore,
  ) {
    this.root = document.createElement("div");
    this.root.className = "view density-view";
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
    const { isoFraction, spacing } = this.store.params;
    try {
      this.payload = await this.store.api.density(primary, isoFraction, spacing);
    } catch {
      this.payload = null;
      this.render();
      return;
    }
    this.meshes.clear();
    await Promise.all(
      this.payload.channels.map(async (channel) => {
        const mesh = await this.store.api.densityMesh(
          channel.protein,
          isoFraction,
          spacing,
        );
        this.meshes.set(channel.protein, mesh);
      }),
    );
    this.render();
  }

  render(): void {
    this.root.textContent = "";
    const header = document.createElement("div");
    header.className = "view-header";
    header.textContent = "3D Density Overview";
    this.root.appendChild(header);

    if (!this.payload) {
      const note = document.createElement("div");
      note.className = "empty-note";
      note.textContent = "select a primary protein to compute partner densities";
      this.root.appendChild(note);
      return;
    }

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0.01";
    slider.max = "0.9";
    slider.step = "0.01";
    slider.value = String(this.store.params.isoFraction);
    slider.className = "iso-slider";
    slider.addEventListener("change", () => {
      this.store.params.isoFraction = Number(slider.value);
      void this.refetch();
    });
    const sliderLabel = document.createElement("span");
    sliderLabel.className = "iso-label";
    sliderLabel.textContent = `iso ${this.store.params.isoFraction.toFixed(2)} of max`;
    header.append(slider, sliderLabel);

    const svg = svgElement("svg", {
      viewBox: `${-VIEW / 2} ${-VIEW / 2} ${VIEW} ${VIEW}`,
      class: "density-svg",
    });
    this.root.appendChild(svg as unknown as HTMLElement);

    // shared center across channels so relative positions stay meaningful
    const allVertices: number[] = [];
    for (const mesh of this.meshes.values()) allVertices.push(...mesh.vertices);
    const center = meshCenter(allVertices);

    let triangleTotal = 0;
    for (const channel of this.payload.channels) {
      const mesh = this.meshes.get(channel.protein);
      if (!mesh || mesh.triangle_count === 0) continue;
      triangleTotal += mesh.triangle_count;
      const group = svgElement("g", {
        class: "density-channel",
        "data-protein": channel.protein,
      });
      const color = proteinColor(channel.color_index);
      for (const tri of projectMesh(mesh, this.camera, center)) {
        const polygon = svgElement("polygon", {
          points: tri.points.map(([x, y]) => `${x.toFixed(1)},${y.toFixed(1)}`).join(" "),
          fill: color,
          "fill-opacity": 0.30 * tri.shade + 0.08,
          class: "density-triangle",
        });
        group.appendChild(polygon);
      }
      svg.appendChild(group);
    }
    if (triangleTotal === 0) {
      const note = svgElement("text", { x: 0, y: 0, "text-anchor": "middle", class: "empty-note" });
      note.textContent = "iso level above every channel maximum";
      svg.appendChild(note);
    }

    this.installOrbit(svg);

    const legend = document.createElement("div");
    legend.className = "channel-legend";
    for (const channel of this.payload.channels) {
      const chip = document.createElement("span");
      chip.className = "legend-chip";
      chip.style.background = proteinColor(channel.color_index);
      chip.textContent = channel.protein;
      legend.appendChild(chip);
    }
    this.root.appendChild(legend);
  }

  private installOrbit(svg: SVGSVGElement): void {
    let dragging: { x: number; y: number } | null = null;
    svg.addEventListener("mousedown", (event) => {
      dragging = { x: (event as MouseEvent).clientX, y: (event as MouseEvent).clientY };
    });
    svg.addEventListener("mouseup", (event) => {
      if (!dragging) return;
      const dx = (event as MouseEvent).clientX - dragging.x;
      const dy = (event as MouseEvent).clientY - dragging.y;
      dragging = null;
      if (Math.abs(dx) + Math.abs(dy) < 2) return;
      this.camera.yaw += dx * 0.01;
      this.camera.pitch = Math.max(
        -1.4,
        Math.min(1.4, this.camera.pitch + dy * 0.01),
      );
      this.render();
    });
  }
}

export class ExplodedView {
  readonly root: HTMLElement;
  exploded: ExplodedPayload | null = null;
  coordinates: {
    proteins: {
      protein: string;
      color_index: number;
      residues: { seq: number; name: string; position: Vec3; partners: string[] }[];
    }[];
  } | null = null;
  ccId: string | null = null;
  explodeOn = false;
  coloring: "protein" | "contact" = "contact";
  camera: Camera = { yaw: 0.4, pitch: 0.3, scale: 3 };

  constructor(
    container: HTMLElement,
    private store: SessionStore,
  ) {
    this.root = document.createElement("div");
    this.root.className = "view exploded-view";
    container.appendChild(this.root);
    store.subscribe(() => void this.sync());
  }

  private async sync(): Promise<void> {
    // show the single selected configuration, when there is exactly one
    const selected = this.store.data.properties?.configurations.filter((r) => r.selected);
    if (selected && selected.length === 1 && selected[0].cc !== this.ccId) {
      await this.show(selected[0].cc);
    } else {
      this.render();
    }
  }

  async show(ccId: string): Promise<void> {
    this.ccId = ccId;
    const base = `${this.store.api.base}/sessions/${this.store.api.sessionId}`;
    const response = await fetch(`${base}/cc/${encodeURIComponent(ccId)}`);
    this.coordinates = (await response.json()) as ExplodedView["coordinates"];
    this.exploded = await this.store.api.explodedCc(ccId, this.store.params.gap);
    this.render();
  }

  render(): void {
    this.root.textContent = "";
    const header = document.createElement("div");
    header.className = "view-header";
    header.textContent = `Configuration 3D${this.ccId ? ` (${this.ccId})` : ""}`;
    this.root.appendChild(header);

    if (!this.coordinates || !this.exploded) {
      const note = document.createElement("div");
      note.className = "empty-note";
      note.textContent = "select a single configuration to inspect it";
      this.root.appendChild(note);
      return;
    }

    const explodeToggle = document.createElement("label");
    explodeToggle.className = "explode-toggle";
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.checked = this.explodeOn;
    checkbox.addEventListener("change", () => {
      this.explodeOn = checkbox.checked;
      this.render();
    });
    explodeToggle.append(checkbox, document.createTextNode(" explode"));
    header.appendChild(explodeToggle);

    const coloring = document.createElement("select");
    for (const mode of ["contact", "protein"] as const) {
      const option = document.createElement("option");
      option.value = mode;
      option.textContent = `color: ${mode}`;
      option.selected = this.coloring === mode;
      coloring.appendChild(option);
    }
    coloring.addEventListener("change", () => {
      this.coloring = coloring.value as "protein" | "contact";
      this.render();
    });
    header.appendChild(coloring);

    const offsets = new Map(
      this.exploded.proteins.map((p) => [p.protein, p.offset] as const),
    );
    const m = cameraMatrix(this.camera);

    interface Disc {
      x: number;
      y: number;
      depth: number;
      fill: string;
      seq: number;
      protein: string;
      interacting: boolean;
    }
    const discs: Disc[] = [];
    const all: Vec3[] = [];
    for (const protein of this.coordinates.proteins) {
      const offset = this.explodeOn ? offsets.get(protein.protein) ?? [0, 0, 0] : [0, 0, 0];
      for (const residue of protein.residues) {
        all.push([
          residue.position[0] + offset[0],
          residue.position[1] + offset[1],
          residue.position[2] + offset[2],
        ]);
      }
    }
    const center: Vec3 = all.length
      ? [
          all.reduce((s, v) => s + v[0], 0) / all.length,
          all.reduce((s, v) => s + v[1], 0) / all.length,
          all.reduce((s, v) => s + v[2], 0) / all.length,
        ]
      : [0, 0, 0];

    for (const protein of this.coordinates.proteins) {
      const offset = this.explodeOn ? offsets.get(protein.protein) ?? [0, 0, 0] : [0, 0, 0];
      const base = proteinColor(protein.color_index);
      for (const residue of protein.residues) {
        const world: Vec3 = [
          residue.position[0] + offset[0] - center[0],
          residue.position[1] + offset[1] - center[1],
          residue.position[2] + offset[2] - center[2],
        ];
        const r = applyMatrix(m, world);
        const interacting = residue.partners.length > 0;
        const fill =
          this.coloring === "contact" && interacting
            ? residue.partners.length > 1
              ? "#d62728"
              : "#ff7f0e"
            : base;
        discs.push({
          x: r[0] * this.camera.scale,
          y: -r[1] * this.camera.scale,
          depth: r[2],
          fill,
          seq: residue.seq,
          protein: protein.protein,
          interacting,
        });
      }
    }
    discs.sort((a, b) => a.depth - b.depth);

    const svg = svgElement("svg", {
      viewBox: `${-VIEW / 2} ${-VIEW / 2} ${VIEW} ${VIEW}`,
      class: "exploded-svg",
    });
    this.root.appendChild(svg as unknown as HTMLElement);
    for (const disc of discs) {
      const circle = svgElement("circle", {
        cx: disc.x,
        cy: disc.y,
        r: 4,
        fill: disc.fill,
        stroke: disc.interacting ? "#333333" : "none",
        class: `residue-disc${disc.interacting ? " interacting" : ""}`,
        "data-protein": disc.protein,
        "data-seq": disc.seq,
      });
      const tooltip = svgElement("title", {});
      tooltip.textContent = `${disc.protein}:${disc.seq}`;
      circle.appendChild(tooltip);
      svg.appendChild(circle);
    }
    if (!this.exploded.converged) {
      const warning = document.createElement("div");
      warning.className = "convergence-warning";
      warning.textContent = "layout did not fully reach the gap (best effort shown)";
      this.root.appendChild(warning);
    }
  }
}
