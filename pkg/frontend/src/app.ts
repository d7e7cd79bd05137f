/** Dashboard shell: one shared session store, seven linked views, and the
 * load form. Selection propagation is an explicit button (never automatic):
 * propagate up maps the selection to configurations, propagate down expands
 * those configurations to their pairs and amino acids. */

import { ApiClient } from "./api.js";
import { SessionStore } from "./state.js";
import { ContactZoneListView } from "./views/contactZones.js";
import { FilterView } from "./views/filters.js";
import { ResidueMatrixView } from "./views/matrix.js";
import { OverviewGraphView } from "./views/overview.js";
import { PropertyView } from "./views/properties.js";
import { ProteinView } from "./views/proteinView.js";
import { DensityOverviewView, ExplodedView } from "./views/spatial.js";

export interface App {
  store: SessionStore;
  views: {
    overview: OverviewGraphView;
    properties: PropertyView;
    protein: ProteinView;
    matrix: ResidueMatrixView;
    contactZones: ContactZoneListView;
    density: DensityOverviewView;
    exploded: ExplodedView;
    filters: FilterView;
  };
}

export function mountApp(root: HTMLElement, base: string): App {
  const store = new SessionStore(new ApiClient(base));

  const toolbar = document.createElement("div");
  toolbar.className = "toolbar";
  root.appendChild(toolbar);

  const inputField = document.createElement("input");
  inputField.placeholder = "ensemble directory or multi-model file";
  inputField.className = "load-input";
  const mappingField = document.createElement("input");
  mappingField.placeholder = "mapping file (chain,protein)";
  mappingField.className = "load-mapping";
  const propertiesField = document.createElement("input");
  propertiesField.placeholder = "property table (optional)";
  propertiesField.className = "load-properties";
  const loadButton = document.createElement("button");
  loadButton.textContent = "load ensemble";
  loadButton.addEventListener("click", () => {
    void (async () => {
      await store.api.createSession({
        input: inputField.value,
        mapping: mappingField.value,
        properties: propertiesField.value || undefined,
      });
      await store.refresh();
    })();
  });
  toolbar.append(inputField, mappingField, propertiesField, loadButton);

  const propagateUp = document.createElement("button");
  propagateUp.textContent = "propagate selection ↑";
  propagateUp.addEventListener("click", () => {
    void store.mutate(() => store.api.propagateSelection(false));
  });
  const propagateDown = document.createElement("button");
  propagateDown.textContent = "propagate selection ↓";
  propagateDown.addEventListener("click", () => {
    void store.mutate(() => store.api.propagateSelection(true));
  });
  toolbar.append(propagateUp, propagateDown);

  const grid = document.createElement("div");
  grid.className = "dashboard";
  root.appendChild(grid);

  const cell = (name: string) => {
    const element = document.createElement("div");
    element.className = `cell cell-${name}`;
    grid.appendChild(element);
    return element;
  };

  const views = {
    overview: new OverviewGraphView(cell("overview"), store),
    density: new DensityOverviewView(cell("density"), store),
    properties: new PropertyView(cell("properties"), store),
    protein: new ProteinView(cell("protein"), store),
    matrix: new ResidueMatrixView(cell("matrix"), store),
    contactZones: new ContactZoneListView(cell("contact-zones"), store),
    exploded: new ExplodedView(cell("exploded"), store),
    filters: new FilterView(cell("filters"), store),
  };
  return { store, views };
}

declare global {
  interface Window {
    dockdrillApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = new URLSearchParams(window.location.search).get("api") ?? "";
  window.dockdrillApp = mountApp(document.getElementById("app")!, base);
}
