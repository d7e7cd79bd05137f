/** Filter view: the status bar (how many configurations are filtered out
 * versus remaining, plus the pair-interface counts) above the ordered
 * filter list. Each filter shows its kind, subject, and properties, with a
 * per-filter enable toggle and delete button; bulk actions disable or
 * remove all filters at once. Disabling refreshes every view, which then
 * render the affected items greyed or crossed. */

import type { SessionStore } from "../state.js";

export class FilterView {
  readonly root: HTMLElement;

  constructor(
    container: HTMLElement,
    private store: SessionStore,
  ) {
    this.root = document.createElement("div");
    this.root.className = "view filter-view";
    container.appendChild(this.root);
    store.subscribe(() => this.render());
  }

  render(): void {
    const payload = this.store.data.filters;
    this.root.textContent = "";
    const header = document.createElement("div");
    header.className = "view-header";
    header.textContent = "Filters";
    this.root.appendChild(header);
    if (!payload) return;

    const status = document.createElement("div");
    status.className = "status-bar";
    status.textContent =
      `${payload.status.cc_hidden} of ${payload.status.cc_total} configurations ` +
      `filtered out, ${payload.status.cc_visible} remaining ` +
      `(pair interfaces: ${payload.status.ppc_visible}/${payload.status.ppc_total})`;
    if (payload.status.affected_by_disabled > 0) {
      const affected = document.createElement("span");
      affected.className = "status-affected";
      affected.textContent =
        `; ${payload.status.affected_by_disabled} shown only while filters are disabled`;
      status.appendChild(affected);
    }
    this.root.appendChild(status);

    const bulk = document.createElement("div");
    bulk.className = "bulk-actions";
    const disableAll = document.createElement("button");
    disableAll.textContent = "disable all";
    disableAll.addEventListener("click", () => {
      void (async () => {
        for (const filter of payload.filters) {
          if (filter.enabled) await this.store.api.patchFilter(filter.id, { enabled: false });
        }
        await this.store.refresh();
      })();
    });
    const clearAll = document.createElement("button");
    clearAll.textContent = "remove all";
    clearAll.addEventListener("click", () => {
      void this.store.mutate(() => this.store.api.clearFilters());
    });
    bulk.append(disableAll, clearAll);
    this.root.appendChild(bulk);

    const list = document.createElement("ul");
    list.className = "filter-list";
    for (const filter of payload.filters) {
      const item = document.createElement("li");
      item.className = `filter-item${filter.enabled ? "" : " disabled"}`;
      item.dataset.filterId = String(filter.id);

      const toggle = document.createElement("input");
      toggle.type = "checkbox";
      toggle.checked = filter.enabled;
      toggle.title = filter.enabled ? "temporarily disable" : "re-enable";
      toggle.addEventListener("change", () => {
        void this.store.mutate(() =>
          this.store.api.patchFilter(filter.id, { enabled: toggle.checked }),
        );
      });

      const label = document.createElement("span");
      label.className = "filter-label";
      const delta =
        filter.delta === null ? "" : filter.delta >= 0
          ? ` (−${filter.delta})`
          : ` (+${-filter.delta})`;
      label.textContent = `${filter.label}${delta}`;

      const remove = document.createElement("button");
      remove.className = "filter-delete";
      remove.textContent = "ⓧ";
      remove.title = "remove filter";
      remove.addEventListener("click", () => {
        void this.store.mutate(() => this.store.api.deleteFilter(filter.id));
      });

      item.append(toggle, label, remove);
      list.appendChild(item);
    }
    this.root.appendChild(list);
  }
}
