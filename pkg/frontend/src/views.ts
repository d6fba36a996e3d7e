/**
 * DOM rendering for the two screens: the query builder and the three-part
 * report (central people, direct relationships, group partition).
 *
 * All numbers shown come straight from service JSON; the only client-side
 * computation is presentational (sorting served values, graph layout).
 */

import { ApiClient, ApiError, Cancelled, CentralityRow, PairReport, PersonHit,
         Subgraph, ThreePartReport } from "./api.js";
import { GROUP_COLORS, SIGN_COLORS, ViewEdge, ViewNode, renderGraphView } from "./graphview.js";
import { ALGORITHMS, DEPTH_CAP, QueryState, validate } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

// -- query builder -------------------------------------------------------------

export interface BuilderHooks {
  onSubmit: () => void;
}

export class QueryBuilder {
  readonly root: HTMLElement;
  private seedNames = new Map<number, string>();
  private suggestions!: HTMLUListElement;
  private chips!: HTMLDivElement;
  private message!: HTMLDivElement;
  private searchInput!: HTMLInputElement;
  private debounce: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private client: ApiClient,
    public state: QueryState,
    private hooks: BuilderHooks,
  ) {
    this.root = el("section", "query-builder");
    this.build();
  }

  private build(): void {
    const search = el("div", "search-box");
    this.searchInput = el("input");
    this.searchInput.type = "search";
    this.searchInput.placeholder = "search people (e.g. wang)";
    this.searchInput.id = "person-search";
    this.searchInput.addEventListener("input", () => this.scheduleSearch());
    this.suggestions = el("ul", "suggestions");
    search.append(this.searchInput, this.suggestions);

    this.chips = el("div", "seed-chips");

    const controls = el("div", "controls");
    const depth = el("select", "depth-select") as HTMLSelectElement;
    depth.id = "depth";
    for (let d = 0; d <= DEPTH_CAP; d++) {
      const option = el("option", undefined, String(d)) as HTMLOptionElement;
      option.value = String(d);
      depth.appendChild(option);
    }
    depth.value = String(this.state.depth);
    depth.addEventListener("change", () => {
      this.state.depth = Number(depth.value);
    });

    const algorithm = el("select", "algorithm-select") as HTMLSelectElement;
    algorithm.id = "algorithm";
    for (const name of ALGORITHMS) {
      const option = el("option", undefined, name) as HTMLOptionElement;
      option.value = name;
      algorithm.appendChild(option);
    }
    algorithm.value = this.state.algorithm;

    const groups = this.numberInput("groups", "groups", this.state.groups, (v) => {
      this.state.groups = Number.isNaN(v) ? null : v;
    });
    const seed = this.numberInput("seed", "seed", this.state.seed, (v) => {
      this.state.seed = Number.isNaN(v) ? 0 : v;
    });
    const gammaPos = this.numberInput("gamma-pos", "gamma+", this.state.gammaPos, (v) => {
      this.state.gammaPos = Number.isNaN(v) ? 1 : v;
    }, 0.1);
    const gammaNeg = this.numberInput("gamma-neg", "gamma-", this.state.gammaNeg, (v) => {
      this.state.gammaNeg = Number.isNaN(v) ? 1 : v;
    }, 0.1);
    const dim = this.numberInput("dim", "dim", this.state.dim, (v) => {
      this.state.dim = Number.isNaN(v) ? 8 : v;
    });

    const updateParamVisibility = () => {
      this.state.algorithm = algorithm.value as QueryState["algorithm"];
      groups.hidden = this.state.algorithm === "community";
      gammaPos.hidden = gammaNeg.hidden = this.state.algorithm !== "community";
      dim.hidden = this.state.algorithm !== "spectral";
    };
    algorithm.addEventListener("change", updateParamVisibility);

    const submit = el("button", "submit", "Build report");
    submit.id = "submit";
    submit.addEventListener("click", () => this.hooks.onSubmit());

    this.message = el("div", "validation-message");
    this.message.id = "validation";

    controls.append(
      labelled("depth", depth), labelled("algorithm", algorithm),
      groups, gammaPos, gammaNeg, dim, seed, submit);
    this.root.append(search, this.chips, controls, this.message);
    updateParamVisibility();
    this.renderChips();
  }

  private numberInput(id: string, label: string, value: number | null,
                      onChange: (v: number) => void, step = 1): HTMLLabelElement {
    const input = el("input") as HTMLInputElement;
    input.type = "number";
    input.id = id;
    input.step = String(step);
    if (value !== null) input.value = String(value);
    input.addEventListener("change", () => onChange(input.valueAsNumber));
    return labelled(label, input);
  }

  private scheduleSearch(): void {
    if (this.debounce !== null) clearTimeout(this.debounce);
    this.debounce = setTimeout(() => void this.runSearch(), 120);
  }

  async runSearch(): Promise<void> {
    const q = this.searchInput.value.trim();
    if (q === "") {
      this.suggestions.replaceChildren();
      return;
    }
    try {
      const result = await this.client.searchPersons(q);
      this.renderSuggestions(result.items);
    } catch (err) {
      if (err instanceof Cancelled) return; // a newer search is in flight
      this.showMessage(err instanceof Error ? err.message : String(err));
    }
  }

  private renderSuggestions(hits: PersonHit[]): void {
    this.suggestions.replaceChildren(...hits.map((hit) => {
      const item = el("li", "suggestion",
                      `${hit.name_en || hit.name_cn} (${hit.person_id})`);
      item.title = hit.name_cn;
      item.dataset.personId = String(hit.person_id);
      item.addEventListener("click", () => {
        this.addSeed(hit.person_id, hit.name_en || hit.name_cn);
        this.searchInput.value = "";
        this.suggestions.replaceChildren();
      });
      return item;
    }));
  }

  addSeed(personId: number, name: string): void {
    if (!this.state.seeds.includes(personId)) {
      this.state.seeds.push(personId);
      this.seedNames.set(personId, name);
      this.renderChips();
    }
  }

  removeSeed(personId: number): void {
    this.state.seeds = this.state.seeds.filter((s) => s !== personId);
    this.renderChips();
  }

  private renderChips(): void {
    this.chips.replaceChildren(...this.state.seeds.map((id) => {
      const chip = el("span", "chip", this.seedNames.get(id) ?? String(id));
      chip.dataset.seed = String(id);
      const remove = el("button", "chip-remove", "×");
      remove.addEventListener("click", () => this.removeSeed(id));
      chip.appendChild(remove);
      return chip;
    }));
  }

  /** Client-side validation; returns true when the query may be submitted. */
  checkValid(): boolean {
    const problem = validate(this.state);
    this.showMessage(problem ?? "");
    return problem === null;
  }

  showMessage(text: string): void {
    this.message.textContent = text;
  }
}

function labelled(text: string, control: HTMLElement): HTMLLabelElement {
  const label = el("label", "field");
  label.append(el("span", "field-name", text), control);
  return label;
}

// -- report view ------------------------------------------------------------------

const MEASURES = ["degree", "betweenness", "closeness", "eigenvector"] as const;
type Measure = (typeof MEASURES)[number];

export class ReportView {
  readonly root: HTMLElement;
  private sortBy: Measure = "degree";

  constructor(private report: ThreePartReport, private subgraph: Subgraph) {
    this.root = el("section", "report-view");
    this.build();
  }

  private build(): void {
    const tabs = el("div", "tabs");
    const panels = el("div", "panels");
    const parts: Array<[string, HTMLElement]> = [
      ["Central People", this.centralityPanel()],
      ["Relationships", this.pairsPanel()],
      ["Partition", this.partitionPanel()],
    ];
    parts.forEach(([name, panel], index) => {
      const button = el("button", "tab", name);
      button.dataset.tab = name;
      panel.classList.add("panel");
      panel.dataset.panel = name;
      panel.hidden = index !== 0;
      button.classList.toggle("active", index === 0);
      button.addEventListener("click", () => {
        panels.querySelectorAll<HTMLElement>(".panel").forEach((p) => {
          p.hidden = p !== panel;
        });
        tabs.querySelectorAll(".tab").forEach((t) => t.classList.toggle("active", t === button));
      });
      tabs.appendChild(button);
      panels.appendChild(panel);
    });
    const summary = el("div", "report-summary",
      `subgraph: ${this.report.subgraph.node_count} people, `
      + `${this.report.subgraph.edge_count} relationships`);
    this.root.append(summary, tabs, panels);
  }

  private centralityPanel(): HTMLElement {
    const panel = el("div");
    const table = el("table", "centrality-table");
    const head = el("thead");
    const headRow = el("tr");
    headRow.append(el("th", undefined, "name"), el("th", undefined, "person_id"));
    for (const measure of MEASURES) {
      const th = el("th", "sortable", measure);
      th.dataset.measure = measure;
      th.addEventListener("click", () => {
        this.sortBy = measure;
        renderBody();
        headRow.querySelectorAll("th.sortable").forEach((cell) =>
          cell.classList.toggle("sorted", cell === th));
      });
      if (measure === this.sortBy) th.classList.add("sorted");
      headRow.appendChild(th);
    }
    head.appendChild(headRow);
    const body = el("tbody");
    const renderBody = () => {
      const rows = [...this.report.central].sort(
        (a, b) => b[this.sortBy] - a[this.sortBy] || a.person_id - b.person_id);
      body.replaceChildren(...rows.map((row: CentralityRow) => {
        const tr = el("tr");
        tr.dataset.personId = String(row.person_id);
        tr.append(
          el("td", undefined, row.name),
          el("td", undefined, String(row.person_id)),
          ...MEASURES.map((m) => el("td", "num", row[m].toFixed(4))));
        return tr;
      }));
    };
    renderBody();
    table.append(head, body);
    panel.appendChild(table);
    if (!this.report.centrality_meta.eigenvector_converged) {
      panel.appendChild(el("p", "warning", "eigenvector centrality did not converge"));
    }
    return panel;
  }

  private pairsPanel(): HTMLElement {
    const panel = el("div", "pair-cards");
    if (this.report.pairs.length === 0) {
      panel.appendChild(el("p", "empty", "no direct relationships between the seeds"));
      return panel;
    }
    for (const pair of this.report.pairs) {
      panel.appendChild(this.pairCard(pair));
    }
    return panel;
  }

  private pairCard(pair: PairReport): HTMLElement {
    const card = el("article", "pair-card");
    card.dataset.pair = `${pair.u}-${pair.v}`;
    const badge = el("span", `net-sign net-${pair.net_sign}`, pair.net_sign);
    const heading = el("h3", undefined, `${pair.u_name} — ${pair.v_name} `);
    heading.appendChild(badge);
    card.appendChild(heading);
    const list = el("ul", "evidence");
    for (const record of pair.records) {
      const item = el("li", `evidence-${record.sign}`,
                      `${record.rel_name} ×${record.count}`);
      item.style.color = SIGN_COLORS[record.sign];
      list.appendChild(item);
    }
    card.appendChild(list);
    card.appendChild(el("p", "totals",
      `positive ${pair.pos_total} · negative ${pair.neg_total} · neutral ${pair.neu_total}`));
    return card;
  }

  private partitionPanel(): HTMLElement {
    const panel = el("div", "partition-panel");
    const partition = this.report.partition;
    const names = new Map(this.subgraph.persons.map(
      (p) => [p.person_id, p.name_en || p.name_cn]));
    const sizes = new Map(this.report.central.map((row) => [row.person_id, row.degree]));

    const legend = el("div", "legend");
    partition.groups.forEach((members, index) => {
      const entry = el("div", "legend-entry");
      entry.dataset.group = String(index);
      const swatch = el("span", "swatch");
      swatch.style.background = GROUP_COLORS[index % GROUP_COLORS.length];
      entry.append(swatch,
        el("span", undefined,
           members.map((m) => names.get(m) ?? String(m)).join(", ")));
      legend.appendChild(entry);
    });
    panel.appendChild(legend);
    panel.appendChild(el("p", "partition-meta",
      `${partition.groups.length} groups · imbalance ${partition.imbalance} · `
      + `${partition.algorithm} (seed ${partition.seed})`));

    const nodes: ViewNode[] = this.subgraph.persons.map((p) => ({
      id: p.person_id,
      label: p.name_en || p.name_cn,
      group: partition.assignment[String(p.person_id)] ?? 0,
      size: sizes.get(p.person_id) ?? 0,
    }));
    const edges: ViewEdge[] = this.subgraph.edges.map((e) => ({
      u: e.u, v: e.v, sign: e.sign,
    }));
    panel.appendChild(renderGraphView(nodes, edges));
    return panel;
  }
}

// -- error panel -------------------------------------------------------------------

export function renderErrorPanel(err: unknown, onRetry: () => void): HTMLElement {
  const panel = el("section", "error-panel");
  const message = err instanceof Error ? err.message : String(err);
  panel.appendChild(el("p", "error-message", message));
  const retry = el("button", "retry", "Retry");
  retry.addEventListener("click", onRetry);
  panel.appendChild(retry);
  if (err instanceof ApiError && err.kind === "malformed_payload") {
    const raw = el("pre", "raw-json");
    raw.textContent = err.rawBody;
    panel.appendChild(raw);
  }
  return panel;
}
