/**
 * Application wiring: boot from the URL (permalinks reconstruct any view),
 * submit queries, and swap between builder, report, and error panels.
 */

import { ApiClient } from "./api.js";
import { QueryState, defaultState, stateFromParams, stateToParams, toReportBody } from "./state.js";
import { QueryBuilder, ReportView, renderErrorPanel } from "./views.js";

export interface App {
  root: HTMLElement;
  builder: QueryBuilder;
  /** resolves when the in-flight report (if any) has rendered or failed */
  idle: () => Promise<void>;
  submit: () => void;
}

export function createApp(root: HTMLElement, client: ApiClient): App {
  const initial = stateFromParams(new URLSearchParams(window.location.search));
  const state: QueryState = initial ?? defaultState();

  const reportSlot = document.createElement("div");
  reportSlot.className = "report-slot";
  let pending: Promise<void> = Promise.resolve();

  const builder = new QueryBuilder(client, state, { onSubmit: () => submit() });
  root.replaceChildren(builder.root, reportSlot);

  async function run(): Promise<void> {
    builder.showMessage("loading…");
    try {
      // the report and the drawable subgraph come from the same query
      const [report, subgraph] = await Promise.all([
        client.report(toReportBody(state)),
        client.subgraph(state.seeds, state.depth),
      ]);
      reportSlot.replaceChildren(new ReportView(report, subgraph).root);
      builder.showMessage("");
    } catch (err) {
      reportSlot.replaceChildren(renderErrorPanel(err, () => submit()));
      builder.showMessage("");
    }
  }

  function submit(): void {
    if (!builder.checkValid()) return;
    const params = stateToParams(state);
    window.history.pushState(null, "", `?${params.toString()}`);
    pending = run();
  }

  if (initial !== null) {
    pending = run(); // permalink boot: reproduce the view immediately
  }

  return {
    root,
    builder,
    idle: () => pending,
    submit,
  };
}

declare global {
  interface Window {
    campnetApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.campnetApp = createApp(document.getElementById("app")!, new ApiClient(""));
}
