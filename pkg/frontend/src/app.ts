// Binds the console model to the page: poll loop, panels, forms.
// Everything shown comes from the last confirmed API response; nothing
// is rendered optimistically.

import { ApiError, type ServiceApi } from "./api.js";
import { planRoute, renderGraph } from "./graph.js";
import { Console } from "./model.js";
import type { EventForm, PlanResultDto, PlanStepDto } from "./types.js";

function must<T extends HTMLElement>(root: Document, id: string): T {
  const node = root.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function describeResult(result: PlanResultDto): string {
  if (result.status === "plan") {
    const n = result.steps?.length ?? 0;
    return `plan: ${n} step${n === 1 ? "" : "s"}`;
  }
  if (result.status === "unsolvable") return "NO PLAN";
  return "SEARCH BUDGET EXHAUSTED";
}

function stepRows(steps: PlanStepDto[], cursor: number): HTMLOListElement {
  const list = document.createElement("ol");
  list.className = "plan-steps";
  steps.forEach((step, i) => {
    const row = document.createElement("li");
    row.textContent = step.action;
    if (i < cursor) row.className = "done";
    if (i === cursor) row.className = "current";
    list.appendChild(row);
  });
  return list;
}

export class App {
  readonly model: Console;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly root: Document,
    api: ServiceApi,
    private readonly pollMs = 2000,
  ) {
    this.model = new Console(api);
  }

  start(): void {
    this.bind();
    void this.tick();
    this.timer = setInterval(() => void this.tick(), this.pollMs);
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
  }

  async tick(): Promise<void> {
    try {
      await this.model.refresh();
      this.render();
      this.note("");
    } catch (err) {
      this.note(`poll failed: ${String(err)}`);
    }
  }

  private bind(): void {
    const root = this.root;
    must<HTMLFormElement>(root, "event-form").addEventListener(
      "submit",
      (ev) => {
        ev.preventDefault();
        void this.submitEventForm();
      },
    );
    must<HTMLButtonElement>(root, "btn-plan").addEventListener("click", () => {
      void this.requestPlan();
    });
    must<HTMLButtonElement>(root, "btn-step").addEventListener("click", () => {
      void this.step();
    });
    must<HTMLButtonElement>(root, "mode-toggle").addEventListener(
      "click",
      () => {
        if (this.model.mode === "live") this.model.enterWhatIf();
        else this.model.exitWhatIf();
        this.render();
      },
    );
    must<HTMLButtonElement>(root, "btn-compare").addEventListener(
      "click",
      () => {
        void this.compare();
      },
    );
    must<HTMLButtonElement>(root, "btn-discard").addEventListener(
      "click",
      () => {
        this.model.discardStaged();
        this.render();
      },
    );
    must<HTMLButtonElement>(root, "btn-apply").addEventListener("click", () => {
      void this.model
        .replayStaged()
        .then(() => this.render())
        .catch((err) => this.note(String(err)));
    });
  }

  private readForm(): EventForm {
    const root = this.root;
    const args = must<HTMLInputElement>(root, "ev-args")
      .value.split(",")
      .map((s) => s.trim())
      .filter((s) => s !== "");
    return {
      t: Number(must<HTMLInputElement>(root, "ev-t").value),
      op: must<HTMLSelectElement>(root, "ev-op").value as EventForm["op"],
      predicate: must<HTMLInputElement>(root, "ev-pred").value.trim(),
      args,
    };
  }

  private async submitEventForm(): Promise<void> {
    const errBox = must(this.root, "event-error");
    errBox.textContent = "";
    try {
      const outcome = await this.model.submitEvent(this.readForm());
      if (outcome === "staged") {
        this.note("event staged (what-if)");
      } else if (!outcome.changed) {
        this.note("no change");
      } else {
        this.note(`applied at t=${outcome.clock}`);
      }
      this.render();
    } catch (err) {
      errBox.textContent =
        err instanceof ApiError ? `${err.kind}: ${err.detail}` : String(err);
    }
  }

  private async requestPlan(): Promise<void> {
    const goal = must<HTMLInputElement>(this.root, "goal-input").value.trim();
    if (!goal) return;
    try {
      const result = await this.model.requestPlan(goal);
      this.note(describeResult(result));
      this.render();
    } catch (err) {
      this.note(
        err instanceof ApiError ? `${err.kind}: ${err.detail}` : String(err),
      );
    }
  }

  private async step(): Promise<void> {
    try {
      const out = await this.model.executeStep();
      this.note(out.done ? "plan complete" : `executed ${out.action}`);
      this.render();
    } catch (err) {
      this.note(
        err instanceof ApiError ? `${err.kind}: ${err.detail}` : String(err),
      );
    }
  }

  private async compare(): Promise<void> {
    const goal = must<HTMLInputElement>(this.root, "goal-input").value.trim();
    if (!goal) return;
    try {
      await this.model.compare(goal);
      this.render();
    } catch (err) {
      this.note(
        err instanceof ApiError ? `${err.kind}: ${err.detail}` : String(err),
      );
    }
  }

  private note(text: string): void {
    must(this.root, "toast").textContent = text;
  }

  render(): void {
    const root = this.root;
    const { graph, state, plan } = this.model.view;

    if (graph) {
      renderGraph(must(root, "graph"), graph, planRoute(plan));
    }

    if (state) {
      must(root, "clock").textContent = `t=${state.clock}`;
      must(root, "facts-raw").textContent = state.facts.join("\n");
      must(root, "facts-derived").textContent = state.derived.join("\n");
      const t = must<HTMLInputElement>(root, "ev-t");
      if (t.value === "") t.value = String(state.clock + 1);
    }

    const status = must(root, "plan-status");
    const stepsBox = must(root, "plan-steps-box");
    stepsBox.replaceChildren();
    const dirtyBadge = must(root, "dirty-badge");
    if (plan && plan.status === "plan" && plan.steps) {
      status.textContent = plan.done ? "plan complete" : `goal: ${plan.goal}`;
      status.className = "";
      stepsBox.appendChild(stepRows(plan.steps, plan.cursor ?? 0));
      dirtyBadge.hidden = !plan.dirty;
    } else {
      const last = this.model.lastResult;
      status.textContent =
        last && last.status !== "plan" ? describeResult(last) : "no plan";
      status.className = last?.status === "unsolvable" ? "no-plan" : "";
      dirtyBadge.hidden = true;
    }
    must<HTMLButtonElement>(root, "btn-step").disabled =
      this.model.mode === "whatif" ||
      !plan ||
      plan.status !== "plan" ||
      plan.dirty === true ||
      plan.done === true;

    this.renderWhatIf();
  }

  private renderWhatIf(): void {
    const root = this.root;
    const whatif = this.model.mode === "whatif";
    must<HTMLButtonElement>(root, "mode-toggle").textContent = whatif
      ? "exit what-if"
      : "enter what-if";
    must(root, "whatif-panel").hidden = !whatif;
    this.root.body.classList.toggle("whatif-mode", whatif);

    const list = must(root, "staged-list");
    list.replaceChildren();
    for (const ev of this.model.staged) {
      const row = this.root.createElement("li");
      row.textContent = `t=${ev.t} ${ev.op} ${ev.fact}`;
      list.appendChild(row);
    }

    const cmp = this.model.comparison;
    must(root, "cmp-live").textContent = cmp
      ? describeResult(cmp.live)
      : "-";
    must(root, "cmp-hypo").textContent = cmp
      ? describeResult(cmp.hypothetical)
      : "-";
  }
}
