// Client-side state. The one hard rule: what-if mode never issues
// /events or /execute-step calls; staged events live here until the
// operator discards them or replays them as real events.

import { factText, type ServiceApi } from "./api.js";
import type {
  EventForm,
  EventOutcome,
  GraphDto,
  PlanResultDto,
  PlanViewDto,
  StateDto,
  StepOutcome,
  WireEvent,
} from "./types.js";

export type Mode = "live" | "whatif";

export interface LiveView {
  graph: GraphDto | null;
  state: StateDto | null;
  plan: PlanViewDto | null;
}

export interface Comparison {
  goal: string;
  live: PlanResultDto;
  hypothetical: PlanResultDto;
}

export class Console {
  mode: Mode = "live";
  staged: WireEvent[] = [];
  view: LiveView = { graph: null, state: null, plan: null };
  lastResult: PlanResultDto | null = null;
  comparison: Comparison | null = null;

  constructor(private readonly api: ServiceApi) {}

  /** One poll: pull all three read views. Safe in either mode. */
  async refresh(): Promise<LiveView> {
    const [graph, state, plan] = await Promise.all([
      this.api.graph(),
      this.api.state(),
      this.api.planView(),
    ]);
    this.view = { graph, state, plan };
    return this.view;
  }

  /** Live mode posts the report; what-if mode only stages it. */
  async submitEvent(form: EventForm): Promise<EventOutcome | "staged"> {
    const event: WireEvent = {
      t: form.t,
      op: form.op,
      fact: factText(form.predicate, form.args),
    };
    if (this.mode === "whatif") {
      this.staged.push(event);
      return "staged";
    }
    const outcome = await this.api.postEvent(event);
    await this.refresh();
    return outcome;
  }

  async requestPlan(goal: string): Promise<PlanResultDto> {
    if (this.mode === "whatif") {
      throw new Error("exit what-if mode before installing a plan");
    }
    const result = await this.api.requestPlan(goal);
    this.lastResult = result;
    await this.refresh();
    return result;
  }

  async executeStep(): Promise<StepOutcome> {
    if (this.mode === "whatif") {
      throw new Error("stepping is disabled in what-if mode");
    }
    const outcome = await this.api.executeStep();
    await this.refresh();
    return outcome;
  }

  enterWhatIf(): void {
    this.mode = "whatif";
  }

  /** Leaving what-if drops all client-side hypotheticals. */
  exitWhatIf(): void {
    this.mode = "live";
    this.staged = [];
    this.comparison = null;
  }

  discardStaged(): void {
    this.staged = [];
    this.comparison = null;
  }

  /** Same goal against live facts and against live + staged events. */
  async compare(goal: string): Promise<Comparison> {
    const [live, hypothetical] = await Promise.all([
      this.api.whatIf([], goal),
      this.api.whatIf(this.staged, goal),
    ]);
    this.comparison = { goal, live, hypothetical };
    return this.comparison;
  }

  /** Promote staged events to real reports, in staging order. */
  async replayStaged(): Promise<EventOutcome[]> {
    const queue = this.staged;
    this.exitWhatIf();
    const outcomes: EventOutcome[] = [];
    for (const event of queue) {
      outcomes.push(await this.api.postEvent(event));
    }
    await this.refresh();
    return outcomes;
  }
}
