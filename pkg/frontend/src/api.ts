// Typed fetch client for the /api/v1 service plus the fact-string
// serializer the event form relies on.

import type {
  EventOutcome,
  GraphDto,
  PlannerConfigDto,
  PlanResultDto,
  PlanViewDto,
  StateDto,
  StepOutcome,
  WireEvent,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly kind: string,
    readonly detail: string,
  ) {
    super(`${kind}: ${detail}`);
    this.name = "ApiError";
  }
}

const BARE = /^[a-z][A-Za-z0-9_]*$/;
const INT = /^-?[0-9]+$/;

/** Quote a constant the way the service prints them back. */
export function formatConst(name: string): string {
  if (INT.test(name)) return name;
  if (BARE.test(name) && name !== "not") return name;
  return `'${name.replace(/'/g, "''")}'`;
}

export function factText(predicate: string, args: string[]): string {
  if (args.length === 0) return predicate;
  return `${predicate}(${args.map(formatConst).join(",")})`;
}

async function decode(res: Response): Promise<unknown> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    const fault = body as { kind?: string; detail?: string };
    throw new ApiError(res.status, fault.kind ?? "unknown", fault.detail ?? "");
  }
  return body;
}

export interface ServiceApi {
  graph(): Promise<GraphDto>;
  state(): Promise<StateDto>;
  planView(): Promise<PlanViewDto>;
  postEvent(ev: WireEvent): Promise<EventOutcome>;
  requestPlan(goal: string, config?: PlannerConfigDto): Promise<PlanResultDto>;
  whatIf(events: WireEvent[], goal: string): Promise<PlanResultDto>;
  executeStep(): Promise<StepOutcome>;
}

export class Client implements ServiceApi {
  constructor(readonly base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const res = await fetch(`${this.base}/api/v1${path}`);
    return (await decode(res)) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await fetch(`${this.base}/api/v1${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body ?? {}),
    });
    return (await decode(res)) as T;
  }

  graph(): Promise<GraphDto> {
    return this.get("/graph");
  }

  state(): Promise<StateDto> {
    return this.get("/state");
  }

  planView(): Promise<PlanViewDto> {
    return this.get("/plan");
  }

  postEvent(ev: WireEvent): Promise<EventOutcome> {
    return this.post("/events", ev);
  }

  requestPlan(goal: string, config?: PlannerConfigDto): Promise<PlanResultDto> {
    return this.post("/plan", config ? { goal, config } : { goal });
  }

  whatIf(events: WireEvent[], goal: string): Promise<PlanResultDto> {
    return this.post("/whatif", { events, goal });
  }

  executeStep(): Promise<StepOutcome> {
    return this.post("/execute-step", {});
  }
}
