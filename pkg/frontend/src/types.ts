// Wire shapes of the /api/v1 service. Field names match the JSON exactly.

export interface NodeDto {
  name: string;
  x: number;
  y: number;
  safe: boolean;
}

export interface EdgeDto {
  a: string;
  b: string;
  overlays: string[];
}

export interface ResourceDto {
  id: string;
  kind: string;
  subtype: string;
  location: string;
}

export interface GraphDto {
  nodes: NodeDto[];
  edges: EdgeDto[];
  resources: ResourceDto[];
}

export interface StateDto {
  facts: string[];
  derived: string[];
  clock: number;
}

export interface PlanStepDto {
  n: number;
  action: string;
  del: string[];
  add: string[];
}

// GET /plan: status "none" carries nothing else
export interface PlanViewDto {
  status: "none" | "plan";
  goal?: string;
  steps?: PlanStepDto[];
  cursor?: number;
  done?: boolean;
  dirty?: boolean;
}

export interface SearchStatsDto {
  expanded: number;
  generated: number;
  duplicates_pruned: number;
  max_frontier: number;
  elapsed_ms: number;
}

// POST /plan and /whatif; unsolvable and exhausted are answers, not errors
export interface PlanResultDto {
  status: "plan" | "unsolvable" | "exhausted";
  stats: SearchStatsDto;
  steps?: PlanStepDto[];
  proven_minimal?: boolean;
}

export interface WireEvent {
  t: number;
  op: "assert" | "retract";
  fact: string;
}

export interface EventOutcome {
  changed: boolean;
  clock: number;
  plan_dirty: boolean;
}

export interface StepOutcome {
  action: string;
  cursor: number;
  done: boolean;
  clock: number;
}

export interface PlannerConfigDto {
  max_depth?: number;
  max_expansions?: number;
  time_budget_ms?: number;
}

// operator's event form before it is serialized to a fact string
export interface EventForm {
  t: number;
  op: "assert" | "retract";
  predicate: string;
  args: string[];
}
