// SVG scene for the site graph: nodes at their map coordinates, edges
// with hazard badges, the active route highlighted. No layout engine,
// the picture is the operator's map.

import type { EdgeDto, GraphDto, PlanViewDto } from "./types.js";

const SVG = "http://www.w3.org/2000/svg";
const WIDTH = 800;
const HEIGHT = 520;
const PAD = 70;

const BADGE_LETTER: Record<string, string> = {
  fire: "F",
  police_block: "P",
  fireman_operation: "W",
};

export interface RouteEdge {
  a: string;
  b: string;
}

/** Split "move_x(crane_1,'Horr Sq.','Saadi Sq.')" into name + args. */
export function parseAction(action: string): { name: string; args: string[] } {
  const open = action.indexOf("(");
  if (open < 0) return { name: action, args: [] };
  const name = action.slice(0, open);
  const inner = action.slice(open + 1, action.lastIndexOf(")"));
  const args: string[] = [];
  let current = "";
  let quoted = false;
  for (let i = 0; i < inner.length; i++) {
    const ch = inner[i];
    if (quoted) {
      if (ch === "'" && inner[i + 1] === "'") {
        current += "'";
        i++;
      } else if (ch === "'") {
        quoted = false;
      } else {
        current += ch;
      }
    } else if (ch === "'") {
      quoted = true;
    } else if (ch === ",") {
      args.push(current);
      current = "";
    } else {
      current += ch;
    }
  }
  if (current !== "" || args.length > 0) args.push(current);
  return { name, args };
}

/** Edges the remaining plan will traverse (last two args are from/to). */
export function planRoute(plan: PlanViewDto | null): RouteEdge[] {
  if (!plan || plan.status !== "plan" || !plan.steps) return [];
  const cursor = plan.cursor ?? 0;
  const route: RouteEdge[] = [];
  for (const step of plan.steps.slice(cursor)) {
    const { args } = parseAction(step.action);
    if (args.length >= 2) {
      route.push({ a: args[args.length - 2], b: args[args.length - 1] });
    }
  }
  return route;
}

function edgeKey(a: string, b: string): string {
  return a < b ? `${a}|${b}` : `${b}|${a}`;
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function scaler(dto: GraphDto): (x: number, y: number) => [number, number] {
  const xs = dto.nodes.map((n) => n.x);
  const ys = dto.nodes.map((n) => n.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  return (x, y) => [
    PAD + ((x - minX) / spanX) * (WIDTH - 2 * PAD),
    // map north up, screen y grows down
    HEIGHT - PAD - ((y - minY) / spanY) * (HEIGHT - 2 * PAD),
  ];
}

export function renderGraph(
  container: HTMLElement,
  dto: GraphDto,
  route: RouteEdge[] = [],
): void {
  container.replaceChildren();
  const svg = el("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "site-graph",
  });
  container.appendChild(svg);
  if (dto.nodes.length === 0) return;

  const place = scaler(dto);
  const at = new Map<string, [number, number]>();
  for (const node of dto.nodes) at.set(node.name, place(node.x, node.y));
  const routeKeys = new Set(route.map((r) => edgeKey(r.a, r.b)));

  for (const edge of dto.edges) {
    const pa = at.get(edge.a);
    const pb = at.get(edge.b);
    if (!pa || !pb) continue;
    svg.appendChild(edgeGroup(edge, pa, pb, routeKeys));
  }

  const parked = new Map<string, string[]>();
  for (const res of dto.resources) {
    const here = parked.get(res.location) ?? [];
    here.push(res.id);
    parked.set(res.location, here);
  }

  for (const node of dto.nodes) {
    const [x, y] = at.get(node.name)!;
    const group = el("g", { class: node.safe ? "node" : "node unsafe" });
    group.dataset.node = node.name;
    group.appendChild(el("circle", { cx: x, cy: y, r: 14 }));
    const label = el("text", { x, y: y + 32, class: "node-label" });
    label.textContent = node.name;
    group.appendChild(label);
    const ids = parked.get(node.name);
    if (ids) {
      const chips = el("text", { x, y: y - 24, class: "resource-chips" });
      chips.textContent = ids.join("  ");
      group.appendChild(chips);
    }
    svg.appendChild(group);
  }
}

function edgeGroup(
  edge: EdgeDto,
  [x1, y1]: [number, number],
  [x2, y2]: [number, number],
  routeKeys: Set<string>,
): SVGGElement {
  const onRoute = routeKeys.has(edgeKey(edge.a, edge.b));
  const classes = ["edge"];
  if (onRoute) classes.push("route");
  if (edge.overlays.includes("fire")) classes.push("burning");
  const group = el("g", { class: classes.join(" ") });
  group.dataset.edge = edgeKey(edge.a, edge.b);
  group.appendChild(el("line", { x1, y1, x2, y2 }));

  const mx = (x1 + x2) / 2;
  const my = (y1 + y2) / 2;
  // perpendicular offset fans multiple badges out along the edge normal
  const len = Math.max(Math.hypot(x2 - x1, y2 - y1), 1e-9);
  const nx = -(y2 - y1) / len;
  const ny = (x2 - x1) / len;
  edge.overlays.forEach((overlay, i) => {
    const off = 16 * (i - (edge.overlays.length - 1) / 2);
    const bx = mx + nx * off;
    const by = my + ny * off;
    const badge = el("g", { class: `badge badge-${overlay}` });
    badge.appendChild(el("circle", { cx: bx, cy: by, r: 9 }));
    const letter = el("text", { x: bx, y: by + 3.5, class: "badge-letter" });
    letter.textContent = BADGE_LETTER[overlay] ?? "?";
    badge.appendChild(letter);
    group.appendChild(badge);
  });
  return group;
}
