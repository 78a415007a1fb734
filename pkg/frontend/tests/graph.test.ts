// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { parseAction, planRoute, renderGraph } from "../src/graph.js";
import type { GraphDto, PlanViewDto } from "../src/types.js";

const TEHRAN: GraphDto = {
  nodes: [
    { name: "Hassanabad Sq.", x: 890, y: 710, safe: true },
    { name: "Horr Sq.", x: 120, y: 740, safe: true },
    { name: "Imam Khomeini RIP Sq.", x: 1460, y: 700, safe: false },
    { name: "Saadi Sq.", x: 2080, y: 980, safe: true },
  ],
  edges: [
    { a: "Hassanabad Sq.", b: "Horr Sq.", overlays: [] },
    { a: "Hassanabad Sq.", b: "Imam Khomeini RIP Sq.", overlays: ["fire"] },
    { a: "Hassanabad Sq.", b: "Saadi Sq.", overlays: ["police_block"] },
    {
      a: "Imam Khomeini RIP Sq.",
      b: "Saadi Sq.",
      overlays: ["fire", "fireman_operation"],
    },
  ],
  resources: [
    { id: "crane_1", kind: "crane", subtype: "tower", location: "Horr Sq." },
    { id: "truck_1", kind: "truck", subtype: "water", location: "Horr Sq." },
  ],
};

describe("action text", () => {
  it("splits name and arguments, undoing quote escapes", () => {
    expect(parseAction("move_crane(crane_1,'Horr Sq.','Hassanabad Sq.')")).toEqual({
      name: "move_crane",
      args: ["crane_1", "Horr Sq.", "Hassanabad Sq."],
    });
    expect(parseAction("refuel('o''hare depot')")).toEqual({
      name: "refuel",
      args: ["o'hare depot"],
    });
    expect(parseAction("halt")).toEqual({ name: "halt", args: [] });
  });
});

describe("plan route extraction", () => {
  const plan: PlanViewDto = {
    status: "plan",
    goal: "at(crane_1,'Saadi Sq.')",
    steps: [
      { n: 1, action: "move_crane(crane_1,'Horr Sq.','Hassanabad Sq.')", del: [], add: [] },
      { n: 2, action: "move_crane(crane_1,'Hassanabad Sq.','Saadi Sq.')", del: [], add: [] },
    ],
    cursor: 0,
    done: false,
    dirty: false,
  };

  it("takes the last two arguments of each remaining step", () => {
    expect(planRoute(plan)).toEqual([
      { a: "Horr Sq.", b: "Hassanabad Sq." },
      { a: "Hassanabad Sq.", b: "Saadi Sq." },
    ]);
  });

  it("skips steps already executed", () => {
    expect(planRoute({ ...plan, cursor: 1 })).toEqual([
      { a: "Hassanabad Sq.", b: "Saadi Sq." },
    ]);
  });

  it("is empty without an installed plan", () => {
    expect(planRoute({ status: "none" })).toEqual([]);
    expect(planRoute(null)).toEqual([]);
  });
});

describe("svg rendering", () => {
  function render(dto: GraphDto, route: { a: string; b: string }[] = []) {
    const host = document.createElement("div");
    renderGraph(host, dto, route);
    return host;
  }

  it("draws one group per node with its label", () => {
    const host = render(TEHRAN);
    const nodes = host.querySelectorAll("[data-node]");
    expect(nodes).toHaveLength(4);
    const labels = [...host.querySelectorAll(".node-label")].map((el) => el.textContent);
    expect(labels).toContain("Imam Khomeini RIP Sq.");
  });

  it("marks unsafe squares", () => {
    const host = render(TEHRAN);
    const ik = host.querySelector('[data-node="Imam Khomeini RIP Sq."]');
    expect(ik?.getAttribute("class")).toContain("unsafe");
    const horr = host.querySelector('[data-node="Horr Sq."]');
    expect(horr?.getAttribute("class")).not.toContain("unsafe");
  });

  it("shows overlay badges on the right edges", () => {
    const host = render(TEHRAN);
    const blocked = host.querySelector('[data-edge="Hassanabad Sq.|Saadi Sq."]');
    expect(blocked?.querySelector(".badge-police_block")).not.toBeNull();
    expect(blocked?.querySelector(".badge-fire")).toBeNull();
    const burning = host.querySelector(
      '[data-edge="Imam Khomeini RIP Sq.|Saadi Sq."]',
    );
    expect(burning?.querySelector(".badge-fire")).not.toBeNull();
    expect(burning?.querySelector(".badge-fireman_operation")).not.toBeNull();
  });

  it("lists resources beside their squares", () => {
    const host = render(TEHRAN);
    const chips = host.querySelector('[data-node="Horr Sq."] .resource-chips');
    expect(chips?.textContent).toContain("crane_1");
    expect(chips?.textContent).toContain("truck_1");
  });

  it("highlights the planned route", () => {
    const host = render(TEHRAN, [{ a: "Horr Sq.", b: "Hassanabad Sq." }]);
    const onRoute = host.querySelector('[data-edge="Hassanabad Sq.|Horr Sq."]');
    expect(onRoute?.getAttribute("class")).toContain("route");
    const off = host.querySelector('[data-edge="Hassanabad Sq.|Saadi Sq."]');
    expect(off?.getAttribute("class")).not.toContain("route");
  });

  it("renders an empty graph without complaint", () => {
    const host = render({ nodes: [], edges: [], resources: [] });
    expect(host.querySelector("svg")).not.toBeNull();
    expect(host.querySelectorAll("[data-node]")).toHaveLength(0);
  });

  it("replaces previous content on re-render", () => {
    const host = document.createElement("div");
    renderGraph(host, TEHRAN, []);
    renderGraph(host, TEHRAN, []);
    expect(host.querySelectorAll("svg")).toHaveLength(1);
  });
});
