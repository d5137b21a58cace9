import { CurveSeries, SweepCell } from "./discover.js";
import { probeStrength } from "./schema.js";
import { Scale, document, el, escapeText, fmt, linearScale } from "./svg.js";

const PANEL_W = 240;
const PANEL_H = 170;
const GAP_X = 20;
const GAP_Y = 30;
const MARGIN = { left: 76, top: 72, right: 18, bottom: 48 };

const PROBE_COLOR: Record<string, string> = {
  coherent: "#c0392b",
  fock: "#2b5fa5",
};
const ORDERING_DASH: Record<string, string> = {
  random: "",
  naive: "7 3",
  smart: "2 2",
};

function polyline(
  xs: number[],
  ys: number[],
  sx: Scale,
  sy: Scale,
  attrs: Record<string, string | number>,
): string {
  const pts = xs.map((x, i) => `${fmt(sx.map(x))},${fmt(sy.map(clampY(ys[i] as number)))}`);
  return el("polyline", { points: pts.join(" "), fill: "none", ...attrs });
}

// y domain is fixed at [0, 2]; numerical noise may poke a hair beyond it
function clampY(y: number): number {
  return Math.min(2, Math.max(0, y));
}

function seriesMarks(curve: CurveSeries, sx: Scale, sy: Scale): string[] {
  const color = PROBE_COLOR[curve.sidecar.probe.kind] ?? "#444";
  const dash = ORDERING_DASH[curve.sidecar.ordering] ?? "";
  const marks: string[] = [];
  const ss = curve.sidecar.s_sys_bits;

  if (curve.miStd.every((v) => v !== null)) {
    // random-average band: one std around the mean, in I/S(S) units
    const upper = curve.miBits.map((m, i) => (m + (curve.miStd[i] as number)) / ss);
    const lower = curve.miBits.map((m, i) => (m - (curve.miStd[i] as number)) / ss);
    const fwd = curve.f.map((x, i) => `${fmt(sx.map(x))},${fmt(sy.map(clampY(upper[i] as number)))}`);
    const bwd = [...curve.f.keys()]
      .reverse()
      .map((i) => `${fmt(sx.map(curve.f[i] as number))},${fmt(sy.map(clampY(lower[i] as number)))}`);
    marks.push(
      el("polygon", {
        class: "band",
        points: [...fwd, ...bwd].join(" "),
        fill: color,
        "fill-opacity": 0.15,
        stroke: "none",
      }),
    );
  }

  marks.push(
    polyline(curve.f, curve.miOverSs, sx, sy, {
      class: "series",
      stroke: color,
      "stroke-width": 1.5,
      ...(dash ? { "stroke-dasharray": dash } : {}),
    }),
  );

  if (curve.chiBits.some((v) => v !== null)) {
    const xs: number[] = [];
    const ys: number[] = [];
    curve.chiBits.forEach((chi, i) => {
      if (chi !== null) {
        xs.push(curve.f[i] as number);
        ys.push(chi / ss);
      }
    });
    marks.push(
      polyline(xs, ys, sx, sy, {
        class: "chi",
        stroke: color,
        "stroke-width": 0.9,
        "stroke-opacity": 0.55,
        "stroke-dasharray": "1 3",
      }),
    );
  }
  return marks;
}

function panel(
  curves: CurveSeries[],
  x0: number,
  y0: number,
  firstCol: boolean,
  lastRow: boolean,
): string {
  const sx = linearScale([0, 1], [x0, x0 + PANEL_W]);
  const sy = linearScale([0, 2], [y0 + PANEL_H, y0]);
  const marks: string[] = [
    el("rect", {
      x: x0,
      y: y0,
      width: PANEL_W,
      height: PANEL_H,
      fill: "none",
      stroke: "#333",
      "stroke-width": 1,
    }),
    el("line", {
      class: "guide",
      x1: x0,
      x2: x0 + PANEL_W,
      y1: sy.map(1),
      y2: sy.map(1),
      stroke: "#999",
      "stroke-dasharray": "4 4",
      "stroke-width": 0.8,
    }),
  ];
  for (const t of sx.ticks) {
    marks.push(
      el("line", { x1: sx.map(t), x2: sx.map(t), y1: y0 + PANEL_H, y2: y0 + PANEL_H + 4, stroke: "#333" }),
    );
    if (lastRow) {
      marks.push(
        el(
          "text",
          { x: sx.map(t), y: y0 + PANEL_H + 16, "text-anchor": "middle", "font-size": 10 },
          fmt(t),
        ),
      );
    }
  }
  for (const t of sy.ticks) {
    marks.push(el("line", { x1: x0 - 4, x2: x0, y1: sy.map(t), y2: sy.map(t), stroke: "#333" }));
    if (firstCol) {
      marks.push(
        el(
          "text",
          { x: x0 - 7, y: sy.map(t) + 3, "text-anchor": "end", "font-size": 10 },
          fmt(t),
        ),
      );
    }
  }
  for (const curve of curves) {
    marks.push(...seriesMarks(curve, sx, sy));
  }
  return el("g", { class: "panel" }, marks);
}

function legend(x: number, y: number): string {
  const items: string[] = [];
  let dx = 0;
  for (const [kind, color] of Object.entries(PROBE_COLOR)) {
    items.push(el("line", { x1: x + dx, x2: x + dx + 22, y1: y, y2: y, stroke: color, "stroke-width": 2 }));
    items.push(el("text", { x: x + dx + 27, y: y + 4, "font-size": 11 }, escapeText(kind)));
    dx += 100;
  }
  for (const [ordering, dash] of Object.entries(ORDERING_DASH)) {
    items.push(
      el("line", {
        x1: x + dx,
        x2: x + dx + 22,
        y1: y,
        y2: y,
        stroke: "#333",
        "stroke-width": 1.5,
        ...(dash ? { "stroke-dasharray": dash } : {}),
      }),
    );
    items.push(el("text", { x: x + dx + 27, y: y + 4, "font-size": 11 }, ordering));
    dx += 92;
  }
  return el("g", { class: "legend" }, items);
}

/**
 * One panel per (sweep cell, probe strength); rows ordered by sigma*T, columns
 * by strength.  Every curve file of a matching probe is drawn into its panel,
 * colored by probe kind and dashed by ordering, y fixed to I/S(S) in [0, 2]
 * with a guide at the classical plateau level 1.
 */
export function renderCurveGrid(cells: SweepCell[]): string {
  if (cells.length === 0) throw new Error("no sweep cells to draw");
  const strengths = [...new Set(cells.flatMap((c) => c.curves.map((s) => probeStrength(s.sidecar.probe))))].sort(
    (a, b) => a - b,
  );
  if (strengths.length === 0) throw new Error("no curve outputs in any cell");

  const width = MARGIN.left + strengths.length * (PANEL_W + GAP_X) - GAP_X + MARGIN.right;
  const height = MARGIN.top + cells.length * (PANEL_H + GAP_Y) - GAP_Y + MARGIN.bottom;
  const body: string[] = [legend(MARGIN.left, 20)];

  cells.forEach((cell, row) => {
    const y0 = MARGIN.top + row * (PANEL_H + GAP_Y);
    body.push(
      el(
        "text",
        {
          x: 14,
          y: y0 + PANEL_H / 2,
          "font-size": 11,
          transform: `rotate(-90 14 ${fmt(y0 + PANEL_H / 2)})`,
          "text-anchor": "middle",
        },
        `sigma T = ${fmt(cell.sigmaT)}`,
      ),
    );
    strengths.forEach((strength, col) => {
      const x0 = MARGIN.left + col * (PANEL_W + GAP_X);
      if (row === 0) {
        body.push(
          el(
            "text",
            { x: x0 + PANEL_W / 2, y: MARGIN.top - 10, "text-anchor": "middle", "font-size": 12 },
            `n = ${fmt(strength)}`,
          ),
        );
      }
      const curves = cell.curves.filter((s) => probeStrength(s.sidecar.probe) === strength);
      body.push(panel(curves, x0, y0, col === 0, row === cells.length - 1));
    });
  });

  body.push(
    el(
      "text",
      { x: MARGIN.left + (width - MARGIN.left - MARGIN.right) / 2, y: height - 10, "text-anchor": "middle", "font-size": 12 },
      "fragment size fraction f",
    ),
    el(
      "text",
      {
        x: 38,
        y: MARGIN.top + (height - MARGIN.top - MARGIN.bottom) / 2,
        "text-anchor": "middle",
        "font-size": 12,
        transform: `rotate(-90 38 ${fmt(MARGIN.top + (height - MARGIN.top - MARGIN.bottom) / 2)})`,
      },
      "I(S,F) / S(S)",
    ),
  );
  return document(width, height, body);
}
