import { MapSeries, SweepCell } from "./discover.js";
import { probeLabel } from "./schema.js";
import { colormap, document, el, escapeText, fmt, linearScale } from "./svg.js";

const PANEL_W = 260;
const PANEL_H = 200;
const GAP_X = 26;
const GAP_Y = 40;
const MARGIN = { left: 74, top: 40, right: 96, bottom: 52 };

function panel(map: MapSeries, x0: number, y0: number, miMax: number): string {
  const period = map.sidecar.grid.period;
  const band = (2 * Math.PI) / period;
  const tLo = Math.min(...map.tCenter) - period / 2;
  const tHi = Math.max(...map.tCenter) + period / 2;
  const wLo = Math.min(...map.omegaCenter) - band / 2;
  const wHi = Math.max(...map.omegaCenter) + band / 2;
  const sx = linearScale([tLo, tHi], [x0, x0 + PANEL_W]);
  const sy = linearScale([wLo, wHi], [y0 + PANEL_H, y0]);

  const marks: string[] = [];
  map.miBits.forEach((mi, i) => {
    const t = map.tCenter[i] as number;
    const w = map.omegaCenter[i] as number;
    marks.push(
      el("rect", {
        class: "cell",
        x: sx.map(t - period / 2),
        y: sy.map(w + band / 2),
        width: sx.map(t + period / 2) - sx.map(t - period / 2),
        height: sy.map(w - band / 2) - sy.map(w + band / 2),
        fill: colormap(miMax > 0 ? mi / miMax : 0),
      }),
    );
  });
  marks.push(
    el("rect", {
      x: x0,
      y: y0,
      width: PANEL_W,
      height: PANEL_H,
      fill: "none",
      stroke: "#333",
      "stroke-width": 1,
    }),
  );
  for (const t of sx.ticks) {
    marks.push(el("line", { x1: sx.map(t), x2: sx.map(t), y1: y0 + PANEL_H, y2: y0 + PANEL_H + 4, stroke: "#333" }));
    marks.push(
      el("text", { x: sx.map(t), y: y0 + PANEL_H + 16, "text-anchor": "middle", "font-size": 10 }, fmt(t)),
    );
  }
  for (const t of sy.ticks) {
    marks.push(el("line", { x1: x0 - 4, x2: x0, y1: sy.map(t), y2: sy.map(t), stroke: "#333" }));
    marks.push(el("text", { x: x0 - 7, y: sy.map(t) + 3, "text-anchor": "end", "font-size": 10 }, fmt(t)));
  }
  marks.push(
    el(
      "text",
      { x: x0 + PANEL_W / 2, y: y0 - 8, "text-anchor": "middle", "font-size": 12 },
      escapeText(`${probeLabel(map.sidecar.probe)}, sigma T = ${fmt(map.sidecar.signal.sigma * period)}`),
    ),
  );
  return el("g", { class: "panel" }, marks);
}

function colorbar(x0: number, y0: number, h: number, miMax: number): string {
  const steps = 48;
  const marks: string[] = [];
  for (let i = 0; i < steps; i++) {
    marks.push(
      el("rect", {
        x: x0,
        y: y0 + h - ((i + 1) * h) / steps,
        width: 14,
        height: h / steps + 0.5,
        fill: colormap(i / (steps - 1)),
      }),
    );
  }
  marks.push(el("rect", { x: x0, y: y0, width: 14, height: h, fill: "none", stroke: "#333" }));
  const scale = linearScale([0, miMax], [y0 + h, y0], 4);
  for (const t of scale.ticks) {
    marks.push(el("line", { x1: x0 + 14, x2: x0 + 18, y1: scale.map(t), y2: scale.map(t), stroke: "#333" }));
    marks.push(el("text", { x: x0 + 21, y: scale.map(t) + 3, "font-size": 10 }, fmt(t)));
  }
  marks.push(
    el(
      "text",
      {
        x: x0 + 52,
        y: y0 + h / 2,
        "font-size": 11,
        "text-anchor": "middle",
        transform: `rotate(-90 ${fmt(x0 + 52)} ${fmt(y0 + h / 2)})`,
      },
      "per-atom MI (bits)",
    ),
  );
  return el("g", { class: "colorbar" }, marks);
}

/**
 * Heat map of per-atom mutual information over the time-frequency plane, one
 * panel per (cell, probe) map file, all panels on one shared color scale.
 */
export function renderTfMap(cells: SweepCell[]): string {
  const maps = cells.flatMap((c) => c.maps);
  if (maps.length === 0) throw new Error("no map outputs in any cell (configure [maps])");
  const miMax = Math.max(...maps.map((m) => Math.max(...m.miBits)));

  const cols = Math.min(2, maps.length);
  const nRows = Math.ceil(maps.length / cols);
  const width = MARGIN.left + cols * (PANEL_W + GAP_X) - GAP_X + MARGIN.right;
  const height = MARGIN.top + nRows * (PANEL_H + GAP_Y) - GAP_Y + MARGIN.bottom;

  const body: string[] = [];
  maps.forEach((map, i) => {
    const x0 = MARGIN.left + (i % cols) * (PANEL_W + GAP_X);
    const y0 = MARGIN.top + Math.floor(i / cols) * (PANEL_H + GAP_Y);
    body.push(panel(map, x0, y0, miMax));
  });
  body.push(colorbar(width - MARGIN.right + 16, MARGIN.top, PANEL_H, miMax));
  body.push(
    el(
      "text",
      { x: MARGIN.left + (cols * (PANEL_W + GAP_X) - GAP_X) / 2, y: height - 12, "text-anchor": "middle", "font-size": 12 },
      "time t",
    ),
    el(
      "text",
      {
        x: 20,
        y: MARGIN.top + (height - MARGIN.top - MARGIN.bottom) / 2,
        "text-anchor": "middle",
        "font-size": 12,
        transform: `rotate(-90 20 ${fmt(MARGIN.top + (height - MARGIN.top - MARGIN.bottom) / 2)})`,
      },
      "frequency omega",
    ),
  );
  return document(width, height, body);
}
