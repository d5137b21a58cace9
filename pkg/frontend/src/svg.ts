export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  const s = x.toPrecision(6);
  return s.includes(".") ? s.replace(/\.?0+$/, "").replace(/\.?0+e/, "e") : s;
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string | string[] = "",
): string {
  const body = Array.isArray(children) ? children.join("") : children;
  const attrText = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join("");
  return body === "" && tag !== "text"
    ? `<${tag}${attrText}/>`
    : `<${tag}${attrText}>${body}</${tag}>`;
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Scale {
  map(x: number): number;
  ticks: number[];
}

/** Linear scale with ticks at a 1/2/5 step chosen for roughly `count` ticks. */
export function linearScale(
  domain: [number, number],
  range: [number, number],
  count = 5,
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  if (span <= 0) throw new Error(`degenerate scale domain [${d0}, ${d1}]`);
  const raw = span / count;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? 10 * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(d0 / step) * step; v <= d1 + 1e-9 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return {
    map: (x) => r0 + ((x - d0) / span) * (r1 - r0),
    ticks,
  };
}

const STOPS: [number, number, number][] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

/** Dark-violet to yellow ramp, t in [0, 1]. */
export function colormap(t: number): string {
  const u = Math.min(1, Math.max(0, t)) * (STOPS.length - 1);
  const i = Math.min(STOPS.length - 2, Math.floor(u));
  const w = u - i;
  const lo = STOPS[i] as [number, number, number];
  const hi = STOPS[i + 1] as [number, number, number];
  const c = lo.map((v, j) => Math.round(v + w * ((hi[j] as number) - v)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

export function document(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" font-family="sans-serif">`,
    el("rect", { x: 0, y: 0, width, height, fill: "white" }),
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
