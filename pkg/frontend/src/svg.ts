/** Line-panel SVG builder with no DOM dependency, so renders are
 * deterministic byte for byte given the same data. */

export type LineStyle = "solid" | "dashed" | "dashdot";

export interface PlotSeries {
  x: number[];
  y: number[];
  style: LineStyle;
  label?: string;
}

export interface PlotPanel {
  series: PlotSeries[];
  xLabel?: string;
  yLabel?: string;
  xScale: "linear" | "log";
  yScale: "linear" | "log";
}

const PANEL_W = 420;
const PANEL_H = 280;
const MARGIN = { left: 64, right: 14, top: 16, bottom: 46 };
const DASH: Record<LineStyle, string> = {
  solid: "",
  dashed: "9 6",
  dashdot: "10 5 2 5",
};

const fmt = (v: number) => {
  const r = v.toFixed(2);
  return r === "-0.00" ? "0.00" : r;
};

function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1).replace("e+", "e");
  return String(parseFloat(v.toPrecision(6)));
}

interface Scale {
  (v: number): number;
  lo: number;
  hi: number;
  log: boolean;
}

function makeScale(values: number[], kind: "linear" | "log", extent: number): Scale {
  let pts = values.filter(Number.isFinite);
  if (kind === "log") pts = pts.filter((v) => v > 0);
  let lo = pts.length ? Math.min(...pts) : kind === "log" ? 1 : 0;
  let hi = pts.length ? Math.max(...pts) : kind === "log" ? 10 : 1;
  if (kind === "log") {
    lo = Math.log10(lo);
    hi = Math.log10(hi);
  }
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  } else {
    const pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  const scale = ((v: number) => {
    const t = kind === "log" ? Math.log10(v) : v;
    return ((t - lo) / (hi - lo)) * extent;
  }) as Scale;
  scale.lo = lo;
  scale.hi = hi;
  scale.log = kind === "log";
  return scale;
}

function ticks(scale: Scale, count = 5): number[] {
  const span = scale.hi - scale.lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(scale.lo / s) * s; v <= scale.hi + 1e-12 * s; v += s) {
    out.push(scale.log ? Math.pow(10, v) : Math.abs(v) < 1e-12 * s ? 0 : v);
  }
  return out;
}

function seriesPath(s: PlotSeries, sx: Scale, sy: Scale, h: number): string {
  const parts: string[] = [];
  let pen = false;
  for (let i = 0; i < s.x.length; i++) {
    const xv = s.x[i]!;
    const yv = s.y[i]!;
    const usable =
      Number.isFinite(xv) &&
      Number.isFinite(yv) &&
      (!sx.log || xv > 0) &&
      (!sy.log || yv > 0);
    if (!usable) {
      pen = false;
      continue;
    }
    const px = fmt(sx(xv));
    const py = fmt(h - sy(yv));
    parts.push(`${pen ? "L" : "M"}${px},${py}`);
    pen = true;
  }
  return parts.join(" ");
}

function renderPanel(panel: PlotPanel, ox: number, oy: number): string {
  const w = PANEL_W - MARGIN.left - MARGIN.right;
  const h = PANEL_H - MARGIN.top - MARGIN.bottom;
  const sx = makeScale(panel.series.flatMap((s) => s.x), panel.xScale, w);
  const sy = makeScale(panel.series.flatMap((s) => s.y), panel.yScale, h);

  const parts: string[] = [];
  parts.push(
    `<g transform="translate(${ox + MARGIN.left},${oy + MARGIN.top})">`,
    `<rect x="0" y="0" width="${w}" height="${h}" fill="none" stroke="black" stroke-width="1"/>`,
  );
  for (const t of ticks(sx)) {
    const px = fmt(sx(t));
    parts.push(
      `<line x1="${px}" y1="${h}" x2="${px}" y2="${h - 5}" stroke="black" stroke-width="1"/>`,
      `<text x="${px}" y="${h + 16}" font-size="11" text-anchor="middle">${tickLabel(t)}</text>`,
    );
  }
  for (const t of ticks(sy)) {
    const py = fmt(h - sy(t));
    parts.push(
      `<line x1="0" y1="${py}" x2="5" y2="${py}" stroke="black" stroke-width="1"/>`,
      `<text x="-7" y="${py}" font-size="11" text-anchor="end" dominant-baseline="middle">${tickLabel(t)}</text>`,
    );
  }
  if (panel.xLabel) {
    parts.push(
      `<text x="${fmt(w / 2)}" y="${h + 36}" font-size="13" text-anchor="middle">${panel.xLabel}</text>`,
    );
  }
  if (panel.yLabel) {
    parts.push(
      `<text x="${-MARGIN.left + 14}" y="${fmt(h / 2)}" font-size="13" text-anchor="middle" transform="rotate(-90 ${-MARGIN.left + 14} ${fmt(h / 2)})">${panel.yLabel}</text>`,
    );
  }
  for (const s of panel.series) {
    const d = seriesPath(s, sx, sy, h);
    const dash = DASH[s.style] ? ` stroke-dasharray="${DASH[s.style]}"` : "";
    parts.push(
      `<path d="${d}" fill="none" stroke="black" stroke-width="1.3"${dash}/>`,
    );
  }
  let ly = 14;
  for (const s of panel.series) {
    if (!s.label) continue;
    const dash = DASH[s.style] ? ` stroke-dasharray="${DASH[s.style]}"` : "";
    parts.push(
      `<line x1="${w - 150}" y1="${ly - 4}" x2="${w - 122}" y2="${ly - 4}" stroke="black" stroke-width="1.3"${dash}/>`,
      `<text x="${w - 116}" y="${ly}" font-size="11">${s.label}</text>`,
    );
    ly += 16;
  }
  parts.push("</g>");
  return parts.join("\n");
}

export function renderFigureSvg(
  panels: PlotPanel[],
  columns: number,
  title?: string,
): string {
  const cols = Math.min(columns, panels.length);
  const rows = Math.ceil(panels.length / cols);
  const titlePad = title ? 26 : 0;
  const width = cols * PANEL_W;
  const height = rows * PANEL_H + titlePad;
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  ];
  if (title) {
    parts.push(
      `<text x="${width / 2}" y="18" font-size="15" text-anchor="middle">${title}</text>`,
    );
  }
  panels.forEach((panel, i) => {
    const ox = (i % cols) * PANEL_W;
    const oy = Math.floor(i / cols) * PANEL_H + titlePad;
    parts.push(renderPanel(panel, ox, oy));
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
