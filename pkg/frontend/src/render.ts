/**
 * The four figure renderers. Each consumes already-parsed artifacts and
 * returns an SVG string; rendering never mutates the inputs and is a pure
 * function of file contents.
 */

import { basename, dirname } from "node:path";

import {
  DensityMatrixDoc,
  FidelityRow,
  LossRow,
} from "./csv.js";
import { boxStats } from "./stats.js";
import { SERIES_COLORS, SvgDoc, divergingColor, linearScale } from "./svg.js";

export interface NamedSeries<T> {
  /** label derived from the artifact path (cell directory name) */
  label: string;
  rows: T[];
}

export function seriesLabel(path: string): string {
  const dir = basename(dirname(path));
  return dir === "." || dir === "" ? basename(path) : dir;
}

const MARGIN = { left: 64, right: 16, top: 28, bottom: 48 };

export function renderLossCurves(series: NamedSeries<LossRow>[]): string {
  const width = 640;
  const height = 420;
  const doc = new SvgDoc(width, height);
  const epochs = series.flatMap((s) => s.rows.map((r) => r.epoch));
  const losses = series.flatMap((s) => s.rows.map((r) => r.meanLoss));
  const x = linearScale(
    [Math.min(...epochs), Math.max(...epochs)],
    [MARGIN.left, width - MARGIN.right]
  );
  const y = linearScale(
    [0, Math.max(0.05, ...losses)],
    [height - MARGIN.bottom, MARGIN.top]
  );
  doc.xAxis(x, height - MARGIN.bottom, "epoch");
  doc.yAxis(y, MARGIN.left, "mean cost");
  series.forEach((s, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    doc.polyline(
      s.rows.map((r) => [x(r.epoch), y(r.meanLoss)] as [number, number]),
      color
    );
    doc.text(width - MARGIN.right - 4, MARGIN.top + 14 * i, s.label, "end");
    doc.line(width - MARGIN.right - 120, MARGIN.top + 14 * i - 4, width - MARGIN.right - 104, MARGIN.top + 14 * i - 4, color, 2);
  });
  return doc.render();
}

export function renderFidelityBox(series: NamedSeries<FidelityRow>[]): string {
  const width = Math.max(360, 120 + series.length * 110);
  const height = 420;
  const doc = new SvgDoc(width, height);
  const values = series.flatMap((s) => s.rows.map((r) => r.fidelity));
  const lo = Math.min(...values);
  const y = linearScale(
    [Math.max(0, Math.min(lo - 0.05, 0.95)), 1.0],
    [height - MARGIN.bottom, MARGIN.top]
  );
  doc.yAxis(y, MARGIN.left, "fidelity");
  const boxWidth = 56;
  series.forEach((s, i) => {
    const cx = MARGIN.left + 60 + i * 110;
    const stats = boxStats(s.rows.map((r) => r.fidelity));
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    // whiskers to the last data point within 1.5 IQR of the quartiles
    doc.line(cx, y(stats.lo), cx, y(stats.q1));
    doc.line(cx, y(stats.q3), cx, y(stats.hi));
    doc.line(cx - boxWidth / 4, y(stats.lo), cx + boxWidth / 4, y(stats.lo));
    doc.line(cx - boxWidth / 4, y(stats.hi), cx + boxWidth / 4, y(stats.hi));
    doc.rect(cx - boxWidth / 2, y(stats.q3), boxWidth, y(stats.q1) - y(stats.q3), "none", ` stroke="${color}" stroke-width="1.5"`);
    // median bar
    doc.line(cx - boxWidth / 2, y(stats.median), cx + boxWidth / 2, y(stats.median), "#000", 2);
    // circled outliers beyond 1.5 IQR
    for (const v of stats.outliers) {
      doc.circle(cx, y(v), 3.5, `class="outlier" fill="none" stroke="${color}" stroke-width="1.2"`);
    }
    doc.text(cx, height - MARGIN.bottom + 30, s.label);
  });
  return doc.render();
}

export function renderDensityHeatmap(docIn: DensityMatrixDoc): string {
  const panels = docIn.matrices;
  const cellPx = 14;
  const maxDim = Math.max(...panels.map((p) => p.entries.length));
  const panelSize = maxDim * cellPx;
  const gap = 46;
  const width = MARGIN.left + panels.length * (panelSize + gap);
  const height = panelSize + 110;
  const doc = new SvgDoc(width, height);
  panels.forEach((panel, i) => {
    const dim = panel.entries.length;
    // Diverging scale centered at zero spanning +-1/dim: the discrete
    // extreme entries of an encoded image's density matrix.
    const span = 1 / dim;
    const px = (panelSize / dim);
    const x0 = MARGIN.left + i * (panelSize + gap);
    const y0 = 44;
    for (let r = 0; r < dim; r++) {
      for (let c = 0; c < dim; c++) {
        const re = panel.entries[r][c][0];
        doc.rect(x0 + c * px, y0 + r * px, px, px, divergingColor(re, span));
      }
    }
    doc.rect(x0, y0, panelSize, panelSize, "none", ' stroke="#333" stroke-width="1"');
    doc.text(x0 + panelSize / 2, y0 - 10, `${panel.label} (${dim}x${dim})`);
    doc.text(x0 + panelSize / 2, y0 + panelSize + 16, `scale ±${(span).toPrecision(3)}`, "middle", 10);
  });
  doc.text(MARGIN.left, 18, `image ${docIn.imageId}`, "start");
  return doc.render();
}

export function renderImageTiles(docs: DensityMatrixDoc[]): string {
  const cellPx = 26;
  const gap = 30;
  const cols = Math.min(docs.length, 6);
  const rows = Math.ceil(docs.length / cols);
  const tileW = Math.max(...docs.map((d) => d.width)) * cellPx;
  const tileH = Math.max(...docs.map((d) => d.height)) * cellPx;
  const width = 20 + cols * (tileW + gap);
  const height = 30 + rows * (tileH + gap + 16);
  const doc = new SvgDoc(width, height);
  docs.forEach((d, i) => {
    const x0 = 20 + (i % cols) * (tileW + gap);
    const y0 = 30 + Math.floor(i / cols) * (tileH + gap + 16);
    for (let r = 0; r < d.height; r++) {
      for (let c = 0; c < d.width; c++) {
        const bit = d.pixels[r * d.width + c];
        doc.rect(x0 + c * cellPx, y0 + r * cellPx, cellPx, cellPx, bit ? "#ffffff" : "#111111");
      }
    }
    doc.rect(x0, y0, d.width * cellPx, d.height * cellPx, "none", ' stroke="#333" stroke-width="1"');
    doc.text(x0 + (d.width * cellPx) / 2, y0 + d.height * cellPx + 14, `image ${d.imageId}`, "middle", 10);
  });
  return doc.render();
}
