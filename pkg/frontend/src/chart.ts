// Trajectory chart: log-likelihood per step against the two decision
// boundaries and the sample ceiling. Geometry is pure so tests can check
// pixel positions without a real canvas.

import type { SessionViewModel, TrajectoryPoint } from "./model.js";

export interface ChartGeometry {
  width: number;
  height: number;
  acceptY: number;
  rejectY: number;
  ceilingX: number;
  zeroY: number;
  points: { x: number; y: number }[];
  yMin: number;
  yMax: number;
}

const MARGIN = { left: 46, right: 12, top: 12, bottom: 24 };

export function chartGeometry(
  vm: SessionViewModel,
  width: number,
  height: number,
): ChartGeometry {
  // The y-range always covers both boundaries with headroom so the lines
  // never sit on the frame edge.
  const pad = 0.15 * (vm.logB - vm.logA);
  let yMin = vm.logA - pad;
  let yMax = vm.logB + pad;
  for (const point of vm.trajectory) {
    yMin = Math.min(yMin, point.logLr - 0.05);
    yMax = Math.max(yMax, point.logLr + 0.05);
  }
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;
  const xOf = (step: number) => MARGIN.left + (step / vm.config.n_max) * innerW;
  const yOf = (value: number) =>
    MARGIN.top + (1 - (value - yMin) / (yMax - yMin)) * innerH;
  return {
    width,
    height,
    acceptY: yOf(vm.logA),
    rejectY: yOf(vm.logB),
    ceilingX: xOf(vm.config.n_max),
    zeroY: yOf(0),
    points: vm.trajectory.map((p: TrajectoryPoint) => ({ x: xOf(p.step), y: yOf(p.logLr) })),
    yMin,
    yMax,
  };
}

export function renderChart(canvas: HTMLCanvasElement, vm: SessionViewModel): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return; // headless environments render nothing
  const geo = chartGeometry(vm, canvas.width, canvas.height);
  ctx.clearRect(0, 0, geo.width, geo.height);

  ctx.strokeStyle = "#ccc";
  ctx.strokeRect(MARGIN.left, MARGIN.top, geo.width - MARGIN.left - MARGIN.right, geo.height - MARGIN.top - MARGIN.bottom);

  const line = (x1: number, y1: number, x2: number, y2: number, style: string, dash: number[] = []) => {
    ctx.strokeStyle = style;
    ctx.setLineDash(dash);
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    ctx.lineTo(x2, y2);
    ctx.stroke();
    ctx.setLineDash([]);
  };

  // Boundary lines, zero axis, and the ceiling marker.
  line(MARGIN.left, geo.acceptY, geo.width - MARGIN.right, geo.acceptY, "#2b8a3e", [6, 3]);
  line(MARGIN.left, geo.rejectY, geo.width - MARGIN.right, geo.rejectY, "#c92a2a", [6, 3]);
  line(MARGIN.left, geo.zeroY, geo.width - MARGIN.right, geo.zeroY, "#eee");
  line(geo.ceilingX, MARGIN.top, geo.ceilingX, geo.height - MARGIN.bottom, "#868e96", [2, 3]);

  ctx.fillStyle = "#495057";
  ctx.font = "11px sans-serif";
  ctx.fillText(`accept ≤ ${vm.logA.toFixed(3)}`, MARGIN.left + 4, geo.acceptY - 4);
  ctx.fillText(`reject ≥ ${vm.logB.toFixed(3)}`, MARGIN.left + 4, geo.rejectY + 12);
  ctx.fillText("log Λ", 6, MARGIN.top + 10);
  ctx.fillText(`n_max = ${vm.config.n_max}`, Math.max(MARGIN.left, geo.ceilingX - 70), geo.height - 8);

  if (geo.points.length > 0) {
    ctx.strokeStyle = "#1c7ed6";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.moveTo(MARGIN.left, geo.zeroY);
    for (const point of geo.points) {
      ctx.lineTo(point.x, point.y);
    }
    ctx.stroke();
    ctx.lineWidth = 1;
    const last = geo.points[geo.points.length - 1];
    ctx.fillStyle = "#1c7ed6";
    ctx.beginPath();
    ctx.arc(last.x, last.y, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}
