import * as echarts from "echarts";
import type { PlottedPoint } from "./series.js";

export interface ChartOptions {
  title?: string;
  /** Linear vertical axis instead of the default logarithmic one. */
  linear?: boolean;
  /** Clip ceiling; points at this value were clipped. */
  clip: number;
  width?: number;
  height?: number;
}

/** Build the echarts option for an error-vs-timestep figure. */
export function buildOption(points: PlottedPoint[], opts: ChartOptions): echarts.EChartsCoreOption {
  const line = points.map((p) => [p.index, p.value]);
  const clippedPts = points.filter((p) => p.clipped).map((p) => [p.index, p.value]);
  const failedPts = points.filter((p) => p.chainFailed).map((p) => [p.index, p.value]);

  const series: object[] = [
    {
      name: "error",
      type: "line",
      showSymbol: false,
      data: line,
      lineStyle: { width: 1 },
    },
  ];
  if (clippedPts.length > 0) {
    series.push({
      name: `clipped at ${opts.clip.toExponential(0)}`,
      type: "scatter",
      symbol: "triangle",
      symbolSize: 8,
      data: clippedPts,
    });
  }
  if (failedPts.length > 0) {
    series.push({
      name: "chain failure",
      type: "scatter",
      symbol: "diamond",
      symbolSize: 9,
      data: failedPts,
    });
  }

  return {
    animation: false,
    title: opts.title ? { text: opts.title, left: "center" } : undefined,
    legend: series.length > 1 ? { bottom: 0 } : undefined,
    xAxis: { type: "value", name: "timestep", min: 0, max: Math.max(points.length - 1, 1) },
    yAxis: {
      type: opts.linear ? "value" : "log",
      name: "error magnitude",
    },
    series,
  };
}

/** Render the figure to a deterministic SVG string (server-side, no DOM). */
export function renderSvg(points: PlottedPoint[], opts: ChartOptions): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: opts.width ?? 900,
    height: opts.height ?? 500,
  });
  try {
    chart.setOption(buildOption(points, opts));
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}
