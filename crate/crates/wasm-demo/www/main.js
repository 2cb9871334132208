import init, { solve_problem, degree_scan, reduce, preset } from "./pkg/nevpick_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const fmt = (x, d = 4) => Number(x).toPrecision(d);
const pretty = (s) => JSON.stringify(JSON.parse(s), null, 1);

function show(id, text, isError = false) {
  const el = $(id);
  el.textContent = text;
  el.className = isError ? "error" : "";
}

function guard(summaryId, fn) {
  try {
    fn();
  } catch (e) {
    show(summaryId, String(e.message ?? e), true);
  }
}

// Maps data coordinates to a canvas with a margin.
function frame(canvas, xmin, xmax, ymin, ymax, pad = 36) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const X = (x) => pad + ((x - xmin) / (xmax - xmin)) * w;
  const Y = (y) => pad + h - ((y - ymin) / (ymax - ymin)) * h;
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(fmt(xmin, 3), pad, canvas.height - pad + 14);
  ctx.fillText(fmt(xmax, 3), pad + w - 24, canvas.height - pad + 14);
  ctx.fillText(fmt(ymax, 3), 2, pad + 4);
  ctx.fillText(fmt(ymin, 3), 2, pad + h);
  return { ctx, X, Y };
}

function polyline(ctx, X, Y, xs, ys, color, width = 1.5) {
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(X(x), Y(ys[i])) : ctx.moveTo(X(x), Y(ys[i]))));
  ctx.stroke();
  ctx.lineWidth = 1;
}

function heat(t) {
  const r = Math.round(255 * t);
  return `rgb(${r},60,${255 - r})`;
}

function drawPoles(out) {
  const { ctx, X, Y } = frame($("solve-poles"), -1.15, 1.15, -1.15, 1.15, 20);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.arc(X(0), Y(0), X(1) - X(0), 0, 2 * Math.PI);
  ctx.stroke();
  const traj = out.trajectory;
  for (let k = 1; k < traj.length; k++) {
    const t = traj[k].nu;
    ctx.strokeStyle = heat(t);
    traj[k].poles.forEach(([re, im], j) => {
      const prev = traj[k - 1].poles[j];
      if (!prev) return;
      ctx.beginPath();
      ctx.moveTo(X(prev[0]), Y(prev[1]));
      ctx.lineTo(X(re), Y(im));
      ctx.stroke();
    });
  }
  ctx.strokeStyle = "#000";
  out.spectral_zeros.forEach(([re, im]) => {
    ctx.beginPath();
    ctx.arc(X(re), Y(im), 4, 0, 2 * Math.PI);
    ctx.stroke();
  });
  ctx.strokeStyle = "#b00";
  out.poles.forEach(([re, im]) => {
    const x = X(re), y = Y(im);
    ctx.beginPath();
    ctx.moveTo(x - 4, y - 4); ctx.lineTo(x + 4, y + 4);
    ctx.moveTo(x - 4, y + 4); ctx.lineTo(x + 4, y - 4);
    ctx.stroke();
  });
}

function drawSpectrum(canvas, theta, series, colors) {
  const logs = series.map((s) => s.map((v) => Math.log10(v)));
  const all = logs.flat().filter(Number.isFinite);
  const lo = Math.min(...all), hi = Math.max(...all);
  const { ctx, X, Y } = frame(canvas, -Math.PI, Math.PI, lo, hi + 1e-9);
  logs.forEach((l, i) => polyline(ctx, X, Y, theta, l, colors[i]));
}

function runSolve() {
  guard("solve-summary", () => {
    const out = JSON.parse(solve_problem($("solve-input").value));
    drawPoles(out);
    drawSpectrum($("solve-spectrum"), out.spectrum.theta, [out.spectrum.phi], ["#124"]);
    show(
      "solve-summary",
      [
        `accepted states: ${out.accepted_states}`,
        `max |f(z_k) - w_k|: ${fmt(out.max_residual, 3)}`,
        `rho: ${fmt(out.rho, 6)}`,
        `a: ${out.a.map((x) => fmt(x)).join(", ")}`,
        `b: ${out.b.map((x) => fmt(x)).join(", ")}`,
        `max pole modulus: ${fmt(Math.max(...out.poles.map(([r, i]) => Math.hypot(r, i))), 8)}`,
        `singular values of P: ${out.singular_values.map((x) => fmt(x, 3)).join(", ")}`,
      ].join("\n"),
    );
  });
}

function runScan() {
  guard("scan-summary", () => {
    const input = JSON.parse($("scan-input").value);
    const rows = JSON.parse(degree_scan(JSON.stringify(input)));
    const tau = input.tau_rank ?? 1e-2;
    const orders = rows.map((r) => r.order);
    const vals = rows.flatMap((r) => r.ratios.filter((v) => v > 0).map(Math.log10));
    const lo = Math.min(-8, ...vals);
    const { ctx, X, Y } = frame($("scan-plot"), orders[0] - 0.5, orders[orders.length - 1] + 0.5, lo, 0.5);
    ctx.setLineDash([5, 4]);
    polyline(ctx, X, Y, [orders[0] - 0.5, orders[orders.length - 1] + 0.5], [Math.log10(tau), Math.log10(tau)], "#888");
    ctx.setLineDash([]);
    rows.forEach((r) => {
      r.ratios.forEach((v, k) => {
        const y = v > 0 ? Math.log10(v) : lo;
        ctx.fillStyle = v >= tau ? "#124" : "#c60";
        ctx.beginPath();
        ctx.arc(X(r.order + (k - r.ratios.length / 2) * 0.06), Y(y), 4, 0, 2 * Math.PI);
        ctx.fill();
      });
    });
    show(
      "scan-summary",
      rows
        .map((r) => `n=${r.order}: degree ${r.estimated_degree}` + (r.error ? ` (${r.error})` : ""))
        .join("\n"),
    );
  });
}

function runReduce() {
  guard("reduce-summary", () => {
    const input = JSON.parse($("reduce-input").value);
    input.target_degree = Number($("reduce-degree").value);
    const out = JSON.parse(reduce(JSON.stringify(input)));
    drawSpectrum($("reduce-plot"), out.theta, [out.phi_full, out.phi_reduced], ["#000", "#e80"]);
    const z = (list) => list.map(([r, i]) => `${fmt(Math.hypot(r, i), 3)}∠${fmt(Math.atan2(i, r), 3)}`).join(", ");
    show(
      "reduce-summary",
      [`relative log-spectrum deviation: ${fmt(out.deviation, 3)}`, `all zeros: ${z(out.all_zeros)}`, `kept zeros: ${z(out.kept_zeros)}`].join("\n"),
    );
  });
}

function loadPresets() {
  $("solve-input").value = pretty(preset("system-identification"));
  $("scan-input").value = pretty(preset($("scan-preset").value));
  $("reduce-input").value = pretty(preset("degree-six"));
}

async function main() {
  await init();
  $("status").textContent = "Ready.";
  loadPresets();
  $("solve-run").onclick = runSolve;
  $("solve-reset").onclick = () => ($("solve-input").value = pretty(preset("system-identification")));
  $("scan-preset").onchange = () => ($("scan-input").value = pretty(preset($("scan-preset").value)));
  $("scan-run").onclick = runScan;
  $("reduce-run").onclick = runReduce;
  runSolve();
  runScan();
  runReduce();
}

main().catch((e) => {
  $("status").textContent = `Failed to load: ${e}`;
  $("status").className = "error";
});
