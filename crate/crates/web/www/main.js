import init, { score_all, substituted_curve, k_scan } from "./pkg/psim_web.js";

const PAIR = [
  "rand", "adjusted_rand", "jaccard", "wallace_1", "dice",
  "correlation_coefficient", "correlation_distance", "sokal_sneath_1",
  "fowlkes_mallows", "kulczynski", "russell_rao",
];
const SCAN = [...PAIR, "nmi", "nmi_max", "fnmi", "vi", "fmeasure", "bcubed"];

const $ = (id) => document.getElementById(id);

function fillSelect(el, ids, selected) {
  for (const id of ids) {
    const o = document.createElement("option");
    o.value = o.textContent = id;
    if (id === selected) o.selected = true;
    el.appendChild(o);
  }
}

function showScores() {
  $("score-err").textContent = "";
  const table = $("scores");
  table.innerHTML = "<tr><th>index</th><th>value</th><th>better</th></tr>";
  let rows;
  try {
    rows = JSON.parse(score_all($("ref").value, $("cand").value));
  } catch (e) {
    $("score-err").textContent = e.message ?? String(e);
    return;
  }
  for (const r of rows) {
    const tr = document.createElement("tr");
    const v = r.value === null ? "undefined" : r.value.toFixed(6);
    tr.innerHTML = `<td>${r.name}</td><td class="num">${v}</td><td>${r.higher_is_better ? "higher" : "lower"}</td>`;
    table.appendChild(tr);
  }
}

// Draws series of [x, y] points (y may be null) with optional band [x, lo, hi].
function plot(canvas, xs, series, band, logX) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const ys = series.flatMap((p) => (p[1] === null ? [] : [p[1]]))
    .concat(band ? band.flatMap((b) => [b[1], b[2]]) : []);
  if (ys.length === 0) return;
  let lo = Math.min(...ys), hi = Math.max(...ys);
  if (hi - lo < 1e-9) { lo -= 0.5; hi += 0.5; }
  const fx = (x) => logX ? Math.log2(x) : x;
  const x0 = fx(Math.min(...xs)), x1 = fx(Math.max(...xs));
  const sx = (x) => pad + (fx(x) - x0) / (x1 - x0 || 1) * (w - 2 * pad);
  const sy = (y) => h - pad - (y - lo) / (hi - lo) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(hi.toPrecision(4), 2, pad + 4);
  ctx.fillText(lo.toPrecision(4), 2, h - pad);
  ctx.fillText(String(xs[0]), pad, h - pad + 14);
  ctx.fillText(String(xs[xs.length - 1]), w - pad - 20, h - pad + 14);

  if (band) {
    ctx.fillStyle = "rgba(70, 130, 180, 0.2)";
    ctx.beginPath();
    band.forEach((b, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, sx(b[0]), sy(b[2])));
    [...band].reverse().forEach((b) => ctx.lineTo(sx(b[0]), sy(b[1])));
    ctx.closePath();
    ctx.fill();
  }
  ctx.strokeStyle = "steelblue";
  ctx.lineWidth = 2;
  ctx.beginPath();
  let pen = false;
  for (const [x, y] of series) {
    if (y === null) { pen = false; continue; }
    pen ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y));
    pen = true;
  }
  ctx.stroke();
}

function showCurve() {
  const pa = Number($("pa").value);
  $("pa-val").textContent = pa.toFixed(2);
  const pts = JSON.parse(substituted_curve($("curve-index").value, pa, 100));
  plot($("curve"), pts.map((p) => p[0]), pts, null, false);
}

function showScan() {
  $("scan-err").textContent = "";
  const n = Number($("scan-n").value);
  const ks = [];
  for (let k = 2; k <= n; k *= 2) ks.push(k);
  let pts;
  try {
    pts = JSON.parse(k_scan($("scan-index").value, n, Number($("scan-kref").value),
      ks.join(","), Number($("scan-samples").value), 1n));
  } catch (e) {
    $("scan-err").textContent = e.message ?? String(e);
    return;
  }
  plot($("scan-plot"), ks, pts.map((p) => [p.x, p.mean]),
    pts.map((p) => [p.x, p.q05, p.q95]), true);
}

await init();
fillSelect($("curve-index"), PAIR, "rand");
fillSelect($("scan-index"), SCAN, "jaccard");
$("score").addEventListener("click", showScores);
$("pa").addEventListener("input", showCurve);
$("curve-index").addEventListener("change", showCurve);
$("scan").addEventListener("click", showScan);
showScores();
showCurve();
showScan();
