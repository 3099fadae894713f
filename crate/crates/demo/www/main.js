import init, { tp3Surface, runTp3, mutationHistogram } from "./pkg/gmab_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const MAX = 10000;

let surface = null;

function color(t) {
  // t in [0, 1]: dark blue (low) to pale yellow (high)
  const r = Math.round(30 + 225 * t), g = Math.round(40 + 200 * t), b = Math.round(120 + 60 * (1 - t));
  return [r, g, b];
}

function drawSurface() {
  const res = Math.max(2, Math.min(600, num("res")));
  const values = tp3Surface(res);
  let lo = Infinity, hi = -Infinity;
  for (const v of values) { lo = Math.min(lo, v); hi = Math.max(hi, v); }
  const c = $("map"), ctx = c.getContext("2d");
  const img = ctx.createImageData(res, res);
  for (let i = 0; i < res; i++) {
    for (let j = 0; j < res; j++) {
      const [r, g, b] = color((values[i * res + j] - lo) / (hi - lo || 1));
      // flip rows so x2 grows upwards
      const k = 4 * ((res - 1 - i) * res + j);
      img.data.set([r, g, b, 255], k);
    }
  }
  const off = new OffscreenCanvas(res, res);
  off.getContext("2d").putImageData(img, 0, 0);
  surface = off;
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, c.width, c.height);
}

function toCanvas(c, x) {
  return [x[0] / MAX * c.width, c.height - x[1] / MAX * c.height];
}

function drawRun(run) {
  const c = $("map"), ctx = c.getContext("2d");
  if (surface) ctx.drawImage(surface, 0, 0, c.width, c.height);
  const maxN = Math.max(...run.visited.map((v) => v.n));
  ctx.fillStyle = "rgba(255, 60, 60, 0.6)";
  for (const v of run.visited) {
    const [px, py] = toCanvas(c, v.x);
    const r = 1 + 3 * Math.sqrt(v.n / maxN);
    ctx.beginPath(); ctx.arc(px, py, r, 0, 2 * Math.PI); ctx.fill();
  }
  const [bx, by] = toCanvas(c, run.best);
  ctx.strokeStyle = "white"; ctx.lineWidth = 2;
  ctx.beginPath(); ctx.arc(bx, by, 8, 0, 2 * Math.PI); ctx.stroke();

  const t = $("trace"), tc = t.getContext("2d");
  tc.clearRect(0, 0, t.width, t.height);
  const pad = 30, lo = -20, hi = 0;
  const last = run.trace[run.trace.length - 1].replications;
  const sx = (r) => pad + (t.width - 2 * pad) * r / last;
  const sy = (v) => pad + (t.height - 2 * pad) * (Math.min(hi, v) - lo) / (hi - lo);
  tc.strokeStyle = "#999"; tc.strokeRect(pad, pad, t.width - 2 * pad, t.height - 2 * pad);
  tc.fillStyle = "#333";
  tc.fillText("-20", 4, sy(-20) + 4); tc.fillText("0", 14, sy(0) + 4);
  tc.fillText(`${last} replications`, t.width - pad - 90, t.height - 8);
  tc.strokeStyle = "#1565c0"; tc.beginPath();
  run.trace.forEach((p, i) => (i ? tc.lineTo : tc.moveTo).call(tc, sx(p.replications), sy(p.true_value)));
  tc.stroke();

  $("result").textContent =
    `best (${run.best.join(", ")})  mean ${run.best_mean.toFixed(3)} over ${run.best_n} reps\n` +
    `true value ${run.true_value.toFixed(3)}\n` +
    `${run.iterations} iterations, ${run.replications} replications, ${run.visited.length} points visited`;
}

function run() {
  $("result").classList.remove("err");
  try {
    const json = runTp3(num("m"), num("pcr"), num("pmu"), num("noise"), num("budget"), num("seed"));
    drawRun(JSON.parse(json));
  } catch (e) {
    $("result").classList.add("err");
    $("result").textContent = String(e.message ?? e);
  }
}

function mutate() {
  const lo = num("mlo"), hi = num("mhi");
  $("mresult").classList.remove("err");
  let counts;
  try {
    counts = mutationHistogram(num("mv"), lo, hi, num("mn"), Date.now() % 1e9);
  } catch (e) {
    $("mresult").classList.add("err");
    $("mresult").textContent = String(e.message ?? e);
    return;
  }
  const c = $("hist"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const top = Math.max(...counts);
  const w = c.width / counts.length;
  ctx.fillStyle = "#2e7d32";
  counts.forEach((k, i) => {
    const h = (c.height - 20) * k / top;
    ctx.fillRect(i * w, c.height - h, Math.max(1, w - 1), h);
  });
  const sigma = 0.1 * (hi - lo);
  $("mresult").textContent = `sigma ${sigma}; outcomes ${lo}..${hi}; most frequent ${lo + counts.indexOf(top)}`;
}

await init();
$("draw").onclick = drawSurface;
$("run").onclick = run;
$("mutate").onclick = mutate;
drawSurface();
