// Glue for the explorer page. Expects `wasm-pack build --target web --out-dir www/pkg`
// to have produced ./pkg/entpoly_wasm.js next to this file.

import init, { protocol, sweep, classify } from "./pkg/entpoly_wasm.js";

const THETA_MAX = Math.PI / 2;
const IG_MAX = 8;
const GRID_T = 140; // theta samples
const GRID_G = 110; // 1/gamma^2 samples

const el = (id) => document.getElementById(id);
const canvas = el("heatmap");
const ctx = canvas.getContext("2d");

let grid = null; // Float64Array of f values, theta outer
let lastSpectra = null;

// diverging palette centered at f = 1: blue below (escape), warm above
function color(f) {
  if (Number.isNaN(f)) return [40, 40, 40];
  if (f < 1) {
    const t = Math.max(0, (f - 0.4) / 0.6); // 0.4 .. 1
    return [40 + 60 * t, 90 + 110 * t, 255 - 40 * (1 - t)];
  }
  const t = Math.min(1, (f - 1) / 1.0); // 1 .. 2
  return [255, 220 - 160 * t, 120 - 90 * t];
}

function drawHeatmap() {
  const img = ctx.createImageData(canvas.width, canvas.height);
  for (let px = 0; px < canvas.width; px++) {
    const it = Math.min(GRID_T - 1, Math.round((px / (canvas.width - 1)) * (GRID_T - 1)));
    for (let py = 0; py < canvas.height; py++) {
      // canvas y grows downward; 1/gamma^2 grows upward
      const jg = Math.min(
        GRID_G - 1,
        Math.round(((canvas.height - 1 - py) / (canvas.height - 1)) * (GRID_G - 1)),
      );
      const f = grid[it * GRID_G + jg];
      const [r, g, b] = color(f);
      const k = 4 * (py * canvas.width + px);
      img.data[k] = r;
      img.data[k + 1] = g;
      img.data[k + 2] = b;
      img.data[k + 3] = 255;
    }
  }
  ctx.putImageData(img, 0, 0);
  drawMarker();
}

function drawMarker() {
  const theta = parseFloat(el("theta").value);
  const ig = parseFloat(el("ig").value);
  const x = (theta / THETA_MAX) * (canvas.width - 1);
  const y = (1 - (ig - 1) / (IG_MAX - 1)) * (canvas.height - 1);
  ctx.strokeStyle = "#fff";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(x, y, 6, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.strokeStyle = "#000";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.arc(x, y, 7, 0, 2 * Math.PI);
  ctx.stroke();
}

function refreshSweep() {
  grid = sweep(el("state").value, GRID_T, GRID_G, THETA_MAX, IG_MAX);
  drawHeatmap();
}

function refreshProtocol() {
  const theta = parseFloat(el("theta").value);
  const ig = parseFloat(el("ig").value);
  el("theta-read").textContent = theta.toFixed(4);
  el("ig-read").textContent = ig.toFixed(2);
  const gamma = 1 / Math.sqrt(ig);
  let r;
  try {
    r = JSON.parse(protocol(el("state").value, theta, gamma));
  } catch (err) {
    el("verdict").textContent = `annihilated (${err})`;
    return;
  }
  lastSpectra = r.full_spectra;
  el("l2").textContent = r.lambda[0].toFixed(6);
  el("l3").textContent = r.lambda[1].toFixed(6);
  el("l4").textContent = r.lambda[2].toFixed(6);
  el("f").textContent = r.f.toFixed(6);
  el("success").textContent = r.success.toFixed(6);
  const v = el("verdict");
  if (r.inside_p4) {
    v.textContent = "f ≥ 1: consistent with P₄";
    v.className = "ok";
  } else {
    v.textContent = "f < 1: outside P₄ — polytopes distinguished";
    v.className = "escape";
  }
  drawHeatmap();
}

function runClassify() {
  const values = [1, 2, 3, 4].map((i) => parseFloat(el(`c${i}`).value));
  let r;
  try {
    r = JSON.parse(classify(new Float64Array(values)));
  } catch (err) {
    el("containing").textContent = `error: ${err}`;
    el("minimal").textContent = "";
    el("fperm").textContent = "";
    return;
  }
  el("containing").textContent = r.containing.join(", ");
  el("minimal").textContent = r.minimal.join(", ");
  el("fperm").textContent = (r.f_values ?? [])
    .map((f, i) => `i=${i + 1}: ${f.toFixed(4)}`)
    .join("   ");
}

async function main() {
  await init();
  el("state").addEventListener("change", () => {
    refreshSweep();
    refreshProtocol();
  });
  for (const id of ["theta", "ig"]) {
    el(id).addEventListener("input", refreshProtocol);
  }
  canvas.addEventListener("click", (ev) => {
    const rect = canvas.getBoundingClientRect();
    const x = (ev.clientX - rect.left) / rect.width;
    const y = (ev.clientY - rect.top) / rect.height;
    el("theta").value = (x * THETA_MAX).toFixed(5);
    el("ig").value = (1 + (1 - y) * (IG_MAX - 1)).toFixed(3);
    refreshProtocol();
  });
  el("classify-btn").addEventListener("click", runClassify);
  el("use-protocol").addEventListener("click", () => {
    if (lastSpectra) {
      lastSpectra.forEach((v, i) => {
        el(`c${i + 1}`).value = v.toFixed(4);
      });
      runClassify();
    }
  });
  el("legend").textContent =
    "x: θ₁ in [0, π/2] — y: 1/γ² in [1, 8] — cold: f < 1 (escapes P₄), warm: f ≥ 1";
  refreshSweep();
  refreshProtocol();
  runClassify();
}

main();
