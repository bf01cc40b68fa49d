import init, {
  preset_names, preset, attractor_points, dimension_summary, rotation_block_sweep,
} from "./pkg/gifs_dim_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f5fa8", "#c0392b", "#27864a", "#8e44ad", "#d68910"];

function fail(e) {
  $("error").textContent = String(e);
}

function guard(f) {
  return () => {
    $("error").textContent = "";
    try {
      f();
    } catch (e) {
      fail(e);
    }
  };
}

function drawAttractor() {
  const pts = attractor_points($("spec").value, Number($("points").value), Number($("seed").value));
  const canvas = $("attractor");
  const ctx = canvas.getContext("2d");
  let [x0, x1, y0, y1] = [Infinity, -Infinity, Infinity, -Infinity];
  for (let i = 0; i < pts.length; i += 3) {
    x0 = Math.min(x0, pts[i]); x1 = Math.max(x1, pts[i]);
    y0 = Math.min(y0, pts[i + 1]); y1 = Math.max(y1, pts[i + 1]);
  }
  const span = Math.max(x1 - x0, y1 - y0, 1e-12);
  const pad = 10;
  const scale = (canvas.width - 2 * pad) / span;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (let i = 0; i < pts.length; i += 3) {
    ctx.fillStyle = COLORS[pts[i + 2] % COLORS.length];
    const x = pad + (pts[i] - x0) * scale;
    const y = canvas.height - pad - (pts[i + 1] - y0) * scale;
    ctx.fillRect(x, y, 1, 1);
  }
}

function showBounds() {
  const d = dimension_summary($("spec").value, Number($("points").value), Number($("seed").value));
  const f = (x) => x.toFixed(8);
  $("summary").textContent =
    `pressure bracket     [${f(d.lower)}, ${f(d.upper)}]\n` +
    `determinant bracket  [${f(d.det_lower)}, ${f(d.det_upper)}]  K = ${f(d.k)}\n` +
    `box counting         ${d.box_dimension.toFixed(4)} +/- ${d.box_stderr.toFixed(4)}\n` +
    (d.flags ? `flags                ${d.flags}\n` : "");
  d.free();
}

function plotSweep(rows) {
  const canvas = $("sweep-plot");
  const ctx = canvas.getContext("2d");
  const pad = 40;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const eps = rows.map((r) => r[0]);
  const lo = Math.min(...rows.map((r) => r[1]));
  const hi = Math.max(...rows.map((r) => r[2]));
  const emax = Math.max(...eps);
  const px = (e) => pad + (e / emax) * w;
  const py = (v) => canvas.height - pad - ((v - lo) / Math.max(hi - lo, 1e-12)) * h;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#333";
  ctx.fillText(hi.toFixed(5), 2, pad);
  ctx.fillText(lo.toFixed(5), 2, canvas.height - pad);
  ctx.fillText(`eps = ${emax}`, canvas.width - pad - 40, canvas.height - pad + 15);
  for (const [col, colour] of [[1, COLORS[0]], [2, COLORS[1]]]) {
    ctx.strokeStyle = colour;
    ctx.beginPath();
    rows.forEach((r, i) => (i ? ctx.lineTo(px(r[0]), py(r[col])) : ctx.moveTo(px(r[0]), py(r[col]))));
    ctx.stroke();
  }
}

function runSweep() {
  const s = rotation_block_sweep(Number($("r").value), Number($("eps").value), Number($("levels").value));
  const flat = s.rows;
  const rows = [];
  for (let i = 0; i < flat.length; i += 5) rows.push(flat.slice(i, i + 5));
  rows.sort((a, b) => a[0] - b[0]);
  plotSweep(rows);
  const head = "<tr><th>eps</th><th>s_lower</th><th>s_upper</th><th>K_min</th><th>K closed form</th></tr>";
  $("sweep-table").innerHTML = head + rows
    .map((r) => `<tr>${r.map((x, i) => `<td>${i ? x.toFixed(8) : x.toPrecision(4)}</td>`).join("")}</tr>`)
    .join("");
  $("fit").textContent =
    `s_0 = ${s.s0.toFixed(8)}\ns_1 = ${s.s1.toFixed(6)}\nremainder slope = ${s.remainder_slope.toFixed(3)}`;
  s.free();
}

async function main() {
  await init();
  const select = $("preset");
  for (const name of preset_names()) select.add(new Option(name, name));
  const load = () => { $("spec").value = preset(select.value); };
  select.addEventListener("change", guard(() => { load(); drawAttractor(); }));
  $("draw").addEventListener("click", guard(drawAttractor));
  $("bounds").addEventListener("click", guard(showBounds));
  $("sweep").addEventListener("click", guard(runSweep));
  $("r").addEventListener("input", () => { $("r-value").textContent = $("r").value; });
  load();
  guard(drawAttractor)();
  guard(runSweep)();
}

main().catch(fail);
