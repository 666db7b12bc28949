import init, { rate_surface, concurrence_curve, rates_at } from "./pkg/twoatom_web.js";

const N = 120;
const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function axisValue(min, max, f, log) {
  return log ? min * Math.pow(max / min, f) : min + (max - min) * f;
}

// diverging blue-white-red for signed data, dark-to-yellow otherwise
function colour(v, lo, hi) {
  if (lo < 0 && hi > 0) {
    const m = Math.max(-lo, hi);
    const f = v / m;
    const a = Math.round(255 * (1 - Math.abs(f)));
    return f < 0 ? [a, a, 255] : [255, a, a];
  }
  const f = hi > lo ? (v - lo) / (hi - lo) : 0;
  return [Math.round(255 * Math.min(1, 2 * f)), Math.round(255 * f * f), Math.round(120 * (1 - f))];
}

function drawMap() {
  showError();
  const rmin = num("rmin"), rmax = num("rmax"), zmin = num("zmin"), zmax = num("zmax");
  const log = $("log").checked;
  let data;
  try {
    data = rate_surface($("pol").value, $("quantity").value, rmin, rmax, zmin, zmax, N, N, log);
  } catch (e) {
    showError(e);
    return;
  }
  let lo = Infinity, hi = -Infinity;
  for (const v of data) { lo = Math.min(lo, v); hi = Math.max(hi, v); }

  const canvas = $("map");
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(N, N);
  // R along x, Z upwards
  for (let i = 0; i < N; i++) {
    for (let j = 0; j < N; j++) {
      const [r, g, b] = colour(data[i * N + j], lo, hi);
      const p = 4 * ((N - 1 - j) * N + i);
      img.data.set([r, g, b, 255], p);
    }
  }
  const off = new OffscreenCanvas(N, N);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
  $("scale").textContent = `${$("quantity").selectedOptions[0].text}: min ${lo.toExponential(3)}, max ${hi.toExponential(3)}`;
}

function showPoint() {
  const z = $("free").checked ? -1 : num("z");
  try {
    const p = JSON.parse(rates_at($("pol").value, num("r"), z));
    $("point").textContent = Object.entries(p)
      .map(([k, v]) => `${k.padEnd(12)} ${typeof v === "number" ? v.toPrecision(8) : v}`)
      .join("\n");
  } catch (e) {
    showError(e);
  }
}

function drawCurve() {
  showError();
  const z = $("free").checked ? -1 : num("z");
  const tmax = num("tmax");
  let flat;
  try {
    flat = concurrence_curve($("pol").value, num("r"), z, $("state").value, tmax, 400);
  } catch (e) {
    showError(e);
    return;
  }
  showPoint();
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 36;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, 8, w - pad - 8, h - pad - 8);
  ctx.fillStyle = "#000";
  ctx.fillText("1", pad - 14, 14);
  ctx.fillText("0", pad - 14, h - pad);
  ctx.fillText(`t = ${tmax}`, w - 60, h - pad + 16);
  ctx.fillText("C(t)", 4, h / 2);

  const x = (t) => pad + (w - pad - 8) * (t / tmax);
  const y = (c) => 8 + (h - pad - 8) * (1 - c);
  ctx.strokeStyle = "#c33";
  ctx.beginPath();
  for (let k = 0; k < flat.length; k += 2) {
    const f = k === 0 ? ctx.moveTo : ctx.lineTo;
    f.call(ctx, x(flat[k]), y(flat[k + 1]));
  }
  ctx.stroke();
}

function pick(ev) {
  const canvas = $("map");
  const rect = canvas.getBoundingClientRect();
  const fx = (ev.clientX - rect.left) / rect.width;
  const fz = 1 - (ev.clientY - rect.top) / rect.height;
  const log = $("log").checked;
  $("r").value = axisValue(num("rmin"), num("rmax"), fx, log).toPrecision(4);
  $("z").value = axisValue(num("zmin"), num("zmax"), fz, log).toPrecision(4);
  $("free").checked = false;
  drawCurve();
}

await init();
$("draw").addEventListener("click", drawMap);
$("run").addEventListener("click", drawCurve);
$("map").addEventListener("click", pick);
drawMap();
drawCurve();
