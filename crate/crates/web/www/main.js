import init, { echoCurve, varianceCurve, eventTimeCurve } from "./pkg/eventclock_web.js";

const POINTS = 200;

function field(section, name) {
  return Number(section.querySelector(`input[name="${name}"]`).value);
}

function columns(flat, width) {
  const cols = Array.from({ length: width }, () => []);
  for (let i = 0; i < flat.length; i += width) {
    for (let c = 0; c < width; c++) cols[c].push(flat[i + c]);
  }
  return cols;
}

function plot(canvas, x, series) {
  const ctx = canvas.getContext("2d");
  const pad = 48;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const ys = series.flatMap((s) => s.y).filter(Number.isFinite);
  const [x0, x1] = [Math.min(...x), Math.max(...x)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const px = (v) => pad + ((v - x0) / (x1 - x0)) * w;
  const py = (v) => pad + h - ((v - y0) / (y1 - y0)) * h;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.fillText(x0.toPrecision(3), pad, pad + h + 16);
  ctx.fillText(x1.toPrecision(3), pad + w - 30, pad + h + 16);
  ctx.fillText(y1.toPrecision(4), 2, pad + 4);
  ctx.fillText(y0.toPrecision(4), 2, pad + h);

  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    let started = false;
    s.y.forEach((v, i) => {
      if (!Number.isFinite(v)) { started = false; return; }
      if (started) ctx.lineTo(px(x[i]), py(v));
      else { ctx.moveTo(px(x[i]), py(v)); started = true; }
    });
    ctx.stroke();
  }
}

function guarded(section, draw) {
  const error = section.querySelector(".error");
  return () => {
    try {
      draw();
      error.textContent = "";
    } catch (e) {
      error.textContent = String(e.message ?? e);
    }
  };
}

function wire(id, draw) {
  const section = document.getElementById(id);
  const update = guarded(section, () => draw(section));
  section.querySelectorAll("input").forEach((i) => i.addEventListener("input", update));
  update();
}

await init();

wire("echo", (s) => {
  const flat = echoCurve(field(s, "tau"), field(s, "separation"), field(s, "floor"), field(s, "lo"), field(s, "hi"), POINTS);
  const [x, bound, factor, floor] = columns(flat, 4);
  plot(s.querySelector("canvas"), x, [
    { y: bound, color: "#1f5fbf" },
    { y: factor, color: "#2a9d3a" },
    { y: floor, color: "#c0392b" },
  ]);
});

wire("variance", (s) => {
  const flat = varianceCurve(field(s, "lo"), field(s, "hi"), POINTS);
  const [eps, scaled, fundamental] = columns(flat, 3);
  let best = 0;
  scaled.forEach((v, i) => { if (v < scaled[best]) best = i; });
  s.querySelector(".readout").textContent =
    `grid minimum Σ = ${scaled[best].toFixed(4)} at ε = ${eps[best].toFixed(4)}`;
  plot(s.querySelector("canvas"), eps.map(Math.log10), [
    { y: scaled.map(Math.log10), color: "#1f5fbf" },
    { y: fundamental.map(Math.log10), color: "#2a9d3a" },
  ]);
});

wire("event", (s) => {
  const flat = eventTimeCurve(
    field(s, "anchor"), field(s, "density"), field(s, "temperature"), field(s, "floor"),
    field(s, "lo"), field(s, "hi"), POINTS,
  );
  const [a, tauD, table, crossing] = columns(flat, 4);
  plot(s.querySelector("canvas"), a, [
    { y: table, color: "#1f5fbf" },
    { y: crossing, color: "#2a9d3a" },
    { y: tauD, color: "#999" },
  ]);
});
