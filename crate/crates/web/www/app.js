import init, { Demo } from "./pkg/layerdepth_web.js";

const $ = (id) => document.getElementById(id);
let demo = null;

function paint(id, rgba) {
  const c = $(id);
  c.width = demo.width;
  c.height = demo.height;
  const data = new ImageData(new Uint8ClampedArray(rgba), demo.width, demo.height);
  c.getContext("2d").putImageData(data, 0, 0);
}

function guard(f) {
  return (...args) => {
    $("status").textContent = "";
    try {
      f(...args);
    } catch (e) {
      $("status").textContent = String(e.message ?? e);
    }
  };
}

function showSplit() {
  const t = Number($("threshold").value) + 0.5;
  $("threshold-value").textContent = `t = ${t}`;
  paint("front", demo.split(t, true));
  paint("back", demo.split(t, false));
}

function showBins() {
  const edges = $("edges").value.split(",").map((s) => s.trim()).filter(Boolean).map(Number);
  paint("bins", demo.bins(new Float64Array(edges)));
}

function load(d) {
  demo?.free();
  demo = d;
  $("threshold").max = demo.layers;
  paint("image", demo.image());
  paint("depth", demo.depth());
  showSplit();
  showBins();
  $("vector").innerHTML = "";
  $("metrics").textContent = "";
}

function runVectorize() {
  const started = performance.now();
  const out = JSON.parse(demo.vectorize(Number($("epsilon").value), $("curves").checked));
  $("vector").innerHTML = out.svg;
  const ms = Math.round(performance.now() - started);
  delete out.svg;
  $("metrics").textContent = JSON.stringify({ ...out, ms }, null, 2);
}

await init();
$("generate").onclick = guard(() =>
  load(new Demo(Number($("seed").value), Number($("size").value), Number($("layers").value))));
$("file").onchange = async () => {
  const f = $("file").files[0];
  if (f) {
    const text = await f.text();
    guard(() => load(Demo.fromSvg(text)))();
  }
};
$("threshold").oninput = guard(showSplit);
$("apply-bins").onclick = guard(showBins);
$("vectorize").onclick = guard(runVectorize);
$("generate").click();
