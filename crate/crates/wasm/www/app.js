// Build the bindings with:
//   cargo build --release --target wasm32-unknown-unknown -p affold-wasm
//   wasm-bindgen --target web --out-dir crates/wasm/www/pkg \
//     target/wasm32-unknown-unknown/release/affold_wasm.wasm
import init, { catalog_names, catalog, mutate, orbit_mutate, inspect } from "./pkg/affold_wasm.js";

const SVG = "http://www.w3.org/2000/svg";
const COLORS = ["#8ecae6", "#ffb703", "#90be6d", "#f28482", "#cdb4db", "#f9c74f", "#a3c4f3", "#84a59d", "#ffcad4"];
const RADIUS = 180;

let doc = null;
let stack = [];
let steps = [];

const $ = (id) => document.getElementById(id);

function orbits(d) {
  const parent = [...Array(d.n).keys()];
  const find = (x) => (parent[x] === x ? x : (parent[x] = find(parent[x])));
  for (const g of d.action ? d.action.generators : []) {
    g.forEach((img, i) => { parent[find(i)] = find(img - 1); });
  }
  const groups = new Map();
  for (let i = 0; i < d.n; i++) {
    const r = find(i);
    if (!groups.has(r)) groups.set(r, []);
    groups.get(r).push(i);
  }
  return [...groups.values()].sort((a, b) => a[0] - b[0]);
}

function el(name, attrs, parent) {
  const e = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  parent.appendChild(e);
  return e;
}

function drawQuiver() {
  const svg = $("quiver");
  svg.querySelectorAll("g").forEach((g) => g.remove());
  const layer = el("g", {}, svg);
  const pos = [...Array(doc.n).keys()].map((i) => {
    const t = (2 * Math.PI * i) / doc.n - Math.PI / 2;
    return [RADIUS * Math.cos(t), RADIUS * Math.sin(t)];
  });
  const orbitOf = [];
  orbits(doc).forEach((o, idx) => o.forEach((v) => { orbitOf[v] = idx; }));
  for (let i = 0; i < doc.n; i++) {
    for (let j = 0; j < doc.n; j++) {
      const b = doc.b[i][j];
      if (b <= 0) continue;
      const [x1, y1] = pos[i];
      const [x2, y2] = pos[j];
      const len = Math.hypot(x2 - x1, y2 - y1);
      const ux = (x2 - x1) / len;
      const uy = (y2 - y1) / len;
      el("line", { class: "edge", x1: x1 + 20 * ux, y1: y1 + 20 * uy, x2: x2 - 20 * ux, y2: y2 - 20 * uy, "marker-end": "url(#arrow)" }, layer);
      const label = b === -doc.b[j][i] ? (b > 1 ? String(b) : "") : `${b}:${-doc.b[j][i]}`;
      if (label) {
        const t = el("text", { class: "mult", x: (x1 + x2) / 2 - 8 * uy, y: (y1 + y2) / 2 + 8 * ux }, layer);
        t.textContent = label;
      }
    }
  }
  for (let i = 0; i < doc.n; i++) {
    const g = el("g", { class: "vertex" }, layer);
    el("circle", { cx: pos[i][0], cy: pos[i][1], r: 18, fill: COLORS[orbitOf[i] % COLORS.length] }, g);
    const t = el("text", { x: pos[i][0], y: pos[i][1] }, g);
    t.textContent = doc.d && doc.d[i] > 1 ? `${i + 1}·${doc.d[i]}` : String(i + 1);
    g.addEventListener("click", () => onVertex(i, orbitOf[i]));
  }
}

function fillTable(table, rows) {
  table.replaceChildren();
  for (const row of rows) {
    const tr = document.createElement("tr");
    for (const x of row) {
      const td = document.createElement("td");
      td.textContent = x;
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
}

function render() {
  drawQuiver();
  fillTable($("matrix"), doc.b);
  $("history").textContent = steps.length ? steps.join(" ") : "none";
  const status = $("status");
  if (!doc.action) {
    status.textContent = "No group action on this diagram.";
    status.className = "";
    fillTable($("folded"), []);
    return;
  }
  const report = JSON.parse(inspect(JSON.stringify(doc)));
  const c = report.check;
  if (c.admissible) {
    status.textContent = `Admissible for ${doc.action.group}; folded matrix:`;
    status.className = "ok";
    fillTable($("folded"), report.fold.doc.b);
  } else {
    const why = c.violation ? `${c.violation.kind.replaceAll("_", " ")} at [${c.witness.join(", ")}]` : "";
    status.textContent = `${c.invariant ? "Invariant" : "Not invariant"}, not admissible: ${why}`;
    status.className = "bad";
    fillTable($("folded"), []);
  }
}

function apply(next, label) {
  stack.push(doc);
  steps.push(label);
  doc = JSON.parse(next).doc;
  render();
}

function onVertex(i, orbit) {
  $("error").textContent = "";
  const mode = document.querySelector("input[name=mode]:checked").value;
  try {
    if (mode === "orbit" && doc.action) {
      apply(orbit_mutate(JSON.stringify(doc), orbit + 1), `μ{${orbits(doc)[orbit].map((v) => v + 1).join(",")}}`);
    } else {
      apply(mutate(JSON.stringify(doc), i + 1), `μ${i + 1}`);
    }
  } catch (e) {
    $("error").textContent = JSON.parse(e).error.message;
  }
}

function load(name) {
  doc = JSON.parse(catalog(name));
  stack = [];
  steps = [];
  $("error").textContent = "";
  render();
}

await init();
const names = JSON.parse(catalog_names());
const select = $("diagram");
for (const [label, list] of [["Folding triples", names.triples], ["Affine types", names.types]]) {
  const group = document.createElement("optgroup");
  group.label = label;
  for (const n of list) group.appendChild(new Option(n, n));
  select.appendChild(group);
}
select.value = "E~6/Z3/G~2";
select.addEventListener("change", () => load(select.value));
$("undo").addEventListener("click", () => {
  if (!stack.length) return;
  doc = stack.pop();
  steps.pop();
  render();
});
load(select.value);
