import init, { eval_set, check_property, build_subsystem } from "./pkg/ramlab_web.js";

const $ = (id) => document.getElementById(id);
const COLS = 50;
const MAX_CELLS = 5000;

let members = new Set();
let window_ = 0;

function draw(highlight = []) {
  const canvas = $("grid");
  const ctx = canvas.getContext("2d");
  const n = Math.min(window_, MAX_CELLS);
  const cell = Math.max(4, Math.floor(canvas.width / COLS));
  canvas.height = Math.max(1, Math.ceil(n / COLS)) * cell;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const marks = new Set(highlight);
  for (let m = 1; m <= n; m++) {
    const i = m - 1;
    const x = (i % COLS) * cell;
    const y = Math.floor(i / COLS) * cell;
    if (marks.has(m)) {
      ctx.fillStyle = members.has(m) ? "#e8892b" : "#c0392b";
    } else {
      ctx.fillStyle = members.has(m) ? "#2b5d8a" : "#eeeeee";
    }
    ctx.fillRect(x, y, cell - 1, cell - 1);
  }
  if (window_ > MAX_CELLS) {
    $("summary").textContent += ` (grid shows [1..${MAX_CELLS}])`;
  }
}

function show(text) {
  $("out").textContent = JSON.stringify(JSON.parse(text), null, 2);
}

function fail(err) {
  $("summary").textContent = "";
  $("out").textContent = String(err);
}

function evaluate() {
  const res = JSON.parse(eval_set($("expr").value, Number($("window").value)));
  members = new Set(res.members);
  window_ = res.window;
  $("summary").textContent = `${res.expr}: ${res.count} members in [1..${res.window}]`;
  return res;
}

function onEval() {
  try {
    const res = evaluate();
    draw();
    show(JSON.stringify({ ...res, members: res.members.slice(0, 200) }));
  } catch (e) {
    fail(e);
  }
}

function onCheck() {
  try {
    evaluate();
    const text = check_property(
      $("expr").value,
      Number($("window").value),
      $("property").value,
      $("f").value,
      $("g").value,
      Number($("k").value),
    );
    const v = JSON.parse(text);
    $("summary").textContent = `${v.property}: ${v.status} (${v.soundness})`;
    draw(v.highlight);
    show(text);
  } catch (e) {
    fail(e);
  }
}

function onBuild() {
  try {
    evaluate();
    const text = build_subsystem($("seq").value, $("expr").value, Number($("bk").value), $("structure").value, 100000);
    const v = JSON.parse(text);
    $("summary").textContent =
      v.outcome === "built" ? `built y = (${v.certificate.y.join(", ")})` : `no subsystem found (${v.explored} nodes)`;
    draw(v.highlight || []);
    show(text);
  } catch (e) {
    fail(e);
  }
}

await init();
$("eval").addEventListener("click", onEval);
$("check").addEventListener("click", onCheck);
$("build").addEventListener("click", onBuild);
onEval();
