import init, { pullback, bracket, berezin } from "./pkg/hpball_demo.js";

const $ = (id) => document.getElementById(id);

function pairText() {
  const custom = $("custom").value.trim();
  return custom || $("preset").value;
}

function exponents() {
  return { p: parseFloat($("p").value), q: parseFloat($("q").value) };
}

function guarded(fn) {
  return () => {
    $("status").textContent = "";
    try {
      fn();
    } catch (e) {
      $("status").textContent = String(e);
    }
  };
}

// Atoms inside the unit disk, area proportional to weight.
function drawCloud(atoms) {
  const c = $("disk").getContext("2d");
  const w = c.canvas.width, r = w / 2 - 10;
  c.clearRect(0, 0, w, w);
  c.strokeStyle = "#999";
  c.beginPath();
  c.arc(w / 2, w / 2, r, 0, 2 * Math.PI);
  c.stroke();
  const wmax = Math.max(...atoms.map((a) => a[2]), 1e-300);
  c.fillStyle = "rgba(20, 80, 200, 0.35)";
  for (const [x, y, wt] of atoms) {
    const s = 1 + 4 * Math.sqrt(wt / wmax);
    c.fillRect(w / 2 + x * r - s / 2, w / 2 - y * r - s / 2, s, s);
  }
}

// Line plot of several series on a log-scaled x axis.
function drawSeries(title, xlabel, series) {
  const c = $("plot").getContext("2d");
  const W = c.canvas.width, H = c.canvas.height, m = 40;
  c.clearRect(0, 0, W, H);
  const pts = series.flatMap((s) => s.points);
  const xs = pts.map((p) => Math.log10(p[0]));
  const ys = pts.map((p) => p[1]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const y0 = Math.min(0, ...ys), y1 = Math.max(...ys, y0 + 1e-9) * 1.1;
  const X = (x) => m + ((Math.log10(x) - x0) / (x1 - x0 || 1)) * (W - 2 * m);
  const Y = (y) => H - m - ((y - y0) / (y1 - y0)) * (H - 2 * m);
  c.strokeStyle = "#000";
  c.strokeRect(m, m, W - 2 * m, H - 2 * m);
  c.fillStyle = "#000";
  c.fillText(title, m, m - 10);
  c.fillText(xlabel + " (log scale)", W / 2 - 40, H - 10);
  c.fillText(y1.toPrecision(3), 2, m + 4);
  c.fillText(y0.toPrecision(3), 2, H - m);
  series.forEach((s, i) => {
    c.strokeStyle = c.fillStyle = s.color;
    c.beginPath();
    s.points.forEach(([x, y], k) => (k ? c.lineTo(X(x), Y(y)) : c.moveTo(X(x), Y(y))));
    c.stroke();
    s.points.forEach(([x, y]) => c.fillRect(X(x) - 2, Y(y) - 2, 4, 4));
    c.fillText(s.name, W - m - 150, m + 15 + 14 * i);
  });
}

function runCloud() {
  const { q } = exponents();
  const v = JSON.parse(pullback(pairText(), q));
  drawCloud(v.atoms);
  drawSeries("extreme-set profile", "eps", [
    { name: "sigma(E_eps)", color: "#c33", points: v.profile.map((r) => [r[0], r[1]]) },
    { name: "mu(E_eps)", color: "#36c", points: v.profile.map((r) => [r[0], r[2]]) },
  ]);
  $("summary").textContent =
    `total mass ${v.total_mass.toFixed(6)}\n` +
    `sigma(E) ~ ${v.sigma_limit.toFixed(6)}\nmu(phi(E)) ~ ${v.mu_limit.toFixed(6)}`;
}

function runBracket() {
  const { q } = exponents();
  const v = JSON.parse(bracket(pairText(), q));
  const exact = v.exact === null ? "" : `\nexact (q = 2): ${v.exact.toFixed(6)}`;
  $("summary").textContent =
    `essential norm H^inf -> H^${v.q} in [${v.lower.toFixed(6)}, ${v.upper.toFixed(6)}]${exact}\n` +
    (v.compact ? "compact" : "not compact");
}

function runBerezin() {
  const { p, q } = exponents();
  const v = JSON.parse(berezin(pairText(), p, q));
  drawSeries("Berezin transform near the circle", "1 - r", [
    { name: "sup over |z| = r", color: "#393", points: v.points.map(([r, y]) => [1 - r, y]) },
  ]);
  $("summary").textContent =
    `boundary limit ~ ${v.limit.toFixed(6)}\nlimit^(1/q) ~ ${v.limit_root.toFixed(6)}`;
}

await init();
$("run-cloud").onclick = guarded(runCloud);
$("run-bracket").onclick = guarded(runBracket);
$("run-berezin").onclick = guarded(runBerezin);
guarded(runCloud)();
