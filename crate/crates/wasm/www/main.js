import init, { generate, solve_instance, verify_instance } from "./pkg/treecross_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function status(text, error = false) {
  $("status").textContent = text;
  $("status").className = error ? "error" : "";
}

function guarded(f) {
  return () => {
    try {
      f();
    } catch (e) {
      status(String(e), true);
    }
  };
}

const doGenerate = guarded(() => {
  $("instance").value = generate(num("seed"), num("trees"), num("layers"), num("vertices"), num("bias"));
  $("picture").innerHTML = "";
  status("instance generated");
});

const doSolve = guarded(() => {
  const t0 = performance.now();
  const out = JSON.parse(solve_instance($("instance").value, $("algorithm").value, $("roots").value));
  const ms = (performance.now() - t0).toFixed(1);
  $("picture").innerHTML = out.svg;
  status(`${out.crossings} crossings with ${out.algorithm} in ${ms} ms`);
});

const doVerify = guarded(() => {
  const out = JSON.parse(verify_instance($("instance").value, $("roots").value));
  const verdict = out.agree ? "agree" : "DISAGREE";
  status(`${out.algorithm}: ${out.crossings}, brute force: ${out.oracle} (${verdict})`, !out.agree);
});

await init();
$("generate").onclick = doGenerate;
$("solve").onclick = doSolve;
$("verify").onclick = doVerify;
doGenerate();
doSolve();
