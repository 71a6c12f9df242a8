import { EvalApi } from "./api.js";
import { SessionController } from "./controller.js";
import { bindKeyboard, render } from "./view.js";

function evaluatorId(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("evaluator");
  if (fromQuery) {
    return fromQuery;
  }
  const stored = window.localStorage.getItem("evaluator");
  if (stored) {
    return stored;
  }
  const entered = window.prompt("Evaluator id:") || `anon-${Date.now()}`;
  window.localStorage.setItem("evaluator", entered);
  return entered;
}

const mount = document.getElementById("app");
if (!mount) {
  throw new Error("missing #app mount point");
}
const controller = new SessionController(new EvalApi(""), evaluatorId());
controller.onChange((state) => render(document, mount, state, controller));
bindKeyboard(document, controller);
void controller.start();
