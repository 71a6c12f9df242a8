/**
 * DOM rendering. One item per screen: the source text, each blinded
 * output labeled by display position ("Output A", "Output B", ...),
 * and one scoring button per guideline level under each output.
 */

import { SessionController, ControllerState, ScoringState } from "./controller.js";
import { GUIDELINE, GUIDELINE_CAPTION } from "./guideline.js";

export function positionLabel(position: number): string {
  // 0 -> "Output A", 25 -> "Output Z", 26 -> "Output AA"
  let label = "";
  let n = position;
  do {
    label = String.fromCharCode(65 + (n % 26)) + label;
    n = Math.floor(n / 26) - 1;
  } while (n >= 0);
  return `Output ${label}`;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderGuidelineLegend(doc: Document): HTMLElement {
  const legend = el(doc, "details", "guideline");
  const summary = el(doc, "summary", undefined, GUIDELINE_CAPTION);
  legend.appendChild(summary);
  const list = el(doc, "dl");
  for (const level of GUIDELINE) {
    list.appendChild(el(doc, "dt", undefined, `${level.value} — ${level.scale}`));
    list.appendChild(el(doc, "dd", undefined, level.description));
  }
  legend.appendChild(list);
  return legend;
}

function renderScoring(doc: Document, state: ScoringState, controller: SessionController): HTMLElement {
  const root = el(doc, "div", "screen");
  const { item } = state;

  const progress = el(
    doc,
    "p",
    "progress",
    `Item ${item.scored + 1} of ${item.total}`,
  );
  root.appendChild(progress);

  const source = el(doc, "section", "source");
  source.appendChild(el(doc, "h2", undefined, "Source"));
  source.appendChild(el(doc, "blockquote", undefined, item.source_text));
  root.appendChild(source);

  item.outputs.forEach((text, position) => {
    const row = el(doc, "section", "output");
    row.dataset.position = String(position);
    row.appendChild(el(doc, "h3", undefined, positionLabel(position)));
    row.appendChild(el(doc, "blockquote", undefined, text));

    const buttons = el(doc, "div", "buttons");
    for (const level of GUIDELINE) {
      const button = el(
        doc,
        "button",
        "score",
        `${level.value} — ${level.scale}`,
      );
      button.title = level.description;
      button.dataset.value = String(level.value);
      const accepted = state.scores.get(position);
      if (accepted === level.value) {
        button.classList.add("selected");
      }
      button.disabled = state.submitting || state.scores.has(position);
      button.addEventListener("click", () => {
        void controller.submit(position, level.value);
      });
      buttons.appendChild(button);
    }
    row.appendChild(buttons);

    if (state.error && state.error.position === position) {
      row.appendChild(el(doc, "p", "error inline", state.error.detail));
    }
    root.appendChild(row);
  });

  const remaining = controller.remaining().length;
  root.appendChild(
    el(
      doc,
      "p",
      "hint",
      remaining > 0
        ? `Score every output to continue (${remaining} left). Keys 0–4 score the first unscored output.`
        : "All outputs scored.",
    ),
  );
  root.appendChild(renderGuidelineLegend(doc));
  return root;
}

export function render(
  doc: Document,
  mount: HTMLElement,
  state: ControllerState,
  controller: SessionController,
): void {
  mount.replaceChildren();
  switch (state.kind) {
    case "loading":
      mount.appendChild(el(doc, "p", "status", "Loading…"));
      return;
    case "scoring":
      mount.appendChild(renderScoring(doc, state, controller));
      return;
    case "done": {
      const screen = el(doc, "div", "screen done");
      screen.appendChild(el(doc, "h2", undefined, "Session complete"));
      screen.appendChild(
        el(
          doc,
          "p",
          undefined,
          `You scored ${state.scored} of ${state.total} items. Thank you.`,
        ),
      );
      mount.appendChild(screen);
      return;
    }
    case "failed": {
      const screen = el(doc, "div", "screen failed");
      screen.appendChild(el(doc, "p", "error", state.message));
      const retryButton = el(doc, "button", "retry", "Retry");
      retryButton.addEventListener("click", () => {
        void controller.retry();
      });
      screen.appendChild(retryButton);
      mount.appendChild(screen);
      return;
    }
  }
}

/** Number keys 0-4 score the first unscored output. */
export function bindKeyboard(
  doc: Document,
  controller: SessionController,
): void {
  doc.addEventListener("keydown", (event) => {
    if (event.key < "0" || event.key > "4") {
      return;
    }
    const [position] = controller.remaining();
    if (position !== undefined) {
      void controller.submit(position, Number(event.key));
    }
  });
}
