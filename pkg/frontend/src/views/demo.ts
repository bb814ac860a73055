import { ApiError, demoTranslate } from "../api.js";
import { clear, errorBox, h } from "../dom.js";
import type { Direction } from "../types.js";

/** Public translation box backed by verified pairs and the optional external engine. */
export function renderDemoView(root: HTMLElement): void {
  clear(root);

  let direction: Direction = "en-om";

  const input = h("textarea", {
    class: "field",
    "data-testid": "demo-input",
    placeholder: "Type a sentence to translate",
    rows: "3",
  });
  const dirLabel = h("span", { class: "dir-label", "data-testid": "direction" }, "English → Afaan Oromo");
  const swapBtn = h("button", { type: "button", "data-testid": "swap" }, "Swap");
  const goBtn = h("button", { type: "button", class: "primary", "data-testid": "go" }, "Translate");
  const result = h("div", { class: "result-pane", "data-testid": "result" });

  swapBtn.addEventListener("click", () => {
    direction = direction === "en-om" ? "om-en" : "en-om";
    dirLabel.textContent =
      direction === "en-om" ? "English → Afaan Oromo" : "Afaan Oromo → English";
  });

  goBtn.addEventListener("click", async () => {
    const text = input.value.trim();
    clear(result);
    if (!text) return;
    goBtn.disabled = true;
    try {
      const out = await demoTranslate(text, direction);
      result.append(
        h("blockquote", { class: "translation", "data-testid": "translation" }, out.translation),
        h("p", { class: "muted", "data-testid": "source" }, `via ${out.source}`),
      );
    } catch (err) {
      if (err instanceof ApiError && err.status === 503) {
        result.append(errorBox("The translator is unavailable for this sentence right now. Try again later."));
      } else if (err instanceof ApiError) {
        result.append(errorBox(`Could not translate (${err.reason}).`));
      } else {
        result.append(errorBox("Network problem. Try again."));
      }
    } finally {
      goBtn.disabled = false;
    }
  });

  root.append(
    h("h2", {}, "Try the translator"),
    h("div", { class: "dir-row" }, dirLabel, swapBtn),
    input,
    h("div", { class: "actions" }, goBtn),
    result,
  );
}
