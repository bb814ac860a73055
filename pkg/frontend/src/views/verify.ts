import { ApiError, fetchBatch, submitSkip, submitVerification } from "../api.js";
import { clear, errorBox, h } from "../dom.js";
import type { Batch, VerifyItem } from "../types.js";
import { renderBatchDone, renderEmptyPool, renderLoadFailure } from "./shared.js";
import { createStarRating } from "./stars.js";

export async function renderVerifyView(root: HTMLElement): Promise<void> {
  clear(root);
  root.append(h("p", { class: "muted" }, "Fetching a batch..."));
  let batch: Batch;
  try {
    batch = await fetchBatch("verify");
  } catch (err) {
    renderLoadFailure(root, err, () => renderVerifyView(root));
    return;
  }
  clear(root);
  if (batch.items.length === 0) {
    renderEmptyPool(root, "No candidate translations are waiting for review right now.");
    return;
  }
  renderItem(root, batch, 0);
}

function renderItem(root: HTMLElement, batch: Batch, index: number): void {
  clear(root);
  if (index >= batch.items.length) {
    renderBatchDone(root, "Verification batch complete.", () => renderVerifyView(root));
    return;
  }
  const item = batch.items[index] as VerifyItem;

  const errorSlot = h("div", { class: "error-slot", "data-testid": "error" });
  const submitBtn = h("button", { type: "button", class: "primary", "data-testid": "submit" }, "Submit rating");
  const skipBtn = h("button", { type: "button", "data-testid": "skip" }, "Skip");

  // submit stays disabled until a star is picked
  submitBtn.disabled = true;
  const stars = createStarRating(() => {
    submitBtn.disabled = false;
  });

  const alternative = h("textarea", {
    class: "field",
    "data-testid": "alternative",
    lang: item.target_lang,
    placeholder: "Optional: suggest a better translation",
    rows: "2",
  });

  submitBtn.addEventListener("click", async () => {
    const rating = stars.value();
    if (rating < 1 || rating > 5) return;
    clear(errorSlot);
    submitBtn.disabled = true;
    try {
      const alt = alternative.value.trim();
      await submitVerification(item.item_id, rating, alt.length > 0 ? alt : undefined);
      renderItem(root, batch, index + 1);
    } catch (err) {
      errorSlot.append(errorBox(describe(err)));
      submitBtn.disabled = false;
    }
  });

  skipBtn.addEventListener("click", async () => {
    clear(errorSlot);
    try {
      await submitSkip(item.item_id);
      renderItem(root, batch, index + 1);
    } catch (err) {
      errorSlot.append(errorBox(describe(err)));
    }
  });

  root.append(
    h("h2", {}, "Verify"),
    h("p", { class: "progress", "data-testid": "progress" }, `Item ${index + 1} of ${batch.items.length}`),
    h("p", { class: "muted" }, `Source (${item.source_lang})`),
    h("blockquote", { class: "source-text", "data-testid": "source-text", lang: item.source_lang }, item.source_text),
    h("p", { class: "muted" }, `Candidate (${item.target_lang})`),
    h("blockquote", { class: "candidate-text", "data-testid": "candidate-text", lang: item.target_lang }, item.candidate_text),
    stars.el,
    alternative,
    errorSlot,
    h("div", { class: "actions" }, submitBtn, skipBtn),
  );
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return `Rating rejected (${err.reason}). Adjust and retry.`;
  }
  return "Network problem. Retry in a moment.";
}
