import { ApiError, fetchBatch, submitSkip, submitTranslations } from "../api.js";
import { clear, errorBox, h } from "../dom.js";
import type { Batch, TranslateItem } from "../types.js";
import { renderBatchDone, renderEmptyPool, renderLoadFailure } from "./shared.js";

const MAX_FIELDS = 5;

export async function renderTranslateView(root: HTMLElement): Promise<void> {
  clear(root);
  root.append(h("p", { class: "muted" }, "Fetching a batch..."));
  let batch: Batch;
  try {
    batch = await fetchBatch("translate");
  } catch (err) {
    renderLoadFailure(root, err, () => renderTranslateView(root));
    return;
  }
  clear(root);
  if (batch.items.length === 0) {
    renderEmptyPool(root, "No sentences are waiting for translation right now.");
    return;
  }
  renderItem(root, batch, 0);
}

function renderItem(root: HTMLElement, batch: Batch, index: number): void {
  clear(root);
  if (index >= batch.items.length) {
    renderBatchDone(root, "Translation batch complete.", () => renderTranslateView(root));
    return;
  }
  const item = batch.items[index] as TranslateItem;

  const progress = h(
    "p",
    { class: "progress", "data-testid": "progress" },
    `Item ${index + 1} of ${batch.items.length}`,
  );
  const source = h(
    "blockquote",
    { class: "source-text", "data-testid": "source-text", lang: item.lang },
    item.text,
  );
  const direction = h("p", { class: "muted" }, `${item.lang} → ${item.target_lang}`);

  const fieldsBox = h("div", { class: "fields" });
  const errorSlot = h("div", { class: "error-slot", "data-testid": "error" });

  const submitBtn = h("button", { type: "button", class: "primary", "data-testid": "submit" }, "Submit");
  const skipBtn = h("button", { type: "button", "data-testid": "skip" }, "Skip");
  const addBtn = h("button", { type: "button", "data-testid": "add-field" }, "Add another translation");

  const fields: HTMLTextAreaElement[] = [];

  const nonEmpty = () => fields.map((f) => f.value.trim()).filter((t) => t.length > 0);

  const refresh = () => {
    submitBtn.disabled = nonEmpty().length === 0;
    addBtn.disabled = fields.length >= MAX_FIELDS;
  };

  const addField = () => {
    // hard cap, mirrors the server's per-item limit
    if (fields.length >= MAX_FIELDS) return;
    const area = h("textarea", {
      class: "field",
      "data-testid": "field",
      lang: item.target_lang,
      placeholder: `Translation into ${item.target_lang}`,
      rows: "2",
    });
    area.addEventListener("input", refresh);
    fields.push(area);
    fieldsBox.append(area);
    refresh();
  };

  addBtn.addEventListener("click", addField);

  submitBtn.addEventListener("click", async () => {
    const texts = nonEmpty();
    if (texts.length === 0) return;
    clear(errorSlot);
    submitBtn.disabled = true;
    try {
      await submitTranslations(item.item_id, texts);
      renderItem(root, batch, index + 1);
    } catch (err) {
      // typed text stays in place, only the message changes
      errorSlot.append(errorBox(describe(err)));
      refresh();
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

  addField();
  root.append(
    h("h2", {}, "Translate"),
    progress,
    source,
    direction,
    fieldsBox,
    addBtn,
    errorSlot,
    h("div", { class: "actions" }, submitBtn, skipBtn),
  );
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return `Submission rejected (${err.reason}). Your text is preserved; adjust and retry.`;
  }
  return "Network problem. Your text is preserved; retry in a moment.";
}
