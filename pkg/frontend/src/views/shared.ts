import { ApiError, fetchProfile } from "../api.js";
import { clear, errorBox, h } from "../dom.js";
import { loadSession } from "../session.js";

export function renderEmptyPool(root: HTMLElement, message: string): void {
  root.append(
    h("div", { class: "panel", "data-testid": "empty" },
      h("p", {}, message),
      h("p", { class: "muted" }, "Check back after more content is added.")),
  );
}

export function renderLoadFailure(root: HTMLElement, err: unknown, retry: () => void): void {
  clear(root);
  const reason = err instanceof ApiError ? err.reason : "network_error";
  const btn = h("button", { type: "button", "data-testid": "retry" }, "Retry");
  btn.addEventListener("click", retry);
  root.append(errorBox(`Could not load (${reason}).`), btn);
}

/**
 * End-of-batch panel. Point totals are never computed locally; they are
 * re-fetched so the number shown is what the server recorded.
 */
export function renderBatchDone(root: HTMLElement, message: string, another: () => void): void {
  clear(root);
  const points = h("p", { class: "points", "data-testid": "points" }, "");
  const againBtn = h("button", { type: "button", class: "primary", "data-testid": "another" }, "Get another batch");
  againBtn.addEventListener("click", another);
  root.append(
    h("div", { class: "panel", "data-testid": "done" },
      h("h2", {}, message),
      points,
      againBtn),
  );
  const session = loadSession();
  if (!session) return;
  fetchProfile(session.id).then(
    (profile) => {
      points.textContent = `${profile.points} points`;
    },
    () => {
      points.textContent = "";
    },
  );
}
