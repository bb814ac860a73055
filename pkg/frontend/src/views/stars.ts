import { h } from "../dom.js";

export interface StarRating {
  el: HTMLElement;
  value(): number;
  reset(): void;
}

/**
 * Five-star picker. The only way a value gets set is the click handler
 * of one of the five buttons, so it can emit integers 1 to 5 and nothing
 * else; 0 means "not chosen yet" and is never emitted.
 */
export function createStarRating(onChange: (rating: number) => void): StarRating {
  let value = 0;
  const root = h("div", { class: "stars", role: "radiogroup", "aria-label": "rating" });
  const buttons: HTMLButtonElement[] = [];

  const paint = () => {
    buttons.forEach((btn, i) => {
      btn.textContent = i < value ? "★" : "☆";
      btn.setAttribute("aria-checked", i + 1 === value ? "true" : "false");
    });
  };

  for (let i = 1; i <= 5; i++) {
    const btn = h("button", {
      type: "button",
      class: "star",
      role: "radio",
      "aria-label": `${i} star${i > 1 ? "s" : ""}`,
    });
    btn.addEventListener("click", () => {
      value = i;
      paint();
      onChange(value);
    });
    buttons.push(btn);
    root.append(btn);
  }
  paint();

  return {
    el: root,
    value: () => value,
    reset: () => {
      value = 0;
      paint();
    },
  };
}
