import { fetchLeaderboard } from "../api.js";
import { clear, h } from "../dom.js";
import type { LeaderboardRow } from "../types.js";
import { renderLoadFailure } from "./shared.js";
import { badgeIcons } from "./badges.js";

export async function renderLeaderboardView(root: HTMLElement): Promise<void> {
  clear(root);
  root.append(h("p", { class: "muted" }, "Loading leaderboard..."));
  let rows: LeaderboardRow[];
  try {
    rows = await fetchLeaderboard(10);
  } catch (err) {
    renderLoadFailure(root, err, () => renderLeaderboardView(root));
    return;
  }
  clear(root);
  root.append(h("h2", {}, "Leaderboard"));
  if (rows.length === 0) {
    root.append(h("p", { class: "muted", "data-testid": "empty" }, "No contributors yet."));
    return;
  }
  const table = h("table", { class: "board", "data-testid": "board" });
  table.append(
    h("tr", {},
      h("th", {}, "#"),
      h("th", {}, "Contributor"),
      h("th", {}, "Points"),
      h("th", {}, "Badges")),
  );
  // server order is authoritative, rank is just 1..n down the response
  rows.forEach((row, i) => {
    table.append(
      h("tr", { "data-testid": "row" },
        h("td", {}, String(i + 1)),
        h("td", { class: "handle" }, row.handle),
        h("td", { class: "points" }, String(row.points)),
        h("td", { class: "badges" }, badgeIcons(row.badges))),
    );
  });
  root.append(table);
}
