import { fetchProfile } from "../api.js";
import { clear, h } from "../dom.js";
import { loadSession } from "../session.js";
import type { Profile } from "../types.js";
import { renderLoadFailure } from "./shared.js";

// display metadata only; which badges are earned comes from the server
const TIERS: Array<{ name: string; icon: string; hint: string }> = [
  { name: "bronze", icon: "\u{1F949}", hint: "10 points" },
  { name: "silver", icon: "\u{1F948}", hint: "100 points" },
  { name: "gold", icon: "\u{1F947}", hint: "1000 points" },
];

export function badgeIcons(badges: string[]): string {
  return badges
    .map((name) => TIERS.find((t) => t.name === name)?.icon ?? name)
    .join(" ");
}

export async function renderBadgesView(root: HTMLElement): Promise<void> {
  clear(root);
  const session = loadSession();
  if (!session) {
    root.append(h("p", { class: "muted" }, "Join first to track your badges."));
    return;
  }
  root.append(h("p", { class: "muted" }, "Loading profile..."));
  let profile: Profile;
  try {
    profile = await fetchProfile(session.id);
  } catch (err) {
    renderLoadFailure(root, err, () => renderBadgesView(root));
    return;
  }
  clear(root);
  root.append(
    h("h2", {}, "Badges"),
    h("p", { class: "points", "data-testid": "points" }, `${profile.handle}: ${profile.points} points`),
    h("p", { class: "muted", "data-testid": "tally" },
      `${profile.translations_submitted} translations, ` +
      `${profile.verifications_submitted} verifications, ${profile.skips} skips`),
  );
  const grid = h("div", { class: "badge-grid" });
  for (const tier of TIERS) {
    const earned = profile.badges.includes(tier.name);
    grid.append(
      h("div", {
        class: earned ? "badge earned" : "badge locked",
        "data-testid": `badge-${tier.name}`,
        "data-earned": earned ? "true" : "false",
      },
        h("div", { class: "badge-icon" }, tier.icon),
        h("div", { class: "badge-name" }, tier.name),
        h("div", { class: "muted" }, earned ? "earned" : tier.hint)),
    );
  }
  root.append(grid);
}
