import { ApiError, register } from "./api.js";
import { clear, errorBox, h } from "./dom.js";
import { clearSession, loadSession, saveSession } from "./session.js";
import { renderBadgesView } from "./views/badges.js";
import { renderDemoView } from "./views/demo.js";
import { renderLeaderboardView } from "./views/leaderboard.js";
import { renderTranslateView } from "./views/translate.js";
import { renderVerifyView } from "./views/verify.js";

type Route = "demo" | "translate" | "verify" | "board" | "badges";

interface RouteDef {
  label: string;
  needsSession: boolean;
  render: (root: HTMLElement) => void | Promise<void>;
}

const ROUTES: Record<Route, RouteDef> = {
  demo: { label: "Translate now", needsSession: false, render: renderDemoView },
  translate: { label: "Contribute", needsSession: true, render: renderTranslateView },
  verify: { label: "Verify", needsSession: true, render: renderVerifyView },
  board: { label: "Leaderboard", needsSession: false, render: renderLeaderboardView },
  badges: { label: "Badges", needsSession: true, render: renderBadgesView },
};

function currentRoute(): Route {
  const name = window.location.hash.replace(/^#\/?/, "");
  return name in ROUTES ? (name as Route) : "demo";
}

export function startApp(root: HTMLElement): void {
  const header = h("header", {});
  const view = h("main", { class: "view", "data-testid": "view" });
  root.append(header, view);

  const route = () => {
    renderChrome(header, route);
    const def = ROUTES[currentRoute()];
    clear(view);
    if (def.needsSession && !loadSession()) {
      renderJoinForm(view, route);
      return;
    }
    void def.render(view);
  };

  window.addEventListener("hashchange", route);
  route();
}

function renderChrome(header: HTMLElement, reroute: () => void): void {
  clear(header);
  const active = currentRoute();
  const nav = h("nav", {});
  for (const [name, def] of Object.entries(ROUTES)) {
    nav.append(
      h("a", {
        href: `#/${name}`,
        class: name === active ? "active" : "",
        "data-testid": `nav-${name}`,
      }, def.label),
    );
  }
  const session = loadSession();
  const who = h("div", { class: "who", "data-testid": "who" });
  if (session) {
    const out = h("button", { type: "button", class: "linkish", "data-testid": "signout" }, "sign out");
    out.addEventListener("click", () => {
      clearSession();
      reroute();
    });
    who.append(h("span", {}, session.handle), out);
  } else {
    who.append(h("span", { class: "muted" }, "not joined"));
  }
  header.append(h("h1", {}, "BitextHub"), nav, who);
}

/** Handle-only registration; the token never appears in the UI. */
function renderJoinForm(root: HTMLElement, done: () => void): void {
  const input = h("input", {
    type: "text",
    "data-testid": "handle",
    placeholder: "Pick a contributor handle",
  });
  const joinBtn = h("button", { type: "button", class: "primary", "data-testid": "join" }, "Join");
  const errorSlot = h("div", { class: "error-slot", "data-testid": "error" });

  joinBtn.addEventListener("click", async () => {
    const handle = input.value.trim();
    if (!handle) return;
    clear(errorSlot);
    joinBtn.disabled = true;
    try {
      const profile = await register(handle);
      saveSession({ id: profile.id, handle: profile.handle, token: profile.token });
      done();
    } catch (err) {
      const reason = err instanceof ApiError ? err.reason : "network_error";
      errorSlot.append(errorBox(`Could not join (${reason}).`));
      joinBtn.disabled = false;
    }
  });

  root.append(
    h("div", { class: "panel", "data-testid": "join-form" },
      h("h2", {}, "Join as a contributor"),
      h("p", { class: "muted" }, "Translate and review sentences, earn points and badges."),
      input,
      joinBtn,
      errorSlot),
  );
}

// browser entry point; tests mount startApp themselves
if (typeof document !== "undefined" && document.getElementById("app")) {
  startApp(document.getElementById("app") as HTMLElement);
}
