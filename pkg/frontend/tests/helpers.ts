import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T = any>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf8"));
}

export interface StubRoute {
  method: string;
  path: string | RegExp;
  status?: number;
  body?: any;
  /** sequential responses for repeated calls; overrides status/body */
  responses?: Array<{ status: number; body?: any }>;
}

export interface RecordedCall {
  method: string;
  path: string;
  body: any;
}

/** Replace global fetch with a fixture-backed fake; returns the call log. */
export function stubFetch(routes: StubRoute[]): RecordedCall[] {
  const calls: RecordedCall[] = [];
  const counters = new Map<StubRoute, number>();
  globalThis.fetch = (async (input: any, init: any = {}) => {
    const path = String(input).replace(/^https?:\/\/[^/]+/, "");
    const method = (init.method ?? "GET").toUpperCase();
    const body = init.body ? JSON.parse(init.body) : undefined;
    calls.push({ method, path, body });
    const route = routes.find(
      (r) => r.method === method &&
        (typeof r.path === "string" ? r.path === path : r.path.test(path)),
    );
    if (!route) {
      return new Response(JSON.stringify({ reason: "no_stub_for_" + path }), { status: 500 });
    }
    const n = counters.get(route) ?? 0;
    counters.set(route, n + 1);
    let status = route.status ?? 200;
    let payload = route.body;
    if (route.responses) {
      const pick = route.responses[Math.min(n, route.responses.length - 1)];
      status = pick.status;
      payload = pick.body;
    }
    if (status === 204) return new Response(null, { status });
    return new Response(JSON.stringify(payload ?? null), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }) as any;
  return calls;
}

export function mount(): HTMLElement {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.append(root);
  return root;
}

/** Let queued promises and timers settle. */
export async function flush(times = 4): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function byTestId(root: ParentNode, id: string): HTMLElement {
  const node = root.querySelector(`[data-testid="${id}"]`);
  if (!node) throw new Error(`no element with data-testid=${id}`);
  return node as HTMLElement;
}

export function allByTestId(root: ParentNode, id: string): HTMLElement[] {
  return Array.from(root.querySelectorAll(`[data-testid="${id}"]`)) as HTMLElement[];
}

export function setValue(area: HTMLElement, text: string): void {
  (area as HTMLTextAreaElement).value = text;
  area.dispatchEvent(new Event("input", { bubbles: true }));
}
