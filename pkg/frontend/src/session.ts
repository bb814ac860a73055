import { configureApi } from "./api.js";

const STORAGE_KEY = "bitexthub.session";

export interface Session {
  id: string;
  handle: string;
  token: string;
}

let current: Session | null = null;

export function loadSession(): Session | null {
  if (current) return current;
  try {
    const raw = window.localStorage.getItem(STORAGE_KEY);
    if (!raw) return null;
    const data = JSON.parse(raw);
    if (typeof data.id === "string" && typeof data.handle === "string" && typeof data.token === "string") {
      current = data;
      configureApi({ token: data.token });
      return current;
    }
  } catch {
    // unreadable storage, treat as signed out
  }
  return null;
}

export function saveSession(session: Session): void {
  current = session;
  configureApi({ token: session.token });
  try {
    window.localStorage.setItem(STORAGE_KEY, JSON.stringify(session));
  } catch {
    // storage may be unavailable, session still lives in memory
  }
}

export function clearSession(): void {
  current = null;
  configureApi({ token: null });
  try {
    window.localStorage.removeItem(STORAGE_KEY);
  } catch {
    // ignore
  }
}
