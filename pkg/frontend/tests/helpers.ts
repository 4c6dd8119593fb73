// Test helpers: recorded-fixture loading and a fetch stub that serves them.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { vi } from "vitest";

const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, name), "utf-8")) as T;
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

/**
 * Install a fetch stub backed by recorded fixtures. Routes map a
 * "METHOD path" prefix to a fixture payload (query strings ignored).
 */
export function stubFetch(routes: Record<string, unknown>): RecordedCall[] {
  const calls: RecordedCall[] = [];
  vi.stubGlobal("fetch", vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    calls.push({ url, method, body });
    const path = url.replace(/^https?:\/\/[^/]+/, "").split("?")[0];
    const payload = routes[`${method} ${path}`];
    if (payload === undefined) {
      return new Response(JSON.stringify({ detail: "not found" }), { status: 404 });
    }
    return new Response(JSON.stringify(payload), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  }));
  return calls;
}

export function mountPoints(): { controls: HTMLElement; view: HTMLElement; banner: HTMLElement } {
  document.body.innerHTML = `
    <div id="app">
      <aside id="controls"></aside>
      <main><div id="banner"></div><div id="view"></div></main>
    </div>`;
  return {
    controls: document.getElementById("controls") as HTMLElement,
    view: document.getElementById("view") as HTMLElement,
    banner: document.getElementById("banner") as HTMLElement,
  };
}

export async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
}
