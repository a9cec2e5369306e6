import { readFileSync } from "node:fs";

export function fixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

/** Scripted fetch: responds per (method, path) and records every call. */
export function scriptedFetch(
  routes: Record<string, unknown | ((body: unknown) => unknown)>,
) {
  const calls: RecordedCall[] = [];
  const fn = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    calls.push({ url, method, body });
    const key = `${method} ${url}`;
    if (!(key in routes)) {
      return jsonResponse({ code: "unknown_route", message: key }, 404);
    }
    const route = routes[key];
    const payload = typeof route === "function" ? route(body) : route;
    return jsonResponse(payload);
  };
  return { fn, calls };
}
