import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

export interface RouteCall {
    method: string;
    path: string;
    body: unknown;
}

export type Routes = { [key: string]: unknown | ((body: unknown) => unknown) };

/** Install a fetch stub keyed by "METHOD /path"; returns the call log. */
export function installFetch(routes: Routes): RouteCall[] {
    const calls: RouteCall[] = [];
    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
        const path = String(input);
        const method = (init?.method ?? 'GET').toUpperCase();
        const key = `${method} ${path}`;
        let requestBody: unknown = null;
        if (typeof init?.body === 'string') {
            try {
                requestBody = JSON.parse(init.body);
            } catch {
                requestBody = init.body;
            }
        }
        calls.push({ method, path, body: requestBody });
        if (!(key in routes)) {
            return new Response(
                JSON.stringify({ error: 'UnknownRoute', detail: key, stage: null }),
                { status: 404, headers: { 'Content-Type': 'application/json' } },
            );
        }
        const handler = routes[key];
        const payload = typeof handler === 'function' ? handler(requestBody) : handler;
        return new Response(JSON.stringify(payload), {
            status: method === 'POST' ? 201 : 200,
            headers: { 'Content-Type': 'application/json' },
        });
    }) as typeof fetch;
    return calls;
}

/** Load the real dashboard markup into the jsdom document. */
export function mountAppShell(): void {
    const here = dirname(fileURLToPath(import.meta.url));
    const html = readFileSync(join(here, '..', 'index.html'), 'utf-8');
    const body = html.split(/<body>/)[1].split(/<\/body>/)[0];
    document.body.innerHTML = body.replace(/<script[\s\S]*?<\/script>/g, '');
}

export const tick = () => new Promise((resolve) => setTimeout(resolve, 0));

export function text(selector: string): string {
    const node = document.querySelector(selector);
    if (!node) throw new Error(`no element matches ${selector}`);
    return node.textContent ?? '';
}
