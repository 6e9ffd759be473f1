// Thin typed client for the session service. All statistics shown in the
// console come from these responses; the client never computes its own.
export class ApiError extends Error {
    constructor(status, detail) {
        super(detail.message);
        this.status = status;
        this.detail = detail;
    }
}
async function request(url, init) {
    const response = await fetch(url, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
        const detail = body?.error ?? {
            field: null,
            message: `request failed with status ${response.status}`,
        };
        throw new ApiError(response.status, detail);
    }
    return body;
}
export function createSession(config) {
    return request("/sessions", {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(config),
    });
}
export function getSession(id) {
    return request(`/sessions/${id}`);
}
export function recordResult(id, result) {
    return request(`/sessions/${id}/results`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ result }),
    });
}
export function undoLast(id) {
    return request(`/sessions/${id}/undo`, { method: "POST" });
}
