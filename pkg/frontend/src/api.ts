import type {
    DossierDto,
    NextQuestionDto,
    ResultDto,
    SchemaDto,
    SessionDto,
} from './types.js';

export class ApiError extends Error {
    constructor(
        readonly status: number,
        readonly code: string,
        message: string,
        readonly subject: string | null = null,
    ) {
        super(message);
    }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(response: Response): Promise<ApiError> {
    try {
        const body = await response.json();
        return new ApiError(response.status, body.code ?? 'error',
            body.message ?? response.statusText, body.subject ?? null);
    } catch {
        return new ApiError(response.status, 'error', response.statusText);
    }
}

export interface ApiClient {
    getSchema(): Promise<SchemaDto>;
    createSession(): Promise<string>;
    getNext(sessionId: string): Promise<NextQuestionDto>;
    postAnswer(sessionId: string, questionId: string, categoryIds: string[]): Promise<SessionDto>;
    getResult(sessionId: string): Promise<ResultDto>;
    listCorpus(): Promise<string[]>;
    getDossier(name: string): Promise<DossierDto>;
}

/** Thin fetch wrapper; retries once when the network itself fails. */
export function createApiClient(base = '', fetchFn?: FetchLike): ApiClient {
    const doFetch: FetchLike = fetchFn ?? ((input, init) => fetch(input, init));

    async function request<T>(path: string, init?: RequestInit): Promise<T> {
        let response: Response;
        try {
            response = await doFetch(`${base}${path}`, init);
        } catch {
            // one retry for transient network failure
            response = await doFetch(`${base}${path}`, init);
        }
        if (!response.ok) {
            throw await parseError(response);
        }
        return response.json() as Promise<T>;
    }

    return {
        async getSchema() {
            const schemas = await request<SchemaDto[]>('/schemas');
            if (!schemas.length) {
                throw new ApiError(500, 'no_schema', 'the API returned no schemas');
            }
            return schemas[0];
        },
        async createSession() {
            const body = await request<{ session_id: string }>('/sessions', { method: 'POST' });
            return body.session_id;
        },
        getNext(sessionId) {
            return request<NextQuestionDto>(`/sessions/${encodeURIComponent(sessionId)}/next`);
        },
        postAnswer(sessionId, questionId, categoryIds) {
            return request<SessionDto>(`/sessions/${encodeURIComponent(sessionId)}/answers`, {
                method: 'POST',
                headers: { 'Content-Type': 'application/json' },
                body: JSON.stringify({ question_id: questionId, category_ids: categoryIds }),
            });
        },
        getResult(sessionId) {
            return request<ResultDto>(`/sessions/${encodeURIComponent(sessionId)}/result`);
        },
        listCorpus() {
            return request<string[]>('/corpus');
        },
        getDossier(name) {
            return request<DossierDto>(`/corpus/${encodeURIComponent(name)}`);
        },
    };
}
