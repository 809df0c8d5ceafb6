import { ApiError, type ApiClient } from './api.js';
import type { NextQuestionDto, QuestionDto, ResultDto, SchemaDto } from './types.js';

// Everything displayed comes from these API payloads; the store only decides
// which payload is on screen. Revising re-opens the question payload from the
// schema without touching the other stored answers (API replace semantics).
export interface WizardViewState {
    sessionId: string | null;
    schema: SchemaDto | null;
    next: NextQuestionDto | null;
    reopened: QuestionDto | null;
    answers: Record<string, string[]>;
    result: ResultDto | null;
    changedActionIds: string[];
    error: string | null;
}

export type Listener = (state: WizardViewState) => void;

export class WizardStore {
    private state: WizardViewState = {
        sessionId: null,
        schema: null,
        next: null,
        reopened: null,
        answers: {},
        result: null,
        changedActionIds: [],
        error: null,
    };

    private listeners: Listener[] = [];

    constructor(private readonly api: ApiClient) {}

    snapshot(): WizardViewState {
        return this.state;
    }

    subscribe(listener: Listener): void {
        this.listeners.push(listener);
    }

    private emit(patch: Partial<WizardViewState>): void {
        this.state = { ...this.state, ...patch };
        for (const listener of this.listeners) {
            listener(this.state);
        }
    }

    /** The question currently presented: a revision, or the API's next one. */
    currentQuestion(): QuestionDto | null {
        if (this.state.reopened) {
            return this.state.reopened;
        }
        return this.state.next?.question ?? null;
    }

    async start(): Promise<void> {
        try {
            const schema = await this.api.getSchema();
            const sessionId = await this.api.createSession();
            const next = await this.api.getNext(sessionId);
            const result = await this.api.getResult(sessionId);
            this.emit({ schema, sessionId, next, result, answers: {}, error: null });
        } catch (error) {
            this.emit({ error: describe(error) });
        }
    }

    async answer(questionId: string, categoryIds: string[]): Promise<void> {
        if (!this.state.sessionId) {
            return;
        }
        const previous = this.state.result;
        try {
            const session = await this.api.postAnswer(
                this.state.sessionId, questionId, categoryIds);
            const next = await this.api.getNext(this.state.sessionId);
            const result = await this.api.getResult(this.state.sessionId);
            this.emit({
                answers: session.answers,
                next,
                result,
                reopened: null,
                changedActionIds: planDelta(previous, result),
                error: null,
            });
        } catch (error) {
            this.emit({ error: describe(error) });
        }
    }

    revise(questionId: string): void {
        const question = this.state.schema?.questions.find((q) => q.id === questionId);
        if (question) {
            this.emit({ reopened: question, error: null });
        }
    }

    cancelRevision(): void {
        this.emit({ reopened: null });
    }
}

function describe(error: unknown): string {
    if (error instanceof ApiError) {
        const subject = error.subject ? ` (${error.subject})` : '';
        return `${error.code}: ${error.message}${subject}`;
    }
    return error instanceof Error ? error.message : String(error);
}

/** Action ids present in the new plan but not the previous one. */
export function planDelta(previous: ResultDto | null, current: ResultDto): string[] {
    const before = new Set(
        previous?.defense_plan.entries.map((entry) => entry.action_id) ?? []);
    return current.defense_plan.entries
        .map((entry) => entry.action_id)
        .filter((id) => !before.has(id));
}
