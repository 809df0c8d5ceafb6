import type { WizardViewState } from './state.js';
import type {
    ClassificationDto,
    DefensePlanDto,
    DossierDto,
    QuestionDto,
    SchemaDto,
} from './types.js';

// All rendering is textContent-based projection of API payloads: categories,
// labels, prompts, plan texts and annotation rows come straight from the
// wire. The only literals below are chrome (headings, button captions).

export interface WizardHandlers {
    submit(questionId: string, categoryIds: string[]): void;
    revise(questionId: string): void;
    cancelRevision(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
    doc: Document, tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
    const node = doc.createElement(tag);
    if (className) {
        node.className = className;
    }
    if (text !== undefined) {
        node.textContent = text;
    }
    return node;
}

export function renderQuestion(
    doc: Document, question: QuestionDto, selected: string[],
    handlers: WizardHandlers, revising: boolean,
): HTMLElement {
    const panel = el(doc, 'section', 'question-panel');
    panel.dataset.questionId = question.id;
    panel.append(el(doc, 'h2', 'question-label', question.label));
    panel.append(el(doc, 'p', 'question-prompt', question.prompt));

    const form = el(doc, 'form', 'question-form');
    const inputType = question.selection === 'multi' ? 'checkbox' : 'radio';
    for (const category of question.categories) {
        const row = el(doc, 'label', 'category-option');
        const input = el(doc, 'input');
        input.type = inputType;
        input.name = question.id;
        input.value = category.id;
        input.checked = selected.includes(category.id);
        row.append(input);
        row.append(el(doc, 'span', 'category-label', category.label));
        row.append(el(doc, 'span', 'category-description', category.description));
        form.append(row);
    }

    const submit = el(doc, 'button', 'submit-answer', 'Answer');
    submit.type = 'submit';
    form.append(submit);
    if (revising) {
        const cancel = el(doc, 'button', 'cancel-revision', 'Keep previous answer');
        cancel.type = 'button';
        cancel.addEventListener('click', () => handlers.cancelRevision());
        form.append(cancel);
    }
    form.addEventListener('submit', (event) => {
        event.preventDefault();
        const chosen = Array.from(
            form.querySelectorAll<HTMLInputElement>('input:checked'),
        ).map((input) => input.value);
        if (chosen.length) {
            handlers.submit(question.id, chosen);
        }
    });
    panel.append(form);
    return panel;
}

export function renderAnsweredList(
    doc: Document, schema: SchemaDto, answers: Record<string, string[]>,
    handlers: WizardHandlers,
): HTMLElement {
    const list = el(doc, 'ul', 'answered-list');
    for (const question of schema.questions) {
        const chosen = answers[question.id];
        if (!chosen) {
            continue;
        }
        const labels = question.categories
            .filter((category) => chosen.includes(category.id))
            .map((category) => category.label);
        const item = el(doc, 'li', 'answered-item');
        item.dataset.questionId = question.id;
        item.append(el(doc, 'span', 'answered-question', question.label));
        item.append(el(doc, 'span', 'answered-categories', labels.join(', ')));
        const revise = el(doc, 'button', 'revise-button', 'Revise');
        revise.type = 'button';
        revise.addEventListener('click', () => handlers.revise(question.id));
        item.append(revise);
        list.append(item);
    }
    return list;
}

export function renderClassificationPanel(
    doc: Document, schema: SchemaDto, classification: ClassificationDto,
): HTMLElement {
    const panel = el(doc, 'section', 'classification-panel');
    panel.append(el(doc, 'h2', undefined, 'Classification'));
    const table = el(doc, 'table', 'classification-table');
    for (const question of schema.questions) {
        const assignment = classification.assignments[question.id];
        const row = el(doc, 'tr', 'classification-row');
        row.dataset.questionId = question.id;
        row.append(el(doc, 'td', 'classification-question', question.label));
        const labels = assignment && assignment.status === 'assigned'
            ? question.categories
                .filter((category) => assignment.categories.includes(category.id))
                .map((category) => category.label)
                .join(', ')
            : 'Unknown';
        row.append(el(doc, 'td', 'classification-answer', labels));
        table.append(row);
    }
    panel.append(table);
    return panel;
}

export function renderPlanPanel(
    doc: Document, plan: DefensePlanDto, changedActionIds: string[],
): HTMLElement {
    const panel = el(doc, 'section', 'plan-panel');
    panel.append(el(doc, 'h2', undefined, 'Defence plan'));
    const list = el(doc, 'ol', 'plan-list');
    const changed = new Set(changedActionIds);
    for (const entry of plan.entries) {
        const item = el(doc, 'li',
            changed.has(entry.action_id) ? 'plan-entry plan-entry--new' : 'plan-entry');
        item.dataset.actionId = entry.action_id;
        item.append(el(doc, 'span', 'plan-group', entry.group.toUpperCase()));
        item.append(el(doc, 'span', 'plan-text', entry.text));
        list.append(item);
    }
    if (!plan.entries.length) {
        list.append(el(doc, 'li', 'plan-empty', 'No actions yet'));
    }
    panel.append(list);
    return panel;
}

export function renderWizard(
    doc: Document, state: WizardViewState, handlers: WizardHandlers,
): HTMLElement {
    const view = el(doc, 'div', 'wizard-view');
    if (state.error) {
        view.append(el(doc, 'p', 'error-banner', state.error));
    }
    if (!state.schema || !state.result) {
        view.append(el(doc, 'p', 'loading', 'Contacting the triage API...'));
        return view;
    }
    const columns = el(doc, 'div', 'wizard-columns');
    const left = el(doc, 'div', 'wizard-left');
    const question = state.reopened ?? state.next?.question ?? null;
    if (question) {
        left.append(renderQuestion(
            doc, question, state.answers[question.id] ?? [],
            handlers, state.reopened !== null));
    } else {
        left.append(el(doc, 'p', 'wizard-done', 'Every question is answered.'));
    }
    left.append(renderAnsweredList(doc, state.schema, state.answers, handlers));
    columns.append(left);

    const right = el(doc, 'div', 'result-panel');
    right.append(renderClassificationPanel(
        doc, state.schema, state.result.classification));
    right.append(renderPlanPanel(
        doc, state.result.defense_plan, state.changedActionIds));
    columns.append(right);
    view.append(columns);
    return view;
}

export function renderCorpusList(
    doc: Document, names: string[], onSelect: (name: string) => void,
): HTMLElement {
    const list = el(doc, 'ul', 'corpus-list');
    for (const name of names) {
        const item = el(doc, 'li', 'corpus-item');
        const link = el(doc, 'a', 'corpus-link', name);
        link.href = `#/corpus/${encodeURIComponent(name)}`;
        link.addEventListener('click', () => onSelect(name));
        item.append(link);
        list.append(item);
    }
    return list;
}

export function renderDossier(
    doc: Document, schema: SchemaDto, dossier: DossierDto,
): HTMLElement {
    const view = el(doc, 'section', 'dossier-view');
    view.append(el(doc, 'h2', 'dossier-name', dossier.name));

    const sequential = el(doc, 'section', 'dossier-sequential');
    sequential.append(el(doc, 'h3', undefined, schema.name));
    sequential.append(renderClassificationPanel(doc, schema, dossier.curated));
    view.append(sequential);

    for (const [taxonomy, rows] of Object.entries(dossier.annotations)) {
        const block = el(doc, 'section', 'dossier-annotation');
        block.dataset.taxonomy = taxonomy;
        block.append(el(doc, 'h3', 'annotation-title', taxonomy));
        const table = el(doc, 'table', 'annotation-table');
        for (const [label, value] of rows) {
            const row = el(doc, 'tr');
            row.append(el(doc, 'td', 'annotation-label', label));
            row.append(el(doc, 'td', 'annotation-value', value));
            table.append(row);
        }
        block.append(table);
        view.append(block);
    }

    view.append(el(doc, 'p', 'dossier-provenance', dossier.provenance));
    return view;
}

export function renderNotFound(doc: Document, name: string): HTMLElement {
    return el(doc, 'p', 'not-found', `Dossier "${name}" not found.`);
}
