import { ApiError, createApiClient } from './api.js';
import { WizardStore } from './state.js';
import { renderCorpusList, renderDossier, renderNotFound, renderWizard } from './render.js';

const api = createApiClient('');
const root = document.getElementById('app');
if (!root) {
    throw new Error('missing #app mount point');
}
const mount = root as HTMLElement;

const store = new WizardStore(api);
const handlers = {
    submit: (questionId: string, categoryIds: string[]) => {
        void store.answer(questionId, categoryIds);
    },
    revise: (questionId: string) => store.revise(questionId),
    cancelRevision: () => store.cancelRevision(),
};

let route = '';

function drawWizard(): void {
    mount.replaceChildren(renderWizard(document, store.snapshot(), handlers));
}

store.subscribe(() => {
    if (route.startsWith('#/corpus')) {
        return; // the wizard session stays alive but off screen
    }
    drawWizard();
});

async function drawCorpus(name: string | null): Promise<void> {
    mount.replaceChildren();
    try {
        const names = await api.listCorpus();
        mount.append(renderCorpusList(document, names, (picked) => {
            window.location.hash = `#/corpus/${encodeURIComponent(picked)}`;
        }));
        if (name) {
            const schema = await api.getSchema();
            const dossier = await api.getDossier(name);
            mount.append(renderDossier(document, schema, dossier));
        }
    } catch (error) {
        if (error instanceof ApiError && error.status === 404 && name) {
            mount.append(renderNotFound(document, name));
            return;
        }
        const message = error instanceof Error ? error.message : String(error);
        const banner = document.createElement('p');
        banner.className = 'error-banner';
        banner.textContent = message;
        mount.append(banner);
    }
}

function onRoute(): void {
    route = window.location.hash;
    if (route.startsWith('#/corpus')) {
        const name = decodeURIComponent(route.replace(/^#\/corpus\/?/, '')) || null;
        void drawCorpus(name);
    } else {
        drawWizard();
    }
}

window.addEventListener('hashchange', onRoute);
onRoute();
void store.start();
