// Dashboard wiring: patient roster, exam upload, heatmap review, risk
// breakdown, what-if exploration. All data comes from the triage service;
// the browser renders it and nothing more.

import { ApiClient, ApiError } from './api.js';
import { renderHeatmap } from './heatmap.js';
import { renderRiskPanel } from './riskPanel.js';
import { renderTimeline } from './timeline.js';
import { ExamRecord, PatientRecord, RiskPayload } from './types.js';
import { buildOverrides, renderComparison, WhatIfFormValues } from './whatIf.js';

export class TriageApp {
    private selectedPatient: PatientRecord | null = null;
    private currentRisk: RiskPayload | null = null;

    constructor(
        private readonly doc: Document,
        private readonly api: ApiClient,
    ) {}

    private el<T extends HTMLElement>(id: string): T {
        const node = this.doc.getElementById(id);
        if (!node) throw new Error(`missing element #${id}`);
        return node as T;
    }

    async init(): Promise<void> {
        this.el<HTMLFormElement>('create-form').addEventListener('submit', (e) => {
            e.preventDefault();
            this.handleCreate().catch((err) => this.showError(err));
        });
        this.el<HTMLFormElement>('upload-form').addEventListener('submit', (e) => {
            e.preventDefault();
            this.handleUpload().catch((err) => this.showError(err));
        });
        this.el<HTMLFormElement>('whatif-form').addEventListener('submit', (e) => {
            e.preventDefault();
            this.handleWhatIf().catch((err) => this.showError(err));
        });
        try {
            const health = await this.api.health();
            this.el('disclaimer-banner').textContent = health.disclaimer;
        } catch (err) {
            this.showError(err);
        }
        await this.refreshPatients().catch((err) => this.showError(err));
    }

    showError(err: unknown): void {
        const banner = this.el('error-banner');
        banner.textContent = err instanceof ApiError ? err.display : String(err);
        banner.classList.remove('hidden');
    }

    clearError(): void {
        const banner = this.el('error-banner');
        banner.textContent = '';
        banner.classList.add('hidden');
    }

    async refreshPatients(): Promise<void> {
        const { patients } = await this.api.listPatients();
        const list = this.el<HTMLUListElement>('patient-list');
        list.innerHTML = '';
        for (const patient of patients) {
            const item = this.doc.createElement('li');
            const button = this.doc.createElement('button');
            button.type = 'button';
            button.className = 'patient-entry';
            button.dataset.patientId = patient.patient_id;
            button.textContent =
                `age ${patient.age} · ${patient.exam_count} exam(s) · ` +
                `${patient.serious_count}S/${patient.moderate_count}M`;
            button.addEventListener('click', () => {
                this.selectPatient(patient.patient_id).catch((err) => this.showError(err));
            });
            item.appendChild(button);
            list.appendChild(item);
        }
    }

    async handleCreate(): Promise<void> {
        this.clearError();
        const age = this.el<HTMLInputElement>('create-age').value.trim();
        const serious = Number(this.el<HTMLInputElement>('create-serious').value || '0');
        const moderate = Number(this.el<HTMLInputElement>('create-moderate').value || '0');
        const comorbidities = [
            ...Array.from({ length: serious }, (_, i) => ({
                name: `unspecified serious condition ${i + 1}`,
                severity: 'serious',
            })),
            ...Array.from({ length: moderate }, (_, i) => ({
                name: `unspecified moderate condition ${i + 1}`,
                severity: 'moderate',
            })),
        ];
        const numericAge = Number(age);
        const record = await this.api.createPatient(
            Number.isFinite(numericAge) && age !== '' ? numericAge : age,
            comorbidities,
        );
        await this.refreshPatients();
        await this.selectPatient(record.patient_id);
    }

    async selectPatient(patientId: string): Promise<void> {
        this.clearError();
        const record = await this.api.getPatient(patientId);
        this.selectedPatient = record;
        this.el('patient-title').textContent =
            `Patient ${record.patient_id.slice(0, 8)} · age ${record.age}`;
        this.el('patient-panel').classList.remove('hidden');
        renderTimeline(this.el('timeline'), record.timeline);

        if (record.exams.length > 0) {
            this.renderExam(record.exams[record.exams.length - 1]);
            await this.refreshRisk();
        } else {
            this.el('heatmap').innerHTML = '<p class="timeline-empty">No exams yet.</p>';
            this.el('decisions').innerHTML = '';
            this.el('risk-panel').innerHTML = '';
            this.currentRisk = null;
        }
    }

    renderExam(exam: ExamRecord): void {
        renderHeatmap(this.el('heatmap'), exam.contamination, exam.f);
        const decisions = this.el('decisions');
        decisions.innerHTML = '';
        for (const strategy of Object.keys(exam.decisions).sort()) {
            const decision = exam.decisions[strategy];
            const chip = this.doc.createElement('span');
            chip.className = `decision-chip label-${decision.label}`;
            chip.textContent =
                `${strategy}: ${decision.label}${decision.pneumonia ? ' (pneumonia)' : ''}`;
            decisions.appendChild(chip);
        }
    }

    async refreshRisk(): Promise<void> {
        if (!this.selectedPatient) return;
        this.currentRisk = await this.api.risk(this.selectedPatient.patient_id);
        renderRiskPanel(this.el('risk-panel'), this.currentRisk);
    }

    async handleUpload(): Promise<void> {
        if (!this.selectedPatient) return;
        this.clearError();
        const imageInput = this.el<HTMLInputElement>('upload-image');
        if (!imageInput.files || imageInput.files.length === 0) {
            this.showError(new Error('choose an X-ray image first'));
            return;
        }
        const predictionsInput = this.el<HTMLInputElement>('upload-predictions');
        const options = {
            resize: this.el<HTMLSelectElement>('upload-resize').value as 'raw' | 'pad',
            width: Number(this.el<HTMLInputElement>('upload-width').value || '310'),
            height: Number(this.el<HTMLInputElement>('upload-height').value || '310'),
            rows: Number(this.el<HTMLInputElement>('upload-rows').value || '3'),
            cols: Number(this.el<HTMLInputElement>('upload-cols').value || '3'),
        };
        const exam = await this.api.submitExam(
            this.selectedPatient.patient_id,
            imageInput.files[0],
            options,
            predictionsInput.files && predictionsInput.files.length > 0
                ? predictionsInput.files[0]
                : null,
        );
        this.renderExam(exam);
        await this.selectPatient(this.selectedPatient.patient_id);
    }

    async handleWhatIf(): Promise<void> {
        if (!this.selectedPatient || !this.currentRisk) return;
        this.clearError();
        const inline = this.el('whatif-error');
        inline.textContent = '';

        const values: WhatIfFormValues = {
            age: this.el<HTMLInputElement>('whatif-age').value,
            serious: this.el<HTMLInputElement>('whatif-serious').value,
            moderate: this.el<HTMLInputElement>('whatif-moderate').value,
            infected: this.el<HTMLInputElement>('whatif-infected').value,
        };
        const exams = this.selectedPatient.exams;
        const maxTiles = exams.length ? exams[exams.length - 1].tiles : null;
        const built = buildOverrides(values, maxTiles);
        if ('error' in built) {
            inline.textContent = built.error;
            return;
        }
        const hypothetical = await this.api.whatIf(
            this.selectedPatient.patient_id,
            built.overrides,
        );
        renderComparison(this.el('whatif-panel'), this.currentRisk, hypothetical);
    }
}

declare global {
    interface Window {
        PNEUMO_API_BASE?: string;
    }
}

if (typeof window !== 'undefined' && typeof document !== 'undefined') {
    const app = new TriageApp(document, new ApiClient(window.PNEUMO_API_BASE ?? ''));
    window.addEventListener('DOMContentLoaded', () => {
        void app.init();
    });
}
