// Thin typed client over the triage service HTTP API.

import {
    ExamOptions,
    ExamRecord,
    PatientRecord,
    PatientSummary,
    RiskPayload,
    WhatIfOverrides,
} from './types.js';

export class ApiError extends Error {
    constructor(
        message: string,
        public readonly status: number,
        public readonly errorType: string,
        public readonly stage: string | null,
    ) {
        super(message);
    }

    // e.g. "[classifier] MissingInput: predictions missing tiles [4]"
    get display(): string {
        const prefix = this.stage ? `[${this.stage}] ` : '';
        return `${prefix}${this.errorType}: ${this.message}`;
    }
}

async function parseError(response: Response): Promise<ApiError> {
    let errorType = `HTTP ${response.status}`;
    let detail = response.statusText;
    let stage: string | null = null;
    try {
        const body = await response.json();
        errorType = body.error ?? errorType;
        detail = body.detail ?? detail;
        stage = body.stage ?? null;
    } catch {
        // non-JSON error body; keep the status text
    }
    return new ApiError(detail, response.status, errorType, stage);
}

export class ApiClient {
    constructor(private readonly base: string = '') {}

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const response = await fetch(this.base + path, init);
        if (!response.ok) throw await parseError(response);
        return (await response.json()) as T;
    }

    health(): Promise<{ status: string; disclaimer: string }> {
        return this.request('/healthz');
    }

    listPatients(): Promise<{ patients: PatientSummary[]; disclaimer: string }> {
        return this.request('/patients');
    }

    getPatient(patientId: string): Promise<PatientRecord> {
        return this.request(`/patients/${patientId}`);
    }

    createPatient(
        age: number | string,
        comorbidities: { name: string; severity: string }[],
    ): Promise<PatientRecord> {
        return this.request('/patients', {
            method: 'POST',
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify({ age, comorbidities }),
        });
    }

    submitExam(
        patientId: string,
        image: File,
        options: ExamOptions,
        predictions: File | null = null,
    ): Promise<ExamRecord> {
        const form = new FormData();
        form.append('image', image);
        form.append('options', JSON.stringify(options));
        if (predictions) form.append('predictions', predictions);
        return this.request(`/patients/${patientId}/exams`, { method: 'POST', body: form });
    }

    risk(patientId: string): Promise<RiskPayload> {
        return this.request(`/patients/${patientId}/risk`);
    }

    whatIf(patientId: string, overrides: WhatIfOverrides): Promise<RiskPayload> {
        return this.request(`/patients/${patientId}/what-if`, {
            method: 'POST',
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify(overrides),
        });
    }
}
