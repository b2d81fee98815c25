// Payload shapes of the triage service API. The dashboard renders these
// values verbatim; it never recomputes any score locally.

export type ClassKey = 'bacteria' | 'normal' | 'virus';

export interface Contamination {
    image_id: string;
    rows: number;
    cols: number;
    labels: ClassKey[][];
    probs: number[][][]; // [row][col][bacteria, normal, virus]
    N: number;
}

export interface Decision {
    image_id: string;
    label: ClassKey;
    strategy: string;
    pneumonia: boolean;
}

export interface ExamRecord {
    exam_id: string;
    timestamp: number | string;
    image_ref: string;
    preprocessing: {
        resize: string;
        width: number;
        height: number;
        rows: number;
        cols: number;
        classifier: string;
    };
    contamination: Contamination;
    decisions: { [strategy: string]: Decision };
    infected: number;
    tiles: number;
    f: number;
    patient_id?: string;
    disclaimer?: string;
}

export interface TimelinePoint {
    exam_id: string;
    t: number | string;
    f: number;
    infected: number;
    tiles: number;
    branch_from_previous: string | null;
}

export interface PatientRecord {
    patient_id: string;
    age: number | string;
    comorbidities: {
        serious_count: number;
        moderate_count: number;
        diseases: { name: string; severity: string }[] | null;
    };
    exams: ExamRecord[];
    timeline: TimelinePoint[];
    created: string;
    updated: string;
    disclaimer: string;
}

export interface PatientSummary {
    patient_id: string;
    age: number | string;
    serious_count: number;
    moderate_count: number;
    exam_count: number;
    updated: string;
}

export interface RiskPayload {
    s1: number;
    s2: number;
    s3: number;
    threshold: number;
    f: number;
    branch: string;
    verdict: string;
    disclaimer: string;
}

export interface WhatIfOverrides {
    age?: number | string;
    serious_count?: number;
    moderate_count?: number;
    infected?: number;
}

export interface ExamOptions {
    resize?: 'raw' | 'pad';
    width?: number;
    height?: number;
    rows?: number;
    cols?: number;
    classifier?: 'internal' | 'external' | 'auto';
    timestamp?: number | string;
}
