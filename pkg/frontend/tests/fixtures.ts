// Service payloads for the scripted elderly-patient scenario (age 82, one
// moderate comorbidity, one exam with 3 of 9 tiles viral), frozen from a
// live service run so the contract tests exercise real wire shapes.

import {
    Contamination,
    ExamRecord,
    PatientRecord,
    RiskPayload,
    TimelinePoint,
} from '../src/types.js';

export const DISCLAIMER =
    'Research prototype output for decision support only. Not medical advice; ' +
    'all clinical decisions must be made by qualified health professionals.';

const VIRUS_PROBS = [0.05, 0.05, 0.9];
const NORMAL_PROBS = [0.05, 0.9, 0.05];

export const CONTAMINATION: Contamination = {
    image_id: 'xr1',
    rows: 3,
    cols: 3,
    labels: [
        ['virus', 'virus', 'virus'],
        ['normal', 'normal', 'normal'],
        ['normal', 'normal', 'normal'],
    ],
    probs: [
        [VIRUS_PROBS, VIRUS_PROBS, VIRUS_PROBS],
        [NORMAL_PROBS, NORMAL_PROBS, NORMAL_PROBS],
        [NORMAL_PROBS, NORMAL_PROBS, NORMAL_PROBS],
    ],
    N: 3,
};

export const EXAM: ExamRecord = {
    exam_id: '155472f07626',
    timestamp: 0,
    image_ref: 'deadbeef',
    preprocessing: {
        resize: 'raw',
        width: 9,
        height: 9,
        rows: 3,
        cols: 3,
        classifier: 'external',
    },
    contamination: CONTAMINATION,
    decisions: {
        majority: { image_id: 'xr1', label: 'normal', strategy: 'majority', pneumonia: false },
        default: { image_id: 'xr1', label: 'normal', strategy: 'default', pneumonia: false },
    },
    infected: 3,
    tiles: 9,
    f: 33.333333333333336,
    patient_id: 'p1',
    disclaimer: DISCLAIMER,
};

export const TIMELINE: TimelinePoint[] = [
    {
        exam_id: '155472f07626',
        t: 0,
        f: 33.333333333333336,
        infected: 3,
        tiles: 9,
        branch_from_previous: null,
    },
];

export const PATIENT: PatientRecord = {
    patient_id: 'p1',
    age: 82,
    comorbidities: {
        serious_count: 0,
        moderate_count: 1,
        diseases: [{ name: 'asthma', severity: 'moderate' }],
    },
    exams: [EXAM],
    timeline: TIMELINE,
    created: '2026-08-10T12:00:00+00:00',
    updated: '2026-08-10T12:05:00+00:00',
    disclaimer: DISCLAIMER,
};

export const PATIENT_NO_EXAMS: PatientRecord = {
    ...PATIENT,
    exams: [],
    timeline: [],
};

export const RISK: RiskPayload = {
    s1: 100.0,
    s2: 33.333333333333336,
    s3: 10.0,
    threshold: 200.0,
    f: 0.7166666666666667,
    branch: 'single',
    verdict: 'high',
    disclaimer: DISCLAIMER,
};

export const WHATIF_NO_MODERATE: RiskPayload = {
    ...RISK,
    s3: 0.0,
    f: 0.6666666666666667,
};
