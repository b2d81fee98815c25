// What-if exploration: side-by-side current vs hypothetical assessment.
// Both panels render service responses; nothing is computed here.

import { renderRiskPanel } from './riskPanel.js';
import { RiskPayload, WhatIfOverrides } from './types.js';

export interface WhatIfFormValues {
    age: string;
    serious: string;
    moderate: string;
    infected: string;
}

/** Turn raw form strings into override payload; empty fields are omitted. */
export function buildOverrides(
    values: WhatIfFormValues,
    maxTiles: number | null,
): { overrides: WhatIfOverrides } | { error: string } {
    const overrides: WhatIfOverrides = {};
    if (values.age.trim() !== '') {
        const numeric = Number(values.age);
        overrides.age = Number.isFinite(numeric) ? numeric : values.age.trim();
        if (typeof overrides.age === 'number' && overrides.age < 0) {
            return { error: 'age must be at least 0' };
        }
    }
    for (const [field, key] of [
        ['serious', 'serious_count'],
        ['moderate', 'moderate_count'],
    ] as const) {
        const raw = values[field].trim();
        if (raw === '') continue;
        const count = Number(raw);
        if (!Number.isInteger(count) || count < 0) {
            return { error: `${field} count must be a non-negative integer` };
        }
        overrides[key] = count;
    }
    if (values.infected.trim() !== '') {
        const infected = Number(values.infected);
        if (!Number.isInteger(infected) || infected < 0) {
            return { error: 'hypothetical infected tiles must be a non-negative integer' };
        }
        if (maxTiles !== null && infected > maxTiles) {
            return { error: `hypothetical infected tiles cannot exceed ${maxTiles}` };
        }
        overrides.infected = infected;
    }
    return { overrides };
}

export function renderComparison(
    container: HTMLElement,
    current: RiskPayload,
    hypothetical: RiskPayload,
): void {
    const doc = container.ownerDocument;
    container.innerHTML = '';
    for (const [title, payload] of [
        ['Current', current],
        ['Hypothetical', hypothetical],
    ] as const) {
        const column = doc.createElement('div');
        column.className = `whatif-column whatif-${title.toLowerCase()}`;
        const heading = doc.createElement('h4');
        heading.textContent = title;
        column.appendChild(heading);
        const panel = doc.createElement('div');
        renderRiskPanel(panel, payload);
        column.appendChild(panel);
        container.appendChild(column);
    }
}
