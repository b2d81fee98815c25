// Fatality-indicator breakdown. Every number shown here is formatted
// straight from the service payload; nothing is derived in the browser.

import {
    formatIndicator,
    formatIndicatorPercent,
    formatScore,
} from './format.js';
import { RiskPayload } from './types.js';

const ROWS: { key: 's1' | 's2' | 's3'; label: string }[] = [
    { key: 's1', label: 'Age score (S1)' },
    { key: 's2', label: 'Infection rate (S2)' },
    { key: 's3', label: 'Comorbidity score (S3)' },
];

export function renderRiskPanel(container: HTMLElement, risk: RiskPayload): void {
    const doc = container.ownerDocument;
    container.innerHTML = '';

    const table = doc.createElement('table');
    table.className = 'risk-breakdown';
    for (const row of ROWS) {
        const tr = doc.createElement('tr');
        const name = doc.createElement('td');
        name.textContent = row.label;
        const value = doc.createElement('td');
        value.className = `risk-value risk-${row.key}`;
        value.textContent = formatScore(risk[row.key]);
        tr.append(name, value);
        table.appendChild(tr);
    }
    container.appendChild(table);

    const gauge = doc.createElement('div');
    gauge.className = 'risk-gauge';
    const fill = doc.createElement('div');
    fill.className = `risk-gauge-fill band-${risk.verdict}`;
    fill.style.width = `${Math.min(risk.f, 1) * 100}%`;
    gauge.appendChild(fill);
    container.appendChild(gauge);

    const indicator = doc.createElement('p');
    indicator.className = 'risk-indicator';
    const f = doc.createElement('span');
    f.className = 'risk-f';
    f.textContent = formatIndicator(risk.f);
    const percent = doc.createElement('span');
    percent.className = 'risk-f-percent';
    percent.textContent = formatIndicatorPercent(risk.f);
    const band = doc.createElement('span');
    band.className = `risk-band band-${risk.verdict}`;
    band.textContent = risk.verdict;
    const branch = doc.createElement('span');
    branch.className = 'risk-branch';
    branch.textContent = risk.branch;
    indicator.append('F = ', f, ' (', percent, ') ', band, ' · ', branch);
    container.appendChild(indicator);

    const disclaimer = doc.createElement('p');
    disclaimer.className = 'disclaimer';
    disclaimer.textContent = risk.disclaimer;
    container.appendChild(disclaimer);
}
