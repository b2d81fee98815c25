// Contamination-matrix heatmap: one cell per grid tile, colored by its
// argmax label, with the full distribution in the tooltip.

import { formatProbability, formatRate } from './format.js';
import { ClassKey, Contamination } from './types.js';

const CLASS_NAMES: ClassKey[] = ['bacteria', 'normal', 'virus'];

export function cellTooltip(probs: number[]): string {
    return CLASS_NAMES.map(
        (name, index) => `${name} ${formatProbability(probs[index])}`,
    ).join(', ');
}

export function renderHeatmap(
    container: HTMLElement,
    cm: Contamination,
    serviceRate: number, // the exam's f as computed by the service
): void {
    container.innerHTML = '';
    const grid = container.ownerDocument.createElement('div');
    grid.className = 'heatmap-grid';
    grid.style.gridTemplateColumns = `repeat(${cm.cols}, 1fr)`;

    for (let row = 0; row < cm.rows; row++) {
        for (let col = 0; col < cm.cols; col++) {
            const label = cm.labels[row][col];
            const cell = container.ownerDocument.createElement('div');
            cell.className = `heatmap-cell cell-${label}`;
            cell.title = cellTooltip(cm.probs[row][col]);
            cell.textContent = label[0].toUpperCase();
            cell.dataset.row = String(row);
            cell.dataset.col = String(col);
            grid.appendChild(cell);
        }
    }
    container.appendChild(grid);

    const caption = container.ownerDocument.createElement('p');
    caption.className = 'heatmap-caption';
    caption.textContent =
        `${cm.N} of ${cm.rows * cm.cols} tiles viral (${formatRate(serviceRate)})`;
    container.appendChild(caption);
}
