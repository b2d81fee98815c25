// Exam timeline: an f(t) sparkline with the service-scored branch marked
// between consecutive exams.

import { formatRate } from './format.js';
import { TimelinePoint } from './types.js';

const WIDTH = 260;
const HEIGHT = 60;
const PAD = 6;

export function sparklinePoints(timeline: TimelinePoint[]): string {
    if (timeline.length === 1) {
        return `${WIDTH / 2},${HEIGHT - PAD - (timeline[0].f / 100) * (HEIGHT - 2 * PAD)}`;
    }
    const step = (WIDTH - 2 * PAD) / (timeline.length - 1);
    return timeline
        .map((point, index) => {
            const x = PAD + index * step;
            const y = HEIGHT - PAD - (point.f / 100) * (HEIGHT - 2 * PAD);
            return `${Math.round(x * 10) / 10},${Math.round(y * 10) / 10}`;
        })
        .join(' ');
}

export function renderTimeline(container: HTMLElement, timeline: TimelinePoint[]): void {
    const doc = container.ownerDocument;
    container.innerHTML = '';
    if (timeline.length === 0) {
        const empty = doc.createElement('p');
        empty.className = 'timeline-empty';
        empty.textContent = 'No exams yet.';
        container.appendChild(empty);
        return;
    }

    const svg = doc.createElementNS('http://www.w3.org/2000/svg', 'svg');
    svg.setAttribute('viewBox', `0 0 ${WIDTH} ${HEIGHT}`);
    svg.setAttribute('class', 'timeline-sparkline');
    const line = doc.createElementNS('http://www.w3.org/2000/svg', 'polyline');
    line.setAttribute('points', sparklinePoints(timeline));
    line.setAttribute('fill', 'none');
    svg.appendChild(line);
    container.appendChild(svg);

    const list = doc.createElement('ol');
    list.className = 'timeline-points';
    for (const point of timeline) {
        const item = doc.createElement('li');
        const rate = doc.createElement('span');
        rate.className = 'timeline-rate';
        rate.textContent = `t=${point.t}: ${point.infected}/${point.tiles} (${formatRate(point.f)})`;
        item.appendChild(rate);
        if (point.branch_from_previous) {
            const branch = doc.createElement('span');
            branch.className = `timeline-branch branch-${point.branch_from_previous}`;
            branch.textContent = point.branch_from_previous;
            item.appendChild(branch);
        }
        list.appendChild(item);
    }
    container.appendChild(list);
}
