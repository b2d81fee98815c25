// Fixed rendered precision for every number on the dashboard. The contract
// tests pin these: scores at 2 decimals, the fatality indicator at 4
// decimals plus a 2-decimal percentage, probabilities at 3 decimals.

export const formatScore = (value: number): string => value.toFixed(2);

export const formatIndicator = (value: number): string => value.toFixed(4);

export const formatIndicatorPercent = (value: number): string =>
    `${(value * 100).toFixed(2)}%`;

export const formatProbability = (value: number): string => value.toFixed(3);

export const formatRate = (value: number): string => `${value.toFixed(2)}%`;
