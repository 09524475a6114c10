/** Small shared helpers for the string renderers. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function formatNumber(value: number): string {
  if (Number.isInteger(value)) return String(value);
  return value.toFixed(2);
}

export function emptyState(message: string): string {
  return `<div class="empty-state">${escapeHtml(message)}</div>`;
}

export function errorState(code: string, message: string): string {
  return `<div class="error-state" data-code="${escapeHtml(code)}">${escapeHtml(message)}</div>`;
}
