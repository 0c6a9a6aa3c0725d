import type { SessionSnapshot } from "./session.js";
import type { Suggestion, TemplateInfo } from "./types.js";

/** Score as a whole-number percentage, the way the service displays it. */
export function percent(score: number): string {
  return `${Math.round(score * 100)}%`;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Dropdown content for the focused field. Ordering and scores are shown
 * exactly as returned by the service; no client-side re-ranking. */
export function renderSuggestions(suggestions: Suggestion[] | null): string {
  if (suggestions === null) {
    return `<div class="suggestions-empty">…</div>`;
  }
  if (suggestions.length === 0) {
    return `<div class="suggestions-empty">no suggestions — free text is fine</div>`;
  }
  const items = suggestions
    .map((s) => {
      const marker = s.valueType
        ? `<span class="ontology-marker" title="${escapeHtml(s.valueType)}">&#9670;</span> `
        : "";
      return (
        `<li class="suggestion" data-rank="${s.rank}" data-value="${escapeHtml(s.valueLabel)}"` +
        ` data-value-type="${s.valueType ? escapeHtml(s.valueType) : ""}">` +
        `${marker}<span class="label">${escapeHtml(s.valueLabel)}</span>` +
        ` <span class="score">${percent(s.score)}</span></li>`
      );
    })
    .join("");
  return `<ul class="suggestions">${items}</ul>`;
}

export function renderErrorBanner(error: string | null): string {
  if (!error) return "";
  return `<div class="error-banner" role="alert">suggestions unavailable: ${escapeHtml(error)}</div>`;
}

export function renderFormSkeleton(template: TemplateInfo): string {
  if (template.fields.length === 0) {
    return `<p class="empty-template">template ${escapeHtml(template.templateId)} has no fields</p>`;
  }
  const rows = template.fields
    .map((f) => {
      const label = escapeHtml(f.fieldLabel);
      const type = f.fieldType ? ` data-field-type="${escapeHtml(f.fieldType)}"` : "";
      return (
        `<div class="field-row">` +
        `<label>${label}</label>` +
        `<input type="text" autocomplete="off" data-field="${label}"${type}>` +
        `<button type="button" class="clear" data-clear="${label}" title="clear">&times;</button>` +
        `<div class="dropdown" data-dropdown="${label}" hidden></div>` +
        `</div>`
      );
    })
    .join("");
  return `<form class="template-form" autocomplete="off">${rows}</form>`;
}

/** Full-page state render; main.ts patches the DOM with this. */
export function renderSession(snapshot: SessionSnapshot): {
  banner: string;
  dropdowns: Map<string, { html: string; visible: boolean }>;
} {
  const dropdowns = new Map<string, { html: string; visible: boolean }>();
  for (const field of snapshot.fields) {
    const isFocused = snapshot.focused === field.fieldLabel;
    dropdowns.set(field.fieldLabel, {
      html: isFocused ? renderSuggestions(snapshot.suggestions) : "",
      visible: isFocused,
    });
  }
  return { banner: renderErrorBanner(snapshot.error), dropdowns };
}
