import { ApiClient } from "./api.js";
import { debounce, type Debounced } from "./debounce.js";
import type {
  ContextPair,
  FieldRef,
  RecommendRequest,
  Suggestion,
  TemplateInfo,
} from "./types.js";

export interface FieldEntry {
  valueLabel: string;
  valueType: string | null;
}

export interface SessionSnapshot {
  templateId: string;
  fields: FieldRef[];
  entries: ReadonlyMap<string, FieldEntry>;
  focused: string | null;
  suggestions: Suggestion[] | null; // null while nothing fetched yet / loading
  error: string | null;
  loading: boolean;
}

/** One user filling in one template.
 *
 * Populated fields mirror exactly what gets sent as context, except that
 * the focused field is always excluded. Suggestion requests are debounced;
 * out-of-order responses are dropped so only the latest request's answer is
 * ever shown.
 */
export class FormSession {
  private readonly entries = new Map<string, FieldEntry>();
  private focused: string | null = null;
  private suggestions: Suggestion[] | null = null;
  private error: string | null = null;
  private inFlight = 0;
  private requestSeq = 0;
  private readonly listeners = new Set<(s: SessionSnapshot) => void>();
  private readonly scheduleFetch: Debounced<[]>;

  constructor(
    readonly template: TemplateInfo,
    private readonly api: ApiClient,
    debounceMs = 150,
  ) {
    this.scheduleFetch = debounce(() => void this.fetchNow(), debounceMs);
  }

  onChange(listener: (s: SessionSnapshot) => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  snapshot(): SessionSnapshot {
    return {
      templateId: this.template.templateId,
      fields: this.template.fields,
      entries: this.entries,
      focused: this.focused,
      suggestions: this.suggestions,
      error: this.error,
      loading: this.inFlight > 0,
    };
  }

  /** The payload the next suggestion request will carry; null without focus. */
  buildRequest(): RecommendRequest | null {
    if (this.focused === null) return null;
    const target = this.fieldRef(this.focused);
    const context: ContextPair[] = [];
    for (const [label, entry] of this.entries) {
      if (label === this.focused) continue; // never send the target itself
      const field = this.fieldRef(label);
      context.push({
        fieldLabel: field.fieldLabel,
        fieldType: field.fieldType ?? null,
        valueLabel: entry.valueLabel,
        valueType: entry.valueType,
      });
    }
    return { targetField: target, context };
  }

  focusField(label: string): void {
    this.focused = label;
    this.suggestions = null;
    this.scheduleFetch();
    this.notify();
  }

  blur(): void {
    this.focused = null;
    this.suggestions = null;
    this.scheduleFetch.cancel();
    this.notify();
  }

  /** Type or edit a value. An empty value clears the field entirely. */
  setValue(label: string, valueLabel: string, valueType: string | null = null): void {
    if (valueLabel.trim() === "") {
      this.clearField(label);
      return;
    }
    this.entries.set(label, { valueLabel, valueType });
    this.scheduleFetch();
    this.notify();
  }

  /** Pick a suggestion for the focused field; its annotation is kept. */
  selectSuggestion(suggestion: Suggestion): void {
    if (this.focused === null) return;
    this.entries.set(this.focused, {
      valueLabel: suggestion.valueLabel,
      valueType: suggestion.valueType,
    });
    this.notify();
  }

  clearField(label: string): void {
    if (!this.entries.delete(label)) return;
    this.scheduleFetch(); // context changed; refresh on next tick
    this.notify();
  }

  /** Run the pending debounced request immediately (tests, blur handling). */
  flushPending(): void {
    this.scheduleFetch.flush();
  }

  private fieldRef(label: string): FieldRef {
    const known = this.template.fields.find((f) => f.fieldLabel === label);
    return known ?? { fieldLabel: label, fieldType: null };
  }

  private async fetchNow(): Promise<void> {
    const request = this.buildRequest();
    if (request === null) return;
    const seq = ++this.requestSeq;
    const target = this.focused;
    this.inFlight += 1;
    this.notify();
    try {
      const suggestions = await this.api.recommend(request);
      if (seq !== this.requestSeq || this.focused !== target) return; // stale
      this.suggestions = suggestions;
      this.error = null;
    } catch (err) {
      if (seq !== this.requestSeq || this.focused !== target) return;
      // Non-blocking: keep the form editable, surface a banner.
      this.error = err instanceof Error ? err.message : String(err);
      this.suggestions = [];
    } finally {
      this.inFlight -= 1;
      this.notify();
    }
  }

  private notify(): void {
    const snap = this.snapshot();
    for (const listener of this.listeners) listener(snap);
  }
}
