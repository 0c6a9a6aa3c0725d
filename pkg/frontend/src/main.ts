import { ApiClient } from "./api.js";
import { FormSession } from "./session.js";
import { renderFormSkeleton, renderSession } from "./render.js";
import type { Suggestion, TemplateInfo } from "./types.js";

// Served from the API process under /demo, or point it elsewhere with
// ?service=http://host:port when opening the page standalone.
const serviceBase =
  new URLSearchParams(location.search).get("service") ?? location.origin;

const app = document.getElementById("app")!;
const banner = document.getElementById("banner")!;

function mountTemplate(template: TemplateInfo, api: ApiClient): void {
  const session = new FormSession(template, api);
  app.innerHTML = renderFormSkeleton(template);

  const inputs = new Map<string, HTMLInputElement>();
  for (const input of app.querySelectorAll<HTMLInputElement>("input[data-field]")) {
    inputs.set(input.dataset.field!, input);
  }

  session.onChange((snapshot) => {
    const view = renderSession(snapshot);
    banner.innerHTML = view.banner;
    for (const [label, dropdown] of view.dropdowns) {
      const host = app.querySelector<HTMLElement>(`[data-dropdown="${CSS.escape(label)}"]`);
      if (!host) continue;
      host.hidden = !dropdown.visible;
      host.innerHTML = dropdown.html;
    }
    for (const [label, input] of inputs) {
      const entry = snapshot.entries.get(label);
      const shown = entry ? entry.valueLabel : "";
      if (document.activeElement !== input && input.value !== shown) {
        input.value = shown;
      }
    }
  });

  for (const [label, input] of inputs) {
    input.addEventListener("focus", () => session.focusField(label));
    input.addEventListener("input", () => session.setValue(label, input.value));
  }
  app.addEventListener("mousedown", (event) => {
    const target = event.target as HTMLElement;
    const item = target.closest<HTMLElement>("li.suggestion");
    if (item) {
      event.preventDefault(); // keep focus on the input
      const suggestion: Suggestion = {
        valueLabel: item.dataset.value ?? "",
        valueType: item.dataset.valueType || null,
        score: 0,
        rank: Number(item.dataset.rank ?? 0),
      };
      session.selectSuggestion(suggestion);
      return;
    }
    const clear = target.closest<HTMLElement>("button[data-clear]");
    if (clear) {
      event.preventDefault();
      session.clearField(clear.dataset.clear!);
    }
  });
}

async function boot(): Promise<void> {
  const api = new ApiClient(serviceBase);
  try {
    const templates = await api.templates();
    if (templates.length === 0) {
      app.innerHTML = `<p class="empty-template">the service knows no templates yet</p>`;
      return;
    }
    const first = templates[0]!;
    const picker = document.getElementById("template-picker") as HTMLSelectElement;
    picker.hidden = templates.length < 2;
    picker.innerHTML = templates
      .map((t) => `<option value="${t.templateId}">${t.templateId}</option>`)
      .join("");
    picker.addEventListener("change", () => {
      const chosen = templates.find((t) => t.templateId === picker.value);
      if (chosen) mountTemplate(chosen, api);
    });
    mountTemplate(first, api);
  } catch (err) {
    banner.innerHTML = `<div class="error-banner">cannot reach the service at ${serviceBase}: ${String(err)}</div>`;
  }
}

void boot();
