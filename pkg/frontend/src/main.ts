/**
 * Page wiring for the annotation workbench: a video player with
 * mark-in/out and frame-click capture, entity forms unlocked in
 * dependency order, a relationship editor restricted to matrix-legal
 * categories, the validation findings pane and the graph preview.
 *
 * All logic lives in the other modules; this file only connects DOM
 * elements to them, so the vitest suite covers the behavior without a
 * browser.
 */

import { ApiClient } from "./api.js";
import { AnnotationSession, StaleRevisionReload } from "./session.js";
import { TrajectoryCapture, clickToPoint } from "./capture.js";
import { permittedCategories } from "./prechecks.js";
import { unlockedForms } from "./forms.js";
import { fetchGraphPreview } from "./graph.js";
import type { EntityKind } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

export function bootstrap(baseUrl: string): void {
  const client = new ApiClient(baseUrl);
  const session = new AnnotationSession(client);
  const capture = new TrajectoryCapture();

  const video = el<HTMLVideoElement>("player");
  const status = el<HTMLElement>("status");
  const findings = el<HTMLElement>("findings");

  video.addEventListener("timeupdate", () => session.seek(video.currentTime));

  el<HTMLButtonElement>("mark-in").addEventListener("click", () => {
    status.textContent = `in: ${session.markIn()} ms`;
  });
  el<HTMLButtonElement>("mark-out").addEventListener("click", () => {
    status.textContent = `out: ${session.markOut()} ms`;
  });

  video.addEventListener("click", (ev: MouseEvent) => {
    const rect = video.getBoundingClientRect();
    const point = clickToPoint(ev.clientX, ev.clientY, rect,
                               session.playbackTimeMs);
    capture.add(point);
    status.textContent =
      `captured (${point.cx}, ${point.cy}) at ${point.t} ms ` +
      `(${capture.size} point(s))`;
  });

  el<HTMLSelectElement>("rel-src-kind").addEventListener("change", refreshCategories);
  el<HTMLSelectElement>("rel-tar-kind").addEventListener("change", refreshCategories);

  function refreshCategories(): void {
    const src = el<HTMLSelectElement>("rel-src-kind").value as EntityKind;
    const tar = el<HTMLSelectElement>("rel-tar-kind").value as EntityKind;
    const categories = permittedCategories(src, tar);
    const picker = el<HTMLSelectElement>("rel-category");
    picker.innerHTML = "";
    for (const category of categories) {
      const option = document.createElement("option");
      option.value = category;
      option.textContent = category;
      picker.appendChild(option);
    }
    picker.disabled = categories.length === 0;
    el<HTMLButtonElement>("rel-save").disabled = categories.length === 0;
  }

  function refreshUnlocked(): void {
    const doc = session.document;
    const unlocked = unlockedForms({
      macroSaved: doc !== null,
      hasEvent: (doc?.entities.events.length ?? 0) > 0,
      hasActor: (doc?.entities.actors.length ?? 0) > 0,
    });
    for (const kind of ["event", "actor", "agent", "object", "concept"]) {
      el<HTMLFieldSetElement>(`form-${kind}`).disabled =
        !unlocked.includes(kind as EntityKind);
    }
  }

  async function refreshValidation(): Promise<void> {
    if (session.docId === null) {
      return;
    }
    const report = await client.validate(session.docId);
    findings.textContent = report.valid
      ? "valid: no findings"
      : report.findings
          .map((f) => `${f.severity.toUpperCase()} ${f.code} [${f.subject}] ${f.message}`)
          .join("\n");
    const preview = await fetchGraphPreview(client, session.docId);
    el<HTMLElement>("dot-source").textContent = preview.dot;
  }

  el<HTMLButtonElement>("open").addEventListener("click", async () => {
    try {
      await session.open(el<HTMLInputElement>("doc-id").value);
      video.src = session.document?.entities.events[0]?.ml.uri ?? "";
      refreshUnlocked();
      await refreshValidation();
      status.textContent = `opened at revision ${session.revision}`;
    } catch (err) {
      status.textContent = err instanceof StaleRevisionReload
        ? err.message
        : String(err);
    }
  });

  refreshCategories();
  refreshUnlocked();
}
