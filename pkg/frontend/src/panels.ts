// Ranked-article panel and shoebox panel, plain DOM.

import type { DocumentResult, ShoeboxEntry } from "./types.js";

export interface ArticlePanelCallbacks {
  onSave: (doc: DocumentResult) => void;
}

export interface ArticlePanel {
  element: HTMLElement;
  render(title: string, docs: DocumentResult[]): void;
  clear(): void;
}

export function createArticlePanel(doc: Document, callbacks: ArticlePanelCallbacks): ArticlePanel {
  const panel = doc.createElement("section");
  panel.className = "articles";
  const heading = doc.createElement("h2");
  const list = doc.createElement("ol");
  list.className = "article-list";
  panel.append(heading, list);

  function render(title: string, docs_: DocumentResult[]): void {
    heading.textContent = title;
    while (list.firstChild) list.removeChild(list.firstChild);
    for (const item of docs_) {
      const row = doc.createElement("li");
      row.setAttribute("data-doi", item.doi);
      const label = doc.createElement("span");
      label.className = "article-title";
      label.textContent = `${item.title || item.doi} (${item.year})`;
      const score = doc.createElement("span");
      score.className = "article-score";
      score.textContent = item.score.toFixed(4);
      const save = doc.createElement("button");
      save.textContent = "save to shoebox";
      save.setAttribute("data-action", "save");
      save.addEventListener("click", () => callbacks.onSave(item));
      row.append(label, score, save);
      list.appendChild(row);
    }
  }

  function clear(): void {
    heading.textContent = "";
    while (list.firstChild) list.removeChild(list.firstChild);
  }

  return { element: panel, render, clear };
}

export interface ShoeboxPanelCallbacks {
  onEditNotes: (entryId: string, notes: string) => void;
  onDelete: (entryId: string) => void;
}

export interface ShoeboxPanel {
  element: HTMLElement;
  render(entries: ShoeboxEntry[]): void;
}

export function createShoeboxPanel(
  doc: Document,
  callbacks: ShoeboxPanelCallbacks,
): ShoeboxPanel {
  const panel = doc.createElement("section");
  panel.className = "shoebox";
  const heading = doc.createElement("h2");
  heading.textContent = "Shoebox";
  const list = doc.createElement("ul");
  list.className = "shoebox-list";
  panel.append(heading, list);

  function render(entries: ShoeboxEntry[]): void {
    while (list.firstChild) list.removeChild(list.firstChild);
    for (const entry of entries) {
      const row = doc.createElement("li");
      row.setAttribute("data-entry-id", entry.entry_id);
      const title = doc.createElement("div");
      title.className = "shoebox-title";
      title.textContent = entry.title || entry.doi;
      const provenance = doc.createElement("div");
      provenance.className = "shoebox-provenance";
      provenance.textContent =
        `found via "${entry.query}"` +
        (entry.institution_id ? ` @ ${entry.institution_id}` : "") +
        ` (${entry.year_from}–${entry.year_to})`;
      const notes = doc.createElement("textarea");
      notes.className = "shoebox-notes";
      notes.value = entry.notes;
      notes.setAttribute("placeholder", "notes…");
      const saveNotes = doc.createElement("button");
      saveNotes.textContent = "save note";
      saveNotes.setAttribute("data-action", "save-note");
      saveNotes.addEventListener("click", () =>
        callbacks.onEditNotes(entry.entry_id, notes.value),
      );
      const remove = doc.createElement("button");
      remove.textContent = "remove";
      remove.setAttribute("data-action", "delete");
      remove.addEventListener("click", () => callbacks.onDelete(entry.entry_id));
      row.append(title, provenance, notes, saveNotes, remove);
      list.appendChild(row);
    }
  }

  return { element: panel, render };
}
