// Atlas controller: wires search box, map, timeline, article panel, and
// shoebox to the API. All data flows one way: the server scores, the UI
// renders. Stale in-flight responses are dropped (latest-wins).

import { ApiRequestError, AtlasApi, LatestWins, YearWindow } from "./api.js";
import { CIRCLE_ZOOM_THRESHOLD } from "./geo.js";
import { MapController, createMapView } from "./mapview.js";
import { ArticlePanel, ShoeboxPanel, createArticlePanel, createShoeboxPanel } from "./panels.js";
import {
  DEFAULT_VIEW,
  ViewState,
  decodeFragment,
  encodeFragment,
  withBrush,
  withFullSpan,
  withQuery,
  withSelection,
  withViewport,
} from "./state.js";
import { TimelineController, createTimeline } from "./timeline.js";
import type { DocumentResult, HeatmapResponse, TimelineBucket } from "./types.js";

const HEATMAP_CELL_DEGREES = 1;

export interface AtlasOptions {
  /** Called instead of mutating location.hash (tests, embedding). */
  onFragmentChange?: (fragment: string) => void;
  initialFragment?: string;
}

export interface Atlas {
  element: HTMLElement;
  state(): ViewState;
  runSearch(query: string): Promise<void>;
  brushYears(yearFrom: number, yearTo: number): Promise<void>;
  clearBrush(): Promise<void>;
  selectInstitution(institutionId: string | null): Promise<void>;
  setZoom(zoom: number): Promise<void>;
  saveToShoebox(doc: DocumentResult): Promise<void>;
  restore(fragment: string): Promise<void>;
  map: MapController;
  timeline: TimelineController;
  articles: ArticlePanel;
  shoebox: ShoeboxPanel;
  lastToast(): string | null;
}

export function createAtlas(doc: Document, api: AtlasApi, options: AtlasOptions = {}): Atlas {
  let view: ViewState = { ...DEFAULT_VIEW };
  let buckets: TimelineBucket[] = [];
  let heatmap: HeatmapResponse | null = null;
  let institutions: Awaited<ReturnType<AtlasApi["institutions"]>> | null = null;
  let toast: string | null = null;
  const inflight = new LatestWins();

  let pendingLayerRefresh: Promise<void> = Promise.resolve();

  const root = doc.createElement("div");
  root.className = "atlas";

  const form = doc.createElement("form");
  form.className = "searchbar";
  const input = doc.createElement("input");
  input.setAttribute("type", "search");
  input.setAttribute("placeholder", "search topics, e.g. quantum computing");
  const submit = doc.createElement("button");
  submit.textContent = "search";
  form.append(input, submit);

  const toastBox = doc.createElement("div");
  toastBox.className = "toast";
  toastBox.setAttribute("hidden", "");

  const mapView = createMapView(doc, {
    onViewportChange: (viewport) => {
      view = withViewport(view, viewport.centerLat, viewport.centerLon, viewport.zoom);
      pendingLayerRefresh = refreshMapLayer();
      publishFragment();
    },
    onSelectInstitution: (institutionId) => void selectInstitution(institutionId),
  });

  const timelineView = createTimeline(doc, {
    onBrush: (yearFrom, yearTo) => void brushYears(yearFrom, yearTo),
    onClear: () => void clearBrush(),
  });

  const articlePanel = createArticlePanel(doc, {
    onSave: (document_) => void saveToShoebox(document_),
  });

  const shoeboxPanel = createShoeboxPanel(doc, {
    onEditNotes: (entryId, notes) => void editNotes(entryId, notes),
    onDelete: (entryId) => void deleteEntry(entryId),
  });

  root.append(form, toastBox, mapView.element, timelineView.element,
              articlePanel.element, shoeboxPanel.element);

  function showToast(message: string): void {
    toast = message;
    toastBox.textContent = message;
    toastBox.removeAttribute("hidden");
  }

  function clearToast(): void {
    toast = null;
    toastBox.setAttribute("hidden", "");
  }

  function publishFragment(): void {
    const fragment = encodeFragment(view);
    if (options.onFragmentChange) {
      options.onFragmentChange(fragment);
    } else if (typeof location !== "undefined") {
      history.replaceState(null, "", fragment);
    }
  }

  function brushWindow(): YearWindow {
    return { yearFrom: view.yearFrom, yearTo: view.yearTo };
  }

  function renderMap(): void {
    mapView.render(heatmap?.cells ?? [], heatmap?.cell_degrees ?? HEATMAP_CELL_DEGREES,
                   institutions?.results ?? []);
  }

  async function refreshHeatmap(): Promise<void> {
    const response = await inflight.run("heatmap", () =>
      api.heatmap(view.query, brushWindow(), HEATMAP_CELL_DEGREES),
    );
    if (response === undefined) return; // superseded
    heatmap = response;
    renderMap();
  }

  async function refreshCircles(): Promise<void> {
    const response = await inflight.run("institutions", () =>
      api.institutions(view.query, brushWindow()),
    );
    if (response === undefined) return;
    institutions = response;
    renderMap();
  }

  async function refreshMapLayer(): Promise<void> {
    if (!view.query) return;
    try {
      if (mapView.viewport().zoom >= CIRCLE_ZOOM_THRESHOLD) {
        await refreshCircles();
      } else {
        renderMap();
      }
    } catch (error) {
      fail(error);
    }
  }

  async function refreshDocuments(): Promise<void> {
    if (!view.selectedInstitutionId) {
      articlePanel.clear();
      return;
    }
    const institutionId = view.selectedInstitutionId;
    const response = await inflight.run("documents", () =>
      api.documents(view.query, institutionId, brushWindow()),
    );
    if (response === undefined) return;
    const label = institutions?.results.find(
      (r) => r.institution_id === institutionId,
    )?.name ?? institutionId;
    articlePanel.render(`Articles — ${label}`, response.results);
  }

  async function refreshShoebox(): Promise<void> {
    const listing = await api.shoeboxList();
    shoeboxPanel.render(listing.entries);
  }

  function fail(error: unknown): void {
    // non-blocking: previous rendered state is retained
    const message =
      error instanceof ApiRequestError
        ? `${error.code}: ${error.message}`
        : `request failed: ${String(error)}`;
    showToast(message);
  }

  async function runSearch(query: string): Promise<void> {
    const trimmed = query.trim();
    if (!trimmed) return; // no request on empty submit
    const previous = view;
    const previousHeatmap = heatmap;
    const previousInstitutions = institutions;
    view = withQuery(view, trimmed); // brush resets, selection clears
    input.value = trimmed;
    try {
      const [timelineResponse] = await Promise.all([
        inflight.run("timeline", () => api.timeline(trimmed)),
        refreshHeatmap(),
      ]);
      if (timelineResponse !== undefined) {
        buckets = timelineResponse.buckets;
        timelineView.render(buckets, null);
      }
      if (mapView.viewport().zoom >= CIRCLE_ZOOM_THRESHOLD) {
        await refreshCircles();
      }
      articlePanel.clear();
      clearToast();
      publishFragment();
    } catch (error) {
      view = previous; // previous state retained, including what is rendered
      heatmap = previousHeatmap;
      institutions = previousInstitutions;
      renderMap();
      fail(error);
    }
  }

  async function brushYears(yearFrom: number, yearTo: number): Promise<void> {
    if (!view.query) return;
    view = withBrush(view, yearFrom, yearTo);
    timelineView.render(buckets, [view.yearFrom as number, view.yearTo as number]);
    try {
      await refreshHeatmap();
      if (mapView.viewport().zoom >= CIRCLE_ZOOM_THRESHOLD) {
        await refreshCircles();
      }
      await refreshDocuments();
      publishFragment();
    } catch (error) {
      fail(error);
    }
  }

  async function clearBrush(): Promise<void> {
    if (!view.query) return;
    view = withFullSpan(view);
    timelineView.render(buckets, null);
    try {
      await refreshHeatmap();
      if (mapView.viewport().zoom >= CIRCLE_ZOOM_THRESHOLD) {
        await refreshCircles();
      }
      await refreshDocuments();
      publishFragment();
    } catch (error) {
      fail(error);
    }
  }

  async function selectInstitution(institutionId: string | null): Promise<void> {
    view = withSelection(view, institutionId);
    try {
      await refreshDocuments();
      publishFragment();
    } catch (error) {
      fail(error);
    }
  }

  async function setZoom(zoom: number): Promise<void> {
    mapView.setViewport(view.mapCenterLat, view.mapCenterLon, zoom);
    await pendingLayerRefresh; // onViewportChange swapped the layer
  }

  async function saveToShoebox(document_: DocumentResult): Promise<void> {
    try {
      await api.shoeboxAdd({
        doi: document_.doi,
        title: document_.title,
        query: view.query,
        institution_id: view.selectedInstitutionId ?? "",
        year_from: view.yearFrom ?? (buckets[0]?.year ?? 0),
        year_to: view.yearTo ?? (buckets[buckets.length - 1]?.year ?? 0),
      });
      await refreshShoebox();
    } catch (error) {
      fail(error);
    }
  }

  async function editNotes(entryId: string, notes: string): Promise<void> {
    try {
      await api.shoeboxUpdateNotes(entryId, notes);
      await refreshShoebox();
    } catch (error) {
      fail(error);
    }
  }

  async function deleteEntry(entryId: string): Promise<void> {
    try {
      await api.shoeboxDelete(entryId);
      await refreshShoebox();
    } catch (error) {
      fail(error);
    }
  }

  async function restore(fragment: string): Promise<void> {
    const decoded = decodeFragment(fragment);
    mapView.setViewport(decoded.mapCenterLat, decoded.mapCenterLon, decoded.mapZoom);
    await pendingLayerRefresh;
    if (decoded.query) {
      await runSearch(decoded.query);
      if (decoded.yearFrom !== null && decoded.yearTo !== null) {
        await brushYears(decoded.yearFrom, decoded.yearTo);
      }
      if (decoded.selectedInstitutionId) {
        await selectInstitution(decoded.selectedInstitutionId);
      }
    }
    view = { ...decoded };
    publishFragment();
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void runSearch(input.value);
  });

  void refreshShoebox().catch(() => showToast("shoebox unavailable"));
  if (options.initialFragment) {
    void restore(options.initialFragment);
  }

  return {
    element: root,
    state: () => ({ ...view }),
    runSearch,
    brushYears,
    clearBrush,
    selectInstitution,
    setZoom,
    saveToShoebox,
    restore,
    map: mapView,
    timeline: timelineView,
    articles: articlePanel,
    shoebox: shoeboxPanel,
    lastToast: () => toast,
  };
}
