// ViewState: everything needed to reproduce a view, encodable in the URL
// fragment so a view can be shared or reloaded.

export interface ViewState {
  query: string;
  /** Brush selection; null means the full observed span. */
  yearFrom: number | null;
  yearTo: number | null;
  mapCenterLat: number;
  mapCenterLon: number;
  mapZoom: number;
  selectedInstitutionId: string | null;
}

export const DEFAULT_VIEW: ViewState = {
  query: "",
  yearFrom: null,
  yearTo: null,
  mapCenterLat: 25,
  mapCenterLon: 0,
  mapZoom: 1,
  selectedInstitutionId: null,
};

/** New query: brush resets to the full span and any selection is cleared. */
export function withQuery(state: ViewState, query: string): ViewState {
  return { ...state, query, yearFrom: null, yearTo: null, selectedInstitutionId: null };
}

export function withBrush(state: ViewState, yearFrom: number, yearTo: number): ViewState {
  if (yearFrom > yearTo) {
    [yearFrom, yearTo] = [yearTo, yearFrom];
  }
  return { ...state, yearFrom, yearTo };
}

export function withFullSpan(state: ViewState): ViewState {
  return { ...state, yearFrom: null, yearTo: null };
}

export function withSelection(state: ViewState, institutionId: string | null): ViewState {
  return { ...state, selectedInstitutionId: institutionId };
}

export function withViewport(
  state: ViewState,
  centerLat: number,
  centerLon: number,
  zoom: number,
): ViewState {
  return { ...state, mapCenterLat: centerLat, mapCenterLon: centerLon, mapZoom: zoom };
}

const NUM = (value: string | null): number | null => {
  if (value === null || value === "") return null;
  const parsed = Number(value);
  return Number.isFinite(parsed) ? parsed : null;
};

export function encodeFragment(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.query) params.set("q", state.query);
  if (state.yearFrom !== null) params.set("yf", String(state.yearFrom));
  if (state.yearTo !== null) params.set("yt", String(state.yearTo));
  params.set("lat", state.mapCenterLat.toFixed(3));
  params.set("lon", state.mapCenterLon.toFixed(3));
  params.set("z", state.mapZoom.toFixed(2));
  if (state.selectedInstitutionId) params.set("sel", state.selectedInstitutionId);
  return `#${params.toString()}`;
}

export function decodeFragment(fragment: string): ViewState {
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const state: ViewState = { ...DEFAULT_VIEW };
  state.query = params.get("q") ?? "";
  const yearFrom = NUM(params.get("yf"));
  const yearTo = NUM(params.get("yt"));
  if (yearFrom !== null && yearTo !== null && yearFrom <= yearTo) {
    state.yearFrom = yearFrom;
    state.yearTo = yearTo;
  }
  state.mapCenterLat = NUM(params.get("lat")) ?? DEFAULT_VIEW.mapCenterLat;
  state.mapCenterLon = NUM(params.get("lon")) ?? DEFAULT_VIEW.mapCenterLon;
  state.mapZoom = NUM(params.get("z")) ?? DEFAULT_VIEW.mapZoom;
  state.selectedInstitutionId = params.get("sel");
  return state;
}
