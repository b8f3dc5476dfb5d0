// API payload shapes, mirroring the server's JSON field names exactly.

export interface InstitutionResult {
  institution_id: string;
  name: string | null;
  latitude: number | null;
  longitude: number | null;
  score: number;
  per_year: Record<string, number>;
}

export interface InstitutionsResponse {
  query: string;
  year_from: number;
  year_to: number;
  results: InstitutionResult[];
}

export interface DocumentResult {
  doi: string;
  title: string;
  year: number;
  institution_ids: string[];
  score: number;
  citation_count: number;
  open_access: boolean;
}

export interface DocumentsResponse {
  query: string;
  institution: string | null;
  year_from: number;
  year_to: number;
  results: DocumentResult[];
}

export interface TimelineBucket {
  year: number;
  total: number;
  relative: number;
}

export interface TimelineResponse {
  query: string;
  buckets: TimelineBucket[];
}

export interface HeatmapCell {
  cell_lat_index: number;
  cell_lon_index: number;
  center_latitude: number;
  center_longitude: number;
  value: number;
}

export interface HeatmapResponse {
  query: string;
  year_from: number;
  year_to: number;
  cell_degrees: number;
  cells: HeatmapCell[];
}

export interface ShoeboxEntry {
  entry_id: string;
  doi: string;
  title: string;
  query: string;
  institution_id: string;
  year_from: number;
  year_to: number;
  notes: string;
  created_at: string;
  updated_at: string;
}

export interface ShoeboxCreateBody {
  doi: string;
  title: string;
  query: string;
  institution_id: string;
  year_from: number;
  year_to: number;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}
