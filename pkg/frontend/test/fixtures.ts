// In-memory fake of the atlas API, serving the T1 reference corpus values
// (quantum: I1 scores 1.6649130 in 2019, I2 scores 0.8813736).

import type { FetchLike } from "../src/api.js";
import type {
  DocumentResult,
  HeatmapCell,
  InstitutionResult,
  ShoeboxEntry,
  TimelineBucket,
} from "../src/types.js";

export const SCORE_I1 = 1.6649130173488096;
export const SCORE_I2 = 0.8813735870195428;

export const T1_INSTITUTIONS: InstitutionResult[] = [
  {
    institution_id: "I1",
    name: "Institution One",
    latitude: 40.0,
    longitude: -74.0,
    score: SCORE_I1,
    per_year: { "2019": SCORE_I1 },
  },
  {
    institution_id: "I2",
    name: "Institution Two",
    latitude: 48.0,
    longitude: 2.0,
    score: SCORE_I2,
    per_year: { "2019": SCORE_I2 },
  },
];

export const T1_BUCKETS: TimelineBucket[] = [
  { year: 2019, total: SCORE_I1 + SCORE_I2, relative: 1.0 },
  { year: 2020, total: 0.0, relative: 0.0 },
];

export const T1_CELLS: HeatmapCell[] = [
  {
    cell_lat_index: 130,
    cell_lon_index: 106,
    center_latitude: 40.5,
    center_longitude: -73.5,
    value: SCORE_I1,
  },
  {
    cell_lat_index: 138,
    cell_lon_index: 182,
    center_latitude: 48.5,
    center_longitude: 2.5,
    value: SCORE_I2,
  },
];

export const T1_DOCUMENTS: Record<string, DocumentResult[]> = {
  I1: [
    {
      doi: "10.1/d1",
      title: "Quantum quantum quantum advances",
      year: 2019,
      institution_ids: ["I1"],
      score: SCORE_I1,
      citation_count: 12,
      open_access: true,
    },
  ],
  I2: [
    {
      doi: "10.1/d3",
      title: "Quantum sensing",
      year: 2019,
      institution_ids: ["I2"],
      score: SCORE_I2,
      citation_count: 0,
      open_access: false,
    },
  ],
};

interface RecordedRequest {
  url: string;
  method: string;
  body: unknown;
}

function inRange(year: number, from: string | null, to: string | null): boolean {
  if (from !== null && year < Number(from)) return false;
  if (to !== null && year > Number(to)) return false;
  return true;
}

export class FakeBackend {
  requests: RecordedRequest[] = [];
  shoebox: ShoeboxEntry[] = [];
  /** When true, every request 500s until cleared (server down). */
  failAll = false;
  private nextId = 1;
  /** Optional gate: url substring -> resolver trigger for delayed replies. */
  private gates = new Map<string, () => void>();
  private waiters = new Map<string, Promise<void>>();

  delay(substring: string): void {
    let release!: () => void;
    const wait = new Promise<void>((resolve) => (release = resolve));
    this.gates.set(substring, release);
    this.waiters.set(substring, wait);
  }

  release(substring: string): void {
    this.gates.get(substring)?.();
    this.gates.delete(substring);
    this.waiters.delete(substring);
  }

  fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    this.requests.push({ url, method, body });

    for (const [substring, wait] of this.waiters) {
      if (url.includes(substring)) await wait;
    }

    if (this.failAll) {
      return json(
        { status: 500, code: "internal_error", message: "synthetic failure" },
        500,
      );
    }

    const parsed = new URL(url, "http://test.local");
    const path = parsed.pathname;
    const params = parsed.searchParams;
    const q = params.get("q") ?? "";
    const from = params.get("year_from");
    const to = params.get("year_to");

    if (path === "/api/timeline") {
      return json({ query: q, buckets: q === "quantum" ? T1_BUCKETS : zeroBuckets() });
    }
    if (path === "/api/heatmap") {
      const cells =
        q === "quantum"
          ? T1_CELLS.filter(() => inRange(2019, from, to))
          : [];
      return json({
        query: q,
        year_from: Number(from ?? 2019),
        year_to: Number(to ?? 2020),
        cell_degrees: Number(params.get("cells") ?? 1),
        cells,
      });
    }
    if (path === "/api/institutions") {
      const results =
        q === "quantum" && inRange(2019, from, to) ? T1_INSTITUTIONS : [];
      return json({
        query: q,
        year_from: Number(from ?? 2019),
        year_to: Number(to ?? 2020),
        results,
      });
    }
    if (path === "/api/documents") {
      const institution = params.get("institution") ?? "";
      const docs =
        q === "quantum" && inRange(2019, from, to)
          ? T1_DOCUMENTS[institution] ?? []
          : [];
      return json({
        query: q,
        institution,
        year_from: Number(from ?? 2019),
        year_to: Number(to ?? 2020),
        results: docs,
      });
    }
    if (path === "/api/shoebox" && method === "GET") {
      return json({ entries: [...this.shoebox].reverse() });
    }
    if (path === "/api/shoebox" && method === "POST") {
      if (!body.doi || !String(body.doi).trim()) {
        return json({ status: 400, code: "missing_doi", message: "doi required" }, 400);
      }
      const now = new Date().toISOString();
      const entry: ShoeboxEntry = {
        entry_id: `e${String(this.nextId++).padStart(6, "0")}`,
        doi: body.doi,
        title: body.title ?? "",
        query: body.query ?? "",
        institution_id: body.institution_id ?? "",
        year_from: body.year_from ?? 0,
        year_to: body.year_to ?? 0,
        notes: "",
        created_at: now,
        updated_at: now,
      };
      this.shoebox.push(entry);
      return json(entry, 201);
    }
    const patch = path.match(/^\/api\/shoebox\/(.+)$/);
    if (patch && method === "PATCH") {
      const entry = this.shoebox.find((e) => e.entry_id === patch[1]);
      if (!entry) return json({ status: 404, code: "not_found", message: "gone" }, 404);
      entry.notes = body.notes;
      entry.updated_at = new Date().toISOString();
      return json(entry);
    }
    if (patch && method === "DELETE") {
      const index = this.shoebox.findIndex((e) => e.entry_id === patch[1]);
      if (index < 0) return json({ status: 404, code: "not_found", message: "gone" }, 404);
      this.shoebox.splice(index, 1);
      return new Response(null, { status: 204 });
    }
    return json({ status: 404, code: "not_found", message: path }, 404);
  };
}

function zeroBuckets(): TimelineBucket[] {
  return T1_BUCKETS.map((bucket) => ({ ...bucket, total: 0, relative: 0 }));
}

function json(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}
