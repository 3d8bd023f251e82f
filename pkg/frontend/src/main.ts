// Application wiring: fetch the corpus surfaces, construct the four views
// around the one selection store, and keep model runs in sync with the
// active target.

import { ApiClient } from "./api";
import { SelectionStore } from "./state";
import type { ChannelName, FeaturesResponse, ProjectionResponse, SegmentsResponse, TargetName } from "./types";
import { ExplorationView, RunBundle } from "./views/exploration";
import { RecordsView } from "./views/records";
import { SegmentView } from "./views/segment";
import { SessionView } from "./views/session";

export interface AppHandles {
  store: SelectionStore;
  session: SessionView;
  segment: SegmentView;
  exploration: ExplorationView;
  records: RecordsView;
  setGranularity: (granularity: 1 | 5) => Promise<void>;
  setTarget: (target: TargetName) => Promise<void>;
  grids: Record<number, SegmentsResponse>;
}

export async function bootstrap(
  root: HTMLElement,
  api: ApiClient,
  seed = 0,
): Promise<AppHandles> {
  root.innerHTML = `
    <header class="app-header">livestream retrospect</header>
    <main class="app-grid">
      <section id="session-view" class="view"><h2>Session View</h2><div class="view-body"></div></section>
      <section id="segment-view" class="view"><h2>Segment View</h2><div class="view-body"></div></section>
      <section id="exploration-view" class="view"><h2>Exploration View</h2><div class="view-body"></div></section>
      <section id="records-view" class="view"><h2>Record View</h2><div class="view-body"></div></section>
    </main>`;
  const mount = (id: string) => root.querySelector<HTMLElement>(`#${id} .view-body`)!;

  const store = new SelectionStore();
  const sessions = await api.sessions();
  const clips = await api.clips(sessions[0].session_id);
  const clipId = clips[0].clip_id;
  store.set({ clipId, origin: "none" });

  let granularity: 1 | 5 = 1;
  const grids: Record<number, SegmentsResponse> = {};
  const projections: Record<number, ProjectionResponse> = {};
  grids[1] = await api.segments(clipId, 1);
  projections[1] = await api.projection(clipId, 1, seed);
  const features: FeaturesResponse = await api.features(clipId);
  const comments = await api.commentsSummary(clipId);

  const fetchRun = async (target: TargetName): Promise<RunBundle> => {
    const status = await api.awaitRun(clipId, target, seed);
    const run = status.run!;
    return {
      run,
      channels: await api.channelAttributions(run.run_id),
      merchandise: await api.merchandiseAttributions(run.run_id),
    };
  };

  const sessionView = new SessionView(mount("session-view"), store, sessions, () => grids[granularity]);
  const segmentView = new SegmentView(
    mount("segment-view"), store, grids[1], projections[1],
    (g) => void setGranularity(g),
  );
  const explorationView: ExplorationView = new ExplorationView(
    mount("exploration-view"), store, grids[1], features, comments,
    (target) => void setTarget(target),
    (channel: ChannelName) => {
      const runId: string | undefined = explorationView.currentRun()?.run.run_id;
      return runId ? api.featureAttributions(runId, channel, true) : Promise.resolve([]);
    },
  );
  const recordsView = new RecordsView(
    mount("records-view"), store, api, () => granularity,
    (segments, g) => {
      const grid = grids[g];
      return grid
        ? segments.flatMap((i) => (grid.segments[i] ? [[grid.segments[i].start_ts, grid.segments[i].end_ts] as [number, number]] : []))
        : [];
    },
  );
  await recordsView.refresh();

  async function setGranularity(g: 1 | 5): Promise<void> {
    granularity = g;
    if (!grids[g]) {
      grids[g] = await api.segments(clipId, g);
      projections[g] = await api.projection(clipId, g, seed);
    }
    segmentView.update(grids[g], projections[g]);
  }

  async function setTarget(target: TargetName): Promise<void> {
    store.setTarget(target, "exploration");
    explorationView.setPending(true);
    explorationView.setRun(await fetchRun(target));
  }

  await setTarget(store.get().target);

  return {
    store,
    session: sessionView,
    segment: segmentView,
    exploration: explorationView,
    records: recordsView,
    setGranularity,
    setTarget,
    grids,
  };
}

// browser entry point; tests call bootstrap() directly with a stubbed client
if (typeof document !== "undefined" && document.getElementById("app")) {
  // e.g. index.html?api=http://127.0.0.1:8321 when the API runs elsewhere
  const base = new URLSearchParams(window.location.search).get("api") ?? "";
  void bootstrap(document.getElementById("app")!, new ApiClient(base));
}
