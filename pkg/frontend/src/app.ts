/** DOM wiring: file picker / ?scene= loading, panes, and interaction. */

import { initialCompareState, renderCompare, compareOrbit, comparePan, compareZoom, CompareState } from "./compare";
import { isCompare, parseDocument } from "./document";
import { brushFromPixels, renderCollatedPlot, renderLoopPlot, PlotScale } from "./plots";
import { CanvasTarget, DrawTarget, renderScene } from "./render";
import {
  brushBoundaryRange,
  clearSelection,
  initialState,
  orbitCamera,
  panCamera,
  selectCluster,
  ViewState,
  zoomCamera,
} from "./state";
import { projectRadius, project } from "./projection";
import { CompareDocument, Document, SceneDocument } from "./types";

export type TargetFactory = (canvas: HTMLCanvasElement) => DrawTarget;

function canvasTarget(canvas: HTMLCanvasElement): DrawTarget {
  const ctx = canvas.getContext("2d");
  if (ctx === null) {
    throw new Error("canvas 2d context unavailable");
  }
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return new CanvasTarget(ctx, canvas.width, canvas.height);
}

/** Hit-test glyph spheres in screen space; nearest-center wins. */
export function pickCluster(
  scene: SceneDocument,
  state: ViewState,
  width: number,
  height: number,
  px: number,
  py: number,
): number | null {
  let best: number | null = null;
  let bestDist = Infinity;
  for (const cluster of scene.glyphs.clusters) {
    const glyph = scene.glyphs.displayed.find((g) => g.vertex === cluster.representative);
    if (glyph === undefined) {
      continue;
    }
    const p = project(state.camera, width, height,
      glyph.center as [number, number, number]);
    const d = Math.hypot(p.x - px, p.y - py);
    if (d <= projectRadius(state.camera, cluster.radius) && d < bestDist) {
      best = cluster.id;
      bestDist = d;
    }
  }
  return best;
}

export class SceneApp {
  private state: ViewState;
  private collatedScale: PlotScale | null = null;

  constructor(
    private scene: SceneDocument,
    private main: HTMLCanvasElement,
    private collated: HTMLCanvasElement | null,
    private loops: HTMLCanvasElement[],
    private target: TargetFactory = canvasTarget,
  ) {
    this.state = initialState(scene);
    this.attach();
    this.draw();
  }

  get viewState(): ViewState {
    return this.state;
  }

  private attach(): void {
    this.main.addEventListener("click", (ev) => {
      const picked = pickCluster(
        this.scene, this.state, this.main.width, this.main.height,
        ev.offsetX, ev.offsetY,
      );
      this.state = picked === null
        ? clearSelection(this.state)
        : selectCluster(this.state, this.scene, picked);
      this.draw();
    });
    this.main.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      this.state = zoomCamera(this.state, ev.deltaY < 0 ? 1.1 : 1 / 1.1);
      this.draw();
    });
    this.main.addEventListener("mousemove", (ev) => {
      if (ev.buttons === 1 && ev.shiftKey) {
        this.state = panCamera(this.state, ev.movementX, ev.movementY);
        this.draw();
      } else if (ev.buttons === 1 && this.scene.mesh.dimension === 3) {
        this.state = orbitCamera(this.state, ev.movementX * 0.01, ev.movementY * 0.01);
        this.draw();
      }
    });
    if (this.collated !== null && this.scene.boundary !== null) {
      let dragStart: number | null = null;
      this.collated.addEventListener("mousedown", (ev) => {
        dragStart = ev.offsetX;
      });
      this.collated.addEventListener("mouseup", (ev) => {
        if (dragStart !== null && this.collatedScale !== null) {
          const { lo, hi } = brushFromPixels(this.collatedScale, dragStart, ev.offsetX);
          this.state = brushBoundaryRange(this.state, this.scene, lo, hi);
          dragStart = null;
          this.draw();
        }
      });
    }
  }

  private draw(): void {
    renderScene(this.target(this.main), this.scene, this.state);
    if (this.collated !== null && this.scene.boundary !== null) {
      const brush = this.state.selection.kind === "boundary-range"
        ? { lo: this.state.selection.lo, hi: this.state.selection.hi }
        : null;
      this.collatedScale = renderCollatedPlot(
        this.target(this.collated), this.scene.boundary, brush,
      );
      this.loops.forEach((canvas, i) => {
        if (this.scene.boundary !== null && i < this.scene.boundary.loops.length) {
          renderLoopPlot(this.target(canvas), this.scene.boundary, i);
        }
      });
    }
  }
}

export class CompareApp {
  private state: CompareState;

  constructor(
    private doc: CompareDocument,
    private panes: [HTMLCanvasElement, HTMLCanvasElement],
    private target: TargetFactory = canvasTarget,
  ) {
    this.state = initialCompareState(doc);
    this.panes.forEach((canvas, i) => this.attach(canvas, i as 0 | 1));
    this.draw();
  }

  get compareState(): CompareState {
    return this.state;
  }

  private attach(canvas: HTMLCanvasElement, pane: 0 | 1): void {
    canvas.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      this.state = compareZoom(this.state, pane, ev.deltaY < 0 ? 1.1 : 1 / 1.1);
      this.draw();
    });
    canvas.addEventListener("mousemove", (ev) => {
      if (ev.buttons === 1 && ev.shiftKey) {
        this.state = comparePan(this.state, pane, ev.movementX, ev.movementY);
        this.draw();
      } else if (ev.buttons === 1) {
        this.state = compareOrbit(this.state, pane, ev.movementX * 0.01, ev.movementY * 0.01);
        this.draw();
      }
    });
  }

  private draw(): void {
    renderCompare(
      [this.target(this.panes[0]), this.target(this.panes[1])],
      this.doc,
      this.state,
    );
  }
}

function banner(message: string): void {
  const el = document.getElementById("banner");
  if (el !== null) {
    el.textContent = message;
    el.classList.remove("hidden");
  }
}

function mount(doc: Document): void {
  const app = document.getElementById("app");
  if (app === null) {
    return;
  }
  app.innerHTML = "";
  if (isCompare(doc)) {
    const panes: HTMLCanvasElement[] = doc.labels.map((label) => {
      const wrap = document.createElement("div");
      const title = document.createElement("h3");
      title.textContent = label;
      const canvas = document.createElement("canvas");
      canvas.width = 480;
      canvas.height = 480;
      wrap.append(title, canvas);
      app.append(wrap);
      return canvas;
    });
    new CompareApp(doc, [panes[0], panes[1]]);
    return;
  }
  const main = document.createElement("canvas");
  main.width = 800;
  main.height = 600;
  app.append(main);
  let collated: HTMLCanvasElement | null = null;
  const loopCanvases: HTMLCanvasElement[] = [];
  if (doc.boundary !== null) {
    collated = document.createElement("canvas");
    collated.width = 400;
    collated.height = 240;
    app.append(collated);
    for (let i = 0; i < doc.boundary.loops.length; i++) {
      const canvas = document.createElement("canvas");
      canvas.width = 400;
      canvas.height = 160;
      app.append(canvas);
      loopCanvases.push(canvas);
    }
  }
  new SceneApp(doc, main, collated, loopCanvases);
}

export async function loadFromUrl(url: string): Promise<void> {
  const response = await fetch(url);
  if (!response.ok) {
    banner(`failed to fetch ${url}: ${response.status}`);
    return;
  }
  try {
    mount(parseDocument(await response.text()));
  } catch (err) {
    banner((err as Error).message);
  }
}

export function start(): void {
  const params = new URLSearchParams(window.location.search);
  const sceneUrl = params.get("scene");
  if (sceneUrl !== null) {
    void loadFromUrl(sceneUrl);
  }
  const picker = document.getElementById("picker") as HTMLInputElement | null;
  picker?.addEventListener("change", () => {
    const file = picker.files?.[0];
    if (file === undefined) {
      return;
    }
    void file.text().then((text) => {
      try {
        mount(parseDocument(text));
      } catch (err) {
        banner((err as Error).message);
      }
    });
  });
}
