// Board controller: poll the session, render, route clicks to the service.

import { ApiError, SessionApi, SessionState, instantiateSchema } from "./client.js";
import { Clickable, PositionView, viewModel } from "./view.js";

const POLL_MS = 1000;

const $ = (id: string) => document.getElementById(id) as HTMLElement;

let api = new SessionApi("http://127.0.0.1:8717");
let sessionId: string | null = null;
let polling: number | null = null;

function actionButton(action: Clickable, onPick: (move: string) => void): HTMLElement {
  const wrap = document.createElement("span");
  wrap.className = "action";
  const button = document.createElement("button");
  button.textContent = action.label;
  let input: HTMLInputElement | null = null;
  if (action.needsConstant) {
    input = document.createElement("input");
    input.placeholder = "binary numeral";
    input.size = 8;
    wrap.appendChild(input);
  }
  button.addEventListener("click", () => {
    try {
      onPick(instantiateSchema(action.schema, input?.value.trim()));
    } catch (err) {
      banner(String(err));
    }
  });
  wrap.appendChild(button);
  return wrap;
}

function banner(text: string) {
  $("banner").textContent = text;
}

function render(view: PositionView) {
  const succ = $("succedent");
  succ.textContent = view.succedent + " ";
  for (const action of view.succedentActions) {
    succ.appendChild(actionButton(action, submitMove));
  }
  const closure = $("closure");
  closure.textContent = view.closurePrompts.length ? "pick opening constants: " : "";
  for (const action of view.closurePrompts) {
    closure.appendChild(actionButton(action, submitMove));
  }
  const trees = $("antecedent");
  trees.textContent = "";
  for (const tree of view.antecedent) {
    const box = document.createElement("div");
    box.className = "tree";
    const title = document.createElement("div");
    title.textContent = `antecedent ${tree.slot}`;
    box.appendChild(title);
    for (const leaf of tree.leaves) {
      const row = document.createElement("div");
      row.className = "leaf";
      row.textContent = `[${leaf.address || "ε"}] ${leaf.formula} `;
      for (const action of leaf.actions) {
        row.appendChild(actionButton(action, submitMove));
      }
      box.appendChild(row);
    }
    trees.appendChild(box);
  }
  const log = $("runlog");
  log.textContent = "";
  for (const entry of view.runLog) {
    const li = document.createElement("li");
    li.textContent = `${entry.badge} ${entry.move}`;
    log.appendChild(li);
  }
  banner(view.verdictBanner ?? "");
  ($("tick") as HTMLInputElement).max = String(view.tick);
}

function show(state: SessionState) {
  render(viewModel(state));
}

async function submitMove(move: string) {
  if (!sessionId) return;
  try {
    show(await api.submitMoves(sessionId, [move]));
  } catch (err) {
    banner(err instanceof ApiError && err.status === 409 ? "not your turn" : String(err));
  }
}

async function refresh() {
  if (!sessionId) return;
  try {
    show(await api.getSession(sessionId));
  } catch {
    // keep the last rendering; the next poll retries
  }
}

function startPolling() {
  if (polling !== null) window.clearInterval(polling);
  polling = window.setInterval(refresh, POLL_MS);
}

async function newSession() {
  api = new SessionApi(($("base") as HTMLInputElement).value);
  const spec = {
    sequent: ($("sequent") as HTMLTextAreaElement).value,
    proof: JSON.parse(($("proof") as HTMLTextAreaElement).value),
    interpretation: JSON.parse(($("interp") as HTMLTextAreaElement).value),
    humanSide: "env" as const,
  };
  try {
    const state = await api.createSession(spec);
    sessionId = state.id;
    show(state);
    startPolling();
  } catch (err) {
    banner(String(err));
  }
}

async function undoTo() {
  if (!sessionId) return;
  const tick = Number(($("tick") as HTMLInputElement).value);
  try {
    show(await api.undo(sessionId, tick));
  } catch (err) {
    banner(String(err));
  }
}

export function init() {
  $("start").addEventListener("click", newSession);
  $("undo").addEventListener("click", undoTo);
}

if (typeof document !== "undefined" && document.getElementById("start")) {
  init();
}
