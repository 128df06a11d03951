/**
 * Single-page app for expert review and blinded A/B rating.
 *
 * All state is a projection of service responses; nothing is decided
 * client-side beyond input validation. Articles render with dir=rtl for
 * right-to-left languages, and span offsets are always computed on the NFC
 * string in logical order.
 */

import { ApiError, CurationClient, VersionConflictError } from "./api.js";
import {
  buildRatingPayload,
  markCompleted,
  OfflineQueue,
  resumeIndex,
  sessionDone,
} from "./rating.js";
import {
  addSpan,
  buildReviewBody,
  emptyDraft,
  removeSpan,
  RUBRIC_FLAGS,
  type CorrectionDraft,
} from "./review.js";
import { normalizeNfc, selectionToSpan } from "./spans.js";
import {
  RATING_DIMENSIONS,
  textDirection,
  type RatingSession,
  type ReviewItem,
} from "./types.js";

const VOCABULARY = ["Low", "Medium", "High"];

const root = document.getElementById("app")!;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function clear(node: HTMLElement): void {
  node.replaceChildren();
}

function banner(message: string, kind: "error" | "info" = "info"): HTMLElement {
  return el("div", { class: `banner ${kind}` }, [message]);
}

// --- connection screen -------------------------------------------------------

function connectScreen(): void {
  clear(root);
  const base = el("input", { value: "http://127.0.0.1:8000", size: "40" });
  const token = el("input", { placeholder: "session token", size: "40" });
  const expertButton = el("button", {}, ["Expert review"]);
  const raterButton = el("button", {}, ["Blinded A/B rating"]);
  expertButton.onclick = () => {
    const client = new CurationClient({ baseUrl: base.value, token: token.value });
    void queueScreen(client);
  };
  raterButton.onclick = () => {
    const client = new CurationClient({ baseUrl: base.value, token: token.value });
    void ratingScreen(client);
  };
  root.append(
    el("h1", {}, ["newsadapt curation"]),
    el("p", {}, ["Service URL: ", base]),
    el("p", {}, ["Token: ", token]),
    el("p", {}, [expertButton, " ", raterButton]),
  );
}

// --- expert mode --------------------------------------------------------------

async function queueScreen(client: CurationClient): Promise<void> {
  clear(root);
  root.append(el("h1", {}, ["Review queue"]));
  try {
    const { items } = await client.queue();
    const list = el("ul");
    for (const entry of items) {
      const open = el("button", {}, [`${entry.item_id} [${entry.status}]`]);
      open.onclick = () => void reviewScreen(client, entry.item_id);
      list.append(el("li", {}, [open, ` ${entry.language}`]));
    }
    root.append(list.children.length ? list : banner("queue is empty"));
  } catch (error) {
    root.append(banner(String(error), "error"));
  }
}

async function reviewScreen(client: CurationClient, itemId: string): Promise<void> {
  let item: ReviewItem;
  try {
    item = await client.item(itemId);
  } catch (error) {
    clear(root);
    root.append(banner(String(error), "error"));
    return;
  }
  let draft: CorrectionDraft = emptyDraft();

  const render = (): void => {
    clear(root);
    const article = normalizeNfc(item.article_text);
    const articleBox = el(
      "div",
      { class: "article", dir: textDirection(item.language) },
      [article],
    );
    articleBox.onmouseup = () => {
      const selection = window.getSelection();
      if (!selection || selection.isCollapsed) return;
      const range = selection.getRangeAt(0);
      if (
        range.startContainer !== articleBox.firstChild ||
        range.endContainer !== articleBox.firstChild
      ) {
        return; // selection crossed out of the article text node
      }
      try {
        draft = addSpan(draft, selectionToSpan(article, range.startOffset, range.endOffset));
        render();
      } catch {
        // empty or out-of-range selection: ignore
      }
    };

    const spanList = el("ul");
    draft.spans.forEach((span, index) => {
      const drop = el("button", {}, ["remove"]);
      drop.onclick = () => {
        draft = removeSpan(draft, index);
        render();
      };
      spanList.append(
        el("li", { dir: textDirection(item.language) }, [
          `[${span.start}, ${span.end}) "${span.text}" `,
          drop,
        ]),
      );
    });

    const severity = el("select");
    severity.append(el("option", { value: "" }, ["(choose severity)"]));
    for (const label of [...VOCABULARY, "None"]) {
      const option = el("option", { value: label }, [label]);
      if (draft.severity === label) option.selected = true;
      severity.append(option);
    }
    severity.onchange = () => {
      draft = { ...draft, severity: severity.value || null };
    };

    const rationale = el("textarea", { rows: "4", cols: "70" });
    rationale.value = draft.rationale;
    rationale.oninput = () => {
      draft = { ...draft, rationale: rationale.value };
    };

    const rubricBox = el("div");
    for (const flag of RUBRIC_FLAGS) {
      const yes = el("input", { type: "checkbox" });
      yes.checked = draft.rubric[flag] === true;
      yes.onchange = () => {
        draft = { ...draft, rubric: { ...draft.rubric, [flag]: yes.checked } };
      };
      rubricBox.append(el("label", {}, [yes, ` ${flag.replaceAll("_", " ")}`]), el("br"));
    }

    const problems = el("div", { class: "problems" });
    const submit = el("button", {}, ["Submit correction"]);
    submit.onclick = async () => {
      try {
        const body = buildReviewBody(draft, article, VOCABULARY, item.version);
        item = await client.submitReview(item.item_id, body);
        draft = emptyDraft();
        render();
      } catch (error) {
        if (error instanceof VersionConflictError) {
          problems.replaceChildren(
            banner("item changed on the server; reloading", "error"),
          );
          item = await client.item(item.item_id);
          render();
          return;
        }
        problems.replaceChildren(banner(String(error), "error"));
      }
    };

    const back = el("button", {}, ["back to queue"]);
    back.onclick = () => void queueScreen(client);

    root.append(
      el("h1", {}, [`${item.item_id} — ${item.status} (v${item.version})`]),
      articleBox,
      el("h2", {}, ["Model assessment under review"]),
      el("pre", {}, [JSON.stringify(item.model_assessment, null, 2)]),
      el("h2", {}, ["Selected spans (drag in the article text)"]),
      spanList,
      el("p", {}, ["Severity: ", severity]),
      el("p", {}, ["Rationale:", el("br"), rationale]),
      el("h2", {}, ["Rubric"]),
      rubricBox,
      el("p", {}, [submit, " ", back]),
      problems,
    );
  };
  render();
}

// --- evaluator mode -------------------------------------------------------------

async function ratingScreen(client: CurationClient): Promise<void> {
  let session: RatingSession;
  try {
    session = await client.ratingSession();
  } catch (error) {
    clear(root);
    root.append(banner(String(error), "error"));
    return;
  }
  const offline = new OfflineQueue();
  const submitOne = (itemId: string, payload: Parameters<typeof client.submitRating>[1]) =>
    client.submitRating(itemId, payload);

  const render = (): void => {
    clear(root);
    if (sessionDone(session)) {
      root.append(
        el("h1", {}, ["All items rated"]),
        banner(`completed ${session.progress.completed}/${session.progress.total}`),
      );
      return;
    }
    const item = session.items[resumeIndex(session)];
    const scores: Record<"left" | "right", Record<string, number>> = {
      left: {},
      right: {},
    };

    const likertRow = (side: "left" | "right", dim: string): HTMLElement => {
      const row = el("span");
      for (const value of [1, 2, 3, 4]) {
        const pick = el("input", { type: "radio", name: `${side}-${dim}` });
        pick.onchange = () => {
          scores[side][dim] = value;
        };
        row.append(pick, String(value), " ");
      }
      return row;
    };

    const sideBox = (side: "left" | "right", rationale: string): HTMLElement => {
      const box = el("div", { class: "side" });
      box.append(
        el("h3", {}, [side === "left" ? "Rationale A" : "Rationale B"]),
        el("blockquote", { dir: "auto" }, [rationale || "(empty)"]),
      );
      for (const dim of RATING_DIMENSIONS) {
        box.append(
          el("p", {}, [`${dim.replaceAll("_", " ")}: `, likertRow(side, dim)]),
        );
      }
      return box;
    };

    const problems = el("div", { class: "problems" });
    const submit = el("button", {}, ["Submit and continue"]);
    submit.onclick = async () => {
      let payload;
      try {
        payload = buildRatingPayload(scores.left, scores.right);
      } catch (error) {
        problems.replaceChildren(banner(String(error), "error"));
        return;
      }
      await offline.flush(submitOne); // deliver anything still queued first
      try {
        const result = await client.submitRating(item.item_id, payload);
        session = markCompleted(session, item.item_id);
        session.progress = result.progress;
        render();
      } catch (error) {
        if (error instanceof ApiError) {
          // the service rejected it (validation, membership): surface as-is
          problems.replaceChildren(banner(String(error), "error"));
          return;
        }
        // transport failure: queue for retry and move on
        offline.enqueue(item.item_id, payload);
        session = markCompleted(session, item.item_id);
        render();
        root.append(
          banner(`offline: ${offline.size} submission(s) queued for retry`),
        );
      }
    };

    root.append(
      el("h1", {}, [
        `Item ${session.progress.completed + 1} of ${session.progress.total}`,
      ]),
      el("div", { class: "article", dir: textDirection(item.language) }, [
        item.item_text,
      ]),
      sideBox("left", item.left_rationale),
      sideBox("right", item.right_rationale),
      el("p", {}, [submit]),
      problems,
    );
  };
  render();
}

connectScreen();
