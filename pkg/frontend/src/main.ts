import { ManualClient } from "./client.js";
import { topicHtml } from "./markup.js";
import { completions, rankSearch } from "./search.js";
import { ViewerState } from "./state.js";
import { expansionOrder, rootKey } from "./tree.js";
import type { SearchEntry, TopicRecord } from "./types.js";

let client: ManualClient;
let state: ViewerState;
let byKey: Map<string, SearchEntry>;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function content(): HTMLElement {
  return document.getElementById("content") as HTMLElement;
}

function topicLink(key: string): HTMLAnchorElement {
  const entry = byKey.get(key);
  const link = el("a");
  link.href = "#!/" + encodeURIComponent(key);
  link.textContent = (entry ? entry[1] : key).toLowerCase();
  if (entry && entry[2]) link.title = entry[2];
  return link;
}

function showError(message: string): void {
  const panel = el("div", "box");
  panel.textContent = "Cannot load the manual: " + message;
  content().replaceChildren(panel);
}

function renderNotFound(key: string): void {
  const wrap = el("div");
  wrap.appendChild(el("h1", undefined, "Topic not found"));
  wrap.appendChild(el("p", undefined, `No topic has the key ${key}. Search instead:`));
  const input = el("input");
  input.type = "text";
  input.addEventListener("input", () => renderSearchInto(resultBox, input.value));
  const resultBox = el("div");
  wrap.appendChild(input);
  wrap.appendChild(resultBox);
  content().replaceChildren(wrap);
}

function searchResultList(entries: SearchEntry[]): HTMLUListElement {
  const list = el("ul", "search-results");
  for (const entry of entries) {
    const item = el("li");
    item.appendChild(topicLink(entry[0]));
    if (entry[2]) item.appendChild(document.createTextNode(" — " + entry[2]));
    list.appendChild(item);
  }
  return list;
}

function renderSearchInto(target: HTMLElement, query: string): void {
  target.replaceChildren(searchResultList(rankSearch(query, client.index.search)));
}

function renderSearchPage(query: string): void {
  const wrap = el("div");
  wrap.appendChild(el("h1", undefined, "Search: " + query));
  wrap.appendChild(searchResultList(rankSearch(query, client.index.search)));
  content().replaceChildren(wrap);
}

async function topicBody(key: string, record: TopicRecord): Promise<HTMLElement> {
  const body = el("article", "topic");
  const heading = el("h1", undefined, record.package + "::" + record.name);
  heading.id = "topic-" + key;
  body.appendChild(heading);
  body.appendChild(el("div", "origin", record.origin));
  if (record.parents.length) {
    const parents = el("p", "parents", "Parents: ");
    record.parents.forEach((parent, i) => {
      if (i) parents.appendChild(document.createTextNode(", "));
      parents.appendChild(topicLink(parent));
    });
    body.appendChild(parents);
  }
  const shortDiv = el("div", "short");
  shortDiv.innerHTML = topicHtml(record.short_html);
  body.appendChild(shortDiv);
  const longDiv = el("div", "long");
  longDiv.innerHTML = topicHtml(record.long_html);
  body.appendChild(longDiv);
  return body;
}

async function renderSubtopics(key: string, target: HTMLElement): Promise<void> {
  const children = client.index.tree[key] ?? [];
  if (!children.length) return;
  const head = el("h3", undefined, "Subtopics");
  const toggle = el("button", "expand-toggle");
  toggle.textContent = state.isExpanded(key) ? "collapse" : "expand all";
  toggle.addEventListener("click", () => {
    state.toggle(key);
    void route();
  });
  head.appendChild(document.createTextNode(" "));
  head.appendChild(toggle);
  target.appendChild(head);
  const list = el("ul", "children");
  for (const child of children) {
    const item = el("li");
    item.appendChild(topicLink(child));
    const entry = byKey.get(child);
    if (entry && entry[2]) item.appendChild(document.createTextNode(" — " + entry[2]));
    list.appendChild(item);
  }
  target.appendChild(list);
  if (state.isExpanded(key)) {
    const inline = el("div", "expansion");
    for (const descendant of expansionOrder(key, client.index.tree)) {
      const record = await client.topic(descendant);
      if (record) inline.appendChild(await topicBody(descendant, record));
    }
    target.appendChild(inline);
  }
}

async function renderTopicPage(key: string): Promise<void> {
  const record = await client.topic(key);
  if (!record) {
    renderNotFound(key);
    return;
  }
  state.visit(key);
  const wrap = el("div");
  wrap.appendChild(await topicBody(key, record));
  await renderSubtopics(key, wrap);
  content().replaceChildren(wrap);
}

function renderTree(): void {
  const treeRoot = document.getElementById("tree") as HTMLElement;
  const build = (key: string): HTMLLIElement => {
    const item = el("li");
    const children = client.index.tree[key] ?? [];
    if (children.length) {
      const toggle = el("span", "toggle", "+");
      const sub = el("ul");
      sub.hidden = true;
      toggle.addEventListener("click", () => {
        sub.hidden = !sub.hidden;
        toggle.textContent = sub.hidden ? "+" : "-";
        if (!sub.hidden && !sub.childNodes.length) {
          for (const child of children) sub.appendChild(build(child));
        }
      });
      item.appendChild(toggle);
      item.appendChild(topicLink(key));
      item.appendChild(sub);
    } else {
      item.appendChild(document.createTextNode("  "));
      item.appendChild(topicLink(key));
    }
    return item;
  };
  treeRoot.replaceChildren(build(rootKey(client.index)));
}

function renderFlatList(): void {
  const flat = document.getElementById("flat") as HTMLElement;
  const sorted = [...client.index.search].sort((a, b) => (a[1] < b[1] ? -1 : 1));
  flat.replaceChildren(searchResultList(sorted));
}

function wireJumpBox(): void {
  const jump = document.getElementById("jump") as HTMLInputElement;
  const list = document.getElementById("jump-completions") as HTMLDataListElement;
  jump.addEventListener("input", () => {
    list.replaceChildren(
      ...completions(jump.value, client.index.search).map((entry) => {
        const option = el("option");
        option.value = entry[1].toLowerCase();
        return option;
      }),
    );
  });
  jump.addEventListener("keydown", (event) => {
    if (event.key !== "Enter") return;
    const results = rankSearch(jump.value, client.index.search);
    if (results.length && results[0][1].toLowerCase() === jump.value.trim().toLowerCase()) {
      window.location.hash = "#!/" + encodeURIComponent(results[0][0]);
    } else {
      renderSearchPage(jump.value);
    }
  });
}

async function route(): Promise<void> {
  const hash = window.location.hash;
  if (hash.startsWith("#!/")) {
    await renderTopicPage(decodeURIComponent(hash.slice(3)));
  } else {
    await renderTopicPage(rootKey(client.index));
  }
}

async function init(): Promise<void> {
  try {
    client = await ManualClient.load("");
  } catch (err) {
    showError(err instanceof Error ? err.message : String(err));
    return;
  }
  state = new ViewerState(client.index);
  byKey = new Map(client.index.search.map((entry) => [entry[0], entry]));
  renderTree();
  renderFlatList();
  wireJumpBox();
  const download = document.getElementById("download") as HTMLAnchorElement;
  if (client.hasDownload()) download.hidden = false;
  window.addEventListener("hashchange", () => void route());
  await route();
}

void init();
