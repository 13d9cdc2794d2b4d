/** Mapping of the manual's XML-subset markup onto HTML.
 *
 * The input is the canonical serialization stored in xdata.json: lowercase
 * whitelisted tags, single-quoted attributes, a fixed entity set. Internal
 * see-links become in-app hash links; viewer-specific tags get HTML
 * equivalents; everything else passes through unchanged.
 */

interface TagToken {
  kind: "open" | "close" | "self";
  name: string;
  attrs: Map<string, string>;
  raw: string;
}

const TAG_RE = /<(\/?)([a-z][a-z0-9]*)((?:\s+[a-z][a-z0-9-]*='[^']*')*)\s*(\/?)>/y;
const ATTR_RE = /([a-z][a-z0-9-]*)='([^']*)'/g;

function decodeEntities(value: string): string {
  return value
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&quot;/g, '"')
    .replace(/&apos;/g, "'")
    .replace(/&nbsp;/g, " ")
    .replace(/&amp;/g, "&");
}

function escapeAttr(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/"/g, "&quot;")
    .replace(/</g, "&lt;");
}

function readTag(text: string, pos: number): TagToken | null {
  TAG_RE.lastIndex = pos;
  const match = TAG_RE.exec(text);
  if (!match) return null;
  const [raw, slash, name, attrText, selfSlash] = match;
  const attrs = new Map<string, string>();
  for (const attrMatch of attrText.matchAll(ATTR_RE)) {
    attrs.set(attrMatch[1], decodeEntities(attrMatch[2]));
  }
  const kind = slash ? "close" : selfSlash ? "self" : "open";
  return { kind, name, attrs, raw };
}

function openTag(name: string, attrs: Record<string, string>): string {
  const parts = [`<${name}`];
  for (const [key, value] of Object.entries(attrs)) {
    parts.push(` ${key}="${escapeAttr(value)}"`);
  }
  parts.push(">");
  return parts.join("");
}

/** HTML elements that may not have a closing tag. */
const VOID_HTML = new Set(["br", "img"]);

function rewrite(token: TagToken, depth: number): string {
  const { kind, name, attrs } = token;
  const pair = (open: string, close: string): string =>
    kind === "close" ? close : kind === "self" ? open + close : open;
  if (name === "see") {
    const target = encodeURIComponent(attrs.get("topic") ?? "");
    return pair(openTag("a", { class: "see", href: `#!/${target}` }), "</a>");
  }
  if (name === "box") {
    return pair(openTag("div", { class: "box" }), "</div>");
  }
  if (name === "icon" || name === "img") {
    return kind === "close" ? "" : openTag("img", { src: attrs.get("src") ?? "" });
  }
  if (name === "srclink") {
    return pair(openTag("code", { class: "srclink" }), "</code>");
  }
  if (name === "sf") {
    return pair(openTag("span", { class: "sf" }), "</span>");
  }
  if (name === "code" && depth === 0) {
    return pair(openTag("code", { class: "code-block" }), "</code>");
  }
  if (kind === "self" && !VOID_HTML.has(name)) {
    // <dl/> and friends are legal in the stored markup but not in HTML
    return `<${name}></${name}>`;
  }
  if (name === "br") {
    return kind === "close" ? "" : "<br>";
  }
  return token.raw;
}

/** Translate one stored markup string into an HTML fragment. */
export function topicHtml(markup: string): string {
  const out: string[] = [];
  let pos = 0;
  let depth = 0;
  while (pos < markup.length) {
    const lt = markup.indexOf("<", pos);
    if (lt < 0) {
      out.push(markup.slice(pos));
      break;
    }
    out.push(markup.slice(pos, lt));
    const token = readTag(markup, lt);
    if (!token) {
      // not canonical markup; emit the character safely and continue
      out.push("&lt;");
      pos = lt + 1;
      continue;
    }
    if (token.kind === "close") depth -= 1;
    out.push(rewrite(token, depth));
    if (token.kind === "open") depth += 1;
    pos = lt + token.raw.length;
  }
  return out.join("");
}

/** Every in-app link target mentioned by a markup string. */
export function linkTargets(markup: string): string[] {
  const targets: string[] = [];
  for (const match of markup.matchAll(/<see topic='([^']*)'/g)) {
    targets.push(decodeEntities(match[1]));
  }
  return targets;
}
