/* Minimal manual viewer: hash routing, tree navigation, name/short search.
 * Works against a static export (xdata.json loaded once) or a topic server
 * (lazy /api/topic fetches), detected by probing /api/index. */
"use strict";

var state = {
  serverMode: false,
  index: null,          // {search: [[key,name,short,importance]...], tree: {key:[child...]}}
  data: null,           // static mode: key -> record
  cache: {},            // server mode: key -> record
  byKey: {},            // key -> search entry
};

function fetchJson(url) {
  return fetch(url).then(function (resp) {
    if (!resp.ok) throw new Error(url + ": HTTP " + resp.status);
    return resp.json();
  });
}

function currentKey() {
  var hash = window.location.hash;
  if (hash.indexOf("#!/") === 0) return decodeURIComponent(hash.slice(3));
  return null;
}

function rootKey() {
  var isChild = {};
  Object.keys(state.index.tree).forEach(function (key) {
    state.index.tree[key].forEach(function (child) { isChild[child] = true; });
  });
  var roots = Object.keys(state.index.tree).filter(function (k) { return !isChild[k]; });
  roots.sort();
  for (var i = 0; i < roots.length; i++) {
    if (roots[i].split("____")[1] === "TOP") return roots[i];
  }
  return roots[0];
}

function getTopic(key) {
  if (!state.serverMode) {
    return Promise.resolve(state.data[key] || null);
  }
  if (state.cache[key]) return Promise.resolve(state.cache[key]);
  return fetch("api/topic/" + encodeURIComponent(key)).then(function (resp) {
    if (resp.status === 404 || resp.status === 400) return null;
    if (!resp.ok) throw new Error("HTTP " + resp.status);
    return resp.json().then(function (record) {
      state.cache[key] = record;
      return record;
    });
  });
}

/* The exported markup is an XML subset; map it onto HTML. */
function topicHtml(markup) {
  var doc = new DOMParser().parseFromString("<root>" + markup + "</root>", "text/xml");
  if (doc.querySelector("parsererror")) {
    var pre = document.createElement("pre");
    pre.textContent = markup;
    return pre.outerHTML;
  }
  function convert(node, out) {
    if (node.nodeType === Node.TEXT_NODE) {
      out.appendChild(document.createTextNode(node.nodeValue));
      return;
    }
    if (node.nodeType !== Node.ELEMENT_NODE) return;
    var tag = node.tagName;
    var el;
    if (tag === "see") {
      el = document.createElement("a");
      el.setAttribute("href", "#!/" + node.getAttribute("topic"));
    } else if (tag === "a") {
      el = document.createElement("a");
      el.setAttribute("href", node.getAttribute("href"));
    } else if (tag === "code") {
      el = document.createElement("code");
      var block = node.parentNode === doc.documentElement;
      if (block) el.className = "code-block";
    } else if (tag === "box") {
      el = document.createElement("div");
      el.className = "box";
    } else if (tag === "icon" || tag === "img") {
      el = document.createElement("img");
      el.setAttribute("src", node.getAttribute("src"));
    } else if (tag === "srclink" || tag === "sf") {
      el = document.createElement("tt");
    } else {
      el = document.createElement(tag);
    }
    for (var i = 0; i < node.childNodes.length; i++) convert(node.childNodes[i], el);
    out.appendChild(el);
  }
  var holder = document.createElement("div");
  for (var i = 0; i < doc.documentElement.childNodes.length; i++) {
    convert(doc.documentElement.childNodes[i], holder);
  }
  return holder.innerHTML;
}

function entryFor(key) { return state.byKey[key] || null; }

function childEntries(key) {
  return (state.index.tree[key] || []).map(entryFor).filter(Boolean);
}

function renderTree() {
  var root = rootKey();
  var tree = document.getElementById("tree");
  tree.innerHTML = "";
  function item(key) {
    var entry = entryFor(key);
    var li = document.createElement("li");
    var kids = state.index.tree[key] || [];
    if (kids.length) {
      var toggle = document.createElement("span");
      toggle.className = "toggle";
      toggle.textContent = "+";
      var sub = document.createElement("ul");
      sub.hidden = true;
      toggle.addEventListener("click", function () {
        sub.hidden = !sub.hidden;
        toggle.textContent = sub.hidden ? "+" : "-";
        if (!sub.hidden && !sub.childNodes.length) {
          kids.forEach(function (k) { sub.appendChild(item(k)); });
        }
      });
      li.appendChild(toggle);
      var link = topicLink(key, entry ? entry[1] : key);
      li.appendChild(link);
      li.appendChild(sub);
    } else {
      li.appendChild(document.createTextNode("  "));
      li.appendChild(topicLink(key, entry ? entry[1] : key));
    }
    return li;
  }
  tree.appendChild(item(root));
}

function topicLink(key, label) {
  var a = document.createElement("a");
  a.setAttribute("href", "#!/" + encodeURIComponent(key));
  a.textContent = label.toLowerCase();
  var entry = entryFor(key);
  if (entry && entry[2]) a.setAttribute("title", entry[2]);
  return a;
}

function renderNotFound(key) {
  var content = document.getElementById("content");
  content.innerHTML = "";
  var h = document.createElement("h1");
  h.textContent = "Topic not found";
  var p = document.createElement("p");
  p.textContent = "No topic with key " + key + ". Try searching:";
  content.appendChild(h);
  content.appendChild(p);
  var input = document.createElement("input");
  input.type = "text";
  input.addEventListener("input", function () {
    renderSearch(input.value);
  });
  content.appendChild(input);
}

function renderError(message) {
  var content = document.getElementById("content");
  content.innerHTML = "";
  var box = document.createElement("div");
  box.className = "box";
  box.textContent = "Cannot load the manual: " + message;
  content.appendChild(box);
}

function renderTopic(key) {
  getTopic(key).then(function (record) {
    if (!record) { renderNotFound(key); return; }
    var content = document.getElementById("content");
    content.innerHTML = "";
    var h = document.createElement("h1");
    h.textContent = record.package + "::" + record.name;
    content.appendChild(h);
    var origin = document.createElement("div");
    origin.className = "origin";
    origin.textContent = record.origin;
    content.appendChild(origin);
    if (record.parents.length) {
      var parents = document.createElement("p");
      parents.className = "parents";
      parents.appendChild(document.createTextNode("Parents: "));
      record.parents.forEach(function (p, i) {
        if (i) parents.appendChild(document.createTextNode(", "));
        var entry = entryFor(p);
        parents.appendChild(topicLink(p, entry ? entry[1] : p));
      });
      content.appendChild(parents);
    }
    var shortDiv = document.createElement("div");
    shortDiv.className = "short";
    shortDiv.innerHTML = topicHtml(record.short_html);
    content.appendChild(shortDiv);
    var longDiv = document.createElement("div");
    longDiv.innerHTML = topicHtml(record.long_html);
    content.appendChild(longDiv);
    var kids = childEntries(key);
    if (kids.length) {
      var h3 = document.createElement("h3");
      h3.textContent = "Subtopics";
      content.appendChild(h3);
      var ul = document.createElement("ul");
      ul.className = "children";
      kids.forEach(function (entry) {
        var li = document.createElement("li");
        li.appendChild(topicLink(entry[0], entry[1]));
        if (entry[2]) {
          li.appendChild(document.createTextNode(" — " + entry[2]));
        }
        ul.appendChild(li);
      });
      content.appendChild(ul);
    }
  }).catch(function (err) { renderError(err.message); });
}

/* Ranked search: exact name, name prefix, name substring, short substring;
 * ties by importance descending then key. */
function searchEntries(query) {
  var q = query.toLowerCase();
  if (!q) return [];
  var tiers = [[], [], [], []];
  state.index.search.forEach(function (entry) {
    var name = entry[1].toLowerCase();
    var shortText = (entry[2] || "").toLowerCase();
    if (name === q) tiers[0].push(entry);
    else if (name.indexOf(q) === 0) tiers[1].push(entry);
    else if (name.indexOf(q) >= 0) tiers[2].push(entry);
    else if (shortText.indexOf(q) >= 0) tiers[3].push(entry);
  });
  var out = [];
  tiers.forEach(function (tier) {
    tier.sort(function (a, b) {
      if (a[3] !== b[3]) return b[3] - a[3];
      return a[0] < b[0] ? -1 : 1;
    });
    out = out.concat(tier);
  });
  return out;
}

function renderSearch(query) {
  var content = document.getElementById("content");
  content.innerHTML = "";
  var h = document.createElement("h1");
  h.textContent = "Search: " + query;
  content.appendChild(h);
  var ul = document.createElement("ul");
  ul.className = "search-results";
  searchEntries(query).forEach(function (entry) {
    var li = document.createElement("li");
    li.appendChild(topicLink(entry[0], entry[1]));
    if (entry[2]) li.appendChild(document.createTextNode(" — " + entry[2]));
    var imp = document.createElement("span");
    imp.className = "importance";
    imp.textContent = " (" + entry[3] + ")";
    li.appendChild(imp);
    ul.appendChild(li);
  });
  content.appendChild(ul);
}

function route() {
  var key = currentKey();
  if (key) renderTopic(key);
  else renderTopic(rootKey());
}

function init() {
  fetchJson("api/index").then(
    function (index) {
      state.serverMode = true;
      state.index = index;
      start();
    },
    function () {
      fetchJson("xindex.json").then(function (index) {
        state.index = index;
        return fetchJson("xdata.json").then(function (data) {
          state.data = data;
          start();
        });
      }).catch(function (err) { renderError(err.message); });
    }
  );
}

function start() {
  state.index.search.forEach(function (entry) { state.byKey[entry[0]] = entry; });
  renderTree();
  fetch("download/manual.zip", { method: "HEAD" }).then(function (resp) {
    if (resp.ok) document.getElementById("download").hidden = false;
  }).catch(function () {});
  var jump = document.getElementById("jump");
  jump.addEventListener("keydown", function (ev) {
    if (ev.key === "Enter") renderSearch(jump.value);
  });
  window.addEventListener("hashchange", route);
  route();
}

init();
