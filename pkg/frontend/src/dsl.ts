/** Client-side helpers for editing query text. Parsing and evaluation are
 * the server's job; the client only needs cursor-aware term insertion. */

/** Replace the term fragment at the cursor with a chosen suggestion.
 * The fragment is the run of non-separator characters before the cursor;
 * separators are whitespace plus , ; ( ). Returns the new text and cursor. */
export function insertSuggestion(
  text: string,
  cursor: number,
  term: string,
): { text: string; cursor: number } {
  const isBoundary = (ch: string) => /[\s,;()]/.test(ch);
  let start = cursor;
  while (start > 0 && !isBoundary(text[start - 1])) start -= 1;
  // keep keyword tokens intact: never replace something starting with '-'
  if (text.slice(start, cursor).startsWith("-")) start = cursor;
  const next = text.slice(0, start) + term + text.slice(cursor);
  return { text: next, cursor: start + term.length };
}

/** The fragment to autocomplete: the partial term at the cursor, or the
 * keyword dash prefix ("-"/"--") when one is being typed. */
export function fragmentAt(text: string, cursor: number): string {
  const isBoundary = (ch: string) => /[\s,;()]/.test(ch);
  let start = cursor;
  while (start > 0 && !isBoundary(text[start - 1])) start -= 1;
  return text.slice(start, cursor);
}

/** Kind filter implied by the active keyword group, for sharper suggestions. */
export function activeKind(text: string, cursor: number): string | undefined {
  const head = text.slice(0, cursor);
  const match = head.match(/(?:^|\s)(--?[a-z]+)(?=\s)(?!.*(?:^|\s)--?[a-z]+\s)/i);
  const keyword = match?.[1]?.toLowerCase();
  switch (keyword) {
    case "--concepts":
    case "-c":
      return "concept";
    case "--objects":
    case "-o":
      return "object";
    case "--attributes":
    case "-a":
      return "attribute";
    case "--location":
    case "-l":
      return "location";
    case "--timename":
    case "-t":
      return "timename";
    default:
      return undefined;
  }
}

/** Encode a query into a shareable URL (new-window link opening). */
export function queryUrl(baseHref: string, q: string): string {
  const url = new URL(baseHref);
  url.searchParams.set("q", q);
  return url.toString();
}

/** Query carried in the page URL, if any. */
export function queryFromUrl(href: string): string | null {
  try {
    return new URL(href).searchParams.get("q");
  } catch {
    return null;
  }
}
