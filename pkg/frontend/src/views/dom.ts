/** Minimal DOM construction helper. */

export type Child = Node | string | null | undefined;

export function h(
  tag: string,
  attrs: Record<string, string | boolean | number | EventListener> = {},
  ...children: Child[]
): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === "function") {
      node.addEventListener(key, value as EventListener);
    } else if (typeof value === "boolean") {
      if (value) node.setAttribute(key, "");
    } else {
      node.setAttribute(key, String(value));
    }
  }
  for (const child of children) {
    if (child === null || child === undefined) continue;
    node.append(child instanceof Node ? child : document.createTextNode(child));
  }
  return node;
}

export function clear(node: HTMLElement): HTMLElement {
  node.textContent = "";
  return node;
}
