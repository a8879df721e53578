type Child = Node | string;

/** Small element builder; `text` in attrs sets textContent. */
export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Child[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === 'text') {
      node.textContent = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  node.textContent = '';
}

export function show(node: HTMLElement, text: string): void {
  node.textContent = text;
  node.hidden = false;
}

export function hide(node: HTMLElement): void {
  node.textContent = '';
  node.hidden = true;
}
