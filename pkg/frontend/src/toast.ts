// Transient notices (warning toasts, error banners).

let container: HTMLElement | null = null;

function box(): HTMLElement {
  if (!container || !container.isConnected) {
    container = document.createElement("div");
    container.id = "toasts";
    document.body.appendChild(container);
  }
  return container;
}

export function toast(message: string, kind: "info" | "warning" | "error" = "info"): HTMLElement {
  const el = document.createElement("div");
  el.className = `toast toast-${kind}`;
  el.textContent = message;
  box().appendChild(el);
  setTimeout(() => el.remove(), 6000);
  return el;
}

export function errorBanner(root: HTMLElement, message: string): void {
  let banner = root.querySelector<HTMLElement>(".error-banner");
  if (!banner) {
    banner = document.createElement("div");
    banner.className = "error-banner";
    root.prepend(banner);
  }
  banner.textContent = message;
  banner.hidden = false;
}

export function clearErrorBanner(root: HTMLElement): void {
  const banner = root.querySelector<HTMLElement>(".error-banner");
  if (banner) banner.hidden = true;
}
