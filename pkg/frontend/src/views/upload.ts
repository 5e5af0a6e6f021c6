/** Binary upload view: dropzone plus a plain file picker. */

import { ServiceClient, ServiceError } from "../api.js";
import type { SessionState } from "../state.js";

export interface UploadCtx {
  client: ServiceClient;
  state: SessionState;
  onUploaded: () => void;
}

export function renderUploadView(root: HTMLElement, ctx: UploadCtx): void {
  const panel = document.createElement("section");
  panel.className = "panel";

  const heading = document.createElement("h2");
  heading.textContent = "Upload a binary";
  panel.appendChild(heading);

  const hint = document.createElement("p");
  hint.className = "hint";
  hint.textContent =
    "Raw flat images work best. The store is content-addressed, so re-uploading the same bytes returns the same id.";
  panel.appendChild(hint);

  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.hidden = true;

  const zone = document.createElement("div");
  zone.className = "dropzone";
  zone.textContent = "Drop a file here or click to choose";

  const input = document.createElement("input");
  input.type = "file";
  input.hidden = true;

  const send = async (file: File) => {
    banner.hidden = true;
    zone.classList.add("armed");
    try {
      const reply = await ctx.client.upload(file, file.name);
      ctx.state.binaryId = reply.binaryId;
      ctx.state.binaryName = file.name;
      ctx.state.binarySize = reply.size;
      ctx.state.lastResult = null;
      ctx.state.selectedRank = 0;
      ctx.onUploaded();
    } catch (err) {
      banner.textContent =
        err instanceof ServiceError ? err.message : "upload failed; is the service running?";
      banner.hidden = false;
    } finally {
      zone.classList.remove("armed");
    }
  };

  zone.addEventListener("click", () => input.click());
  zone.addEventListener("dragover", (event) => {
    event.preventDefault();
    zone.classList.add("armed");
  });
  zone.addEventListener("dragleave", () => zone.classList.remove("armed"));
  zone.addEventListener("drop", (event) => {
    event.preventDefault();
    zone.classList.remove("armed");
    const file = event.dataTransfer?.files?.[0];
    if (file) void send(file);
  });
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (file) void send(file);
  });

  panel.appendChild(zone);
  panel.appendChild(input);
  panel.appendChild(banner);
  root.appendChild(panel);
}
