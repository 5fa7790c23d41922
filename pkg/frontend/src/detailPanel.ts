/**
 * Sample inspection panel: image and saliency map (when the dataset has
 * them), prediction fields, the sample-type badge, and the nearest
 * training samples by projected distance.
 */

import { ApiClient } from "./api.js";
import { SampleDetail } from "./types.js";

export class DetailPanel {
  constructor(
    private container: HTMLElement,
    private api: ApiClient,
    private dataset: string,
    private hasImages: boolean,
  ) {}

  async show(sessionId: string, sampleId: number): Promise<void> {
    const detail = await this.api.sampleDetail(sessionId, sampleId);
    this.container.innerHTML = "";
    this.container.appendChild(this.header(detail));
    if (this.hasImages) {
      this.container.appendChild(this.imageRow(detail.sample_id));
    }
    this.container.appendChild(this.fields(detail));
    this.container.appendChild(this.neighborList(detail));
  }

  private header(detail: SampleDetail): HTMLElement {
    const h = document.createElement("div");
    h.className = "detail-header";
    const title = document.createElement("strong");
    title.textContent = `sample ${detail.sample_id} (${detail.split})`;
    h.appendChild(title);
    if (detail.sample_type) {
      const badge = document.createElement("span");
      badge.className = `badge badge-${detail.sample_type}`;
      badge.textContent = detail.sample_type.replace("_", " ");
      h.appendChild(badge);
    }
    return h;
  }

  private imageRow(sampleId: number): HTMLElement {
    const row = document.createElement("div");
    row.className = "detail-images";
    const img = document.createElement("img");
    img.src = this.api.imageUrl(this.dataset, sampleId);
    img.alt = `sample ${sampleId}`;
    row.appendChild(img);
    const sal = document.createElement("img");
    sal.src = this.api.saliencyUrl(this.dataset, sampleId);
    sal.alt = "saliency";
    sal.onerror = () => sal.remove(); // no saliency asset: hide the slot
    row.appendChild(sal);
    return row;
  }

  private fields(detail: SampleDetail): HTMLElement {
    const dl = document.createElement("dl");
    const add = (name: string, value: string) => {
      const dt = document.createElement("dt");
      dt.textContent = name;
      const dd = document.createElement("dd");
      dd.textContent = value;
      dl.append(dt, dd);
    };
    add("class", detail.class);
    if (detail.predicted_class !== undefined) add("predicted", detail.predicted_class);
    if (detail.ood_score_normalized !== undefined) {
      add("OoD score", detail.ood_score_normalized.toFixed(3));
    }
    if (detail.confidence !== undefined) add("confidence", detail.confidence.toFixed(3));
    return dl;
  }

  private neighborList(detail: SampleDetail): HTMLElement {
    const wrap = document.createElement("div");
    const caption = document.createElement("div");
    caption.textContent = "nearest training samples";
    caption.className = "detail-caption";
    wrap.appendChild(caption);
    const list = document.createElement("div");
    list.className = "neighbor-list";
    for (const nid of detail.neighbors) {
      if (this.hasImages) {
        const img = document.createElement("img");
        img.src = this.api.imageUrl(this.dataset, nid);
        img.title = `sample ${nid}`;
        list.appendChild(img);
      } else {
        const chip = document.createElement("span");
        chip.className = "neighbor-chip";
        chip.textContent = String(nid);
        list.appendChild(chip);
      }
    }
    wrap.appendChild(list);
    return wrap;
  }
}
