import { describe, expect, it } from "vitest";

import { GridPayload } from "../src/types.js";
import { buildViewModel, rebin, renderModel } from "../src/viewmodel.js";

const CLASSES = ["dog", "cat"];

function fixtureGrid(): GridPayload {
  return {
    split: "both",
    m: 2,
    n: 2,
    node_id: 0,
    parent: null,
    n_samples: 3,
    n_displayed: 3,
    category_counts: { dog: 2, cat: 1 },
    representatives: [7, 5],
    cells: [
      { cell: 0, sample_id: 5, class: "dog", split: "train", ood_norm: 0.1, sample_type: "reliable" },
      { cell: 1, sample_id: 7, class: "cat", split: "test", ood_norm: 0.95, sample_type: "unknown_unknown" },
      { cell: 2, sample_id: 9, class: "dog", split: "test", ood_norm: 0.65, sample_type: "normal" },
      { cell: 3, sample_id: null },
    ],
  };
}

describe("grid view model", () => {
  it("is a pure function of payload, classes, cutoffs and mode", () => {
    const vm = buildViewModel(fixtureGrid(), CLASSES, [0.6, 0.8], "superpose");
    expect(renderModel(vm)).toMatchSnapshot();
    // rendering twice gives the identical structure
    expect(renderModel(buildViewModel(fixtureGrid(), CLASSES, [0.6, 0.8], "superpose")))
      .toEqual(renderModel(vm));
  });

  it("marks splits with circle/square only in superpose mode", () => {
    const sup = renderModel(buildViewModel(fixtureGrid(), CLASSES, [0.6, 0.8], "superpose"));
    expect(sup.find((c) => c.sampleId === 5)?.marker).toBe("circle");
    expect(sup.find((c) => c.sampleId === 7)?.marker).toBe("square");
    const single = renderModel(buildViewModel(fixtureGrid(), CLASSES, [0.6, 0.8], "single"));
    expect(new Set(single.map((c) => c.marker))).toEqual(new Set(["square"]));
  });

  it("rebins locally without touching anything else", () => {
    const vm = buildViewModel(fixtureGrid(), CLASSES, [0.6, 0.8], "single");
    const moved = rebin(vm, [0.3, 0.5]);
    // sample 9 at 0.65 moves from the middle bin to the darkest bin
    const before = vm.cells.find((c) => c.sampleId === 9)!.style!.fill;
    const after = moved.cells.find((c) => c.sampleId === 9)!.style!.fill;
    expect(after).not.toBe(before);
    // identity of everything that is not a color
    expect(moved.cells.map((c) => c.sampleId)).toEqual(vm.cells.map((c) => c.sampleId));
    expect(moved.representatives).toEqual(vm.representatives);
    expect(moved.m).toBe(vm.m);
    // original model untouched (pure)
    expect(vm.cells.find((c) => c.sampleId === 9)!.style!.fill).toBe(before);
  });

  it("keeps empty cells out of the render list", () => {
    const vm = buildViewModel(fixtureGrid(), CLASSES, [0.6, 0.8], "single");
    const rendered = renderModel(vm);
    expect(rendered).toHaveLength(3);
    expect(rendered.map((c) => c.sampleId).sort()).toEqual([5, 7, 9]);
  });
});
