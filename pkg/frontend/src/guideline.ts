/**
 * The five-level scoring guideline shown to every evaluator.
 *
 * This wording is the evaluation protocol's reference text and is
 * reproduced verbatim, typos and all; tests pin every character. Do
 * not edit, reflow, or "fix" punctuation.
 */

export interface GuidelineLevel {
  readonly scale: string;
  readonly value: 0 | 1 | 2 | 3 | 4;
  readonly description: string;
}

export const GUIDELINE_CAPTION =
  "Human evaluation guideline to evaluate performance of MT systems.";

export const GUIDELINE: readonly GuidelineLevel[] = [
  {
    scale: "Wrong translation",
    value: 0,
    description:
      "This is for a completely wrong translation. The translation output does not make sense given the source text.",
  },
  {
    scale: "Major problem",
    value: 1,
    description:
      "There is a serious problem in the translation with some parts of the source missing or mistranslated and it would be hard to match translation output with source text without major modifications.",
  },
  {
    scale: "Minor problem",
    value: 2,
    description:
      "The translation has minor problems given the source text but requires some minor changes, e.g, changing a word or two to make it fully describe the source text.",
  },
  {
    scale: "Good translation",
    value: 3,
    description:
      "The translation describes the source text; however, there may be some problems with style such as punctuation, word order or appropriate wording.",
  },
  {
    scale: "Accurate and fluent",
    value: 4,
    description:
      "Great job! The output is a correct translation of the source text. It’s both accurate and fluent.",
  },
] as const;

export function levelFor(value: number): GuidelineLevel {
  const level = GUIDELINE.find((g) => g.value === value);
  if (!level) {
    throw new RangeError(`no guideline level for value ${value}`);
  }
  return level;
}
