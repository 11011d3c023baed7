import {
  AnswerDoc,
  Family,
  HoleDoc,
  ParseResult,
} from './types.js';

export const SHAPES = new Set([
  'circle',
  'square',
  'triangle',
  'trapezoid',
  'star',
  'letter',
  'text',
  'ellipse',
  'rectangle',
]);
export const SIZES = new Set(['small', 'large']);
const ORIENTATIONS = new Set([0, 90, 180, 270]);
const FOLD_LABEL = /^(H[12]|V[12]|D[1-4])-(F|B)$/;

class BlockError extends Error {}

/** Strip markdown bullets/emphasis so keyed lines survive prose wrapping. */
function cleanLine(line: string): string {
  return line
    .replace(/^[\s>*-]+/, '')
    .replace(/\*\*/g, '')
    .replace(/`/g, '')
    .trim();
}

function parseLabels(payload: string, key: string): string[] {
  const trimmed = payload.trim();
  if (trimmed === '' || /^(none|n\/a)$/i.test(trimmed)) return [];
  const labels = trimmed.split(/[\s,]+/).map((l) => l.toUpperCase());
  for (const label of labels) {
    if (!FOLD_LABEL.test(label)) {
      throw new BlockError(`bad ${key} label: ${label}`);
    }
  }
  return labels;
}

function parseHole(payload: string): HoleDoc {
  // e.g. "circle small 90 [2,0,0]"
  const match = payload
    .trim()
    .match(/^(\w+)\s+(\w+)\s+(\d+)\s*[[(]\s*(\d)\s*,\s*(\d)\s*,\s*(\d)\s*[\])]$/);
  if (!match) throw new BlockError(`bad hole line: ${payload.trim()}`);
  const [, shape, size, degText, r, c, t] = match;
  const deg = Number(degText);
  const position: [number, number, number] = [Number(r), Number(c), Number(t)];
  if (!SHAPES.has(shape.toLowerCase())) throw new BlockError(`unknown shape: ${shape}`);
  if (!SIZES.has(size.toLowerCase())) throw new BlockError(`unknown size: ${size}`);
  if (!ORIENTATIONS.has(deg)) throw new BlockError(`bad orientation: ${deg}`);
  if (position[0] > 3 || position[1] > 3 || position[2] > 1) {
    throw new BlockError(`position out of range: [${position.join(',')}]`);
  }
  return {
    shape: shape.toLowerCase(),
    size: size.toLowerCase(),
    orientation_deg: deg,
    position,
  };
}

/**
 * Extract the structured answer from a model response.
 *
 * The grammar is keyed lines anywhere in the text: `UNFOLDING: <labels>`
 * (or `FOLDS:` for planning) plus one `HOLE: shape size deg [r,c,t]`
 * line per hole.  Surrounding prose is ignored; a keyed line with a
 * malformed payload is a hard parse failure, and so is a response with
 * no keyed lines at all.
 */
export function parseResponse(raw: string, taskId: string, family: Family): ParseResult {
  const fail = (error: string): ParseResult => ({
    ok: false,
    failure: { task_id: taskId, error, raw },
  });
  let unfolding: string[] | null = null;
  let folds: string[] | null = null;
  const holes: HoleDoc[] = [];
  try {
    for (const rawLine of raw.split(/\r?\n/)) {
      const line = cleanLine(rawLine);
      const keyMatch = line.match(/^(unfolding|folds|hole)\s*:\s*(.*)$/i);
      if (!keyMatch) continue;
      const key = keyMatch[1].toLowerCase();
      const payload = keyMatch[2];
      if (key === 'unfolding') unfolding = parseLabels(payload, 'unfolding');
      else if (key === 'folds') folds = parseLabels(payload, 'fold');
      else holes.push(parseHole(payload));
    }
  } catch (error) {
    if (error instanceof BlockError) return fail(error.message);
    throw error;
  }

  if (family === 'planning') {
    if (folds === null) return fail('no FOLDS line found');
    const answer: AnswerDoc = { task_id: taskId, folds, initial_holes: holes };
    return { ok: true, answer };
  }
  if (unfolding === null && holes.length === 0) {
    return fail('no answer block found');
  }
  const answer: AnswerDoc = { task_id: taskId, unfolding: unfolding ?? [], holes };
  return { ok: true, answer };
}
