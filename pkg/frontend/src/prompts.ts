import { readFileSync, existsSync, readdirSync } from 'node:fs';
import { join, dirname } from 'node:path';
import { fileURLToPath } from 'node:url';
import { Family, HoleDoc, Modality, TaskDoc } from './types.js';

// Works from src/ (vitest) and dist/ (compiled) alike: both sit one level
// below the package root where templates/ lives.
const HERE = dirname(fileURLToPath(import.meta.url));
export const DEFAULT_TEMPLATE_DIR = join(HERE, '..', 'templates');

export function formatHoles(holes: HoleDoc[]): string {
  if (holes.length === 0) return '(none)';
  return holes
    .map((h) => `${h.shape} ${h.size} ${h.orientation_deg} [${h.position.join(',')}]`)
    .join('\n');
}

export function loadTemplate(family: Family, modality: Modality, templateDir?: string): string {
  const dir = templateDir ?? DEFAULT_TEMPLATE_DIR;
  const path = join(dir, `${family}-${modality}.txt`);
  if (!existsSync(path)) {
    const available = readdirSync(dir).filter((f) => f.endsWith('.txt'));
    throw new Error(
      `no template for ${family}/${modality} in ${dir} (available: ${available.join(', ')})`,
    );
  }
  return readFileSync(path, 'utf-8');
}

export interface PromptBundle {
  templateId: string;
  prompt: string;
}

/** Fill a template's placeholders from the task document. */
export function renderPrompt(
  template: string,
  task: TaskDoc,
  extras: { textGrid?: string } = {},
): string {
  const gt = task.ground_truth as Record<string, unknown>;
  const replacements: Record<string, string> = {
    TASK_ID: task.id,
    ACTIONS: task.actions,
    HOLES: formatHoles(task.holes),
    TEXT_GRID: extras.textGrid ?? '',
    REQUIRED_FOLDS: String(gt['required_fold_count'] ?? ''),
    TARGET_HOLES: formatHoles((gt['target_pattern'] as HoleDoc[] | undefined) ?? []),
    SCENARIO_A_RESULT: formatHoles((gt['scenario_a_result'] as HoleDoc[] | undefined) ?? []),
    SCENARIO_B_HOLES: formatHoles((gt['scenario_b_holes'] as HoleDoc[] | undefined) ?? []),
  };
  let out = template;
  for (const [key, value] of Object.entries(replacements)) {
    out = out.replaceAll(`{{${key}}}`, value);
  }
  const unresolved = out.match(/{{[A-Z_]+}}/);
  if (unresolved) throw new Error(`unresolved template placeholder: ${unresolved[0]}`);
  return out;
}

export function buildPrompt(
  task: TaskDoc,
  modality: Modality,
  templateDir?: string,
  extras: { textGrid?: string } = {},
): PromptBundle {
  const template = loadTemplate(task.family, modality, templateDir);
  return {
    templateId: `${task.family}-${modality}`,
    prompt: renderPrompt(template, task, extras),
  };
}
