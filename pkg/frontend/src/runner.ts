import { spawnSync } from 'node:child_process';
import {
  existsSync,
  mkdirSync,
  readFileSync,
  readdirSync,
  renameSync,
  statSync,
  writeFileSync,
} from 'node:fs';
import { dirname, join } from 'node:path';
import { parseResponse } from './parse.js';
import { buildPrompt } from './prompts.js';
import { DEFAULT_RATE_LIMIT, DEFAULT_RETRY, RateLimiter, withRetries } from './rateLimit.js';
import {
  EvalManifest,
  Modality,
  ModelAdapter,
  RateLimitOptions,
  RetryOptions,
  TaskDoc,
  TaskStatus,
} from './types.js';

export interface EvalOptions {
  tasksDir: string;
  outDir: string;
  modality: Modality;
  templateDir?: string;
  rateLimit?: Partial<RateLimitOptions>;
  retry?: Partial<RetryOptions>;
  /** Skip tasks that already have an answer file (default true). */
  resume?: boolean;
  paperfoldBin?: string;
}

export function findTaskFiles(root: string): string[] {
  const out: string[] = [];
  const walk = (dir: string) => {
    for (const entry of readdirSync(dir).sort()) {
      const path = join(dir, entry);
      if (statSync(path).isDirectory()) walk(path);
      else if (entry.endsWith('.task.json')) out.push(path);
    }
  };
  walk(root);
  return out;
}

/** Write via a temp file + rename so a crashed run never leaves half-written answers. */
function writeAtomic(path: string, content: string): void {
  const tmp = `${path}.tmp-${process.pid}`;
  writeFileSync(tmp, content);
  renameSync(tmp, path);
}

function attachmentsFor(taskPath: string, task: TaskDoc, modality: Modality): string[] {
  const dir = dirname(taskPath);
  if (modality === '2d') {
    const svg = join(dir, `${task.id}.svg`);
    if (!existsSync(svg)) {
      throw new Error(`missing 2D sidecar ${svg}; generate tasks with --formats task,2d`);
    }
    return [svg];
  }
  if (modality === 'frames') {
    const frameDir = join(dir, `${task.id}.frames`);
    if (!existsSync(frameDir)) {
      throw new Error(`missing frames sidecar ${frameDir}; generate tasks with --formats task,frames`);
    }
    return readdirSync(frameDir)
      .sort()
      .map((f) => join(frameDir, f));
  }
  return [];
}

function textGridFor(taskPath: string, task: TaskDoc, modality: Modality): string | undefined {
  if (modality !== 'text') return undefined;
  const sidecar = join(dirname(taskPath), `${task.id}.text.txt`);
  if (!existsSync(sidecar)) {
    throw new Error(`missing text sidecar ${sidecar}; generate tasks with --formats task,text`);
  }
  return readFileSync(sidecar, 'utf-8');
}

/** A schema-invalid answer file: the scorer flags it as a parse failure. */
function parseFailureDoc(taskId: string, error: string): string {
  return JSON.stringify(
    {
      task_id: taskId,
      parse_error: error,
      holes: [{ shape: 'unparseable', size: 'small', orientation_deg: 0, position: [0, 0, 0] }],
    },
    null,
    2,
  );
}

export async function runEval(adapter: ModelAdapter, options: EvalOptions): Promise<EvalManifest> {
  if (!adapter.modalities.includes(options.modality)) {
    throw new Error(`adapter ${adapter.name} does not support modality ${options.modality}`);
  }
  mkdirSync(options.outDir, { recursive: true });
  const limiter = new RateLimiter({ ...DEFAULT_RATE_LIMIT, ...options.rateLimit });
  const retry = { ...DEFAULT_RETRY, ...options.retry };
  const resume = options.resume ?? true;
  const manifest: EvalManifest = {
    adapter: adapter.name,
    modality: options.modality,
    tasks: {},
  };

  const taskFiles = findTaskFiles(options.tasksDir);
  const jobs = taskFiles.map(async (taskPath) => {
    const task = JSON.parse(readFileSync(taskPath, 'utf-8')) as TaskDoc;
    const answerPath = join(options.outDir, `${task.id}.answer.json`);
    if (resume && existsSync(answerPath)) {
      manifest.tasks[task.id] = { status: 'skipped-existing' };
      return;
    }
    const { prompt } = buildPrompt(task, options.modality, options.templateDir, {
      textGrid: textGridFor(taskPath, task, options.modality),
    });
    const request = {
      taskId: task.id,
      prompt,
      attachments: attachmentsFor(taskPath, task, options.modality),
      taskPath,
    };
    let status: TaskStatus;
    try {
      const response = await limiter.run(() =>
        withRetries(() => adapter.complete(request), retry),
      );
      writeAtomic(join(options.outDir, `${task.id}.raw.txt`), response.text);
      const parsed = parseResponse(response.text, task.id, task.family);
      if (parsed.ok) {
        writeAtomic(answerPath, JSON.stringify(parsed.answer, null, 2) + '\n');
        status = { status: 'answered' };
      } else {
        writeAtomic(answerPath, parseFailureDoc(task.id, parsed.failure.error) + '\n');
        status = { status: 'parse-failure', detail: parsed.failure.error };
      }
    } catch (error) {
      status = { status: 'request-failed', detail: String(error) };
    }
    manifest.tasks[task.id] = status;
  });
  await Promise.all(jobs);

  const ordered: EvalManifest = {
    adapter: manifest.adapter,
    modality: manifest.modality,
    tasks: Object.fromEntries(
      Object.entries(manifest.tasks).sort(([a], [b]) => a.localeCompare(b)),
    ),
  };
  writeAtomic(join(options.outDir, 'eval-manifest.json'), JSON.stringify(ordered, null, 2) + '\n');
  return ordered;
}

export interface ScoreResult {
  exitCode: number;
  reportPath: string;
}

/** Score the produced answers through the primary CLI. */
export function scoreAnswers(
  answersDir: string,
  tasksDir: string,
  opts: { noDirection?: boolean; paperfoldBin?: string } = {},
): ScoreResult {
  const reportPath = join(answersDir, 'score_report.json');
  const args = ['score', answersDir, tasksDir, '--out', reportPath];
  if (opts.noDirection) args.push('--no-direction');
  const result = spawnSync(opts.paperfoldBin ?? 'paperfold', args, { encoding: 'utf-8' });
  if (result.stdout) process.stdout.write(result.stdout);
  if (result.stderr) process.stderr.write(result.stderr);
  return { exitCode: result.status ?? 1, reportPath };
}
