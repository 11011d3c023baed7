import { spawnSync } from 'node:child_process';
import { createHash } from 'node:crypto';
import { mkdtempSync, readFileSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import {
  AdapterConfig,
  AnswerDoc,
  HoleDoc,
  Modality,
  ModelAdapter,
  ModelRequest,
  ModelResponse,
  PlanningAnswerDoc,
} from './types.js';

const ALL_MODALITIES: readonly Modality[] = ['text', '2d', 'frames'];

function holeLines(holes: HoleDoc[]): string {
  return holes
    .map((h) => `HOLE: ${h.shape} ${h.size} ${h.orientation_deg} [${h.position.join(',')}]`)
    .join('\n');
}

function answerBlock(answer: AnswerDoc): string {
  if ('folds' in answer) {
    const plan = answer as PlanningAnswerDoc;
    return `FOLDS: ${plan.folds.join(' ')}\n${holeLines(plan.initial_holes)}`;
  }
  const unfolding = answer.unfolding.length ? answer.unfolding.join(' ') : 'none';
  return `UNFOLDING: ${unfolding}\n${holeLines(answer.holes)}`;
}

/**
 * Answers every task exactly by shelling out to the primary CLI's solver,
 * then wraps the structured block in prose so the response parser gets
 * exercised end to end.
 */
export class MockOracleAdapter implements ModelAdapter {
  readonly name = 'mock-oracle';
  readonly modalities = ALL_MODALITIES;

  constructor(private readonly paperfoldBin = 'paperfold') {}

  async complete(request: ModelRequest): Promise<ModelResponse> {
    if (!request.taskPath) throw new Error('mock-oracle needs the task file path');
    const dir = mkdtempSync(join(tmpdir(), 'oracle-'));
    try {
      const out = join(dir, 'answer.json');
      const result = spawnSync(this.paperfoldBin, ['solve', request.taskPath, '--out', out], {
        encoding: 'utf-8',
      });
      if (result.status !== 0) {
        throw new Error(`paperfold solve failed: ${result.stderr || result.stdout}`);
      }
      const answer = JSON.parse(readFileSync(out, 'utf-8')) as AnswerDoc;
      const text = [
        'Let me work through the folds carefully.',
        'After reversing each fold and tracking every layer, my final answer is:',
        '',
        answerBlock(answer),
        '',
        'I am confident in this result.',
      ].join('\n');
      return { text };
    } finally {
      rmSync(dir, { recursive: true, force: true });
    }
  }
}

const NOISE_VARIANTS = [
  '',
  'I think the holes end up somewhere near the middle, maybe two of them.',
  'HOLE: hexagon tiny 45 [9,9,9]',
  'UNFOLDING: Q9-Z\nHOLE: circle',
  'The paper unfolds into a butterfly shape. No structured data to report.',
];

/** Returns canned noise; every response fails the answer-block grammar. */
export class MockNoiseAdapter implements ModelAdapter {
  readonly name = 'mock-noise';
  readonly modalities = ALL_MODALITIES;

  constructor(private readonly seed = 0) {}

  async complete(request: ModelRequest): Promise<ModelResponse> {
    const digest = createHash('sha256')
      .update(`${this.seed}:${request.taskId}`)
      .digest();
    return { text: NOISE_VARIANTS[digest[0] % NOISE_VARIANTS.length] };
  }
}

type FetchLike = (url: string, init: Record<string, unknown>) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

/**
 * Generic JSON-over-HTTP adapter: POSTs the prompt (attachments inlined as
 * base64) and accepts either `{text}` or a chat-completions shape back.
 * The credential is read from the environment variable named in the
 * config, never stored in files.
 */
export class HttpAdapter implements ModelAdapter {
  readonly name: string;
  readonly modalities: readonly Modality[];

  constructor(
    private readonly config: AdapterConfig,
    private readonly fetchImpl: FetchLike = fetch as unknown as FetchLike,
  ) {
    if (!config.endpoint) throw new Error('http adapter needs an endpoint');
    this.name = config.model ?? 'http';
    this.modalities = config.modalities ?? ALL_MODALITIES;
  }

  async complete(request: ModelRequest): Promise<ModelResponse> {
    const headers: Record<string, string> = { 'content-type': 'application/json' };
    if (this.config.credentialEnv) {
      const credential = process.env[this.config.credentialEnv];
      if (!credential) {
        throw new Error(`credential env var ${this.config.credentialEnv} is not set`);
      }
      headers.authorization = `Bearer ${credential}`;
    }
    const attachments = request.attachments.map((path) => ({
      name: path.split('/').pop(),
      data: readFileSync(path).toString('base64'),
    }));
    const response = await this.fetchImpl(this.config.endpoint as string, {
      method: 'POST',
      headers,
      body: JSON.stringify({
        model: this.config.model,
        prompt: request.prompt,
        attachments,
      }),
    });
    if (!response.ok) throw new Error(`endpoint returned ${response.status}`);
    const body = (await response.json()) as Record<string, unknown>;
    const choices = body.choices as Array<{ message?: { content?: string } }> | undefined;
    const text = (body.text as string | undefined) ?? choices?.[0]?.message?.content;
    if (typeof text !== 'string') throw new Error('endpoint response had no text');
    return { text };
  }
}

export function createAdapter(config: AdapterConfig): ModelAdapter {
  switch (config.adapter) {
    case 'mock-oracle':
      return new MockOracleAdapter();
    case 'mock-noise':
      return new MockNoiseAdapter(config.seed ?? 0);
    case 'http':
      return new HttpAdapter(config);
    default:
      throw new Error(`unknown adapter: ${(config as AdapterConfig).adapter}`);
  }
}
