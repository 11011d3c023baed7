/** Shared types for the evaluation harness. */

export type Modality = 'text' | '2d' | 'frames';

export type Family = 'prediction' | 'backward' | 'planning' | 'generalization';

export interface HoleDoc {
  shape: string;
  size: string;
  orientation_deg: number;
  position: [number, number, number];
}

/** Task document as written by the paperfold CLI (codecs schema). */
export interface TaskDoc {
  id: string;
  family: Family;
  group: number;
  seed: number;
  actions: string;
  holes: HoleDoc[];
  ground_truth: Record<string, unknown>;
}

/** Prediction/backward/generalization answer (codecs schema). */
export interface PredictionAnswerDoc {
  task_id: string;
  unfolding: string[];
  holes: HoleDoc[];
}

/** Planning answer (codecs schema). */
export interface PlanningAnswerDoc {
  task_id: string;
  folds: string[];
  initial_holes: HoleDoc[];
}

export type AnswerDoc = PredictionAnswerDoc | PlanningAnswerDoc;

export interface ParseFailure {
  task_id: string;
  error: string;
  raw: string;
}

export type ParseResult =
  | { ok: true; answer: AnswerDoc }
  | { ok: false; failure: ParseFailure };

export interface ModelRequest {
  taskId: string;
  prompt: string;
  /** Paths of image attachments for 2d/frames modalities. */
  attachments: string[];
  /** Path of the task file; lets the oracle mock answer exactly. */
  taskPath?: string;
}

export interface ModelResponse {
  text: string;
}

/** One request/response contract for every adapter. */
export interface ModelAdapter {
  readonly name: string;
  readonly modalities: readonly Modality[];
  complete(request: ModelRequest): Promise<ModelResponse>;
}

export interface RateLimitOptions {
  maxConcurrent: number;
  requestsPerMinute: number;
}

export interface RetryOptions {
  maxRetries: number;
  baseDelayMs: number;
  maxDelayMs: number;
}

export interface AdapterConfig {
  adapter: 'mock-oracle' | 'mock-noise' | 'http';
  modalities?: Modality[];
  endpoint?: string;
  /** Name of the environment variable holding the API credential. */
  credentialEnv?: string;
  model?: string;
  rateLimit?: Partial<RateLimitOptions>;
  retry?: Partial<RetryOptions>;
  /** mock-noise only: seed for its canned responses. */
  seed?: number;
}

export interface TaskStatus {
  status: 'answered' | 'parse-failure' | 'request-failed' | 'skipped-existing';
  detail?: string;
}

export interface EvalManifest {
  adapter: string;
  modality: Modality;
  tasks: Record<string, TaskStatus>;
}
