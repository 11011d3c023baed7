import { RateLimitOptions, RetryOptions } from './types.js';

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Bounded concurrency plus a minimum spacing between request starts.
 * Every adapter call goes through one limiter, so a batch can never
 * exceed the endpoint's concurrency or per-minute budget.
 */
export class RateLimiter {
  private active = 0;
  private nextStartAt = 0;
  private readonly waiting: Array<() => void> = [];
  private readonly minIntervalMs: number;

  constructor(private readonly options: RateLimitOptions) {
    this.minIntervalMs =
      options.requestsPerMinute > 0 ? 60_000 / options.requestsPerMinute : 0;
  }

  async run<T>(fn: () => Promise<T>): Promise<T> {
    await this.acquire();
    try {
      const wait = this.nextStartAt - Date.now();
      this.nextStartAt = Math.max(Date.now(), this.nextStartAt) + this.minIntervalMs;
      if (wait > 0) await sleep(wait);
      return await fn();
    } finally {
      this.release();
    }
  }

  private acquire(): Promise<void> {
    if (this.active < this.options.maxConcurrent) {
      this.active += 1;
      return Promise.resolve();
    }
    return new Promise((resolve) =>
      this.waiting.push(() => {
        this.active += 1;
        resolve();
      }),
    );
  }

  private release(): void {
    this.active -= 1;
    const next = this.waiting.shift();
    if (next) next();
  }
}

/** Exponential backoff; rethrows once the retry budget is exhausted. */
export async function withRetries<T>(fn: () => Promise<T>, options: RetryOptions): Promise<T> {
  let attempt = 0;
  for (;;) {
    try {
      return await fn();
    } catch (error) {
      if (attempt >= options.maxRetries) throw error;
      const delay = Math.min(options.baseDelayMs * 2 ** attempt, options.maxDelayMs);
      await sleep(delay);
      attempt += 1;
    }
  }
}

export const DEFAULT_RATE_LIMIT: RateLimitOptions = {
  maxConcurrent: 4,
  requestsPerMinute: 0,
};

export const DEFAULT_RETRY: RetryOptions = {
  maxRetries: 3,
  baseDelayMs: 250,
  maxDelayMs: 5_000,
};
