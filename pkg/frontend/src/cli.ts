#!/usr/bin/env node
import { readFileSync } from 'node:fs';
import { createAdapter } from './adapters.js';
import { runEval, scoreAnswers } from './runner.js';
import { AdapterConfig, Modality } from './types.js';

const USAGE = `usage: eval-runner --tasks <dir> --out <dir> [options]

options:
  --adapter <mock-oracle|mock-noise|http>   (default mock-oracle)
  --config <file.json>        adapter config file (endpoint, credentialEnv, ...)
  --modality <text|2d|frames> (default text)
  --template-dir <dir>        override the built-in prompt templates
  --concurrency <n>           max in-flight requests (default 4)
  --rpm <n>                   request-per-minute cap (default unlimited)
  --no-resume                 re-query tasks that already have answers
  --no-score                  skip invoking 'paperfold score' afterwards
  --no-direction              score in text mode (direction not encoded)
`;

function parseArgs(argv: string[]): Record<string, string | boolean> {
  const args: Record<string, string | boolean> = {};
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (!arg.startsWith('--')) throw new Error(`unexpected argument: ${arg}`);
    const key = arg.slice(2);
    if (['no-resume', 'no-score', 'no-direction', 'help'].includes(key)) {
      args[key] = true;
    } else {
      const value = argv[i + 1];
      if (value === undefined) throw new Error(`missing value for --${key}`);
      args[key] = value;
      i += 1;
    }
  }
  return args;
}

export async function main(argv: string[]): Promise<number> {
  let args: Record<string, string | boolean>;
  try {
    args = parseArgs(argv);
  } catch (error) {
    process.stderr.write(`${String(error)}\n${USAGE}`);
    return 2;
  }
  if (args.help || !args.tasks || !args.out) {
    process.stderr.write(USAGE);
    return args.help ? 0 : 2;
  }

  const config: AdapterConfig = args.config
    ? (JSON.parse(readFileSync(String(args.config), 'utf-8')) as AdapterConfig)
    : { adapter: (args.adapter as AdapterConfig['adapter']) ?? 'mock-oracle' };
  if (args.adapter) config.adapter = args.adapter as AdapterConfig['adapter'];

  const adapter = createAdapter(config);
  const manifest = await runEval(adapter, {
    tasksDir: String(args.tasks),
    outDir: String(args.out),
    modality: (args.modality as Modality) ?? 'text',
    templateDir: args['template-dir'] ? String(args['template-dir']) : undefined,
    rateLimit: {
      ...(args.concurrency ? { maxConcurrent: Number(args.concurrency) } : {}),
      ...(args.rpm ? { requestsPerMinute: Number(args.rpm) } : {}),
      ...config.rateLimit,
    },
    retry: config.retry,
    resume: !args['no-resume'],
  });

  const counts: Record<string, number> = {};
  for (const status of Object.values(manifest.tasks)) {
    counts[status.status] = (counts[status.status] ?? 0) + 1;
  }
  process.stdout.write(`eval complete: ${JSON.stringify(counts)}\n`);

  if (!args['no-score']) {
    const result = scoreAnswers(String(args.out), String(args.tasks), {
      noDirection: Boolean(args['no-direction']),
    });
    return result.exitCode;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split('/').pop() ?? '');
if (invokedDirectly) {
  main(process.argv.slice(2)).then(
    (code) => process.exit(code),
    (error) => {
      process.stderr.write(`error: ${String(error)}\n`);
      process.exit(1);
    },
  );
}
