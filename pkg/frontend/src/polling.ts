/** Fixed-interval progress poller used while a live render is in flight. */

export interface Poller {
  stop(): void;
}

export function startPolling(
  tick: () => Promise<boolean>,
  intervalMs: number,
): Poller {
  let stopped = false;
  let timer: ReturnType<typeof setTimeout> | null = null;

  const run = async () => {
    if (stopped) return;
    let keepGoing = true;
    try {
      keepGoing = await tick();
    } catch {
      // Poll errors are transient; keep trying until stopped.
    }
    if (!stopped && keepGoing) {
      timer = setTimeout(run, intervalMs);
    }
  };

  timer = setTimeout(run, intervalMs);
  return {
    stop() {
      stopped = true;
      if (timer !== null) clearTimeout(timer);
    },
  };
}
