// Server-corrected countdown: the server's remaining_seconds is authoritative
// and the local clock only interpolates between responses, so the displayed
// value never exceeds the last server report.

export class Countdown {
  private serverRemaining = 0;
  private syncedAt = 0;
  private handle: ReturnType<typeof setInterval> | undefined;
  private expired = false;

  constructor(
    private readonly onTick: (seconds: number) => void,
    private readonly onExpire: () => void,
    private readonly now: () => number = () => performance.now(),
    private readonly intervalMs = 250,
  ) {}

  sync(remainingSeconds: number): void {
    this.serverRemaining = Math.max(0, remainingSeconds);
    this.syncedAt = this.now();
    this.tick();
  }

  current(): number {
    const elapsed = (this.now() - this.syncedAt) / 1000;
    return Math.max(0, this.serverRemaining - elapsed);
  }

  start(): void {
    this.stop();
    this.expired = false;
    this.handle = setInterval(() => this.tick(), this.intervalMs);
    this.tick();
  }

  stop(): void {
    if (this.handle !== undefined) {
      clearInterval(this.handle);
      this.handle = undefined;
    }
  }

  tick(): void {
    const seconds = this.current();
    this.onTick(seconds);
    if (seconds <= 0 && !this.expired) {
      this.expired = true;
      this.onExpire();
    }
  }
}

export function formatClock(seconds: number): string {
  const whole = Math.max(0, Math.floor(seconds));
  const m = String(Math.floor(whole / 60)).padStart(2, "0");
  const s = String(whole % 60).padStart(2, "0");
  return `${m}:${s}`;
}
