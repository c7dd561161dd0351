/** Debounced latest-wins request loop: at most one request in flight,
 * a newer submission aborts the in-flight one, and stale responses are
 * discarded by sequence number. */

export type SendFn<TArg, TRes> = (arg: TArg, signal: AbortSignal) => Promise<TRes>;

export class LatestWins<TArg, TRes> {
  private seq = 0;
  private appliedSeq = 0;
  private pending: TArg | undefined;
  private timer: ReturnType<typeof setTimeout> | undefined;
  private controller: AbortController | undefined;

  constructor(
    private readonly send: SendFn<TArg, TRes>,
    private readonly onResult: (res: TRes, arg: TArg, seq: number) => void,
    private readonly onError: (err: unknown) => void,
    private readonly debounceMs = 50,
  ) {}

  submit(arg: TArg): void {
    this.pending = arg;
    if (this.timer !== undefined) clearTimeout(this.timer);
    this.timer = setTimeout(() => this.fire(), this.debounceMs);
  }

  /** True while a request is being debounced or awaited. */
  get busy(): boolean {
    return this.pending !== undefined || this.controller !== undefined;
  }

  private fire(): void {
    this.timer = undefined;
    if (this.pending === undefined) return;
    const arg = this.pending;
    this.pending = undefined;
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const seq = ++this.seq;
    this.send(arg, controller.signal)
      .then((res) => {
        if (seq > this.appliedSeq && !controller.signal.aborted) {
          this.appliedSeq = seq;
          this.onResult(res, arg, seq);
        }
      })
      .catch((err) => {
        if (!controller.signal.aborted) this.onError(err);
      })
      .finally(() => {
        if (this.controller === controller) this.controller = undefined;
      });
  }
}
