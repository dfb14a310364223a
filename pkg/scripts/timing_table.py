"""Processing delay of the four hardware variants, analytic and simulated.

    python scripts/timing_table.py --size 64 --clk1-ns 5
"""
import argparse

from ridgeorient import synth
from ridgeorient.pipeline import TABLE_CONFIGS, clk2_period, run_pipeline, total_delay


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--height", type=int, default=256)
    ap.add_argument("--width", type=int, default=256)
    ap.add_argument("--size", type=int, default=64, help="side of the image actually simulated")
    ap.add_argument("--clk1-ns", type=float, default=1.0)
    args = ap.parse_args()

    H, L = args.height, args.width
    print(f"analytic delay for {H}x{L} (CLK1 = {args.clk1_ns} ns)")
    for cfg in TABLE_CONFIGS:
        ticks = total_delay(cfg, H, L)
        print(f"  {cfg.label:50s} {ticks:>12d} ticks  {ticks * args.clk1_ns / 1e6:10.3f} ms"
              f"  (CLK2 = {clk2_period(cfg)} CLK1)")

    img = synth.sinusoid(args.size, args.size, 8.0, 30.0)
    print(f"simulated {args.size}x{args.size} sinusoid")
    for cfg in TABLE_CONFIGS:
        r = run_pipeline(img, cfg)
        print(f"  {cfg.label:50s} {r.ticks:>12d} ticks  (fill/drain {r.fill_drain_ticks})")


if __name__ == "__main__":
    main()
