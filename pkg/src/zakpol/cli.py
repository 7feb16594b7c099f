"""Command-line entry point: ``zakpol <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import ambiguity, harness
from .channel import SceneSpec
from .core import ComplexFrame, GdaftParams, ParameterError, SupportBox
from .waveform import fmcw_frame, phase_coded_frame, pulsone, spread_carrier, zadoff_chu

KINDS = ("pulsone", "spread", "zc", "phase_coded", "fmcw_up", "fmcw_down")


def _config(args) -> harness.RunConfig:
    text = Path(args.config).read_text(encoding="utf-8") if getattr(args, "config", None) else ""
    over = {k: getattr(args, k, None) for k in ("seed", "trials", "out", "system", "polarization", "workers")}
    if getattr(args, "snr", None) is not None and getattr(args, "command", "") == "montecarlo":
        over["snr_db"] = args.snr
    return harness.RunConfig.from_json(text, **over)


def _frame(cfg: harness.RunConfig, kind: str, k0: int, l0: int, root: int | None) -> ComplexFrame:
    p = cfg.params
    if kind == "pulsone":
        return pulsone(p, k0, l0)
    if kind == "spread":
        return spread_carrier(p, GdaftParams.for_grid(p, *cfg.gdaft), k0, l0)
    u = cfg.zc_roots[0] if root is None else root
    if kind == "zc":
        return zadoff_chu(p.MN, u, p.bandwidth)
    if kind == "phase_coded":
        return phase_coded_frame(p, zadoff_chu(p.MN, u), cfg.oversample)
    up, down = fmcw_frame(p, cfg.oversample)
    return up if kind == "fmcw_up" else down


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_waveform(args) -> int:
    cfg = _config(args)
    _emit(harness.frame_csv(_frame(cfg, args.kind, args.k0, args.l0, args.root)), args.out_file)
    return 0


def cmd_ambiguity(args) -> int:
    cfg = _config(args)
    p = cfg.params
    y = _frame(cfg, args.kind, args.k0, args.l0, args.root)
    x = _frame(cfg, args.against or args.kind, 0, 0, args.against_root)
    if len(x) != len(y):
        raise ParameterError(f"frames differ in length: {len(y)} vs {len(x)}")
    L = len(y)
    step = L // p.MN if L % p.MN == 0 else 1
    A = ambiguity.cross_ambiguity_direct(y, x, (p.delay_bins * step) % L, p.doppler_bins % L)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("delay_bin", "doppler_bin", "re", "im"))
    for r, k in enumerate(p.delay_bins):
        for c, l in enumerate(p.doppler_bins):
            w.writerow((int(k), int(l), repr(float(A[r, c].real)), repr(float(A[r, c].imag))))
    _emit(buf.getvalue(), args.out_file)
    return 0


def cmd_crystallize(args) -> int:
    cfg = _config(args)
    x = _frame(cfg, args.kind, 0, 0, args.root)
    support = ambiguity.self_ambiguity_support(x, tol=args.tol)
    box = SupportBox(*args.box)
    ok, pair = ambiguity.crystallization_check(support, box, len(x))
    print(f"support points: {len(support)}")
    print("crystallization holds" if ok else f"crystallization fails: {pair[0]} and {pair[1]} overlap")
    return 0 if ok else 1


def cmd_heatmap(args) -> int:
    cfg = _config(args)
    scene = SceneSpec.from_json(Path(args.scene).read_text(encoding="utf-8")) if args.scene else None
    scene = harness.four_target_scene(cfg.params) if scene is None else scene
    snr = args.snr[0] if args.snr else 20.0
    results = harness.heatmap_scenario(cfg, scene, out=cfg.out, snr_db=snr)
    for name, (_, tallies) in results.items():
        found, ghosts, missed = harness.scene_totals(tallies, scene)
        per = ", ".join(f"{j}{i}: {t.true}+{t.false}" for (j, i), t in tallies.items())
        print(f"{name}: {found} targets found, {ghosts} spurious, {missed} missed ({per})")
    return 0


def cmd_montecarlo(args) -> int:
    cfg = _config(args)
    records = harness.run_monte_carlo(cfg)
    d = harness.write_monte_carlo(cfg, records)
    for row in harness.rmse_curves(records, cfg.params):
        fmt = lambda v: "n/a" if v is None else f"{v:.3f}"
        print(
            f"{row.snr_db:g} dB: AUC {harness.auc(records, snr_db=row.snr_db):.4f}, "
            f"delay RMSE {fmt(row.delay_rmse)}, Doppler RMSE {fmt(row.doppler_rmse)}, miss rate {row.miss_rate:.3f}"
        )
    print(f"pooled AUC {harness.auc(records):.4f}; CSVs in {d}")
    return 0


def cmd_selftest(args) -> int:
    results = harness.selftest(args.seed or 0)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zakpol", description="Zak-OTFS polarimetric radar toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, run=False):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--seed", type=int)
        if run:
            p.add_argument("--trials", type=int)
            p.add_argument("--out", help="output directory")
            p.add_argument("--snr", type=float, nargs="+", help="SNR list in dB")
            p.add_argument("--system", choices=harness.SYSTEMS)
            p.add_argument("--polarization", choices=("uni", "dual"))
            p.add_argument("--workers", type=int)

    def frame_args(p):
        p.add_argument("--kind", choices=KINDS, default="pulsone")
        p.add_argument("--k0", type=int, default=0)
        p.add_argument("--l0", type=int, default=0)
        p.add_argument("--root", type=int, help="Zadoff-Chu root")
        p.add_argument("-o", "--out-file", help="write CSV here instead of stdout")

    p = sub.add_parser("waveform", help="emit a transmit frame as n,re,im CSV")
    common(p)
    frame_args(p)
    p.set_defaults(func=cmd_waveform)

    p = sub.add_parser("ambiguity", help="emit a cross-ambiguity surface on the fundamental domain")
    common(p)
    frame_args(p)
    p.add_argument("--against", choices=KINDS, help="reference frame (default: same kind at (0, 0))")
    p.add_argument("--against-root", type=int)
    p.set_defaults(func=cmd_ambiguity)

    p = sub.add_parser("crystallize", help="check a support box against a waveform's self-ambiguity")
    common(p)
    p.add_argument("--kind", choices=KINDS, default="pulsone")
    p.add_argument("--root", type=int)
    p.add_argument("--box", type=int, nargs=4, metavar=("KMIN", "KMAX", "LMIN", "LMAX"), default=(0, 7, -4, 4))
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_crystallize)

    p = sub.add_parser("heatmap", help="four-target scene, one noisy frame per system")
    common(p, run=True)
    p.add_argument("--scene", help="scene JSON (default: built-in four-target scene)")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("montecarlo", help="seeded ROC/RMSE run")
    common(p, run=True)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("selftest", help="closed forms against brute-force oracles")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
