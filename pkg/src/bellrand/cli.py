"""Command-line pipeline over run directories, plus report emitters.

Subcommands: ``analyze`` (full pipeline per run), ``synth`` (write a
synthetic run), ``complexity`` and ``nist`` (single-sequence utilities),
``scatter`` (K vs S table from a report CSV).  Exit codes: 0 on success,
1 on total failure, 2 on bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path

from bellrand import chsh as chsh_mod
from bellrand import coincidence as coinc_mod
from bellrand import complexity as cx_mod
from bellrand import encode as enc_mod
from bellrand import ingest
from bellrand import nist as nist_mod
from bellrand import synth as synth_mod
from bellrand.encode import BinarySequence
from bellrand.errors import BellrandError, NoApplicableRunsError, NoDataForPairError

REFERENCE_S_CHSH = 2.0
REFERENCE_K = 0.9
DEFAULT_K_THRESHOLD = 0.9

REPORT_COLUMNS = (
    "name",
    "sequence",
    "condition",
    "n",
    "encoding",
    "t_w",
    "delay",
    "c",
    "k",
    "nist_overall",
    "p_monobit",
    "p_block_frequency",
    "p_runs",
    "p_longest_run",
    "p_matrix_rank",
    "p_dft_spectral",
    "s_chsh",
    "sign_combination",
    "verdict",
    "error",
)


@dataclass
class RunReport:
    """One report row; column semantics follow REPORT_COLUMNS."""

    name: str
    sequence: str = "coincidences"
    condition: str = "unknown"
    n: int | None = None
    encoding: str | None = None
    t_w: float | None = None
    delay: float | None = None
    c: int | None = None
    k: float | None = None
    nist_overall: bool | None = None
    p_values: dict = field(default_factory=dict)
    s_chsh: float | None = None
    sign_combination: str | None = None
    verdict: bool | None = None
    error: str | None = None


def _fmt(value, kind: str) -> str:
    if value is None:
        return "n/a" if kind in ("s", "k") else ""
    if kind == "int":
        return str(int(value))
    if kind in ("k", "s"):
        return f"{value:.4f}"
    if kind == "p":
        return f"{value:.4g}"
    if kind == "t":
        return f"{value:.6g}"
    if kind == "bool":
        return "yes" if value else "no"
    return str(value)


def report_row(report: RunReport) -> list[str]:
    """Stringified row used identically by the text and CSV writers."""
    p = report.p_values
    return [
        report.name,
        report.sequence,
        report.condition,
        _fmt(report.n, "int") if report.n is not None else "",
        report.encoding or "",
        _fmt(report.t_w, "t"),
        _fmt(report.delay, "t"),
        _fmt(report.c, "int") if report.c is not None else "",
        _fmt(report.k, "k") if report.k is not None else "",
        _fmt(report.nist_overall, "bool") if report.nist_overall is not None else "",
        *(_fmt(p.get(name), "p") for name in nist_mod.TEST_NAMES),
        _fmt(report.s_chsh, "s"),
        report.sign_combination or "",
        _fmt(report.verdict, "bool") if report.verdict is not None else "",
        report.error or "",
    ]


def render_text(rows: list[list[str]]) -> str:
    table = [list(REPORT_COLUMNS)] + rows
    widths = [max(len(r[i]) for r in table) for i in range(len(REPORT_COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table]
    return "\n".join(lines) + "\n"


def render_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    writer.writerows(rows)
    return buf.getvalue()


def _encode_coincidences(seq, encoding: str) -> BinarySequence:
    if encoding == "joint":
        return enc_mod.encode_joint(seq)
    if encoding == "codes":
        bs = enc_mod.encode_codes(seq.code_a)
        return BinarySequence(bits=bs.bits, encoding=bs.encoding + "[alice]")
    if encoding == "dt":
        return enc_mod.binarize_times(seq.times)
    raise ValueError(f"unknown encoding {encoding!r}")


def _battery_fields(report: RunReport, bits, alpha: float, k_threshold: float) -> None:
    comp = cx_mod.analyze(bits)
    verdict = nist_mod.battery(bits, alpha)
    report.c = comp.c
    report.k = comp.k
    report.nist_overall = verdict.overall
    report.p_values = {r.name: r.p_value for r in verdict.results}
    report.verdict = bool(comp.k >= k_threshold and verdict.overall)


def analyze_run(
    prefix: str,
    t_w: float,
    delay,
    scan_range: tuple[float, float],
    scan_step: float,
    encoding: str = "joint",
    alpha: float = nist_mod.DEFAULT_ALPHA,
    k_threshold: float = DEFAULT_K_THRESHOLD,
    subset_codes: tuple[int, int] | None = None,
    singles: bool = False,
    code_map: chsh_mod.CodeMap = chsh_mod.DEFAULT_CODE_MAP,
    sign_combination: str = "auto",
) -> list[RunReport]:
    """Load one run and push it through the full pipeline.

    ``delay`` is either a number (seconds added to Bob's clock) or the
    string 'scan'.  Returns one report row, plus an Alice-singles row when
    ``singles`` is set.  Errors are captured in the row, not raised.
    """
    path = Path(prefix)
    report = RunReport(name=path.name, t_w=t_w)
    rows = [report]
    try:
        bundle = ingest.load_run(path.parent, path.name)
        report.condition = bundle.condition

        if delay == "scan":
            scan = coinc_mod.scan_delay(bundle.alice, bundle.bob, t_w, scan_range, scan_step)
            used_delay = scan.best_delay
        else:
            used_delay = float(delay)
        report.delay = used_delay

        seq = coinc_mod.match(bundle.alice, bundle.bob, t_w, used_delay)
        if subset_codes is not None:
            seq = coinc_mod.subset(seq, *subset_codes)
        report.n = seq.n

        try:
            result = chsh_mod.chsh(chsh_mod.tally(seq, code_map), sign_combination)
            report.s_chsh = result.s
            report.sign_combination = result.sign_combination
        except (NoDataForPairError, BellrandError):
            report.s_chsh = None  # not applicable for this run

        bits = _encode_coincidences(seq, encoding)
        report.encoding = bits.encoding
        _battery_fields(report, bits, alpha, k_threshold)

        if singles:
            srow = RunReport(
                name=path.name,
                sequence="singles",
                condition=bundle.condition,
                t_w=t_w,
                delay=used_delay,
                n=len(bundle.alice),
            )
            sbits = enc_mod.encode_codes(bundle.alice.codes)
            srow.encoding = sbits.encoding + "[alice]"
            _battery_fields(srow, sbits, alpha, k_threshold)
            rows.append(srow)
    except (BellrandError, OSError, ValueError) as exc:
        report.error = str(exc)
    return rows


def scatter_rows(records: list[dict]) -> list[tuple[str, str, str]]:
    """(k, s_chsh, nist_overall) from parsed report records with applicable S."""
    out = []
    for rec in records:
        s = rec.get("s_chsh", "")
        if rec.get("error"):
            continue
        if not s or s == "n/a":
            continue
        out.append((rec.get("k", ""), s, rec.get("nist_overall", "")))
    if not out:
        raise NoApplicableRunsError("no report row carries an applicable CHSH value")
    return out


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _bits_argument(parser: argparse.ArgumentParser, value: str) -> BinarySequence:
    try:
        is_file = Path(value).is_file()
    except OSError:  # e.g. a literal longer than the filename limit
        is_file = False
    try:
        if is_file:
            return BinarySequence.from01(Path(value).read_text(), encoding="file")
        return BinarySequence.from01(value, encoding="literal")
    except ValueError as exc:
        parser.error(f"expected a 0/1 string or a file of 0/1 text: {exc}")


def _pair(text: str, what: str, parser: argparse.ArgumentParser) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        parser.error(f"{what} expects two comma-separated values, got {text!r}")
    return float(parts[0]), float(parts[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellrand",
        description="Certify the algorithmic and statistical randomness of "
        "two-station time-tagged runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="run the full pipeline over run prefixes")
    pa.add_argument("runs", nargs="+", help="run prefixes: <dir>/<name> of <name>_{alice,bob}_{V,C}.dat")
    pa.add_argument("--tw", type=float, required=True, help="coincidence window HALF-width, seconds")
    pa.add_argument(
        "--tw-full-width",
        action="store_true",
        help="interpret --tw as the full window width instead of the half-width",
    )
    pa.add_argument(
        "--delay",
        default="0.0",
        help="seconds ADDED to Bob's clock before matching, or 'scan' to maximize coincidences",
    )
    pa.add_argument(
        "--scan-range",
        default="-1e-5,1e-5",
        help="scan window 'min,max' in seconds (use --scan-range=-1e-5,1e-5 for negative starts)",
    )
    pa.add_argument("--scan-step", type=float, default=1e-7, help="scan grid step in seconds")
    pa.add_argument(
        "--encoding",
        choices=("codes", "joint", "dt"),
        default="joint",
        help="coincidence-row encoder: joint 4-bit codes, Alice 2-bit codes, or "
        "median-threshold inter-arrival bits",
    )
    pa.add_argument("--alpha", type=float, default=nist_mod.DEFAULT_ALPHA, help="battery significance level")
    pa.add_argument("--k-threshold", type=float, default=DEFAULT_K_THRESHOLD, help="complexity verdict threshold")
    pa.add_argument("--subset", default=None, help="restrict to coincidences with codes 'a,b'")
    pa.add_argument("--singles", action="store_true", help="add an Alice-singles row per run")
    pa.add_argument(
        "--setting-bit",
        type=int,
        choices=(0, 1),
        default=1,
        help="which code bit holds the analyzer setting (the other is the detector)",
    )
    pa.add_argument("--sign", choices=("auto", "fixed"), default="auto", help="CHSH sign placement")
    pa.add_argument("--out", default=None, help="write the report here instead of stdout")
    pa.add_argument("--format", choices=("text", "csv"), default="text")

    ps = sub.add_parser("synth", help="generate a synthetic run in the station-file format")
    ps.add_argument("--out-dir", required=True)
    ps.add_argument("--pair-rate", type=float, default=synth_mod.DRIFT_DEMO_CONFIG.pair_rate)
    ps.add_argument("--duration", type=float, default=synth_mod.DRIFT_DEMO_CONFIG.duration)
    ps.add_argument("--visibility", type=float, default=1.0)
    ps.add_argument("--angles-a", default="0,45", help="Alice analyzer angles 'a0,a1' in degrees")
    ps.add_argument("--angles-b", default="22.5,67.5", help="Bob analyzer angles 'b0,b1' in degrees")
    ps.add_argument("--efficiency", type=float, default=1.0)
    ps.add_argument("--jitter-sigma", type=float, default=0.0)
    ps.add_argument("--drift-rate", type=float, default=0.0)
    ps.add_argument("--drift-offset", type=float, default=0.0)
    ps.add_argument("--background-rate", type=float, default=0.0)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--name", default="synthetic")

    pc = sub.add_parser("complexity", help="word count and normalized complexity of a bit sequence")
    pc.add_argument("bits", help="a 0/1 string, or a path to a text file of 0/1 characters")
    pc.add_argument("--checkpoints", default=None, help="comma-separated prefix lengths to profile")

    pn = sub.add_parser("nist", help="six-test battery over a bit sequence")
    pn.add_argument("bits", help="a 0/1 string, or a path to a text file of 0/1 characters")
    pn.add_argument("--alpha", type=float, default=nist_mod.DEFAULT_ALPHA)

    pp = sub.add_parser("scatter", help="K vs S table from an analyze CSV report")
    pp.add_argument("report", help="CSV report produced by 'analyze --format csv'")
    pp.add_argument("--out", default=None)

    return parser


def cmd_analyze(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    t_w = args.tw / 2.0 if args.tw_full_width else args.tw
    if t_w <= 0:
        parser.error("--tw must be positive")
    delay = args.delay
    if delay != "scan":
        try:
            delay = float(delay)
        except ValueError:
            parser.error(f"--delay expects a number or 'scan', got {args.delay!r}")
    scan_range = _pair(args.scan_range, "--scan-range", parser)
    subset_codes = None
    if args.subset is not None:
        a, b = _pair(args.subset, "--subset", parser)
        subset_codes = (int(a), int(b))
        if not (0 <= subset_codes[0] <= 3 and 0 <= subset_codes[1] <= 3):
            parser.error("--subset codes must lie in 0..3")
    code_map = chsh_mod.CodeMap(setting_bit=args.setting_bit, outcome_bit=1 - args.setting_bit)

    reports: list[RunReport] = []
    for prefix in args.runs:
        reports.extend(
            analyze_run(
                prefix,
                t_w=t_w,
                delay=delay,
                scan_range=scan_range,
                scan_step=args.scan_step,
                encoding=args.encoding,
                alpha=args.alpha,
                k_threshold=args.k_threshold,
                subset_codes=subset_codes,
                singles=args.singles,
                code_map=code_map,
                sign_combination=args.sign,
            )
        )
    rows = [report_row(r) for r in reports]
    text = render_csv(rows) if args.format == "csv" else render_text(rows)
    _write_output(text, args.out)
    all_failed = all(r.error for r in reports)
    return 1 if all_failed else 0


def cmd_synth(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    try:
        config = synth_mod.SynthConfig(
            pair_rate=args.pair_rate,
            duration=args.duration,
            visibility=args.visibility,
            angles_a=_pair(args.angles_a, "--angles-a", parser),
            angles_b=_pair(args.angles_b, "--angles-b", parser),
            efficiency=args.efficiency,
            jitter_sigma=args.jitter_sigma,
            drift_rate=args.drift_rate,
            drift_offset=args.drift_offset,
            background_rate=args.background_rate,
            seed=args.seed,
            name=args.name,
        )
    except BellrandError as exc:
        parser.error(str(exc))
    bundle = synth_mod.gen_bell_run(config)
    try:
        paths = synth_mod.write_run(bundle, args.out_dir)
    except (BellrandError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    for p in paths:
        print(p)
    return 0


def cmd_complexity(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    seq = _bits_argument(parser, args.bits)
    if args.checkpoints:
        try:
            pts = [int(x) for x in args.checkpoints.split(",")]
            profile = cx_mod.complexity_profile(seq, pts)
        except (ValueError, BellrandError) as exc:
            parser.error(str(exc))
        for m, c, k in profile:
            print(f"n={m} c={c} K={k:.4f}")
    else:
        res = cx_mod.analyze(seq)
        print(f"n={res.n} c={res.c} K={res.k:.4f}")
    return 0


def cmd_nist(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    seq = _bits_argument(parser, args.bits)
    verdict = nist_mod.battery(seq, args.alpha)
    print(f"{'test':18s}{'p-value':>12s}  {'pass':4s}")
    for r in verdict.results:
        p = "n/a" if r.p_value is None else f"{r.p_value:.4g}"
        status = "" if r.status == "ok" else f"  ({r.status})"
        print(f"{r.name:18s}{p:>12s}  {_fmt(r.passed, 'bool'):4s}{status}")
    print(f"overall: {_fmt(verdict.overall, 'bool')}")
    return 0


def cmd_scatter(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    try:
        with open(args.report, newline="") as fh:
            records = list(csv.DictReader(fh))
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    try:
        rows = scatter_rows(records)
    except NoApplicableRunsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    buf = io.StringIO()
    buf.write(f"# reference_s_chsh = {REFERENCE_S_CHSH}\n")
    buf.write(f"# reference_k = {REFERENCE_K}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("k", "s_chsh", "nist_overall"))
    writer.writerows(rows)
    _write_output(buf.getvalue(), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze":
        return cmd_analyze(parser, args)
    if args.command == "synth":
        return cmd_synth(parser, args)
    if args.command == "complexity":
        return cmd_complexity(parser, args)
    if args.command == "nist":
        return cmd_nist(parser, args)
    if args.command == "scatter":
        return cmd_scatter(parser, args)
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
