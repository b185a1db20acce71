"""Command-line entry point.

Exit codes: 0 success, 1 operational failure (bad input file, tampered log,
I/O error), 2 usage error. Nothing printed here contains metadata text from
the corpus or from audited requests other than already-redacted audit lines.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .audit import AuditLog, FileSink, MemorySink, verify_file
from .corpus import CorpusConsistencyError, GeneratorConfig, check_meta, generate, load_corpus, write_corpus
from .corpus.generator import CORPUS_FILE, META_FILE
from .eval import run_sweep, write_report
from .pii import Mode
from .policy import PolicyConfig
from .testbed.scenarios import SCENARIOS, SLACK_POLICY, build

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEMO_AUDIT_KEY = b"audit-key-testbed"

log = logging.getLogger("x402guard")


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _rate(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError("must be within [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="x402guard", description="PII-safe x402 payment client tooling")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-corpus", help="generate the labeled synthetic corpus")
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--n", type=_positive_int, default=2000)
    g.add_argument("--pii-rate", type=_rate, default=0.36)
    g.add_argument("--out", type=Path, required=True, help="output directory")

    s = sub.add_parser("sweep", help="run the 42-configuration detection sweep")
    s.add_argument("--corpus", type=Path, required=True, help="corpus directory or corpus.jsonl")
    s.add_argument("--out", type=Path, required=True, help="report directory")

    v = sub.add_parser("verify-audit", help="verify an audit log's MAC chain")
    v.add_argument("--log", type=Path, required=True)
    v.add_argument("--key-file", type=Path, required=True, help="file holding the raw HMAC key bytes")

    d = sub.add_parser("demo", help="run one testbed scenario through the hardened client")
    d.add_argument("--scenario", choices=sorted(SCENARIOS), required=True)
    d.add_argument("--policy-file", type=Path, help="JSON spending policy (defaults to a permissive one)")
    d.add_argument("--audit-log", type=Path, help="also append the audit events to this file")
    d.add_argument("--key-file", type=Path, help="audit key for --audit-log (defaults to the testbed key)")
    return p


def cmd_gen_corpus(args) -> int:
    samples, meta = generate(GeneratorConfig(seed=args.seed, n=args.n, pii_rate=args.pii_rate))
    corpus_path, meta_path = write_corpus(samples, meta, args.out)
    print(f"wrote {meta['n_samples']} samples ({meta['n_pii_positive']} PII-positive, "
          f"{meta['n_labels']} labels) to {corpus_path}")
    print(f"manifest: {meta_path}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    corpus_path = args.corpus / CORPUS_FILE if args.corpus.is_dir() else args.corpus
    samples = load_corpus(corpus_path)
    meta_path = corpus_path.with_name(META_FILE)
    if meta_path.exists():
        check_meta(samples, json.loads(meta_path.read_text(encoding="utf-8")))
    report = run_sweep(samples)
    jp, mp = write_report(report, args.out)
    for mode, score in ((Mode.PATTERN, None), (Mode.CONTEXTUAL, 0.4)):
        m = report.row(mode, min_score=score).metrics
        tag = mode.value if score is None else f"{mode.value}@{score}"
        print(f"{tag:16s} micro P={m.micro_p:.3f} R={m.micro_r:.3f} F1={m.micro_f1:.3f}")
    print(f"{len(report.rows)} configurations in {report.elapsed_s:.1f}s; report: {jp}, {mp}")
    return EXIT_OK


def cmd_verify_audit(args) -> int:
    key = args.key_file.read_bytes()
    if not key:
        print("key file is empty", file=sys.stderr)
        return EXIT_FAIL
    result = verify_file(args.log, key)
    print(result)
    return EXIT_OK if result.ok else EXIT_FAIL


def cmd_demo(args) -> int:
    policy = PolicyConfig.load(args.policy_file) if args.policy_file else SLACK_POLICY
    if args.audit_log:
        key = args.key_file.read_bytes() if args.key_file else DEMO_AUDIT_KEY
        audit = AuditLog(key, FileSink(args.audit_log))
    else:
        audit = AuditLog(DEMO_AUDIT_KEY, MemorySink())
    bed = build(SCENARIOS[args.scenario], policy=policy, audit=audit)
    for resp in bed.run():
        out = resp.outcome
        status = out.status.value if out else "NO_PAYMENT"
        print(f"scenario={args.scenario} outcome={status} http={resp.status_code}")
        if out:
            ents = ",".join(e.value for e in out.entities) or "-"
            print(f"redactions={out.redactions} entities={ents} detail={out.detail or '-'}")
    print(f"settlements={bed.facilitator.settlements}")
    for event in audit.events:
        print(event.to_line())
    return EXIT_OK


COMMANDS = {
    "gen-corpus": cmd_gen_corpus,
    "sweep": cmd_sweep,
    "verify-audit": cmd_verify_audit,
    "demo": cmd_demo,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: --help/--version exit 0, bad usage exits 2
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError, CorpusConsistencyError, KeyError) as exc:
        # messages name files and fields, never metadata values
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
