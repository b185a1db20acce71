"""Writes ``sweep_report.json`` and ``sweep_report.md``.

The JSON layout is documented in docs/report_schema.md.
"""
from __future__ import annotations

import json
from pathlib import Path

from ..pii import ALL_ENTITIES, EntityType, Mode
from .sweep import RECOMMENDED_MIN_SCORE, THRESHOLDS, SweepReport

JSON_NAME = "sweep_report.json"
MD_NAME = "sweep_report.md"


def _f(x: float) -> str:
    return f"{x:.3f}"


def render_markdown(report: SweepReport) -> str:
    pattern = report.row(Mode.PATTERN)
    contextual = report.row(Mode.CONTEXTUAL, min_score=RECOMMENDED_MIN_SCORE)
    lines = [
        "# PII detection sweep",
        "",
        f"{report.n_samples} samples, {report.n_gold} gold labels, {len(report.rows)} configurations.",
        "",
        f"## Per-entity results (all entities; contextual at min_score={RECOMMENDED_MIN_SCORE})",
        "",
        "| Entity | Pattern P | Pattern R | Pattern F1 | Contextual P | Contextual R | Contextual F1 | Gold |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for e in EntityType:
        a, b = pattern.metrics.per_entity[e], contextual.metrics.per_entity[e]
        lines.append(f"| {e.value} | {_f(a.precision)} | {_f(a.recall)} | {_f(a.f1)} | "
                     f"{_f(b.precision)} | {_f(b.recall)} | {_f(b.f1)} | {a.tp + a.fn} |")
    pm, cm = pattern.metrics.micro, contextual.metrics.micro
    lines.append(f"| **Micro** | {_f(pm.precision)} | {_f(pm.recall)} | {_f(pm.f1)} | "
                 f"{_f(cm.precision)} | {_f(cm.recall)} | {_f(cm.f1)} | {pm.tp + pm.fn} |")
    if report.latency:
        lines += ["", "## Latency (ms per analyze call)", "", "| Mode | p50 | p95 | p99 |", "|---|---|---|---|"]
        for mode, st in report.latency.items():
            lines.append(f"| {mode} | {st.p50:.4f} | {st.p95:.4f} | {st.p99:.4f} |")
        first = next(iter(report.latency.values()))
        lines.append("")
        lines.append(f"{first.n_warmup} warmup calls discarded, {first.n_timed} timed; nearest-rank percentiles.")

    lines += ["", "## Threshold sweep (contextual, all entities)", "",
              "| min_score | " + " | ".join(f"{e.value} R" for e in EntityType) + " | Micro P | Micro R | Micro F1 |",
              "|---" * (len(EntityType) + 4) + "|"]
    for t in THRESHOLDS:
        m = report.row(Mode.CONTEXTUAL, ALL_ENTITIES, t).metrics
        lines.append(f"| {t} | " + " | ".join(_f(m.per_entity[e].recall) for e in EntityType)
                     + f" | {_f(m.micro_p)} | {_f(m.micro_r)} | {_f(m.micro_f1)} |")

    t3 = report.top3.metrics.micro
    lines += ["", "## Top-3 subset (EMAIL_ADDRESS, PERSON, IBAN_CODE; contextual @ 0.4)", "",
              f"True positives {t3.tp} of {report.n_gold} gold labels; "
              f"{report.top3_ratio * 100:.1f}% of the all-entity true positives.", "",
              "## All configurations", "",
              "| Config | Micro P | Micro R | Micro F1 | TP | FP | FN | Degenerate |",
              "|---|---|---|---|---|---|---|---|"]
    for row in report.rows:
        m = row.metrics.micro
        lines.append(f"| {row.config.label} | {_f(m.precision)} | {_f(m.recall)} | {_f(m.f1)} | "
                     f"{m.tp} | {m.fp} | {m.fn} | {'yes' if m.degenerate else ''} |")
    return "\n".join(lines) + "\n"


def write_report(report: SweepReport, out_dir: str | Path) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jp, mp = out / JSON_NAME, out / MD_NAME
    jp.write_text(json.dumps(report.as_dict(), indent=2) + "\n", encoding="utf-8")
    mp.write_text(render_markdown(report), encoding="utf-8")
    return jp, mp
