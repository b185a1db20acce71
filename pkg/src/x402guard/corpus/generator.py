"""Seeded synthetic corpus of labeled 402 metadata triples.

Composition is drawn by quota (largest remainder) and then shuffled, so
category sizes, PII-positive counts, entity mix, field placement and
surface-form mix land on their configured proportions exactly; only the
pairing of those draws is random.
"""
from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from ..client import MetadataTriple
from ..pii import EntityType
from .forms import COMPACT_PHONE_FORM, FIELDS, FORMS_BY_ID, SURFACE_FORMS, URL, SurfaceForm
from .templates import CATEGORIES, DECOY_RATE, DECOY_TEMPLATES, FILLERS, HOSTS, MODELS, TEMPLATES

E = EntityType

DEFAULT_CATEGORY_WEIGHTS = {
    "ai_inference": 0.18, "data_access": 0.18, "medical": 0.15, "compute": 0.13,
    "media": 0.13, "financial": 0.13, "generic": 0.10,
}

# per-category entity mix; PHONE_NUMBER rides with medical and data_access
DEFAULT_ENTITY_WEIGHTS = {
    "ai_inference": {E.EMAIL_ADDRESS: 0.535, E.PERSON: 0.465},
    "data_access": {E.EMAIL_ADDRESS: 0.3815, E.PERSON: 0.3317, E.US_SSN: 0.159,
                    E.IBAN_CODE: 0.064, E.PHONE_NUMBER: 0.064},
    "medical": {E.PERSON: 0.374, E.US_SSN: 0.458, E.PHONE_NUMBER: 0.168},
    "compute": {E.EMAIL_ADDRESS: 0.535, E.PERSON: 0.465},
    "media": {E.EMAIL_ADDRESS: 0.535, E.PERSON: 0.465},
    "financial": {E.IBAN_CODE: 0.754, E.CREDIT_CARD: 0.246},
    "generic": {E.EMAIL_ADDRESS: 0.535, E.PERSON: 0.465},
}

DEFAULT_FIELD_WEIGHTS = {"resource_url": 0.453, "description": 0.300, "reason": 0.247}

DEFAULT_FORM_WEIGHTS = {
    "email_bare": 0.40, "email_urlencoded": 0.30, "email_query_param": 0.30,
    "person_full_john_smith": 0.104, "person_full_maria_garcia": 0.104, "person_full_wei_chen": 0.104,
    "person_full_aisha_patel": 0.104, "person_full_lars_eriksson": 0.104,
    "person_slug_john_smith": 0.09, "person_slug_maria_garcia": 0.09, "person_underscore": 0.08,
    "person_abbreviated": 0.08, "person_last_first": 0.07, "person_first_only": 0.07,
    "phone_us_dashed": 0.30, "phone_us_parenthesised": 0.25, "phone_us_dotted": 0.23, "phone_intl_compact": 0.22,
    "ssn_dashed": 0.60, "ssn_compact": 0.40,
    "cc_visa_bare": 0.60, "cc_mastercard_bare": 0.40,
    "iban_de": 0.50, "iban_gb": 0.50,
}


class ConfigError(ValueError):
    pass


class CorpusConsistencyError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 42
    n: int = 2000
    pii_rate: float = 0.36
    # share of PII-positive samples that carry a second entity (153 of 722 at defaults)
    second_entity_rate: float = 0.212
    category_weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_CATEGORY_WEIGHTS))
    entity_weights: Mapping[str, Mapping[EntityType, float]] = field(
        default_factory=lambda: {c: dict(w) for c, w in DEFAULT_ENTITY_WEIGHTS.items()})
    field_weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_FIELD_WEIGHTS))
    form_weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_FORM_WEIGHTS))

    def validate(self) -> None:
        if self.n <= 0:
            raise ConfigError("n must be positive")
        for name, rate in (("pii_rate", self.pii_rate), ("second_entity_rate", self.second_entity_rate)):
            if not 0.0 <= rate <= 1.0:
                raise ConfigError(f"{name} must be within [0, 1]")
        _check_weights("category_weights", self.category_weights, CATEGORIES)
        _check_weights("field_weights", self.field_weights, FIELDS)
        for cat in CATEGORIES:
            if cat not in self.entity_weights:
                raise ConfigError(f"no entity weights for category {cat}")
            _check_weights(f"entity_weights[{cat}]", self.entity_weights[cat], list(EntityType))
        for entity, forms in SURFACE_FORMS.items():
            weights = {f.form_id: self.form_weights.get(f.form_id, 0.0) for f in forms}
            _check_weights(f"form_weights[{entity.value}]", weights, list(weights))

    def echo(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "n": self.n,
            "pii_rate": self.pii_rate,
            "second_entity_rate": self.second_entity_rate,
            "category_weights": dict(self.category_weights),
            "entity_weights": {c: {EntityType(e).value: w for e, w in ws.items()} for c, ws in self.entity_weights.items()},
            "field_weights": dict(self.field_weights),
            "form_weights": dict(self.form_weights),
        }


def _check_weights(name: str, weights: Mapping, allowed: Iterable) -> None:
    allowed = set(allowed)
    if not weights:
        raise ConfigError(f"{name} is empty")
    if set(weights) - allowed:
        raise ConfigError(f"{name} has unknown keys {sorted(map(str, set(weights) - allowed))}")
    if any(w < 0 or not math.isfinite(w) for w in weights.values()):
        raise ConfigError(f"{name} has a negative or non-finite weight")
    if sum(weights.values()) <= 0:
        raise ConfigError(f"{name} sums to zero")


def apportion(weights: Mapping[Any, float], total: int) -> dict[Any, int]:
    """Largest-remainder split of ``total`` by ``weights`` (ties: key order).

    Weights need not sum to one; they are normalised first.
    """
    norm = sum(weights.values())
    quotas = {k: w / norm * total for k, w in weights.items()}
    counts = {k: math.floor(q + 1e-9) for k, q in quotas.items()}
    short = total - sum(counts.values())
    by_remainder = sorted(weights, key=lambda k: -(quotas[k] - counts[k]))
    for k in by_remainder[:short]:
        counts[k] += 1
    return counts


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5 + 1e-9)


@dataclass(frozen=True)
class GoldLabel:
    field: str
    entity_type: EntityType
    start: int
    end: int
    surface_form_id: str
    text: str = field(default="", compare=False)

    def to_json(self) -> dict[str, Any]:
        return {"field": self.field, "entity_type": self.entity_type.value, "start": self.start,
                "end": self.end, "surface_form_id": self.surface_form_id}


@dataclass(frozen=True)
class CorpusSample:
    id: int
    category: str
    triple: MetadataTriple
    labels: tuple[GoldLabel, ...]

    def field_text(self, name: str) -> str:
        return getattr(self.triple, name)

    def to_json(self) -> dict[str, Any]:
        return {"id": self.id, "category": self.category, **self.triple.as_dict(),
                "labels": [lab.to_json() for lab in self.labels]}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "CorpusSample":
        triple = MetadataTriple(obj["resource_url"], obj["description"], obj["reason"])
        labels = tuple(
            GoldLabel(lab["field"], EntityType(lab["entity_type"]), int(lab["start"]), int(lab["end"]),
                      lab["surface_form_id"], getattr(triple, lab["field"])[lab["start"]:lab["end"]])
            for lab in obj["labels"]
        )
        return cls(int(obj["id"]), obj["category"], triple, labels)


@dataclass
class _Slot:
    sample: int
    category: str
    entity: EntityType | None = None
    field: str | None = None
    form: SurfaceForm | None = None


def _deal_distinct(pool: list, groups: list[list[_Slot]], attr: str) -> None:
    """Hand out pool items to slot groups; members of one group get distinct
    values where the pool allows it."""
    for group in sorted(groups, key=len, reverse=True):
        taken: list = []
        for slot in group:
            idx = next((i for i, v in enumerate(pool) if v not in taken), 0)
            value = pool.pop(idx)
            taken.append(value)
            setattr(slot, attr, value)


def generate(config: GeneratorConfig = GeneratorConfig()) -> tuple[list[CorpusSample], dict[str, Any]]:
    config.validate()
    rng = random.Random(config.seed)

    cat_counts = apportion({c: config.category_weights[c] for c in CATEGORIES}, config.n)
    categories = [c for c in CATEGORIES for _ in range(cat_counts[c])]
    rng.shuffle(categories)

    by_cat: dict[str, list[int]] = {c: [] for c in CATEGORIES}
    for i, c in enumerate(categories):
        by_cat[c].append(i)

    positives = {c: sorted(rng.sample(by_cat[c], _round_half_up(config.pii_rate * len(by_cat[c]))))
                 for c in CATEGORIES}
    n_pos = sum(len(v) for v in positives.values())
    n_double = min(_round_half_up(config.second_entity_rate * n_pos), n_pos)
    doubles_per_cat = apportion({c: len(positives[c]) for c in CATEGORIES}, n_double) if n_pos else {}
    doubles = {c: set(rng.sample(positives[c], doubles_per_cat.get(c, 0))) for c in CATEGORIES}

    groups: dict[int, list[_Slot]] = {}
    for c in CATEGORIES:
        for s in positives[c]:
            groups[s] = [_Slot(s, c) for _ in range(2 if s in doubles[c] else 1)]
    slots = [slot for s in sorted(groups) for slot in groups[s]]

    # entity type: per-category quota
    for c in CATEGORIES:
        cat_groups = [groups[s] for s in positives[c]]
        n_labels = sum(len(g) for g in cat_groups)
        quota = apportion(config.entity_weights[c], n_labels)
        pool = [e for e, k in quota.items() for _ in range(k)]
        rng.shuffle(pool)
        _deal_distinct(pool, cat_groups, "entity")

    # field: global quota; two entities in one sample go to different fields
    quota = apportion({f: config.field_weights[f] for f in FIELDS}, len(slots))
    pool = [f for f, k in quota.items() for _ in range(k)]
    rng.shuffle(pool)
    _deal_distinct(pool, [groups[s] for s in sorted(groups)], "field")
    for g in groups.values():
        if len({slot.field for slot in g}) < len(g):
            raise ConfigError("field weights leave no room to separate two entities in one sample")

    # surface form: per-entity quota, most constrained slots served first
    for entity, forms in SURFACE_FORMS.items():
        ent_slots = [s for s in slots if s.entity is entity]
        weights = {f.form_id: config.form_weights[f.form_id] for f in forms}
        form_quota = apportion(weights, len(ent_slots))
        fpool = [FORMS_BY_ID[fid] for fid, k in form_quota.items() for _ in range(k)]
        rng.shuffle(fpool)
        ent_slots.sort(key=lambda s: sum(s.field in f.fields for f in forms))
        for slot in ent_slots:
            idx = next((i for i, f in enumerate(fpool) if slot.field in f.fields), None)
            if idx is None:
                fits = [f for f in forms if slot.field in f.fields]
                slot.form = rng.choices(fits, [weights[f.form_id] for f in fits])[0]
            else:
                slot.form = fpool.pop(idx)

    samples = []
    for i, c in enumerate(categories):
        placed = {slot.field: slot for slot in groups.get(i, [])}
        texts: dict[str, str] = {}
        labels: list[GoldLabel] = []
        for name in FIELDS:
            text, label = _render_field(rng, c, name, placed.get(name))
            texts[name] = text
            if label is not None:
                labels.append(label)
        samples.append(CorpusSample(i, c, MetadataTriple(**texts), tuple(labels)))
    return samples, build_meta(samples, config)


def _render_field(rng: random.Random, category: str, name: str, slot: _Slot | None) -> tuple[str, GoldLabel | None]:
    template = rng.choice(TEMPLATES[category][name])
    decoy = DECOY_TEMPLATES.get((category, name))
    if decoy is not None and rng.random() < DECOY_RATE:
        template = decoy
    params = {
        "host": rng.choice(HOSTS[category]),
        "model": rng.choice(MODELS),
        "n": rng.randrange(10, 500),
        "id": rng.randrange(1000, 10000),
    }
    if slot is None:
        return template.format(slot=rng.choice(FILLERS[category]), **params), None

    form = slot.form
    value = form.render(rng)
    if form.prefix and name == URL:
        head = template.format(slot=rng.choice(FILLERS[category]), **params)
        head += ("&" if "?" in head else "?") + form.prefix
        text, start = head + value, len(head)
    else:
        marker = "\x00"
        before, after = template.format(slot=marker, **params).split(marker)
        before += form.prefix
        text, start = before + value + after, len(before)
    return text, GoldLabel(name, slot.entity, start, start + len(value), form.form_id, value)


def build_meta(samples: list[CorpusSample], config: GeneratorConfig) -> dict[str, Any]:
    """Everything here is derivable from the samples alone (plus the config echo)."""
    labels = [lab for s in samples for lab in s.labels]
    entity_counts = Counter(lab.entity_type.value for lab in labels)
    field_counts = Counter(lab.field for lab in labels)
    form_counts = Counter(lab.surface_form_id for lab in labels)
    phone = entity_counts.get(E.PHONE_NUMBER.value, 0)
    compact = form_counts.get(COMPACT_PHONE_FORM, 0)
    total = len(labels)
    return {
        "seed": config.seed,
        "n_samples": len(samples),
        "n_pii_positive": sum(1 for s in samples if s.labels),
        "n_labels": total,
        "category_counts": {c: sum(1 for s in samples if s.category == c) for c in CATEGORIES},
        "pii_positive_by_category": {c: sum(1 for s in samples if s.category == c and s.labels) for c in CATEGORIES},
        "entity_counts": {e.value: entity_counts.get(e.value, 0) for e in EntityType},
        "entity_rates": {e.value: round(entity_counts.get(e.value, 0) / total, 6) if total else 0.0 for e in EntityType},
        "field_counts": {f: field_counts.get(f, 0) for f in FIELDS},
        "field_rates": {f: round(field_counts.get(f, 0) / total, 6) if total else 0.0 for f in FIELDS},
        "surface_form_counts": dict(sorted(form_counts.items())),
        "email_person_share": round((entity_counts.get("EMAIL_ADDRESS", 0) + entity_counts.get("PERSON", 0)) / total, 6) if total else 0.0,
        # pattern mode has no compact international phone rule
        "expected_pattern_phone_recall": round((phone - compact) / phone, 6) if phone else 0.0,
        "config": config.echo(),
    }


CORPUS_FILE = "corpus.jsonl"
META_FILE = "corpus_meta.json"


def write_corpus(samples: list[CorpusSample], meta: Mapping[str, Any], out_dir: str | Path) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpus_path, meta_path = out / CORPUS_FILE, out / META_FILE
    with open(corpus_path, "w", encoding="utf-8", newline="\n") as fh:
        for s in samples:
            fh.write(json.dumps(s.to_json(), ensure_ascii=False, separators=(",", ":")) + "\n")
    meta_path.write_text(json.dumps(meta, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return corpus_path, meta_path


def load_corpus(path: str | Path) -> list[CorpusSample]:
    path = Path(path)
    if path.is_dir():
        path = path / CORPUS_FILE
    if not path.exists():
        raise FileNotFoundError(f"corpus not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return [CorpusSample.from_json(json.loads(line)) for line in fh if line.strip()]


def check_meta(samples: list[CorpusSample], meta: Mapping[str, Any]) -> None:
    """Raise CorpusConsistencyError if ``meta`` disagrees with the samples."""
    seed = meta.get("seed")
    cfg = meta.get("config", {})
    derived = build_meta(samples, GeneratorConfig(seed=seed if isinstance(seed, int) else 0))
    problems = [key for key, value in derived.items() if key not in ("config", "seed") and meta.get(key) != value]
    if cfg.get("seed") != seed:
        problems.append("seed")
    if problems:
        raise CorpusConsistencyError(f"corpus_meta.json disagrees with corpus on: {', '.join(problems)}")
    for s in samples:
        for lab in s.labels:
            text = s.field_text(lab.field)
            if not 0 <= lab.start < lab.end <= len(text):
                raise CorpusConsistencyError(f"sample {s.id}: label span out of bounds")


def check_dir(out_dir: str | Path) -> None:
    out = Path(out_dir)
    meta = json.loads((out / META_FILE).read_text(encoding="utf-8"))
    check_meta(load_corpus(out / CORPUS_FILE), meta)
