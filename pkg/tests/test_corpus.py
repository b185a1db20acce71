import json
import random
from dataclasses import replace

import pytest

from x402guard.corpus import (
    CATEGORIES,
    ConfigError,
    CorpusConsistencyError,
    GeneratorConfig,
    apportion,
    check_dir,
    check_meta,
    generate,
    load_corpus,
    surface_forms,
    write_corpus,
)
from x402guard.corpus.generator import DEFAULT_ENTITY_WEIGHTS
from x402guard.pii import EntityType as E

TABLE_COUNTS = {"ai_inference": 360, "data_access": 360, "medical": 300, "compute": 260,
                "media": 260, "financial": 260, "generic": 200}
TARGET_SHARES = {E.PERSON: 0.367, E.EMAIL_ADDRESS: 0.358, E.IBAN_CODE: 0.110,
                 E.US_SSN: 0.097, E.PHONE_NUMBER: 0.037, E.CREDIT_CARD: 0.032}


def test_category_counts_exact(default_corpus):
    _, meta = default_corpus
    assert meta["category_counts"] == TABLE_COUNTS
    assert meta["n_samples"] == 2000 and meta["seed"] == 42


def test_pii_positive_counts(default_corpus):
    _, meta = default_corpus
    assert meta["n_pii_positive"] == 722
    assert meta["pii_positive_by_category"] == {"ai_inference": 130, "data_access": 130, "medical": 108,
                                                "compute": 94, "media": 94, "financial": 94, "generic": 72}
    assert meta["n_labels"] == 875


def test_entity_shares_near_targets(default_corpus):
    _, meta = default_corpus
    for entity, target in TARGET_SHARES.items():
        assert abs(meta["entity_rates"][entity.value] - target) <= 0.015
    assert meta["email_person_share"] >= 0.70


def test_resource_url_share(default_corpus):
    _, meta = default_corpus
    assert abs(meta["field_rates"]["resource_url"] - 0.453) <= 0.02


def test_label_fidelity(default_corpus):
    samples, _ = default_corpus
    for s in samples:
        for lab in s.labels:
            assert s.field_text(lab.field)[lab.start:lab.end] == lab.text


def test_labels_within_category_entities(default_corpus):
    samples, _ = default_corpus
    for s in samples:
        allowed = {e for e, w in DEFAULT_ENTITY_WEIGHTS[s.category].items() if w > 0}
        assert {lab.entity_type for lab in s.labels} <= allowed


def test_two_entities_go_to_different_fields(default_corpus):
    samples, _ = default_corpus
    for s in samples:
        assert len(s.labels) <= 2
        assert len({lab.field for lab in s.labels}) == len(s.labels)


def test_surface_forms_honour_field_restrictions(default_corpus):
    from x402guard.corpus.forms import FORMS_BY_ID
    samples, _ = default_corpus
    for s in samples:
        for lab in s.labels:
            assert lab.field in FORMS_BY_ID[lab.surface_form_id].fields


def test_deterministic_files(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        write_corpus(*generate(GeneratorConfig(seed=42)), out)
    for name in ("corpus.jsonl", "corpus_meta.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_different_seed_differs():
    s1, _ = generate(GeneratorConfig(seed=1, n=200))
    s2, _ = generate(GeneratorConfig(seed=2, n=200))
    assert [x.triple for x in s1] != [x.triple for x in s2]


def test_roundtrip_and_meta_check(tmp_path):
    samples, meta = generate(GeneratorConfig(seed=7, n=300))
    write_corpus(samples, meta, tmp_path)
    loaded = load_corpus(tmp_path)
    assert loaded == samples
    check_dir(tmp_path)
    line = json.loads((tmp_path / "corpus.jsonl").read_text().splitlines()[0])
    assert list(line) == ["id", "category", "resource_url", "description", "reason", "labels"]


def test_corrupted_meta_detected(tmp_path):
    samples, meta = generate(GeneratorConfig(seed=7, n=300))
    bad = json.loads(json.dumps(meta))
    bad["entity_counts"]["PERSON"] += 1
    with pytest.raises(CorpusConsistencyError):
        check_meta(samples, bad)


def test_missing_corpus_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path / "nope.jsonl")


@pytest.mark.parametrize("change", [
    {"n": 0},
    {"pii_rate": 1.5},
    {"category_weights": {"ai_inference": 1.0, "bogus": 1.0}},
    {"field_weights": {"resource_url": -1.0, "description": 1.0, "reason": 1.0}},
    {"category_weights": {c: 0.0 for c in CATEGORIES}},
])
def test_invalid_config(change):
    with pytest.raises(ConfigError):
        generate(replace(GeneratorConfig(), **change))


def test_surface_form_inventory():
    assert len(surface_forms(E.PERSON)) == 11
    rng = random.Random(0)
    phones = {fid: render for fid, render in surface_forms(E.PHONE_NUMBER)}
    assert len(phones) == 4
    assert any(phones["phone_intl_compact"](rng) == "+14155550182" for _ in range(200))
    emails = dict(surface_forms(E.EMAIL_ADDRESS))
    assert set(emails) == {"email_bare", "email_urlencoded", "email_query_param"}
    assert "alice@example.com".replace("@", "%40") == "alice%40example.com"
    assert any(emails["email_urlencoded"](rng) == "alice%40example.com" for _ in range(200))
    assert len(surface_forms(E.US_SSN)) == 2 and len(surface_forms(E.IBAN_CODE)) == 2


def test_apportion_largest_remainder():
    assert apportion({"a": 0.5, "b": 0.3, "c": 0.2}, 7) == {"a": 4, "b": 2, "c": 1}
    assert sum(apportion({"a": 1, "b": 1, "c": 1}, 10).values()) == 10
    assert apportion({"a": 0.18, "b": 0.82}, 0) == {"a": 0, "b": 0}


def test_zero_pii_rate():
    samples, meta = generate(GeneratorConfig(n=100, pii_rate=0.0))
    assert meta["n_labels"] == 0 and all(not s.labels for s in samples)


def test_meta_phone_recall_expectation(default_corpus):
    _, meta = default_corpus
    forms = meta["surface_form_counts"]
    phones = sum(v for k, v in forms.items() if k.startswith("phone_"))
    assert meta["expected_pattern_phone_recall"] == round((phones - forms["phone_intl_compact"]) / phones, 6)
