from .forms import SURFACE_FORMS, SurfaceForm, surface_forms
from .generator import (
    ConfigError,
    CorpusConsistencyError,
    CorpusSample,
    GeneratorConfig,
    GoldLabel,
    apportion,
    check_dir,
    check_meta,
    generate,
    load_corpus,
    write_corpus,
)
from .templates import CATEGORIES

__all__ = [
    "CATEGORIES",
    "SURFACE_FORMS",
    "ConfigError",
    "CorpusConsistencyError",
    "CorpusSample",
    "GeneratorConfig",
    "GoldLabel",
    "SurfaceForm",
    "apportion",
    "check_dir",
    "check_meta",
    "generate",
    "load_corpus",
    "surface_forms",
    "write_corpus",
]
