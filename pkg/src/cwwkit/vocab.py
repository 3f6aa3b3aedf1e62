"""Five-term vocabularies shared by the engines and the corpora."""

from __future__ import annotations

from .fuzzy import TriTuple

CRITERIA = ("battery", "app_rating", "app_type", "time_spent")

TERMS = {
    "battery": ("BVL", "BL", "BM", "BH", "BEH"),
    "app_rating": ("AVS", "AS", "AM", "AF", "AEF"),
    "app_type": ("AU", "SI", "FI", "MI", "AI"),
    "time_spent": ("VL", "S", "M", "L", "VLA"),
    "satisfaction": ("NS", "SOS", "SS", "VS", "OS"),
    "weight": ("U", "MLU", "I", "MLI", "VI"),
}

NAMES = {
    "BVL": "Very low", "BL": "Low", "BM": "Medium", "BH": "High", "BEH": "Extremely high",
    "AVS": "Very slow", "AS": "Slow", "AM": "Moderate", "AF": "Fast", "AEF": "Extremely fast",
    "AU": "Absolutely uninteresting", "SI": "Somewhat interesting", "FI": "Fairly interesting",
    "MI": "More interesting", "AI": "Absolutely interesting",
    "VL": "Very little", "S": "Small", "M": "Moderate", "L": "Large", "VLA": "Very large",
    "NS": "Not satisfied", "SOS": "Somehow satisfied", "SS": "Satisfied", "VS": "Very satisfied",
    "OS": "Overly satisfied",
    "U": "Unimportant", "MLU": "More or less unimportant", "I": "Important",
    "MLI": "More or less important", "VI": "Very important",
}

EQUAL = "Equal"

# uniform partition of [0, 1]; rank k maps to the k-th entry
UNIFORM_TRIS = (
    TriTuple(0.0, 0.0, 0.25),
    TriTuple(0.0, 0.25, 0.5),
    TriTuple(0.25, 0.5, 0.75),
    TriTuple(0.5, 0.75, 1.0),
    TriTuple(0.75, 1.0, 1.0),
)
DISTANCE_TERMS = UNIFORM_TRIS


class VocabularyError(KeyError):
    pass


def rank(criterion: str, word: str) -> int:
    """1-based index of ``word`` in its criterion's ordered term set."""
    try:
        return TERMS[criterion].index(word) + 1
    except (KeyError, ValueError):
        raise VocabularyError(f"unknown word {word!r} for criterion {criterion!r}") from None


def tri(criterion: str, word: str) -> TriTuple:
    return UNIFORM_TRIS[rank(criterion, word) - 1]


def criterion_of(word: str) -> str:
    for crit, words in TERMS.items():
        if word in words:
            return crit
    raise VocabularyError(f"unknown word {word!r}")
