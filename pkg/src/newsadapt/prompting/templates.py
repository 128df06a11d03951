"""Template store: prompt skeleton, per-language instructions, static exemplars.

Task instructions are single-sourced per language so the task definition
stays constant across conditions; only the instruction language and the
context block vary.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from newsadapt.bank.types import Exemplar, ExemplarBank
from newsadapt.ingest.formats import DEFAULT_SEVERITY_VOCABULARY

PLACEHOLDERS = ("{INSTRUCTIONS}", "{EXEMPLARS}", "{ITEM}")


class MissingTemplate(KeyError):
    pass


@dataclass
class TemplateStore:
    prompt_template: str
    instructions: dict[str, str]
    severity_vocabulary: list[str] = field(
        default_factory=lambda: list(DEFAULT_SEVERITY_VOCABULARY)
    )
    static_exemplars: dict[str, list[Exemplar]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for placeholder in PLACEHOLDERS:
            if placeholder not in self.prompt_template:
                raise MissingTemplate(
                    f"prompt template lacks the {placeholder} placeholder"
                )
        self.version_hash = self._hash()

    def _hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.prompt_template.encode("utf-8"))
        for lang in sorted(self.instructions):
            h.update(f"\x1f{lang}\x1f".encode("utf-8"))
            h.update(self.instructions[lang].encode("utf-8"))
        h.update(json.dumps(self.severity_vocabulary).encode("utf-8"))
        return h.hexdigest()

    def instructions_for(self, language: str) -> str:
        try:
            text = self.instructions[language]
        except KeyError:
            raise MissingTemplate(
                f"no instruction template for language {language!r}"
            ) from None
        return text.replace("{SEVERITIES}", ", ".join(self.severity_vocabulary))

    def static_for(self, language: str) -> list[Exemplar]:
        try:
            return self.static_exemplars[language]
        except KeyError:
            raise MissingTemplate(
                f"no static exemplars configured for language {language!r}"
            ) from None

    @classmethod
    def defaults(
        cls,
        severity_vocabulary: list[str] | None = None,
        static_exemplars: dict[str, list[Exemplar]] | None = None,
    ) -> "TemplateStore":
        data = resources.files("newsadapt.prompting") / "data"
        instructions = {}
        for entry in data.iterdir():
            name = entry.name
            if name.startswith("instructions_") and name.endswith(".txt"):
                lang = name[len("instructions_") : -len(".txt")]
                instructions[lang] = entry.read_text(encoding="utf-8").strip()
        return cls(
            prompt_template=(data / "prompt.txt").read_text(encoding="utf-8").strip(),
            instructions=instructions,
            severity_vocabulary=list(
                severity_vocabulary or DEFAULT_SEVERITY_VOCABULARY
            ),
            static_exemplars=static_exemplars or {},
        )

    @classmethod
    def from_dir(
        cls,
        path: str | Path,
        severity_vocabulary: list[str] | None = None,
    ) -> "TemplateStore":
        """Load prompt.txt, instructions_<lang>.txt and optional
        static_exemplars.json from a directory."""
        path = Path(path)
        instructions = {}
        for file in sorted(path.glob("instructions_*.txt")):
            lang = file.stem[len("instructions_") :]
            instructions[lang] = file.read_text(encoding="utf-8").strip()
        static: dict[str, list[Exemplar]] = {}
        static_file = path / "static_exemplars.json"
        if static_file.exists():
            static = load_static_exemplars(static_file)
        return cls(
            prompt_template=(path / "prompt.txt").read_text(encoding="utf-8").strip(),
            instructions=instructions,
            severity_vocabulary=list(
                severity_vocabulary or DEFAULT_SEVERITY_VOCABULARY
            ),
            static_exemplars=static,
        )


def load_static_exemplars(path: str | Path) -> dict[str, list[Exemplar]]:
    """Static exemplar config: {language: [{text, severity, spans, rationale}]}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    out: dict[str, list[Exemplar]] = {}
    for lang, rows in data.items():
        exemplars = []
        for i, row in enumerate(rows):
            exemplars.append(
                Exemplar(
                    article_id=row.get("article_id", f"static-{lang}-{i + 1}"),
                    language=lang,
                    text=row["text"],
                    spans=list(row.get("spans") or []),
                    severity=row.get("severity"),
                    rationale=row.get("rationale") or "",
                    metadata={"static": "true"},
                )
            )
        out[lang] = exemplars
    return out


def static_exemplars_from_bank(
    bank: ExemplarBank, language: str, count: int = 3
) -> list[Exemplar]:
    """Default static context when none is configured: the first `count`
    bank exemplars of the language by article_id (fixed across runs)."""
    pool = sorted(bank.pool(language), key=lambda e: e.article_id)
    return pool[:count]
