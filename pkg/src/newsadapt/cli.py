"""Command-line interface for the full pipeline."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from newsadapt.bank.embedding import (
    EmbeddingCache,
    HashedNgramProvider,
    HttpEmbeddingProvider,
)
from newsadapt.bank.retrieval import retrieve
from newsadapt.bank.store import build_bank, load_bank, save_bank
from newsadapt.curation.service import build_app, provider_from_id
from newsadapt.evaluation.ab import (
    build_ab_assignments,
    export_for_evaluators,
    provenance_map,
    read_ratings,
    write_jsonl,
)
from newsadapt.evaluation.metrics import EmbeddingCosineScorer, HttpScorer
from newsadapt.evaluation.ab import aggregate_ab_ratings
from newsadapt.evaluation.report import emit_report
from newsadapt.evaluation.scoring import score_cells
from newsadapt.gateway.config import DEFAULT_MODELS, load_model_configs
from newsadapt.gateway.cache import GenerationCache
from newsadapt.gateway.runner import read_matrix, run_matrix, write_matrix
from newsadapt.gateway.transport import HttpChatTransport, MockChatTransport
from newsadapt.ingest.formats import CorpusFormat
from newsadapt.ingest.pipeline import build_master_table
from newsadapt.ingest.types import CleanArticle
from newsadapt.prompting.assemble import assemble_prompt
from newsadapt.prompting.conditions import get_condition
from newsadapt.prompting.templates import TemplateStore


def _parse_kv_ints(text: str) -> dict[str, int]:
    out = {}
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        key, _, value = chunk.partition("=")
        out[key.strip()] = int(value)
    return out


def _write_articles(articles: list[CleanArticle], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for article in articles:
            fh.write(json.dumps(article.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def _read_articles(path: Path) -> list[CleanArticle]:
    articles = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                articles.append(CleanArticle.from_dict(json.loads(line)))
    return articles


def load_split(split_dir: str | Path) -> tuple[list[CleanArticle], list[CleanArticle], dict]:
    split_dir = Path(split_dir)
    meta_path = split_dir / "split_meta.json"
    meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}
    return (
        _read_articles(split_dir / "bank.jsonl"),
        _read_articles(split_dir / "test.jsonl"),
        meta,
    )


def _embedding_provider(name: str, dim: int, ngram: int):
    if name in ("hashed", "fallback"):
        return HashedNgramProvider(dim=dim, n=ngram)
    if name.startswith("http://") or name.startswith("https://"):
        return HttpEmbeddingProvider(url=name, dim=dim)
    raise click.BadParameter(f"unknown embedding provider {name!r}")


@click.group()
def main():
    """Culturally adaptive news assessment pipeline."""


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True))
@click.option("--format", "format_path", type=click.Path(exists=True))
@click.option("--holdout", required=True, help="per-language counts, e.g. fa=100,it=100")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
def ingest(corpus, format_path, holdout, seed, out):
    """Clean the raw annotation corpus and split it into bank and test."""
    fmt = CorpusFormat.from_file(format_path) if format_path else CorpusFormat()
    holdout_map = _parse_kv_ints(holdout)
    with open(corpus, "rb") as fh:
        split, report = build_master_table(fh, fmt, holdout_map, seed)

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_articles(sorted(split.bank + split.test, key=lambda a: a.article_id),
                    out_dir / "master.jsonl")
    _write_articles(split.bank, out_dir / "bank.jsonl")
    _write_articles(split.test, out_dir / "test.jsonl")
    (out_dir / "report.json").write_text(
        json.dumps(report.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    (out_dir / "report.txt").write_text(report.render_text(), encoding="utf-8")
    (out_dir / "split_meta.json").write_text(
        json.dumps(
            {
                "seed": seed,
                "holdout": holdout_map,
                "severity_vocabulary": fmt.severity_vocabulary,
                "languages": fmt.languages,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    click.echo(report.render_text())
    click.echo(f"split written to {out_dir}")


@main.command("build-bank")
@click.option("--split", "split_dir", required=True, type=click.Path(exists=True))
@click.option("--provider", default="hashed", show_default=True,
              help="'hashed' for the offline fallback, or an embedding endpoint URL")
@click.option("--dim", type=int, default=512, show_default=True)
@click.option("--ngram", type=int, default=3, show_default=True)
@click.option("--out", required=True, type=click.Path())
def build_bank_cmd(split_dir, provider, dim, ngram, out):
    """Embed the bank articles and persist the exemplar bank."""
    bank_articles, _, _ = load_split(split_dir)
    emb = _embedding_provider(provider, dim, ngram)
    bank = build_bank(bank_articles, emb)
    save_bank(bank, out)
    click.echo(
        f"bank written to {out}: {len(bank)} exemplars, "
        f"languages {bank.languages()}, fingerprint {bank.fingerprint[:12]}"
    )


@main.command("retrieve")
@click.option("--bank", "bank_path", required=True, type=click.Path(exists=True))
@click.option("--query-id", required=True)
@click.option("--k", type=int, default=3, show_default=True)
@click.option("--split", "split_dir", type=click.Path(exists=True),
              help="where to look up the query article (defaults to the bank itself)")
def retrieve_cmd(bank_path, query_id, k, split_dir):
    """Print the ranked same-language neighbours of one article."""
    bank = load_bank(bank_path)
    query = _find_article(query_id, bank, split_dir)
    provider = provider_from_id(bank.provider_id)
    result = retrieve(query, bank, provider, k)
    for ex, score in result.items:
        click.echo(f"{score:.6f}  {ex.article_id}  [{ex.severity or 'None'}]")
    if result.shortfall:
        click.echo(f"(pool shortfall: requested {k}, returned {result.k_returned})")


def _find_article(article_id: str, bank, split_dir) -> CleanArticle:
    if split_dir:
        bank_articles, test_articles, _ = load_split(split_dir)
        for article in bank_articles + test_articles:
            if article.article_id == article_id:
                return article
    for ex in bank.exemplars:
        if ex.article_id == article_id:
            return CleanArticle(
                article_id=ex.article_id,
                language=ex.language,
                article_text=ex.text,
                label="Problematic" if ex.severity else "None",
                severity=ex.severity,
                spans=list(ex.spans),
                rationale=ex.rationale,
                source_record_id=ex.metadata.get("source_record_id", ""),
            )
    raise click.ClickException(f"article {article_id!r} not found")


@main.command("render")
@click.option("--condition", required=True)
@click.option("--article-id", required=True)
@click.option("--bank", "bank_path", required=True, type=click.Path(exists=True))
@click.option("--k", type=int, default=3, show_default=True)
@click.option("--split", "split_dir", type=click.Path(exists=True))
@click.option("--templates", "templates_dir", type=click.Path(exists=True))
def render_cmd(condition, article_id, bank_path, k, split_dir, templates_dir):
    """Render one prompt bundle for inspection."""
    bank = load_bank(bank_path)
    article = _find_article(article_id, bank, split_dir)
    cond = get_condition(condition)
    meta_vocab = None
    if split_dir:
        _, _, meta = load_split(split_dir)
        meta_vocab = meta.get("severity_vocabulary")
    templates = (
        TemplateStore.from_dir(templates_dir, meta_vocab)
        if templates_dir
        else TemplateStore.defaults(meta_vocab)
    )
    context = None
    if cond.context_source == "retrieved":
        provider = provider_from_id(bank.provider_id)
        context = retrieve(article, bank, provider, k)
    elif cond.context_source == "static":
        from newsadapt.prompting.templates import static_exemplars_from_bank

        context = static_exemplars_from_bank(bank, article.language, k)
    bundle = assemble_prompt(cond, article, context=context, templates=templates)
    click.echo(f"# condition={bundle.condition} article={bundle.article_id}")
    click.echo(f"# injected exemplars: {bundle.injected_exemplar_ids}")
    click.echo(f"# template version: {bundle.template_version[:12]}")
    click.echo(bundle.prompt_text)


@main.command("run")
@click.option("--split", "split_dir", required=True, type=click.Path(exists=True))
@click.option("--bank", "bank_path", required=True, type=click.Path(exists=True))
@click.option("--conditions", default="B0,B1,M1,A1", show_default=True)
@click.option("--models", "models_path", type=click.Path(exists=True),
              help="JSON model config list; defaults to the two pilot models")
@click.option("--k", type=int, default=3, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--provider", "gen_provider", default="mock", show_default=True,
              help="'mock' for the offline provider, 'openrouter' for the HTTP endpoint")
@click.option("--concurrency", type=int, default=4, show_default=True)
@click.option("--templates", "templates_dir", type=click.Path(exists=True))
def run_cmd(split_dir, bank_path, conditions, models_path, k, out, gen_provider,
            concurrency, templates_dir):
    """Run the full (item x condition x model) generation matrix."""
    _, test_articles, meta = load_split(split_dir)
    bank = load_bank(bank_path)
    vocabulary = meta.get("severity_vocabulary")
    templates = (
        TemplateStore.from_dir(templates_dir, vocabulary)
        if templates_dir
        else TemplateStore.defaults(vocabulary)
    )
    condition_list = [get_condition(name.strip()) for name in conditions.split(",")]
    models = load_model_configs(models_path) if models_path else list(DEFAULT_MODELS)
    if gen_provider == "mock":
        transport = MockChatTransport(vocabulary=templates.severity_vocabulary)
    elif gen_provider in ("openrouter", "http"):
        transport = HttpChatTransport()
    else:
        raise click.BadParameter(f"unknown generation provider {gen_provider!r}")

    out_dir = Path(out)
    cache = GenerationCache(out_dir / "generations.jsonl")
    provider = provider_from_id(bank.provider_id)
    result = run_matrix(
        items=test_articles,
        conditions=condition_list,
        models=models,
        bank=bank,
        provider=provider,
        templates=templates,
        k=k,
        transport=transport,
        cache=cache,
        concurrency=concurrency,
    )
    results_path = write_matrix(result, out_dir)
    click.echo(
        f"{len(result.cells)} cells completed, {len(result.failures)} failed; "
        f"results at {results_path}"
    )
    if result.failures:
        for failure in result.failures:
            click.echo(f"  FAILED {failure['cell_id']}: {failure['error']}", err=True)


@main.command("evaluate")
@click.option("--run", "run_dir", required=True, type=click.Path(exists=True))
@click.option("--split", "split_dir", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--scorer-url", help="external rationale scorer endpoint (two texts in, F1 out)")
def evaluate_cmd(run_dir, split_dir, out, scorer_url):
    """Score a completed run against the article-level reference."""
    cells = read_matrix(Path(run_dir) / "results.jsonl")
    _, test_articles, _ = load_split(split_dir)
    references = {a.article_id: a for a in test_articles}
    scorer = (
        HttpScorer(scorer_url)
        if scorer_url
        else EmbeddingCosineScorer(HashedNgramProvider(), EmbeddingCache())
    )
    scores = score_cells(cells, references, scorer)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "cell_scores.jsonl", "w", encoding="utf-8") as fh:
        for score in scores:
            fh.write(json.dumps(score.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
    json_path, text_path = emit_report(scores, out_dir=out_dir)
    click.echo((out_dir / "report.txt").read_text(encoding="utf-8"))
    click.echo(f"report at {json_path} / {text_path}")


@main.command("assignments")
@click.option("--split", "split_dir", required=True, type=click.Path(exists=True))
@click.option("--evaluators", required=True, help="per-language counts, e.g. fa=5,it=5")
@click.option("--pair", default="B1:M1", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default=".", show_default=True, type=click.Path())
@click.option("--run", "run_dir", type=click.Path(exists=True),
              help="completed run dir used to fill rationale texts")
@click.option("--model", "model_id", help="model whose rationales enter the A/B export")
def assignments_cmd(split_dir, evaluators, pair, seed, out, run_dir, model_id):
    """Build blinded A/B assignments and the evaluator-facing export."""
    _, test_articles, _ = load_split(split_dir)
    evaluator_map = _parse_kv_ints(evaluators)
    cond_a, _, cond_b = pair.partition(":")
    if not cond_b:
        raise click.BadParameter("--pair must look like B1:M1")
    items_by_language: dict[str, list[str]] = {}
    for article in test_articles:
        items_by_language.setdefault(article.language, []).append(article.article_id)
    assignments = build_ab_assignments(
        items_by_language, evaluator_map, (cond_a, cond_b), seed
    )

    rationales = None
    if run_dir:
        cells = read_matrix(Path(run_dir) / "results.jsonl")
        rationales = {}
        for cell in cells:
            if model_id and cell.model_id != model_id:
                continue
            rationales[(cell.article_id, cell.condition)] = cell.assessment.rationale

    item_texts = {a.article_id: a.article_text for a in test_articles}
    export_rows = export_for_evaluators(assignments, item_texts, rationales)

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "assignments.json").write_text(
        json.dumps([a.to_dict() for a in assignments], ensure_ascii=False, indent=2,
                   sort_keys=True) + "\n",
        encoding="utf-8",
    )
    write_jsonl(export_rows, out_dir / "ab_export.jsonl")
    (out_dir / "ab_provenance.json").write_text(
        json.dumps(provenance_map(assignments), ensure_ascii=False, indent=2,
                   sort_keys=True) + "\n",
        encoding="utf-8",
    )
    click.echo(
        f"{len(assignments)} assignments over "
        f"{sum(len(a.item_ids) for a in assignments)} items written to {out_dir}"
    )


@main.command("ab-report")
@click.option("--ratings", "ratings_path", required=True, type=click.Path(exists=True))
@click.option("--provenance", "provenance_path", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path())
def ab_report_cmd(ratings_path, provenance_path, out):
    """Unblind collected ratings and print per-condition aggregates."""
    ratings = read_ratings(ratings_path)
    provenance = json.loads(Path(provenance_path).read_text(encoding="utf-8"))
    report = aggregate_ab_ratings(ratings, provenance)
    payload = json.dumps(report.to_dict(), ensure_ascii=False, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(payload + "\n", encoding="utf-8")
    click.echo(payload)


@main.command("serve")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data", "data_dir", required=True, type=click.Path(exists=True))
def serve_cmd(port, host, data_dir):
    """Serve the curation and rating API."""
    import uvicorn

    uvicorn.run(build_app(data_dir), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
