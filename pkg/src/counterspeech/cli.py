"""Command-line entry points.

    counterspeech serve        run the ingestion + operator API
    counterspeech replay       drive the pipeline from a fixture file
    counterspeech report       election-period rollup from a store
    counterspeech mock-scorer  run the deterministic scoring endpoint
    counterspeech fixture      generate a synthetic tweet fixture
    counterspeech train        fit (optionally sweep) the GBDT validator
    counterspeech eval ...     auc | cv | ablate | kde reports
"""

from __future__ import annotations

import csv
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from .balance import BalancerConfig
from .corpus import load_roster
from .curation import CurationLibrary, OperatorConfig
from .evaluation import (
    ablation,
    auc,
    default_feature_groups,
    kde_report,
    kfold_cv,
    make_gbdt_trainer,
    sweep,
)
from .fixtures import default_mock_rules, generate_tweet_fixture
from .gbdt import TrainParams, train
from .pipeline import PipelineService, PipelineStore, StreamFilterConfig, build_report
from .scorers import (
    HateScorer,
    MockToxicityClient,
    ScoreRules,
    ScorerSet,
    SentimentScorer,
    ToxicityClient,
    create_scorer_app,
)


def _parse_when(text: str | None) -> datetime | None:
    if not text:
        return None
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def _label_to_int(token: str, row: int) -> int:
    token = token.strip()
    if token == "hateful":
        return 1
    if token == "not_hateful":
        return 0
    try:
        return int(token)
    except ValueError:
        raise click.ClickException(f"unparseable label {token!r} at data row {row}")


def _load_scored_csv(path: str) -> tuple[np.ndarray, np.ndarray]:
    scores, labels = [], []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or not {"score", "label"} <= set(reader.fieldnames):
            raise click.ClickException("expected CSV columns: score,label")
        for i, row in enumerate(reader, start=2):
            scores.append(float(row["score"]))
            labels.append(_label_to_int(row["label"], i))
    return np.array(scores), np.array(labels)


def _load_feature_csv(path: str) -> tuple[np.ndarray, np.ndarray, list[str]]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or header[-1] != "label":
            raise click.ClickException("expected a featurized CSV ending in a label column")
        names = header[:-1]
        x, y = [], []
        for i, row in enumerate(reader, start=2):
            x.append([float(v) for v in row[:-1]])
            y.append(_label_to_int(row[-1], i))
    return np.array(x), np.array(y, dtype=float), names


def _build_scorer_set(scorer_url: str | None, rules_file: str | None) -> ScorerSet:
    if scorer_url:
        toxicity = ToxicityClient(scorer_url)
    else:
        rules = ScoreRules.from_file(rules_file) if rules_file else default_mock_rules()
        toxicity = MockToxicityClient(rules)
    return ScorerSet(toxicity=toxicity, sentiment=SentimentScorer(), hate=HateScorer())


def _tracked_from_roster(roster_path: str | None, tracked: tuple[str, ...]) -> frozenset[str]:
    handles = set(tracked)
    if roster_path:
        handles |= {c.handle for c in load_roster(roster_path) if c.tracked}
    if not handles:
        raise click.ClickException("no tracked handles: pass --roster or --tracked")
    return frozenset(handles)


@click.group()
def main():
    """Abuse-scoring pipeline with a curated supportive responder."""


@main.command()
@click.option("--roster", type=click.Path(exists=True), default=None, help="candidate roster CSV")
@click.option("--tracked", multiple=True, help="tracked handle (repeatable)")
@click.option("--library", "library_path", type=click.Path(), default=None, help="positivitweet JSONL")
@click.option("--theta", type=float, default=0.8, show_default=True)
@click.option("--scorer-url", default=None, help="toxicity endpoint; omit to use the in-process mock")
@click.option("--rules", "rules_file", type=click.Path(exists=True), default=None, help="mock scorer rules JSON")
@click.option("--store", "store_path", type=click.Path(), default="counterspeech.db", show_default=True)
@click.option("--self-handle", default="counterspeech_bot", show_default=True)
@click.option("--daily-cap", type=int, default=100, show_default=True)
@click.option("--min-interval", type=float, default=30.0, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--token", default=None, help="bearer token; omit for unauthenticated dev mode")
@click.option("--workers", type=int, default=4, show_default=True)
def serve(roster, tracked, library_path, theta, scorer_url, rules_file, store_path,
          self_handle, daily_cap, min_interval, host, port, token, workers):
    """Run the ingestion endpoint and operator API."""
    import uvicorn

    from .api import create_app

    store = PipelineStore(store_path)
    library = (
        CurationLibrary.import_jsonl(library_path)
        if library_path and Path(library_path).exists()
        else CurationLibrary()
    )
    service = PipelineService(
        store=store,
        scorers=_build_scorer_set(scorer_url, rules_file),
        filter_config=StreamFilterConfig(
            tracked_handles=_tracked_from_roster(roster, tracked),
            self_handle=self_handle,
        ),
        config=OperatorConfig(theta=theta, daily_cap=daily_cap,
                              min_interval=min_interval, store=store),
        library=library,
        workers=workers,
        clock=lambda: datetime.now(timezone.utc),
    )
    click.echo(f"serving on http://{host}:{port} (store: {store_path})")
    uvicorn.run(create_app(service, token=token), host=host, port=port, log_level="info")


@main.command()
@click.option("--fixture", type=click.Path(exists=True), required=True)
@click.option("--rate", type=float, default=0.0, show_default=True, help="tweets/sec; 0 = unthrottled")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--store", "store_path", type=click.Path(), default=":memory:", show_default=True)
@click.option("--theta", type=float, default=0.8, show_default=True)
@click.option("--rules", "rules_file", type=click.Path(exists=True), default=None)
@click.option("--scorer-url", default=None)
@click.option("--roster", type=click.Path(exists=True), default=None)
@click.option("--tracked", multiple=True, default=("candidate_a", "candidate_b", "candidate_c"),
              show_default=True)
@click.option("--library", "library_path", type=click.Path(exists=True), default=None)
@click.option("--approved", type=int, default=20, show_default=True,
              help="approved placeholder entries when no --library is given")
@click.option("--daily-cap", type=int, default=100, show_default=True)
@click.option("--min-interval", type=float, default=30.0, show_default=True)
def replay(fixture, rate, seed, store_path, theta, rules_file, scorer_url, roster,
           tracked, library_path, approved, daily_cap, min_interval):
    """Replay a JSON-Lines tweet fixture and print the run summary."""
    store = PipelineStore(store_path)
    if library_path:
        library = CurationLibrary.import_jsonl(library_path)
    else:
        library = CurationLibrary()
        for i in range(approved):
            entry = library.submit(f"placeholder positivitweet {i + 1}")
            library.review(entry.id, "approve", "replay-setup")
    service = PipelineService(
        store=store,
        scorers=_build_scorer_set(scorer_url, rules_file),
        filter_config=StreamFilterConfig(
            tracked_handles=_tracked_from_roster(roster, tuple(tracked)),
            self_handle="counterspeech_bot",
        ),
        config=OperatorConfig(theta=theta, daily_cap=daily_cap,
                              min_interval=min_interval, store=store),
        library=library,
        seed=seed,
    )
    summary = service.replay(fixture, rate=rate)
    click.echo(json.dumps(summary.to_dict(), sort_keys=True))


@main.command()
@click.option("--store", "store_path", type=click.Path(exists=True), required=True)
@click.option("--from", "frm", default=None, help="period start (ISO 8601, UTC)")
@click.option("--to", default=None, help="period end (ISO 8601, UTC)")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text",
              show_default=True)
@click.option("--out", type=click.Path(), default=None)
def report(store_path, frm, to, fmt, out):
    """Render the election report for a period."""
    result = build_report(PipelineStore(store_path), _parse_when(frm), _parse_when(to))
    rendered = result.to_json() if fmt == "json" else result.render_text()
    if out:
        Path(out).write_text(rendered + "\n", encoding="utf-8")
    click.echo(rendered)


@main.command("mock-scorer")
@click.option("--rules", "rules_file", type=click.Path(exists=True), default=None)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8100, show_default=True)
def mock_scorer(rules_file, host, port):
    """Serve the deterministic mock toxicity endpoint."""
    import uvicorn

    rules = ScoreRules.from_file(rules_file) if rules_file else default_mock_rules()
    uvicorn.run(create_scorer_app(rules), host=host, port=port, log_level="info")


@main.command()
@click.option("--out", type=click.Path(), required=True)
@click.option("--n", type=int, default=1000, show_default=True)
@click.option("--abusive-every", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--spacing", type=float, default=60.0, show_default=True, help="seconds between tweets")
def fixture(out, n, abusive_every, seed, spacing):
    """Generate a synthetic tweet fixture (JSON Lines)."""
    abusive = generate_tweet_fixture(out, n, abusive_every=abusive_every, seed=seed,
                                     spacing_seconds=spacing)
    click.echo(json.dumps({"written": n, "abusive": abusive, "path": str(out)}))


@main.command("train")
@click.option("--dataset", type=click.Path(exists=True), required=True,
              help="featurized CSV: feature columns then a label column")
@click.option("--out", type=click.Path(), required=True, help="model JSON path")
@click.option("--sweep/--no-sweep", "do_sweep", default=False, show_default=True)
@click.option("--balance/--no-balance", "do_balance", default=True, show_default=True)
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--num-trees", type=int, default=100, show_default=True)
@click.option("--learning-rate", type=float, default=0.1, show_default=True)
@click.option("--max-leaves", type=int, default=31, show_default=True)
def train_cmd(dataset, out, do_sweep, do_balance, k, seed, num_trees, learning_rate, max_leaves):
    """Fit the boosted-tree validator on a featurized dataset."""
    x, y, names = _load_feature_csv(dataset)
    balancer = BalancerConfig(seed=seed) if do_balance else None
    params = TrainParams(num_trees=num_trees, learning_rate=learning_rate,
                         max_leaves=max_leaves, seed=seed)
    if do_sweep:
        params, results = sweep(x, y, k=k, seed=seed, balancer=balancer, base_params=params)
        for p, r in results:
            click.echo(
                f"  trees={p.num_trees} lr={p.learning_rate} leaves={p.max_leaves}"
                f" -> mean AUC {r.mean_auc:.4f} (+/- {r.std_auc:.4f})"
            )
    if balancer is not None:
        from .balance import adasyn

        x, y = adasyn(x, y, balancer)
    model = train(x, y, params, registry=names)
    model.save(out)
    click.echo(json.dumps({
        "model": str(out),
        "num_trees": params.num_trees,
        "learning_rate": params.learning_rate,
        "max_leaves": params.max_leaves,
        "final_train_loss": model.train_loss[-1],
    }))


@main.group("eval")
def eval_group():
    """Validation reports: auc | cv | ablate | kde."""


@eval_group.command("auc")
@click.option("--dataset", type=click.Path(exists=True), required=True, help="CSV: score,label")
@click.option("--out", type=click.Path(), default=None, help="output directory")
def eval_auc(dataset, out):
    scores, labels = _load_scored_csv(dataset)
    value = auc(list(zip(scores, labels)))
    payload = {"auc": value, "positives": int((labels == 1).sum()),
               "negatives": int((labels == 0).sum())}
    if out:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "auc.json").write_text(json.dumps(payload, sort_keys=True) + "\n")
    click.echo(json.dumps(payload, sort_keys=True))


def _write_cv_outputs(out_dir: Path, name: str, reports) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / f"{name}.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["feature_set", "model", "fold", "auc"])
        for r in reports:
            for fold, value in enumerate(r.fold_aucs):
                writer.writerow([r.feature_set, r.model, fold, f"{value:.6f}"])
    payload = [r.to_dict() for r in reports]
    (out_dir / f"{name}.json").write_text(json.dumps(payload, sort_keys=True) + "\n")


@eval_group.command("cv")
@click.option("--dataset", type=click.Path(exists=True), required=True)
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--balance/--no-balance", "do_balance", default=True, show_default=True)
@click.option("--num-trees", type=int, default=50, show_default=True)
@click.option("--max-leaves", type=int, default=15, show_default=True)
def eval_cv(dataset, k, seed, out, do_balance, num_trees, max_leaves):
    x, y, _ = _load_feature_csv(dataset)
    balancer = BalancerConfig(seed=seed) if do_balance else None
    params = TrainParams(num_trees=num_trees, max_leaves=max_leaves, seed=seed)
    result = kfold_cv(x, y, k, make_gbdt_trainer(params), seed, balancer=balancer)
    if out:
        _write_cv_outputs(Path(out), "cv", [result])
    click.echo(json.dumps(result.to_dict(), sort_keys=True))


@eval_group.command("ablate")
@click.option("--dataset", type=click.Path(exists=True), required=True)
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--balance/--no-balance", "do_balance", default=True, show_default=True)
@click.option("--num-trees", type=int, default=50, show_default=True)
@click.option("--max-leaves", type=int, default=15, show_default=True)
def eval_ablate(dataset, k, seed, out, do_balance, num_trees, max_leaves):
    x, y, names = _load_feature_csv(dataset)
    balancer = BalancerConfig(seed=seed) if do_balance else None
    params = TrainParams(num_trees=num_trees, max_leaves=max_leaves, seed=seed)
    reports = ablation(x, y, default_feature_groups(names), make_gbdt_trainer(params),
                       k=k, seed=seed, balancer=balancer)
    if out:
        _write_cv_outputs(Path(out), "ablate", reports)
    for r in reports:
        click.echo(f"{r.feature_set:>16}: mean AUC {r.mean_auc:.4f} (+/- {r.std_auc:.4f})")


@eval_group.command("kde")
@click.option("--dataset", type=click.Path(exists=True), required=True, help="CSV: score,label")
@click.option("--out", type=click.Path(), default=None)
@click.option("--bandwidth", type=float, default=None)
def eval_kde(dataset, out, bandwidth):
    scores, labels = _load_scored_csv(dataset)
    curves = kde_report(
        {
            "hateful": scores[labels == 1],
            "not_hateful": scores[labels == 0],
        },
        bandwidth=bandwidth,
    )
    classes = sorted(curves.densities)
    if out:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "kde_density.csv", "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["grid"] + [f"density_{c}" for c in classes])
            for i, g in enumerate(curves.grid):
                writer.writerow([f"{g:.6f}"] + [f"{curves.densities[c][i]:.8f}" for c in classes])
        with open(out / "kde_histogram.csv", "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["bin_left", "bin_right"] + [f"density_{c}" for c in classes])
            edges = curves.histograms[classes[0]][0]
            for i in range(len(edges) - 1):
                writer.writerow(
                    [f"{edges[i]:.6f}", f"{edges[i + 1]:.6f}"]
                    + [f"{curves.histograms[c][1][i]:.8f}" for c in classes]
                )
        summary = {
            "classes": classes,
            "bandwidths": curves.bandwidths,
            "integrals": {c: curves.integral(c) for c in classes},
            "grid_points": len(curves.grid),
        }
        (out / "kde.json").write_text(json.dumps(summary, sort_keys=True) + "\n")
    click.echo(json.dumps({c: curves.bandwidths[c] for c in classes}, sort_keys=True))


if __name__ == "__main__":
    sys.exit(main())
