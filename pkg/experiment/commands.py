"""
Command implementations behind run_experiment.py.

Data outputs are deterministic for a fixed config; the only timestamp lives in
each command's metadata.json.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import pandas as pd
from loguru import logger

from config import ExperimentConfig, VariantConfig, load_experiment_config
from corpus import SyntheticCorpus, generate_corpus, read_corpus_csv, split_corpus, write_corpus_csv
from encoder import TrainedModel, extract_all, load_checkpoint, save_checkpoint, train
from metrics import (
    MetricsReport,
    build_report,
    build_trials,
    score_trials,
    subcenter_purity,
    subcenter_utilization,
    write_report_json,
    write_scores_csv,
)

from .table import SummaryRow, median_or_none, render_table

CORPUS_FILE = "corpus.csv"
TRAIN_FILE = "corpus_train.csv"
EVAL_FILE = "corpus_eval.csv"


def _write_json(data: Any, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")
    return path


def _write_metadata(directory: Path, command: str, **info: Any) -> Path:
    meta = {"command": command, "created_at": datetime.now(timezone.utc).isoformat(), **info}
    return _write_json(meta, directory / "metadata.json")


def run_dir(cfg: ExperimentConfig, variant: str, seed: int) -> Path:
    return cfg.output_dir / "runs" / variant / f"seed_{seed}"


def write_loss_log(history: list[float], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame({"epoch": range(1, len(history) + 1), "loss": history})
    df.to_csv(path, index=False, encoding="utf-8", float_format="%.17g", lineterminator="\n")
    return path


def _corpora(cfg: ExperimentConfig) -> tuple[SyntheticCorpus, SyntheticCorpus, SyntheticCorpus]:
    corpus = generate_corpus(cfg.corpus)
    train_corpus, eval_corpus = split_corpus(corpus, cfg.train_fraction, cfg.split_seed)
    return corpus, train_corpus, eval_corpus


def cmd_generate(config_path: str | Path | None) -> Path:
    """Write corpus.csv, the train/eval split CSVs and the resolved config."""
    cfg = load_experiment_config(config_path)
    corpus, train_corpus, eval_corpus = _corpora(cfg)
    out = cfg.output_dir
    path = write_corpus_csv(corpus, out / CORPUS_FILE)
    write_corpus_csv(train_corpus, out / TRAIN_FILE)
    write_corpus_csv(eval_corpus, out / EVAL_FILE)
    _write_json(cfg.resolved(), out / "resolved_config.json")
    _write_metadata(out, "generate", config=str(config_path) if config_path else "default")
    logger.info(
        f"Wrote {len(corpus)} utterances to {path} "
        f"({len(train_corpus.speakers)} train / {len(eval_corpus.speakers)} eval speakers)"
    )
    return path


def cmd_train(config_path: str | Path | None, variant_name: str, seed: int | None = None) -> Path:
    """Train one variant on the generated training split; write checkpoint and loss log."""
    cfg = load_experiment_config(config_path)
    variant = cfg.variant(variant_name)
    seed = cfg.seeds[0] if seed is None else seed
    train_path = cfg.output_dir / TRAIN_FILE
    if not train_path.exists():
        raise FileNotFoundError(f"training corpus not found at {train_path}; run `generate` first")
    train_corpus = read_corpus_csv(train_path)
    model = train(train_corpus, cfg.encoder_config(seed), cfg.train_config(variant, seed))
    out = run_dir(cfg, variant.name, seed)
    ckpt = save_checkpoint(model, out / "checkpoint.json")
    write_loss_log(model.history, out / "loss_log.csv")
    _write_metadata(out, "train", variant=variant.name, seed=seed)
    logger.info(f"Saved checkpoint {ckpt}")
    return ckpt


def evaluate_model(
    model: TrainedModel,
    eval_corpus: SyntheticCorpus,
    trials: int,
    seed: int,
    train_corpus: SyntheticCorpus | None = None,
):
    """Embeddings of unseen speakers -> trials -> MetricsReport. Returns (report, scored trials)."""
    if len(eval_corpus.speakers) < 2:
        raise ValueError("evaluation corpus needs at least 2 speakers")
    emb = extract_all(model, eval_corpus)
    trial_set = score_trials(build_trials(emb.embeddings, emb.speaker_ids, trials, seed))
    utilization = purity = None
    if train_corpus is not None:
        utilization = subcenter_utilization(model, train_corpus)
        purity = subcenter_purity(model, train_corpus)
    report = build_report(emb.embeddings, emb.speaker_ids, trial_set, utilization, purity)
    return report, trial_set


def cmd_evaluate(
    checkpoint: str | Path,
    corpus_eval: str | Path,
    trials: int,
    seed: int,
    train_corpus: str | Path | None = None,
    output: str | Path | None = None,
) -> MetricsReport:
    model = load_checkpoint(checkpoint)
    eval_corpus = read_corpus_csv(corpus_eval)
    train_data = read_corpus_csv(train_corpus) if train_corpus is not None else None
    report, trial_set = evaluate_model(model, eval_corpus, trials, seed, train_data)
    report_path = Path(output) if output is not None else Path(checkpoint).parent / "metrics.json"
    write_report_json(report, report_path)
    write_scores_csv(trial_set, report_path.parent / "scores.csv")
    _write_metadata(report_path.parent, "evaluate", checkpoint=str(checkpoint), trials=trials, seed=seed)
    logger.info(f"EER={100 * report.eer:.2f}% var_ratio={report.var_ratio} -> {report_path}")
    return report


@dataclass
class RunResult:
    variant: str
    seed: int
    metrics: dict[str, Any] | None = None
    error: str | None = None


@dataclass
class ExperimentSummary:
    rows: list[SummaryRow]
    runs: list[RunResult] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(r.failed for r in self.rows)


def _run_one(
    cfg: ExperimentConfig,
    variant: VariantConfig,
    seed: int,
    train_corpus: SyntheticCorpus,
    eval_corpus: SyntheticCorpus,
) -> RunResult:
    out = run_dir(cfg, variant.name, seed)
    try:
        model = train(train_corpus, cfg.encoder_config(seed), cfg.train_config(variant, seed))
        save_checkpoint(model, out / "checkpoint.json")
        write_loss_log(model.history, out / "loss_log.csv")
        report, trial_set = evaluate_model(model, eval_corpus, cfg.trials, seed, train_corpus)
        write_report_json(report, out / "metrics.json")
        write_scores_csv(trial_set, out / "scores.csv")
    except Exception as e:
        logger.error(f"Run {variant.name} seed={seed} failed: {e}")
        return RunResult(variant=variant.name, seed=seed, error=f"{type(e).__name__}: {e}")
    logger.info(f"Run {variant.name} seed={seed}: EER={100 * report.eer:.2f}% var={report.var_ratio}")
    return RunResult(variant=variant.name, seed=seed, metrics=report.to_dict())


def summarize(cfg: ExperimentConfig, runs: list[RunResult]) -> list[SummaryRow]:
    rows = []
    for variant in cfg.variants:
        mine = [r for r in runs if r.variant == variant.name]
        ok = [r.metrics for r in mine if r.metrics is not None]
        rows.append(SummaryRow(
            variant=variant.name,
            subcenters=variant.loss.subcenters,
            temperature=variant.loss.temperature,
            eer=median_or_none(m["eer"] for m in ok),
            var_ratio=median_or_none(m["var_ratio"] for m in ok),
            utilization=median_or_none(m["utilization_mean"] for m in ok),
            purity=median_or_none(m["purity"] for m in ok),
            seeds_ok=len(ok),
            seeds_total=len(mine),
            errors=[f"seed {r.seed}: {r.error}" for r in mine if r.error is not None],
        ))
    return rows


def cmd_experiment(config_path: str | Path | None) -> ExperimentSummary:
    """Train and evaluate every variant x seed; medians over seeds per variant."""
    cfg = load_experiment_config(config_path)
    _, train_corpus, eval_corpus = _corpora(cfg)
    jobs = [(v, s) for v in cfg.variants for s in cfg.seeds]
    logger.info(f"Experiment: {len(cfg.variants)} variants x {len(cfg.seeds)} seeds, workers={cfg.workers}")
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_one, cfg, v, s, train_corpus, eval_corpus) for v, s in jobs]
            runs = [f.result() for f in futures]
    else:
        runs = [_run_one(cfg, v, s, train_corpus, eval_corpus) for v, s in jobs]

    rows = summarize(cfg, runs)
    out = cfg.output_dir
    _write_json(
        {
            "rows": [r.to_dict() for r in rows],
            "runs": [{"variant": r.variant, "seed": r.seed, "metrics": r.metrics, "error": r.error} for r in runs],
        },
        out / "summary.json",
    )
    table = render_table(rows)
    (out / "summary.txt").write_text(table, encoding="utf-8")
    _write_json(cfg.resolved(), out / "resolved_config.json")
    _write_metadata(out, "experiment", config=str(config_path) if config_path else "default")
    logger.info("\n" + table)
    return ExperimentSummary(rows=rows, runs=runs)
