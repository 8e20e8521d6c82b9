"""Command-line entry point.

Every command except ``fetch`` works offline. Reports are written only after
the whole computation succeeded; a failing command leaves no partial files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import youtube
from .classifiers import ClassifierSpec, model_to_json, train
from .config import ConfigError, RunConfig, load_config, parse_param
from .dataset import load_dataset
from .emoji_lex import load_lexicon
from .evaluation import ablation, cross_validate
from .features import build_dataset, schema_json
from .relieff import rank


class Outputs:
    """Collects report files and writes them together at the end."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.files: dict[Path, str] = {}

    def add(self, name: str, content: str) -> None:
        self.files[self.directory / name] = content

    def commit(self) -> list[Path]:
        written: list[Path] = []
        try:
            for path, content in self.files.items():
                path.parent.mkdir(parents=True, exist_ok=True)
                fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
                try:
                    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                        fh.write(content)
                    os.replace(tmp, path)
                except BaseException:
                    os.unlink(tmp)
                    raise
                written.append(path)
        except BaseException:
            for path in written:
                path.unlink(missing_ok=True)
            raise
        return written


def _config(args, *required: str, require_seed: bool = True) -> RunConfig:
    overrides = {
        "dataset": getattr(args, "dataset", None),
        "lexicon": getattr(args, "lexicon", None),
        "seed": getattr(args, "seed", None),
        "k_folds": getattr(args, "k_folds", None),
        "output": getattr(args, "output", None),
        "relieff_k": getattr(args, "k", None),
        "relieff_m": getattr(args, "m", None),
        "top": getattr(args, "top", None),
    }
    if getattr(args, "no_emoji", False):
        overrides["include_emoji"] = False
    cfg = load_config(args.config, overrides, require_seed=require_seed)
    algorithms = getattr(args, "algorithm", None)
    if algorithms:
        params = dict(parse_param(p) for p in (getattr(args, "param", None) or []))
        try:
            cfg.classifiers = [ClassifierSpec(a, params, cfg.seed) for a in algorithms]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    cfg.require(*required)
    return cfg


def _features(cfg: RunConfig, include_emoji: bool | None = None):
    posts, _ = load_dataset(cfg.dataset)
    lexicon = load_lexicon(cfg.lexicon)
    flag = cfg.include_emoji if include_emoji is None else include_emoji
    return build_dataset(posts, lexicon, include_emoji=flag)


def cmd_stats(args) -> Outputs:
    cfg = _config(args, "dataset", require_seed=False)
    _, stats = load_dataset(cfg.dataset)
    out = Outputs(cfg.output)
    out.add("stats.csv", stats.to_csv())
    out.add("stats.json", stats.to_json())
    print(stats.to_csv(), end="")
    if stats.zero_emoji_ids:
        print(f"warning: {len(stats.zero_emoji_ids)} post(s) contain no emoji", file=sys.stderr)
    return out


def cmd_features(args) -> Outputs:
    cfg = _config(args, "dataset", "lexicon", require_seed=False)
    data = _features(cfg)
    out = Outputs(cfg.output)
    out.add("features.csv", data.to_csv())
    out.add("schema.json", schema_json(cfg.include_emoji))
    print(f"{len(data)} posts x {len(data.schema)} features")
    return out


def cmd_train(args) -> Outputs:
    cfg = _config(args, "dataset", "lexicon")
    specs = cfg.specs()
    if len(specs) != 1:
        raise ConfigError("train needs exactly one classifier (use --algorithm)")
    model = train(specs[0], _features(cfg))
    out = Outputs(cfg.output)
    out.add(args.model_name, model_to_json(model))
    print(f"trained {specs[0].label()} on {len(model.schema)} features")
    return out


def cmd_evaluate(args) -> Outputs:
    cfg = _config(args, "dataset", "lexicon")
    data = _features(cfg)
    out = Outputs(cfg.output)
    summary = ["algorithm,include_emoji,pooled_accuracy,mean_fold_accuracy"]
    for spec in cfg.specs():
        report = cross_validate(data, spec, k_folds=cfg.k_folds, seed=cfg.seed)
        out.add(f"cv_{spec.algorithm}.csv", report.to_csv())
        out.add(f"cv_{spec.algorithm}.json", report.to_json())
        summary.append(f"{report.algorithm},{report.include_emoji},"
                       f"{report.accuracy!r},{report.mean_fold_accuracy!r}")
    text = "\n".join(summary) + "\n"
    out.add("evaluate.csv", text)
    print(text, end="")
    return out


def cmd_ablate(args) -> Outputs:
    cfg = _config(args, "dataset", "lexicon")
    data = _features(cfg, include_emoji=True)
    table = ablation(data, cfg.specs(), k_folds=cfg.k_folds, seed=cfg.seed)
    out = Outputs(cfg.output)
    out.add("ablation.csv", table.to_csv())
    out.add("ablation.json", table.to_json())
    print(table.to_csv(), end="")
    return out


def cmd_rank(args) -> Outputs:
    cfg = _config(args, "dataset", "lexicon")
    data = _features(cfg)
    ranking = rank(data, k=cfg.relieff_k, m=cfg.relieff_m, seed=cfg.seed)
    n = len(ranking.entries) if cfg.top is None else cfg.top
    out = Outputs(cfg.output)
    out.add("ranking.csv", ranking.to_csv(n))
    out.add("ranking.json", ranking.to_json(n))
    print(ranking.to_csv(n), end="")
    return out


def cmd_fetch(args) -> Outputs:
    items = youtube.fetch_comment_threads(args.video_id, args.api_key, max_pages=args.max_pages)
    lines = [json.dumps(item, ensure_ascii=False, sort_keys=True) for item in items]
    out = Outputs(Path(args.out).parent)
    out.add(Path(args.out).name, "".join(line + "\n" for line in lines))
    print(f"{len(lines)} comment threads")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uzopinion", description="Emoji-aware opinion classification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", type=Path, help="TOML run configuration")
        p.add_argument("--dataset", type=Path, help="JSONL dataset")
        p.add_argument("--output", type=Path, help="output directory")
        if seed:
            p.add_argument("--seed", type=int)
        return p

    def lexicon(p):
        p.add_argument("--lexicon", type=Path, help="emoji sentiment lexicon CSV")
        p.add_argument("--no-emoji", action="store_true", help="drop the 4 emoji features")
        return p

    def classifier(p):
        p.add_argument("--algorithm", action="append",
                       choices=["knn", "bayes", "reptree", "random_forest"])
        p.add_argument("--param", action="append", metavar="KEY=VALUE")
        return p

    common(sub.add_parser("stats", help="corpus statistics (posts per script and label, emoji per post, words)"), seed=False).set_defaults(func=cmd_stats)
    lexicon(common(sub.add_parser("features", help="feature matrix CSV"), seed=False)).set_defaults(func=cmd_features)

    p = classifier(lexicon(common(sub.add_parser("train", help="train and save one model"))))
    p.add_argument("--model-name", default="model.json")
    p.set_defaults(func=cmd_train)

    p = classifier(lexicon(common(sub.add_parser("evaluate", help="stratified k-fold CV"))))
    p.add_argument("--k-folds", type=int)
    p.set_defaults(func=cmd_evaluate)

    p = classifier(common(sub.add_parser("ablate", help="with/without emoji CV table")))
    p.add_argument("--lexicon", type=Path)
    p.add_argument("--k-folds", type=int)
    p.set_defaults(func=cmd_ablate)

    p = lexicon(common(sub.add_parser("rank", help="ReliefF feature ranking")))
    p.add_argument("--top", type=int)
    p.add_argument("--k", type=int, help="neighbours per class")
    p.add_argument("--m", type=int, help="sampled instances (default all)")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("fetch", help="download raw comment threads (network)")
    p.add_argument("video_id")
    p.add_argument("--api-key", required=True)
    p.add_argument("--max-pages", type=int)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_fetch)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        outputs = args.func(args)
        outputs.commit()
    except KeyboardInterrupt:
        return 130
    except Exception as exc:
        msg = " ".join(str(exc).split()) or type(exc).__name__
        print(f"uzopinion {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
