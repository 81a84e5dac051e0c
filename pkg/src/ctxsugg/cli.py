"""Command-line front end: ``ctxsugg {enrich,rank,eval,pipeline,fixtures}``.

Exit codes: 0 success, 2 usage or unreadable input, 3 malformed data,
4 a request references an unknown user.

Option values resolve as command-line flag, then ``CTXSUGG_<NAME>``
environment variable, then the JSON ``--config`` file, then the default.
"""

import argparse
import json
import logging
import os
import shutil
import sys
from contextlib import contextmanager
from importlib import resources
from pathlib import Path

from . import corpus, enrich, lexicon, metrics, rankers, runfile
from .errors import CtxSuggError, UnknownUserError

ENV_PREFIX = "CTXSUGG_"
CONFIG_KEYS = ("lexicon", "tagset", "stopwords", "word_classes", "jobs", "k")
DEFAULTS = {"jobs": 1, "k": 5}

log = logging.getLogger("ctxsugg")


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


@contextmanager
def stage(name=None):
    """Translate library and I/O errors into exit codes."""
    prefix = f"{name}: " if name else ""
    try:
        yield
    except CliError as exc:
        raise CliError(exc.code, prefix + str(exc)) from None
    except UnknownUserError as exc:
        raise CliError(4, prefix + str(exc)) from None
    except CtxSuggError as exc:
        raise CliError(3, prefix + str(exc)) from None
    except OSError as exc:
        raise CliError(2, f"{prefix}{exc.strerror or exc}: {exc.filename}") from None


# -- configuration -------------------------------------------------------------


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(2, f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(3, f"config {path}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise CliError(3, f"config {path}: expected a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve_options(args):
    """Fill unset options from the environment, config file and defaults."""
    config = _load_config(getattr(args, "config", None))
    for key in CONFIG_KEYS:
        if not hasattr(args, key) or getattr(args, key) is not None:
            continue
        value = os.environ.get(ENV_PREFIX + key.upper())
        if value is None:
            value = config.get(key, DEFAULTS.get(key))
        if key in ("jobs", "k") and value is not None:
            try:
                value = int(value)
            except (TypeError, ValueError):
                raise CliError(2, f"{key} must be an integer, got {value!r}") from None
            if value < 1:
                raise CliError(2, f"{key} must be >= 1")
        setattr(args, key, value)
    return args


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise CliError(2, f"missing required option(s): {flags}")


def _read(path):
    return Path(path).read_bytes()


def _write(path, data: bytes):
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def load_lexicon(args) -> lexicon.Lexicon:
    """Lexicon from the CLI options; the bundled stopword list is the default."""
    synonyms = _read(args.lexicon) if args.lexicon else b""
    lex = lexicon.parse_lexicon(
        synonyms,
        stopwords=_read(args.stopwords) if args.stopwords else None,
        word_classes=_read(args.word_classes) if args.word_classes else None,
    )
    if not args.stopwords:
        lex = lexicon.Lexicon(lex.synonyms, lexicon.default_stopwords(), lex.word_classes)
    return lex


# -- stages --------------------------------------------------------------------


def _load_inputs(args, lex, need_requests=True):
    profiles = corpus.parse_profiles(_read(args.profiles), lex)
    requests = None
    if getattr(args, "requests", None):
        requests = corpus.parse_requests(_read(args.requests), lex)
    elif need_requests:
        raise CliError(2, "missing required option(s): --requests")
    return profiles, requests


def _enrich(profiles, requests, tagset, provider):
    enriched = [enrich.enrich_profile(p, tagset, provider) for p in profiles]
    n_attr = sum(enrich.newly_tagged(a, b) for a, b in zip(profiles, enriched))
    n_cand = 0
    if requests is not None:
        before = requests
        requests = [enrich.enrich_candidates(r, tagset, provider) for r in requests]
        n_cand = sum(
            1
            for old, new in zip(before, requests)
            for c0, c1 in zip(old.candidates, new.candidates)
            if not c0.tags and c1.tags
        )
    return enriched, requests, n_attr, n_cand


def _rank(algo, profiles, requests, provider, jobs, run_tag):
    by_user = {p.user_id: p for p in profiles}
    ranked = rankers.rank_all(algo, by_user, requests, provider, jobs=jobs)
    return runfile.write_runfile(ranked, run_tag)


def _eval(run_bytes, qrels_bytes, k, judged_only, per_request):
    run = runfile.parse_runfile(run_bytes)
    qrels = corpus.parse_qrels(qrels_bytes)
    report = metrics.evaluate_run(run, qrels, k=k, judged_only=judged_only)
    return "".join(line + "\n" for line in report.lines(per_request))


def _default_run_tag(algo, run_tag=None, multi=False):
    if run_tag and multi:
        return f"{run_tag}-{algo}"
    return run_tag or f"ctxsugg-{algo}"


# -- commands --------------------------------------------------------------------


def cmd_enrich(args) -> int:
    _require(args, "profiles", "tagset", "lexicon", "out")
    with stage():
        lex = load_lexicon(args)
        tagset = corpus.parse_tagset(_read(args.tagset))
        profiles, requests = _load_inputs(args, lex, need_requests=False)
        provider = lexicon.LexiconSimilarity(lex)
        profiles, requests, n_attr, n_cand = _enrich(profiles, requests, tagset, provider)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "profiles.jsonl").write_bytes(corpus.serialize_profiles(profiles))
        if requests is not None:
            (out / "requests.jsonl").write_bytes(corpus.serialize_requests(requests))
    print(f"newly tagged attractions\t{n_attr}")
    if requests is not None:
        print(f"newly tagged candidates\t{n_cand}")
    return 0


def cmd_rank(args) -> int:
    _require(args, "profiles", "requests")
    if args.enrich:
        _require(args, "tagset", "lexicon")
    with stage():
        lex = load_lexicon(args)
        provider = lexicon.LexiconSimilarity(lex)
        profiles, requests = _load_inputs(args, lex)
        if args.enrich:
            tagset = corpus.parse_tagset(_read(args.tagset))
            profiles, requests, _, _ = _enrich(profiles, requests, tagset, provider)
        data = _rank(args.algo, profiles, requests, provider, args.jobs,
                     _default_run_tag(args.algo, args.run_tag))
        _write(args.out, data)
    return 0


def cmd_eval(args) -> int:
    _require(args, "run", "qrels")
    with stage():
        text = _eval(_read(args.run), _read(args.qrels), args.k, args.judged_only, args.per_request)
    sys.stdout.write(text)
    return 0


def cmd_pipeline(args) -> int:
    _require(args, "profiles", "requests", "tagset", "lexicon", "out")
    algos = list(rankers.ALGORITHMS) if args.algo == "all" else [args.algo]
    multi = args.algo == "all"
    with stage("enrich"):
        lex = load_lexicon(args)
        provider = lexicon.LexiconSimilarity(lex)
        tagset = corpus.parse_tagset(_read(args.tagset))
        profiles, requests = _load_inputs(args, lex)
        profiles, requests, _, _ = _enrich(profiles, requests, tagset, provider)
    qrels_bytes = None
    if args.qrels:
        with stage("eval"):
            qrels_bytes = _read(args.qrels)
    if multi:
        with stage("rank"):
            Path(args.out).mkdir(parents=True, exist_ok=True)
    for algo in algos:
        run_tag = _default_run_tag(algo, args.run_tag, multi)
        out = Path(args.out) / f"{run_tag}.run" if multi else args.out
        with stage("rank"):
            data = _rank(algo, profiles, requests, provider, args.jobs, run_tag)
            _write(out, data)
        if qrels_bytes is not None:
            with stage("eval"):
                text = _eval(data, qrels_bytes, args.k, args.judged_only, args.per_request)
            if multi:
                sys.stdout.write(f"# {run_tag}\n")
            sys.stdout.write(text)
    return 0


def cmd_fixtures(args) -> int:
    """Copy the bundled toy fixtures into a directory."""
    with stage():
        dest = Path(args.dest)
        dest.mkdir(parents=True, exist_ok=True)
        src = resources.files("ctxsugg").joinpath("fixtures")
        for item in src.iterdir():
            if item.is_file():
                with resources.as_file(item) as path:
                    shutil.copyfile(path, dest / item.name)
    print(dest)
    return 0


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxsugg", description="Rule-based contextual suggestion toolkit."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default option values")

    lex_opts = argparse.ArgumentParser(add_help=False)
    lex_opts.add_argument("--lexicon", help="synonym TSV: term, synonym[, weight]")
    lex_opts.add_argument("--stopwords", help="stopword list (default: bundled English list)")
    lex_opts.add_argument("--word-classes", dest="word_classes", help="word-class TSV")
    lex_opts.add_argument("--tagset", help="tagset file: tag[\\tG|S]")

    eval_opts = argparse.ArgumentParser(add_help=False)
    eval_opts.add_argument("--k", type=int, default=None, help="precision cutoff (default 5)")
    eval_opts.add_argument("--judged-only", action="store_true",
                           help="average only over requests that have judgments")
    eval_opts.add_argument("--per-request", action="store_true")

    p = sub.add_parser("enrich", parents=[common, lex_opts], help="tag untagged attractions")
    p.add_argument("--profiles")
    p.add_argument("--requests")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_enrich)

    p = sub.add_parser("rank", parents=[common, lex_opts], help="write a run file")
    p.add_argument("--algo", required=True, choices=rankers.ALGORITHMS)
    p.add_argument("--profiles")
    p.add_argument("--requests")
    p.add_argument("--enrich", action="store_true", help="enrich inputs before ranking")
    p.add_argument("--out", help="run file path (default stdout)")
    p.add_argument("--run-tag", dest="run_tag")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("eval", parents=[common, eval_opts], help="score a run file")
    p.add_argument("--run")
    p.add_argument("--qrels")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pipeline", parents=[common, lex_opts, eval_opts],
                       help="enrich, rank and evaluate in one go")
    p.add_argument("--algo", required=True, choices=rankers.ALGORITHMS + ("all",))
    p.add_argument("--profiles")
    p.add_argument("--requests")
    p.add_argument("--qrels")
    p.add_argument("--out", help="run file path, or a directory with --algo all")
    p.add_argument("--run-tag", dest="run_tag")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("fixtures", help="copy the bundled toy fixtures")
    p.add_argument("dest")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="ctxsugg: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        resolve_options(args)
        return args.func(args)
    except CliError as exc:
        print(f"ctxsugg: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
