"""Command-line entry point.

Subcommands: features, converge, strength, granger, dtw,
conceptmap {build,intersect,stats}, correlate, synth, report.

Every run writes its tables atomically (temp file + rename) into --out and
finishes with a manifest.json recording the tool version, a hash of the
resolved configuration, and content hashes of all inputs and outputs, so
identical inputs and configuration produce byte-identical artifacts.

Exit codes: 0 success, 1 analysis error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__, align, conceptnet, corpus, paraling, stats, synth, tsa
from .errors import (
    DegenerateDataError,
    DyadconvError,
    InsufficientDataError,
    MissingEventsError,
    RankDeficientError,
)

TABLE_FORMATS = ("csv", "json")

_STATUS = {
    DegenerateDataError: "degenerate",
    InsufficientDataError: "insufficient_data",
    RankDeficientError: "rank_deficient",
    MissingEventsError: "missing_events",
}


def _status(exc: DyadconvError) -> str:
    return _STATUS.get(type(exc), "error")


# --- output plumbing ----------------------------------------------------

class Run:
    """Collects artifacts for one invocation and writes the manifest."""

    def __init__(self, out_dir: Path, config: dict):
        self.out_dir = out_dir
        self.config = dict(config)
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        out_dir.mkdir(parents=True, exist_ok=True)

    def note_input(self, path: Path) -> None:
        self.inputs[path.name] = _sha256(path.read_bytes())

    def write(self, name: str, data: str) -> Path:
        path = self.out_dir / name
        _atomic_write(path, data)
        self.outputs[name] = _sha256(data.encode("utf-8"))
        return path

    def write_table(self, stem: str, columns: list[str], rows: list[dict], fmt: str) -> Path:
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([_cell(row.get(c)) for c in columns])
            return self.write(f"{stem}.csv", buf.getvalue())
        if fmt == "json":
            payload = {"columns": columns, "rows": rows}
            return self.write(f"{stem}.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
        raise ValueError(f"unknown format {fmt!r}")

    def finish(self, subcommand: str) -> None:
        manifest = {
            "tool": "dyadconv",
            "tool_version": __version__,
            "subcommand": subcommand,
            "config_hash": _sha256(
                "\n".join(f"{k}={self.config[k]}" for k in sorted(self.config)).encode("utf-8")
            ),
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": dict(sorted(self.outputs.items())),
        }
        _atomic_write(self.out_dir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _atomic_write(path: Path, data: str) -> None:
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(data, encoding="utf-8")
    tmp.replace(path)


def _load_sessions(paths: list[str], run: Run) -> list[corpus.Session]:
    files: list[Path] = []
    for entry in paths:
        p = Path(entry)
        if p.is_dir():
            files.extend(sorted(q for q in p.iterdir() if q.suffix in (".csv", ".json", ".txt")))
        elif p.exists():
            files.append(p)
        else:
            raise DyadconvError(f"input not found: {entry}")
    if not files:
        raise DyadconvError("no transcript files found in the given inputs")
    sessions = []
    for f in files:
        run.note_input(f)
        try:
            sessions.append(corpus.load_session(f))
        except DyadconvError as exc:
            raise DyadconvError(f"stage parse, file {f.name}: {exc}") from None
    sessions.sort(key=lambda s: (s.dyad_id, s.session_index))
    return sessions


def _map_sessions(sessions, fn, jobs: int):
    if jobs <= 1:
        return [fn(s) for s in sessions]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, sessions))


# --- subcommands --------------------------------------------------------

def _cmd_features(args, run: Run) -> None:
    sessions = _load_sessions(args.inputs, run)

    def rows_for(session):
        series = paraling.extract_series(session, args.slice_width)
        out = []
        for i in range(len(corpus.segment(session, args.slice_width))):
            for speaker in session.speakers:
                out.append(
                    {
                        "dyad": session.dyad_id,
                        "session": session.session_index,
                        "slice": i,
                        "speaker": speaker,
                        "words": series[(speaker, "words")].values[i],
                        "message_density": series[(speaker, "message_density")].values[i],
                        "content_density": series[(speaker, "content_density")].values[i],
                        "overlaps": series[(speaker, "overlaps")].values[i],
                        "laughter": series[(speaker, "laughter")].values[i],
                    }
                )
        return out

    rows = [r for chunk in _map_sessions(sessions, rows_for, args.jobs) for r in chunk]
    run.write_table(
        "features",
        ["dyad", "session", "slice", "speaker", "words", "message_density",
         "content_density", "overlaps", "laughter"],
        rows,
        args.format,
    )


def _adf_rows(session, spec: tsa.AdfSpec):
    series = paraling.extract_series(session)
    a, b = session.speakers
    rows = []
    for feature in paraling.FEATURES:
        diff = tsa.difference(
            series[(a, feature)].values, series[(b, feature)].values, 0, feature
        )
        row = {
            "dyad": session.dyad_id,
            "session": session.session_index,
            "feature": feature,
            "lag_order": spec.lag_order,
            "significance": spec.significance,
        }
        try:
            res = tsa.adf_test(diff, spec)
        except DyadconvError as exc:
            row.update(status=_status(exc), statistic=None,
                       critical_value=None, converged=None)
        else:
            row.update(status="ok", statistic=res.statistic,
                       critical_value=res.critical_value, converged=res.converged)
        rows.append(row)
    return rows


_ADF_COLUMNS = ["dyad", "session", "feature", "lag_order", "significance",
                "status", "statistic", "critical_value", "converged"]


def _cmd_converge(args, run: Run) -> None:
    sessions = _load_sessions(args.inputs, run)
    spec = tsa.AdfSpec(lag_order=args.lag_order, significance=args.significance)
    rows = [r for chunk in _map_sessions(sessions, lambda s: _adf_rows(s, spec), args.jobs)
            for r in chunk]
    run.write_table("converge", _ADF_COLUMNS, rows, args.format)


def _cmd_strength(args, run: Run) -> None:
    sessions = _load_sessions(args.inputs, run)
    spec = tsa.AdfSpec(lag_order=args.lag_order, significance=args.significance)
    adf_rows = [r for chunk in _map_sessions(sessions, lambda s: _adf_rows(s, spec), args.jobs)
                for r in chunk]
    statistics = {
        (r["feature"], (r["dyad"], r["session"])): r["statistic"]
        for r in adf_rows
        if r["status"] == "ok"
    }
    if not statistics:
        raise DyadconvError("stage strength: no usable convergence statistics")
    scores = tsa.convergence_strength(statistics)
    rows = []
    for (dyad, session_index) in sorted(scores):
        score = scores[(dyad, session_index)]
        row = {"dyad": dyad, "session": session_index, "composite": score.composite}
        for feature in paraling.FEATURES:
            row[f"scaled_{feature}"] = score.per_feature.get(feature)
        rows.append(row)
    run.write_table(
        "strength",
        ["dyad", "session", "composite"] + [f"scaled_{f}" for f in paraling.FEATURES],
        rows,
        args.format,
    )


def _series_for_granger(session, name: str, lag: int):
    """Convergence or rapport series in analysis form (smoothed, detrended),
    trimmed to the common index range for the difference lag."""
    if name == "rapport":
        if session.rapport_track is None:
            raise DyadconvError(f"session {session.dyad_id}/{session.session_index} has no rapport track")
        by_index = dict(session.rapport_track)
        n = session.n_slices
        missing = [i for i in range(n) if i not in by_index]
        if missing:
            raise DyadconvError(
                f"rapport track missing slice {missing[0]} "
                f"(session {session.dyad_id}/{session.session_index})"
            )
        values = [by_index[i] for i in range(n)]
        return tsa.analysis_series(values)[lag:]
    series = paraling.extract_series(session)
    a, b = session.speakers
    sa = tsa.analysis_series(series[(a, name)].values)
    sb = tsa.analysis_series(series[(b, name)].values)
    return tsa.difference(sa, sb, lag).values


def _cmd_granger(args, run: Run) -> None:
    sessions = _load_sessions(args.inputs, run)
    choices = ("rapport",) + paraling.FEATURES

    def row_for(session):
        row = {
            "dyad": session.dyad_id,
            "session": session.session_index,
            "effect": args.effect,
            "cause": args.cause,
            "difference_lag": args.lag,
        }
        try:
            effect = _series_for_granger(session, args.effect, args.lag)
            cause = _series_for_granger(session, args.cause, args.lag)
            res = tsa.granger_causes(
                effect, cause, effect_id=args.effect, cause_id=args.cause
            )
        except DyadconvError as exc:
            row.update(status=exc.__class__.__name__.removesuffix("Error").lower(),
                       f_statistic=None, p_value=None, significant=None)
            if isinstance(exc, DyadconvError) and "rapport" in str(exc):
                row["status"] = "missing_rapport"
        else:
            row.update(status="ok", f_statistic=res.f_statistic,
                       p_value=res.p_value, significant=res.significant)
        return row

    if args.effect not in choices or args.cause not in choices:
        raise DyadconvError(f"stage granger: effect/cause must be one of {choices}")
    rows = _map_sessions(sessions, row_for, args.jobs)
    run.write_table(
        "granger",
        ["dyad", "session", "effect", "cause", "difference_lag", "status",
         "f_statistic", "p_value", "significant"],
        rows,
        args.format,
    )


def _cmd_dtw(args, run: Run) -> None:
    sessions = _load_sessions(args.inputs, run)
    kinds = [args.strategy] if args.strategy else list(corpus.STRATEGY_KINDS)
    rows = []
    path_dump: list[str] = []
    for session in sessions:
        for kind in kinds:
            row = {
                "dyad": session.dyad_id,
                "session": session.session_index,
                "strategy": kind,
            }
            try:
                result = align.strategy_alignment(session, kind)
            except DyadconvError as exc:
                row.update(status="missing_track" if "track" in str(exc) else "empty_series",
                           raw_distance=None, normalized_distance=None,
                           n=None, m=None, matched_end=None)
            else:
                if isinstance(result, align.InsufficientEvents):
                    counts = [result.counts[s] for s in sorted(result.counts)]
                    row.update(status="insufficient_events", raw_distance=None,
                               normalized_distance=None, n=counts[0], m=counts[1],
                               matched_end=None)
                else:
                    n = len(result.path and {i for i, _ in result.path}) or None
                    row.update(
                        status="ok",
                        raw_distance=result.raw_distance,
                        normalized_distance=result.normalized_distance,
                        n=result.path[-1][0],
                        m=len_b(session, kind),
                        matched_end=result.matched_end_of_b,
                    )
                    if args.dump_paths:
                        pairs = ";".join(f"{i},{j}" for i, j in result.path)
                        path_dump.append(
                            f"{session.dyad_id},{session.session_index},{kind},{pairs}"
                        )
            rows.append(row)
    run.write_table(
        "dtw",
        ["dyad", "session", "strategy", "status", "raw_distance",
         "normalized_distance", "n", "m", "matched_end"],
        rows,
        args.format,
    )
    if args.dump_paths:
        run.write("dtw_paths.csv", "dyad,session,strategy,path\n" + "\n".join(path_dump) + "\n")


def len_b(session, kind) -> int | None:
    tracks = (session.strategy_tracks or {}).get(kind, {})
    counts = sorted(len(ts) for ts in tracks.values())
    return counts[-1] if counts else None


def _lexicon_from_args(args) -> conceptnet.Lexicon:
    custom = [args.pronouns, args.prepositions, args.noise_verbs, args.delete_list, args.thesaurus]
    if any(custom):
        if not all(custom):
            raise DyadconvError(
                "stage lexicon: give all five lexicon files or none "
                "(--pronouns --prepositions --noise-verbs --delete-list --thesaurus)"
            )
        return conceptnet.Lexicon.from_paths(
            args.pronouns, args.prepositions, args.noise_verbs,
            args.delete_list, args.thesaurus, math_domain=args.math_domain,
        )
    return conceptnet.Lexicon.default(math_domain=args.math_domain)


def _map_payload(cmap: conceptnet.ConceptMap) -> str:
    obj = {
        "nodes": sorted(cmap.nodes),
        "edges": [[i, j, w] for (i, j), w in sorted(cmap.edges.items())],
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_map(path: Path, run: Run) -> conceptnet.ConceptMap:
    run.note_input(path)
    obj = json.loads(path.read_text(encoding="utf-8"))
    edges = {(i, j): int(w) for i, j, w in obj["edges"]}
    return conceptnet.ConceptMap(frozenset(obj["nodes"]), edges)


def _emit_map(run: Run, stem: str, cmap: conceptnet.ConceptMap, fmt: str) -> None:
    run.write(f"{stem}.map.json", _map_payload(cmap))
    rows = [
        {"source": i, "target": j, "weight": w} for (i, j), w in sorted(cmap.edges.items())
    ]
    run.write_table(f"{stem}.edges", ["source", "target", "weight"], rows, fmt)
    node_rows = [{"node": v} for v in sorted(cmap.nodes)]
    run.write_table(f"{stem}.nodes", ["node"], node_rows, fmt)
    dot = ["digraph conceptmap {"]
    for v in sorted(cmap.nodes):
        dot.append(f'  "{v}";')
    for (i, j), w in sorted(cmap.edges.items()):
        dot.append(f'  "{i}" -> "{j}" [weight={w}, label={w}];')
    dot.append("}")
    run.write(f"{stem}.dot", "\n".join(dot) + "\n")


def _stats_rows(stats_: conceptnet.MapStats) -> list[dict]:
    return [{
        "shared_concepts": stats_.shared_concepts,
        "isolated_shared_concepts": stats_.isolated_shared_concepts,
        "non_isolated_shared_concepts": stats_.non_isolated_shared_concepts,
        "shared_links": stats_.shared_links,
        "distinct_shared_links": stats_.distinct_shared_links,
        "mean_betweenness": stats_.mean_betweenness,
    }]


_STATS_COLUMNS = ["shared_concepts", "isolated_shared_concepts",
                  "non_isolated_shared_concepts", "shared_links",
                  "distinct_shared_links", "mean_betweenness"]


def _cmd_conceptmap(args, run: Run) -> None:
    if args.action == "build":
        lexicon = _lexicon_from_args(args)
        path = Path(args.transcript)
        if not path.exists():
            raise DyadconvError(f"input not found: {args.transcript}")
        if args.plain_text:
            run.note_input(path)
            text = path.read_text(encoding="utf-8")
            stem = path.stem
        else:
            run.note_input(path)
            session = corpus.load_session(path)
            if args.speaker is None:
                raise DyadconvError("stage conceptmap: --speaker is required for transcripts")
            if args.speaker not in session.speakers:
                raise DyadconvError(f"stage conceptmap: no speaker {args.speaker!r} in session")
            text = ". ".join(
                u.text for u in session.utterances if u.speaker == args.speaker
            )
            stem = f"{session.dyad_id}_s{session.session_index}_{args.speaker}"
        cmap = conceptnet.build_map_from_text(
            text, lexicon, args.window, args.stop_unit
        )
        _emit_map(run, stem, cmap, args.format)
    elif args.action == "intersect":
        map_a = _load_map(Path(args.map_a), run)
        map_b = _load_map(Path(args.map_b), run)
        inter = conceptnet.intersect(map_a, map_b)
        _emit_map(run, "intersection", inter, args.format)
        run.write_table("intersection.stats", _STATS_COLUMNS,
                        _stats_rows(conceptnet.map_stats(inter)), args.format)
    elif args.action == "stats":
        cmap = _load_map(Path(args.map_a), run)
        run.write_table("map.stats", _STATS_COLUMNS,
                        _stats_rows(conceptnet.map_stats(cmap)), args.format)
    else:  # pragma: no cover - argparse restricts choices
        raise DyadconvError(f"unknown conceptmap action {args.action!r}")


def _read_metric_table(path: Path, run: Run) -> list[dict]:
    run.note_input(path)
    if path.suffix == ".json":
        payload = json.loads(path.read_text(encoding="utf-8"))
        return payload["rows"]
    with path.open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _cmd_correlate(args, run: Run) -> None:
    xs = {(r["dyad"], str(r["session"])): r for r in _read_metric_table(Path(args.x), run)}
    ys = {(r["dyad"], str(r["session"])): r for r in _read_metric_table(Path(args.y), run)}
    keys = sorted(set(xs) & set(ys))
    pairs = []
    for key in keys:
        try:
            pairs.append((float(xs[key][args.x_col]), float(ys[key][args.y_col])))
        except (ValueError, TypeError, KeyError):
            continue  # non-numeric or missing cells drop out of the join
    if len(pairs) < 3:
        raise DyadconvError(
            f"stage correlate: only {len(pairs)} joined numeric pairs; need >= 3"
        )
    xvals = [p[0] for p in pairs]
    yvals = [p[1] for p in pairs]
    fn = {"pearson": stats.pearson, "spearman": stats.spearman,
          "point_biserial": stats.point_biserial}[args.kind]
    res = fn(xvals, yvals)
    run.write_table(
        "correlation",
        ["kind", "x", "y", "coefficient", "p_value", "n"],
        [{
            "kind": res.kind,
            "x": f"{Path(args.x).name}:{args.x_col}",
            "y": f"{Path(args.y).name}:{args.y_col}",
            "coefficient": res.coefficient,
            "p_value": res.p_value,
            "n": res.n,
        }],
        args.format,
    )


def _cmd_synth(args, run: Run) -> None:
    if args.sessions < 1 or args.sessions > 5:
        raise DyadconvError("stage synth: --sessions must be in 1..5")
    for d in range(args.dyads):
        for s in range(1, args.sessions + 1):
            spec = synth.SynthSpec(
                seed=args.seed * 1_000_003 + d * 13 + s,
                n_slices=args.n_slices,
                convergent=(d % 2 == 0) if args.mix else args.convergent,
                planted_causality=(0.8, 1) if args.rapport else None,
            )
            session = synth.gen_session(
                spec,
                dyad_id=f"dyad{d:02d}",
                session_index=s,
                relationship="friends" if d % 2 == 0 else "strangers",
                timing=args.timing,
            )
            run.write(
                f"dyad{d:02d}_s{s}.csv", corpus.serialize_session(session, fmt="lines")
            )


def _cmd_report(args, run: Run) -> None:
    src = Path(args.analysis_dir)
    if not src.is_dir():
        raise DyadconvError(f"stage report: {args.analysis_dir} is not a directory")
    tables = {}
    for stem in ("features", "converge", "strength", "granger", "dtw"):
        for suffix in (".csv", ".json"):
            path = src / f"{stem}{suffix}"
            if path.exists():
                tables[stem] = _read_metric_table(path, run)
                break
    if not tables:
        raise DyadconvError(f"stage report: no analysis tables found in {args.analysis_dir}")

    summary: dict[tuple[str, str], dict] = {}

    def cell(key, column, value):
        summary.setdefault(key, {"dyad": key[0], "session": key[1]})[column] = value

    for row in tables.get("converge", []):
        key = (row["dyad"], str(row["session"]))
        if row.get("status") == "ok" and str(row.get("converged")) == "True":
            prev = summary.get(key, {}).get("features_converged") or 0
            cell(key, "features_converged", int(prev) + 1)
        else:
            cell(key, "features_converged",
                 summary.get(key, {}).get("features_converged") or 0)
    for row in tables.get("strength", []):
        cell((row["dyad"], str(row["session"])), "strength_composite", row["composite"])
    for row in tables.get("granger", []):
        key = (row["dyad"], str(row["session"]))
        cell(key, "granger_f", row.get("f_statistic"))
        cell(key, "granger_p", row.get("p_value"))
        cell(key, "granger_significant", row.get("significant"))
    for row in tables.get("dtw", []):
        key = (row["dyad"], str(row["session"]))
        cell(key, f"dtw_norm_{row['strategy']}", row.get("normalized_distance"))
    for row in tables.get("features", []):
        key = (row["dyad"], str(row["session"]))
        slices = summary.get(key, {}).get("n_slices") or 0
        cell(key, "n_slices", max(int(slices), int(row["slice"]) + 1))

    columns = ["dyad", "session", "n_slices", "features_converged", "strength_composite",
               "granger_f", "granger_p", "granger_significant",
               "dtw_norm_self_disclosure", "dtw_norm_shared_experience", "dtw_norm_praise"]
    rows = [summary[key] for key in sorted(summary)]
    run.write_table("summary", columns, rows, args.format)

    long_rows = []
    for key in sorted(summary):
        for column in columns[2:]:
            value = summary[key].get(column)
            if value not in (None, ""):
                long_rows.append(
                    {"dyad": key[0], "session": key[1], "metric": column, "value": value}
                )
    run.write_table("long", ["dyad", "session", "metric", "value"], long_rows, args.format)


# --- argument parsing ----------------------------------------------------

def _read_config(path: str) -> dict[str, str]:
    """Flat key-value config: ``key = value`` lines, ``#`` comments."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DyadconvError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=TABLE_FORMATS, default=None,
                        help="output table format (default csv)")
    common.add_argument("--out", default=None, help="output directory (default .)")
    common.add_argument("--jobs", type=int, default=None,
                        help="sessions processed concurrently (default 1)")
    common.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    common.add_argument("--config", default=None,
                        help="flat key-value config file; explicit flags win")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="dyadconv",
        description="Behavioral convergence analytics for dyadic conversation transcripts",
    )
    parser.add_argument("--version", action="version", version=f"dyadconv {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("features", parents=[common],
                       help="per-slice paralinguistic feature table")
    p.add_argument("inputs", nargs="+", help="transcript files or directories")
    p.add_argument("--slice-width", type=float, default=30.0)

    for name, help_text in (("converge", "unit-root convergence test per feature"),
                            ("strength", "composite convergence strength per session")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("inputs", nargs="+")
        p.add_argument("--lag-order", type=int, default=3)
        p.add_argument("--significance", type=float, default=0.01,
                       choices=list(tsa.SUPPORTED_LEVELS))

    p = sub.add_parser("granger", parents=[common],
                       help="does the cause series drive the effect series?")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--effect", required=True,
                   help="rapport or a feature name (convergence series)")
    p.add_argument("--cause", required=True)
    p.add_argument("--lag", type=int, default=0, choices=(0, 1, 2),
                   help="difference lag for convergence series")

    p = sub.add_parser("dtw", parents=[common],
                       help="strategy-timing alignment distances")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--strategy", choices=list(corpus.STRATEGY_KINDS), default=None)
    p.add_argument("--dump-paths", action="store_true",
                   help="also write warping paths for plotting")

    p = sub.add_parser("conceptmap", parents=[common], help="concept-map pipeline")
    p.add_argument("action", choices=("build", "intersect", "stats"))
    p.add_argument("transcript", nargs="?", help="transcript (build) or map JSON (stats)")
    p.add_argument("map_b", nargs="?", help="second map JSON (intersect)")
    p.add_argument("--speaker", default=None)
    p.add_argument("--plain-text", action="store_true",
                   help="treat the input as raw text (e.g. a worksheet)")
    p.add_argument("--math-domain", action="store_true",
                   help="generalize digits to 'number' and single letters to 'variable'")
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--stop-unit", type=int, default=10)
    p.add_argument("--pronouns", default=None)
    p.add_argument("--prepositions", default=None)
    p.add_argument("--noise-verbs", default=None)
    p.add_argument("--delete-list", default=None)
    p.add_argument("--thesaurus", default=None)

    p = sub.add_parser("correlate", parents=[common],
                       help="correlate two metric tables joined on (dyad, session)")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--x-col", required=True)
    p.add_argument("--y-col", required=True)
    p.add_argument("--kind", choices=("pearson", "spearman", "point_biserial"),
                   default="pearson")

    p = sub.add_parser("synth", parents=[common],
                       help="generate a synthetic corpus in the transcript schema")
    p.add_argument("--dyads", type=int, default=2)
    p.add_argument("--sessions", type=int, default=5)
    p.add_argument("--n-slices", type=int, default=120)
    p.add_argument("--convergent", action="store_true", default=True)
    p.add_argument("--divergent", dest="convergent", action="store_false")
    p.add_argument("--mix", action="store_true",
                   help="alternate convergent/divergent by dyad")
    p.add_argument("--rapport", action="store_true",
                   help="include a rapport track with planted causality")
    p.add_argument("--timing", choices=("aligned", "freeform"), default="aligned")

    p = sub.add_parser("report", parents=[common],
                       help="summary and long-format tables from analysis outputs")
    p.add_argument("analysis_dir")

    return parser


_CONFIG_DEFAULTS = {"format": "csv", "out": ".", "jobs": 1, "seed": 0}
_INT_KEYS = ("jobs", "seed", "lag_order", "n_slices", "dyads", "sessions", "window", "stop_unit")
_FLOAT_KEYS = ("significance", "slice_width")


def _resolve_config(args: argparse.Namespace) -> dict:
    resolved = dict(_CONFIG_DEFAULTS)
    if getattr(args, "config", None):
        file_values = _read_config(args.config)
        for key, value in file_values.items():
            if key in _INT_KEYS:
                resolved[key] = int(value)
            elif key in _FLOAT_KEYS:
                resolved[key] = float(value)
            else:
                resolved[key] = value
    for key, value in vars(args).items():
        if key in ("config", "subcommand", "func"):
            continue
        if value is not None or key not in resolved:
            resolved[key] = value
    for key in ("format", "out", "jobs", "seed"):
        setattr(args, key, resolved[key])
    for key, value in resolved.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return resolved


_COMMANDS = {
    "features": _cmd_features,
    "converge": _cmd_converge,
    "strength": _cmd_strength,
    "granger": _cmd_granger,
    "dtw": _cmd_dtw,
    "conceptmap": _cmd_conceptmap,
    "correlate": _cmd_correlate,
    "synth": _cmd_synth,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve_config(args)
        run = Run(Path(args.out), config)
        _COMMANDS[args.subcommand](args, run)
        run.finish(args.subcommand)
    except DyadconvError as exc:
        print(f"dyadconv {args.subcommand}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"dyadconv {args.subcommand}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
