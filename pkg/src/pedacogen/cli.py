"""Command-line interface for headless project runs and evaluation reports.

Exit codes: 0 success, 1 validation or state errors, 2 gateway errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import evalreport as ev
from . import workflow as wf
from .blueprint import serialize_blueprint
from .config import MODE_LIVE, MODE_MOCK, AppConfig, build_gateways, load_config
from .errors import DomainError
from .gateways import GatewayError, RenderFailure
from .project import ProjectStore, project_to_dict
from .prompts import generation_prompt_template, review_prompt_template
from .service import ProjectService


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; 2 is reserved for
    # gateway failures here, so downgrade usage errors to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--project-dir", default=None,
                        help="directory holding project files")
    parser.add_argument("--config", default=None, metavar="FILE",
                        help="JSON config file")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--mock", dest="gateway_mode", action="store_const",
                      const=MODE_MOCK, help="use deterministic mock gateways")
    mode.add_argument("--live", dest="gateway_mode", action="store_const",
                      const=MODE_LIVE, help="use configured HTTP gateways")
    parser.set_defaults(gateway_mode=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pedacogen",
                     description="Script-first educational video authoring.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        _common_flags(p)
        return p

    p = command("new", "create a project from a learning-content file")
    p.add_argument("--content", required=True, metavar="FILE",
                   help="learning content file, or - for stdin")
    p.add_argument("--id", default=None, help="explicit project id")

    p = command("generate", "generate the initial script")
    p.add_argument("--project", required=True)

    p = command("review", "request an automated pedagogy review")
    p.add_argument("--project", required=True)
    p.add_argument("--extra", default=None,
                   help="additional review criteria for this request")

    p = command("apply", "apply the latest review to the script")
    p.add_argument("--project", required=True)
    p.add_argument("--mode", required=True, choices=["all", "selective"])
    p.add_argument("--pick", action="append", default=[], metavar="N:FIELD",
                   help="scene and field to accept, e.g. 2:narration "
                        "(repeatable; selective mode)")

    p = command("edit", "replace the script with a manually edited file")
    p.add_argument("--project", required=True)
    p.add_argument("--script", required=True, metavar="FILE",
                   help="script file in the scene/field text form")

    p = command("finalize", "lock the script for rendering")
    p.add_argument("--project", required=True)

    p = command("render", "render one clip per scene and combine them")
    p.add_argument("--project", required=True)
    p.add_argument("--duration", type=float, default=None, metavar="SECONDS",
                   help="per-scene clip duration")

    p = command("status", "show project state and history")
    p.add_argument("--project", required=True)
    p.add_argument("--json", action="store_true", dest="as_json",
                   help="dump the full project record as JSON")

    p = command("script", "print the current script")
    p.add_argument("--project", required=True)

    ev_parser = sub.add_parser("eval", help="statistical reports over study CSVs")
    ev_sub = ev_parser.add_subparsers(dest="report", required=True)

    p = ev_sub.add_parser("improvement", help="per-item paired comparison table")
    _common_flags(p)
    p.add_argument("--ratings", required=True, metavar="FILE")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = ev_sub.add_parser("topics", help="per-topic comparison for one item")
    _common_flags(p)
    p.add_argument("--ratings", required=True, metavar="FILE")
    p.add_argument("--item", default="Q13")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = ev_sub.add_parser("subgroup", help="between-group comparison")
    _common_flags(p)
    p.add_argument("--ratings", default=None, metavar="FILE")
    p.add_argument("--usability", default=None, metavar="FILE")
    p.add_argument("--demographics", required=True, metavar="FILE")
    p.add_argument("--partition", default="gender",
                   choices=sorted(ev.PARTITIONS))
    p.add_argument("--json", action="store_true", dest="as_json")

    fx_parser = sub.add_parser("fixtures", help="emit reference artifacts")
    fx_sub = fx_parser.add_subparsers(dest="artifact", required=True)
    p = fx_sub.add_parser("emit-prompts",
                          help="write the default prompt templates")
    _common_flags(p)
    p.add_argument("--out", default=".", metavar="DIR")

    return parser


def _load_app_config(args) -> AppConfig:
    config = load_config(args.config) if args.config else AppConfig()
    if getattr(args, "project_dir", None):
        config = replace(config, project_dir=args.project_dir)
    if getattr(args, "gateway_mode", None):
        config = replace(config, mode=args.gateway_mode)
    return config


def _service(args) -> ProjectService:
    config = _load_app_config(args)
    text_gw, video_gw = build_gateways(config)
    return ProjectService(ProjectStore(config.project_dir), text_gw, video_gw,
                          retries=config.gateway.retries,
                          render_parallelism=config.gateway.render_parallelism)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _parse_picks(raw: list[str]) -> list[tuple[int, str]]:
    picks = []
    for item in raw:
        scene, sep, field = item.partition(":")
        if not sep or not scene.strip().isdigit():
            raise ValueError(f"bad --pick {item!r}; expected N:FIELD")
        picks.append((int(scene), field.strip()))
    return picks


def _summary(p) -> str:
    rev = p.current_blueprint.revision_id if p.revisions else None
    parts = [f"project {p.id}: {p.state.name}"]
    if p.state.reason:
        parts.append(f"({p.state.reason})")
    if rev is not None:
        parts.append(f"revision {rev}")
    return " ".join(parts)


def _run_project_command(args) -> int:
    service = _service(args)
    if args.command == "new":
        p = service.create(_read_text(args.content), project_id=args.id)
        print(_summary(p))
        return 0
    if args.command == "generate":
        p, outcome = service.generate(args.project)
        print(_summary(p) + f" (attempt {outcome.attempt})")
        return 0
    if args.command == "review":
        p, outcome = service.review(args.project, args.extra)
        report = outcome.report
        print(_summary(p) + f" (review iteration {report.iteration}, "
                            f"{len(report.suggestions)} suggestions)")
        for s in report.suggestions:
            print(f"  {s.ordinal}. {s.text}")
        return 0
    if args.command == "apply":
        picks = _parse_picks(args.pick) if args.mode == "selective" else None
        p = service.apply(args.project, args.mode, picks)
        print(_summary(p))
        return 0
    if args.command == "edit":
        p = service.edit(args.project, _read_text(args.script))
        print(_summary(p))
        return 0
    if args.command == "finalize":
        p = service.finalize(args.project)
        print(_summary(p))
        return 0
    if args.command == "render":
        p = service.render(args.project, args.duration)
        m = p.render
        print(_summary(p) + f" ({len(m.clips)} clips, "
                            f"{m.total_duration_s:g}s total)")
        return 0
    if args.command == "status":
        p = service.get(args.project)
        if args.as_json:
            print(json.dumps(project_to_dict(p), indent=2))
            return 0
        phase, label = wf.progress(p.state)
        print(_summary(p))
        print(f"  phase {phase} ({label}); {len(p.revisions)} revisions, "
              f"{len(p.reviews)} reviews")
        if p.render is not None:
            print(f"  render: {len(p.render.clips)} clips, "
                  f"{p.render.total_duration_s:g}s")
        return 0
    if args.command == "script":
        p = service.get(args.project)
        bp = p.current_blueprint
        if bp is None:
            print("no script yet", file=sys.stderr)
            return 1
        print(serialize_blueprint(bp))
        return 0
    raise AssertionError(f"unhandled command {args.command!r}")


def _run_eval(args) -> int:
    if args.report == "improvement":
        rows = ev.improvement_table(ev.ingest_ratings(_read_text(args.ratings)))
        if args.as_json:
            print(json.dumps(ev.improvement_rows_json(rows), indent=2))
        else:
            print(ev.render_improvement_table(rows))
        return 0
    if args.report == "topics":
        rows = ev.topic_table(ev.ingest_ratings(_read_text(args.ratings)),
                              item=args.item)
        if args.as_json:
            print(json.dumps(ev.topic_rows_json(rows), indent=2))
        else:
            print(ev.render_topic_table(rows))
        return 0
    if args.report == "subgroup":
        if (args.ratings is None) == (args.usability is None):
            raise ValueError("give exactly one of --ratings or --usability")
        if args.ratings:
            records = ev.ingest_ratings(_read_text(args.ratings))
        else:
            records = ev.ingest_usability(_read_text(args.usability))
        demographics = ev.ingest_demographics(_read_text(args.demographics))
        rows = ev.subgroup_compare(records, demographics, args.partition)
        if args.as_json:
            print(json.dumps(ev.subgroup_rows_json(rows), indent=2))
        else:
            print(ev.render_subgroup_table(rows))
        return 0
    raise AssertionError(f"unhandled report {args.report!r}")


def _run_fixtures(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in (("generation_prompt.txt", generation_prompt_template()),
                       ("review_prompt.txt", review_prompt_template())):
        path = out / name
        path.write_text(text, encoding="utf-8")
        print(path)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "eval":
            return _run_eval(args)
        if args.command == "fixtures":
            return _run_fixtures(args)
        return _run_project_command(args)
    except (GatewayError, RenderFailure) as exc:
        print(f"error ({exc.code}): {exc.message}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error ({exc.code}): {exc.message}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
