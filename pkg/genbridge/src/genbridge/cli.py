"""genbridge CLI: train a generator, decode candidate pools, predict roles.

Every subcommand accepts --mock for the deterministic model-free backend and
--config for a YAML/TOML GenConfig file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import GenBridgeError
from .config import load_config

log = logging.getLogger("genbridge")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genbridge", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("train", help="finetune on an augmented training set")
    p.add_argument("--train", required=True, help="training examples JSONL")
    p.add_argument("--validation", default=None, help="validation examples JSONL")
    p.add_argument("--out", required=True, help="checkpoint output directory")
    p.add_argument("--config", default=None, help="GenConfig YAML/TOML")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--learning-rate", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mock", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("generate", help="decode candidates for documents")
    p.add_argument("--docs", required=True, help="documents JSONL with role labels")
    p.add_argument("--out", required=True, help="candidates JSONL")
    p.add_argument("--checkpoint", default=None, help="checkpoint directory from train")
    p.add_argument("--formats", default="raw,binary,finegrained", help="comma list")
    p.add_argument("--beams", default=None, help="comma list of beam widths")
    p.add_argument("--generator-id", default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mock", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("predict-roles", help="label sentences with argument roles")
    p.add_argument("--docs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--classifier", default=None, help="sequence classifier directory")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--mock", action="store_true")
    p.set_defaults(func=cmd_predict_roles)

    return parser


def _config(args) -> "GenConfig":
    overrides = {
        "seed": getattr(args, "seed", None),
        "epochs": getattr(args, "epochs", None),
        "learning_rate": getattr(args, "learning_rate", None),
    }
    beams = getattr(args, "beams", None)
    if beams is not None:
        overrides["beam_widths"] = [int(b) for b in beams.split(",") if b.strip()]
    config = load_config(getattr(args, "config", None), **overrides)
    log.info("resolved config: %s", json.dumps(config.as_dict()))
    return config


def cmd_train(args) -> int:
    from .train import train

    log_data = train(args.train, args.validation, args.out, _config(args), use_mock=args.mock)
    print(json.dumps({k: v for k, v in log_data.items() if k != "step_losses"}, indent=2))
    return 0


def cmd_generate(args) -> int:
    from .generate import generate_candidates

    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    count = generate_candidates(
        args.docs, args.out, _config(args), formats,
        checkpoint=args.checkpoint, use_mock=args.mock, generator_id=args.generator_id,
    )
    print(json.dumps({"records": count}))
    return 0


def cmd_predict_roles(args) -> int:
    from .roles import predict_roles

    config = _config(args)
    count = predict_roles(
        args.docs, args.out, classifier_dir=args.classifier,
        use_mock=args.mock, seed=config.seed,
    )
    print(json.dumps({"documents": count}))
    return 0


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GenBridgeError as exc:
        print(f"genbridge: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"genbridge: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
