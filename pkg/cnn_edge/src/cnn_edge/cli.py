"""Command line for training the edge network and exporting map pairs."""

from __future__ import annotations

import argparse
import sys

import torch

from .errors import CnnEdgeError
from .loss import LossConfig
from .model import build_net
from .train import TrainConfig, train


def cmd_train(args) -> int:
    net = build_net(seed=args.seed, init_weights=args.init_weights)
    tc = TrainConfig(
        learning_rate=args.lr,
        batch_size=args.batch_size,
        epochs=args.epochs,
        seed=args.seed,
        use_augmentation=args.augment,
    )
    history = train(args.corpus, net, tc, LossConfig(balance=args.balance))
    for epoch, loss in enumerate(history, 1):
        print(f"epoch {epoch:3d}: mean loss {loss:.3f}")
    torch.save(net.state_dict(), args.out)
    print(f"weights written to {args.out}")
    return 0


def cmd_export(args) -> int:
    from .export import export_maps

    net = build_net(init_weights=args.weights)
    written, skipped = export_maps(net, args.images, args.out)
    for path, reason in skipped:
        print(f"SKIPPED {path}: {reason}", file=sys.stderr)
    print(f"exported {2 * len(written)} maps for {len(written)} images to {args.out}")
    return 1 if skipped else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnn-edge", description="Two-tap VGG edge network for pectoral boundaries"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("train", help="train on a labelled phantom corpus")
    tr.add_argument("--corpus", required=True)
    tr.add_argument("--out", required=True, help="weights file to write")
    tr.add_argument("--epochs", type=int, default=30)
    tr.add_argument("--lr", type=float, default=1e-4)
    tr.add_argument("--batch-size", type=int, default=2)
    tr.add_argument("--lambda", dest="balance", type=float, default=1.5,
                    help="class-balance weight")
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--augment", action="store_true",
                    help="ten-fold augmentation (256x256 corpora)")
    tr.add_argument("--init-weights", default=None,
                    help="start from these weights instead of random init")
    tr.set_defaults(func=cmd_train)

    ex = sub.add_parser("export", help="write OUT1/OUT2 EPM maps for a directory")
    ex.add_argument("--weights", required=True)
    ex.add_argument("--images", required=True)
    ex.add_argument("--out", required=True)
    ex.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CnnEdgeError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
