"""Batch entry points: corpus prep, synthesis, features, atlas, generation, serving.

Exit codes: 0 success, 2 usage error (argparse), 1 runtime error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np


def _cmd_prep(args) -> int:
    from .dataset import mirror_augment, normalize_image, read_corpus, write_corpus

    images, names = read_corpus(args.in_dir)
    normalized = [normalize_image(img, target=args.target) for img in images]
    out_names = [os.path.splitext(n)[0] + ".png" for n in names]
    if args.mirror:
        normalized = mirror_augment(normalized)
        out_names = out_names + [os.path.splitext(n)[0] + "_mirror.png" for n in names]
    write_corpus(args.out_dir, normalized, out_names)
    print(f"prep: wrote {len(normalized)} images to {args.out_dir}")
    return 0


def _cmd_synth(args) -> int:
    from .dataset import synth_corpus, write_corpus

    images = synth_corpus(args.n, args.seed)
    write_corpus(args.out_dir, images)
    print(f"synth: wrote {len(images)} images to {args.out_dir}")
    return 0


def _cmd_features(args) -> int:
    from .dataset import read_corpus
    from .features import compute_descriptor, save_features

    images, names = read_corpus(args.in_dir)
    feats = [compute_descriptor(img) for img in images]
    paths = [os.path.join(args.in_dir, n) for n in names]
    save_features(args.out, feats, paths)
    print(f"features: wrote {len(feats)} x {len(feats[0].values)} to {args.out}")
    return 0


def _resolve_image_paths(names, features_path):
    csv_dir = os.path.dirname(os.path.abspath(features_path))
    paths = []
    for name in names:
        if os.path.exists(name):
            paths.append(name)
        elif os.path.exists(os.path.join(csv_dir, name)):
            paths.append(os.path.join(csv_dir, name))
        else:
            raise FileNotFoundError(f"image not found: {name}")
    return paths


def _cmd_atlas(args) -> int:
    from .features import feature_matrix, load_features
    from .images import load_png, save_png
    from .lapgrid import gridify, render_montage, save_assignment_csv
    from .tsne import calibrate_affinities, tsne_embed

    feats, names = load_features(args.features)
    if names is None:
        raise ValueError("atlas needs a filename column in the feature CSV")
    x = feature_matrix(feats)
    n = x.shape[0]
    perplexity = min(args.perplexity, n - 1)  # small corpora: cap at N-1
    affinities = calibrate_affinities(x, perplexity)
    emb = tsne_embed(affinities, iters=args.iters, seed=args.seed)
    ga = gridify(emb.Y)
    corpus = [load_png(p) for p in _resolve_image_paths(names, args.features)]
    montage = render_montage(corpus, ga, thumb=args.thumb)
    save_png(args.out, montage)
    if args.assignment:
        save_assignment_csv(args.assignment, ga)
    print(
        f"atlas: {n} points on a {ga.grid_side}x{ga.grid_side} grid, "
        f"cost {ga.total_cost:.6f}, final KL {emb.kl_history[-1]:.4f} -> {args.out}"
    )
    return 0


def _read_latent_file(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) != 512:
        raise ValueError(f"expected 512 latent values, got {len(lines)}")
    return np.asarray([float(ln) for ln in lines])


def _cmd_generate(args) -> int:
    from .decoder import decode
    from .images import save_png
    from .latent import clamp_latent

    z = clamp_latent(_read_latent_file(args.latent))
    save_png(args.out, decode(z))
    print(f"generate: wrote {args.out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app, make_decoder
    from .store import SampleStore

    app = create_app(
        decoder=make_decoder(args.decoder),
        store=SampleStore(args.store),
        ui_dir=args.ui_dir,
        atlas=args.atlas,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latentring", description="latent sketch workbench tools"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="normalize a raw corpus (and optionally mirror it)")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", dest="out_dir", required=True)
    p.add_argument("--mirror", action="store_true", help="append horizontal flips")
    p.add_argument("--target", type=int, default=512)
    p.set_defaults(func=_cmd_prep)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="out_dir", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("features", help="compute descriptors for a corpus")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("atlas", help="embed features and render the grid montage")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--thumb", type=int, default=64)
    p.add_argument("--assignment", help="also dump point/row/col CSV here")
    p.set_defaults(func=_cmd_atlas)

    p = sub.add_parser("generate", help="decode one latent file to a PNG")
    p.add_argument("--latent", required=True, help="text file, one float per line, 512 lines")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("serve", help="run the HTTP workbench server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--decoder", default="procedural", help="procedural or external:<url>")
    p.add_argument("--store", default="./store")
    p.add_argument("--ui-dir", default=None, help="directory of built UI assets")
    p.add_argument("--atlas", default=None, help="montage PNG served at /atlas.png")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 130
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
