"""Command-line surface for the fingerprinting pipeline.

Subcommands: ``fingerprint build``, ``fingerprint quantize``, ``match``,
``roc``, ``simulate``, ``losscheck``, ``denoise``.  Exit codes: 0 success,
2 input error, 3 config error, 4 internal check failure.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from PIL import Image

from .denoise import DenoiserConfig, available_denoisers
from .detect import pce, weighted_probe
from .errors import (ConfigError, DegenerateInputError, DimensionError,
                     FormatError, InputError, PrnuKitError)
from .fingerprint import (Fingerprint, estimate_fingerprint, extract_residual,
                          postprocess)
from .image_io import center_crop, load_image, read_residual, write_residual
from .loss import mse_loss, rho_grad_uncentered, rho_loss
from .quantize import (DEFAULT_SCALE, dequantize, load_png, quantize,
                       save_png, search_scale)
from .roc import roc_summary
from .simulate import flat_scene, jpeg_cycle, make_camera, shoot, textured_scene

REPORT_SCHEMA = 1

REPORT_FIELDS = ("probe_path", "camera_id", "rho_zero", "pce", "decision",
                 "tau", "extractor_id", "error")


@dataclass
class MatchReport:
    probe_path: str
    camera_id: str = ""
    rho_zero: float = None
    pce: float = None
    decision: bool = None
    tau: float = None
    extractor_id: str = ""
    error: str = ""


def _parse_crop(text):
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise ConfigError(f"--crop expects WxH, got {text!r}") from None


def _add_denoiser_flags(parser):
    parser.add_argument("--denoiser", default="dwt", choices=available_denoisers())
    parser.add_argument("--sigma", type=float, default=2.0,
                        help="noise std-dev assumed by the denoiser (default 2.0)")


def _load_fingerprint_file(path):
    if path.endswith(".png"):
        return dequantize(load_png(path))
    data = read_residual(path)
    stem = os.path.splitext(os.path.basename(path))[0]
    return Fingerprint(data=data, camera_id=stem)


def _format_records(records, fmt):
    rows = [asdict(r) for r in records]
    if fmt == "json":
        return json.dumps({"schema": REPORT_SCHEMA, "records": rows}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
    return buf.getvalue()


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- fingerprint build / quantize -----------------------------------------

def _list_images(directory):
    names = sorted(n for n in os.listdir(directory)
                   if n.lower().endswith((".png", ".jpg", ".jpeg")))
    if not names:
        raise InputError(f"no images found in {directory}")
    return [os.path.join(directory, n) for n in names]


def cmd_fingerprint_build(args):
    paths = _list_images(args.image_dir)
    cfg = DenoiserConfig(sigma=args.sigma)
    crop = _parse_crop(args.crop) if args.crop else None

    images = []
    for path in paths:
        img = load_image(path)
        if crop:
            img = center_crop(img, *crop)
        if images and img.shape != images[0].shape:
            raise DimensionError(
                f"{path}: shape {img.shape[::-1]} differs from "
                f"{images[0].shape[::-1]}; use --crop to align")
        images.append(img)

    workers = max(1, args.jobs)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        residuals = list(pool.map(
            lambda im: extract_residual(im, denoiser=args.denoiser, cfg=cfg), images))

    camera_id = args.camera_id or os.path.basename(os.path.normpath(args.image_dir))
    fp = estimate_fingerprint(images, residuals, camera_id=camera_id,
                              extractor_id=args.denoiser)
    if not args.no_postprocess:
        fp = postprocess(fp)

    if args.raw:
        write_residual(fp.data, args.out)
    else:
        if args.search_scale:
            scale, _ = search_scale(fp, range(1, 129))
        else:
            scale = args.scale
        save_png(quantize(fp, scale), args.out)
    print(f"wrote {args.out} (camera_id={camera_id}, images={fp.num_images}, "
          f"extractor={fp.extractor_id}, postprocessed={fp.postprocessed})")
    return 0


def cmd_fingerprint_quantize(args):
    data = read_residual(args.fingerprint)
    stem = os.path.splitext(os.path.basename(args.fingerprint))[0]
    fp = Fingerprint(data=data, camera_id=args.camera_id or stem,
                     num_images=args.num_images, extractor_id=args.extractor_id,
                     postprocessed=args.postprocessed)
    if args.search_scale:
        scale, rho = search_scale(fp, range(1, 129))
        print(f"search picked a={scale} (round-trip rho={rho:.6f})")
    else:
        scale = args.scale
    save_png(quantize(fp, scale), args.out)
    print(f"wrote {args.out} (scale_a={scale})")
    return 0


# --- match ------------------------------------------------------------------

def _match_one(path, fp, args, crop):
    try:
        img = load_image(path)
        if crop:
            img = center_crop(img, *crop)
        cfg = DenoiserConfig(sigma=args.sigma)
        residual = extract_residual(img, denoiser=args.denoiser, cfg=cfg)
        operand = weighted_probe(fp.data, img) if args.weighted else fp.data
        result = pce(residual, operand, tau=args.tau, omega_radius=args.omega_radius)
        return MatchReport(probe_path=path, camera_id=fp.camera_id,
                           rho_zero=result.rho_zero, pce=result.pce,
                           decision=result.decision, tau=result.tau,
                           extractor_id=args.denoiser)
    except (PrnuKitError, OSError) as exc:
        return MatchReport(probe_path=path, camera_id=fp.camera_id,
                           tau=args.tau, extractor_id=args.denoiser,
                           error=str(exc))


def cmd_match(args):
    fp = _load_fingerprint_file(args.fingerprint)
    crop = _parse_crop(args.crop) if args.crop else None
    workers = max(1, args.jobs)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(lambda p: _match_one(p, fp, args, crop), args.probes))
    _emit(_format_records(records, args.format), args.out)
    return 0


# --- roc ---------------------------------------------------------------------

def _read_scores(path):
    scores = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                scores.append(float(line))
            except ValueError:
                raise InputError(f"{path}:{line_no}: not a number: {line!r}") from None
    return scores


def cmd_roc(args):
    fp_rates = [float(tok) for tok in args.fp.split(",") if tok] if args.fp else []
    summary = roc_summary(_read_scores(args.positive), _read_scores(args.negative),
                          fp_rates)
    payload = {
        "schema": REPORT_SCHEMA,
        "auc": summary.auc,
        "tp_at_fp": {str(k): v for k, v in summary.tp_at_fp.items()},
        "points": [[fp, tp] for fp, tp in summary.points],
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


# --- simulate ------------------------------------------------------------------

def _cfg_get(cfg, key, kind, default=None, required=False):
    if key not in cfg:
        if required:
            raise ConfigError(f"{key}: missing required field")
        return default
    value = cfg[key]
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected {kind.__name__}, got {value!r}") from None


def _save_u8(img, path, jpeg_quality=None):
    u8 = np.clip(np.round(img), 0, 255).astype(np.uint8)
    pil = Image.fromarray(u8, mode="L")
    if jpeg_quality is None:
        pil.save(path, format="PNG")
    else:
        pil.save(path, format="JPEG", quality=jpeg_quality)


def _probe_crops(img, crop_cfg):
    """Center crops: one centered window, or a 2x2 block of windows."""
    ch, cw = crop_cfg["height"], crop_cfg["width"]
    count = crop_cfg["count"]
    if count == 1:
        return [center_crop(img, cw, ch)]
    block = center_crop(img, 2 * cw, 2 * ch)
    return [block[:ch, :cw], block[:ch, cw:], block[ch:, :cw], block[ch:, cw:]]


def cmd_simulate(args):
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: {exc}") from None

    seed = args.seed if args.seed is not None else _cfg_get(cfg, "seed", int, 0)
    out_dir = args.out_dir or _cfg_get(cfg, "out_dir", str, required=True)
    width = _cfg_get(cfg, "width", int, required=True)
    height = _cfg_get(cfg, "height", int, required=True)
    n_cameras = _cfg_get(cfg, "cameras", int, required=True)
    sigma_k = _cfg_get(cfg, "sigma_k", float, 0.02)
    read_noise = _cfg_get(cfg, "read_noise_sigma", float, 2.0)
    n_flats = _cfg_get(cfg, "flat_fields", int, required=True)
    flat_level = _cfg_get(cfg, "flat_level", float, 160.0)
    n_probes = _cfg_get(cfg, "probes", int, required=True)
    probe_scenes = _cfg_get(cfg, "probe_scenes", str, "mix")
    jpeg_quality = cfg.get("jpeg_quality", 90)
    if jpeg_quality is not None:
        jpeg_quality = _cfg_get(cfg, "jpeg_quality", int)

    if n_cameras < 1:
        raise ConfigError(f"cameras: must be >= 1, got {n_cameras}")
    if n_flats < 1:
        raise ConfigError(f"flat_fields: must be >= 1, got {n_flats}")
    if n_probes < 0:
        raise ConfigError(f"probes: must be >= 0, got {n_probes}")
    if probe_scenes not in ("flat", "textured", "mix"):
        raise ConfigError(f"probe_scenes: expected flat|textured|mix, got {probe_scenes!r}")

    crop_cfg = None
    if cfg.get("probe_crop") is not None:
        raw = cfg["probe_crop"]
        crop_cfg = {
            "width": _cfg_get(raw, "width", int, required=True),
            "height": _cfg_get(raw, "height", int, required=True),
            "count": _cfg_get(raw, "count", int, 1),
        }
        if crop_cfg["count"] not in (1, 4):
            raise ConfigError(f"probe_crop.count: expected 1 or 4, got {crop_cfg['count']}")
        need_w = crop_cfg["width"] * (2 if crop_cfg["count"] == 4 else 1)
        need_h = crop_cfg["height"] * (2 if crop_cfg["count"] == 4 else 1)
        if need_w > width or need_h > height:
            raise ConfigError("probe_crop: crops do not fit inside the probe image")

    os.makedirs(out_dir, exist_ok=True)
    camera_seeds = np.random.SeedSequence(seed).generate_state(n_cameras)
    manifest_cams = []
    for c in range(n_cameras):
        camera_id = f"cam{c:02d}"
        cam = make_camera(width, height, sigma_k=sigma_k,
                          read_noise_sigma=read_noise, seed=int(camera_seeds[c]))
        prnu_name = f"{camera_id}_prnu.prnu"
        write_residual(cam.prnu_true, os.path.join(out_dir, prnu_name))

        flat = flat_scene(width, height, flat_level)
        flat_names = []
        for i in range(n_flats):
            name = f"{camera_id}_flat_{i:03d}.png"
            _save_u8(shoot(cam, flat, shot_index=i), os.path.join(out_dir, name))
            flat_names.append(name)

        probe_names = []
        for j in range(n_probes):
            use_texture = probe_scenes == "textured" or (probe_scenes == "mix" and j % 2 == 1)
            scene = (textured_scene(width, height, (seed, c, 2, j))
                     if use_texture else flat)
            img = shoot(cam, scene, shot_index=n_flats + j)
            if crop_cfg:
                # bake compression artifacts in before cropping, then store the
                # crops losslessly so they are compressed exactly once
                if jpeg_quality is not None:
                    img = jpeg_cycle(img, jpeg_quality)
                for ci, piece in enumerate(_probe_crops(img, crop_cfg)):
                    suffix = f"_c{ci}" if crop_cfg["count"] > 1 else ""
                    name = f"{camera_id}_probe_{j:03d}{suffix}.png"
                    _save_u8(piece, os.path.join(out_dir, name))
                    probe_names.append(name)
            else:
                ext = "png" if jpeg_quality is None else "jpg"
                name = f"{camera_id}_probe_{j:03d}.{ext}"
                _save_u8(img, os.path.join(out_dir, name), jpeg_quality=jpeg_quality)
                probe_names.append(name)

        manifest_cams.append({"camera_id": camera_id, "prnu_file": prnu_name,
                              "flat_fields": flat_names, "probes": probe_names})

    manifest = {
        "schema": REPORT_SCHEMA,
        "seed": seed,
        "width": width, "height": height,
        "sigma_k": sigma_k, "read_noise_sigma": read_noise,
        "flat_level": flat_level,
        "jpeg_quality": jpeg_quality,
        "probe_scenes": probe_scenes,
        "probe_crop": crop_cfg,
        "cameras": manifest_cams,
    }
    manifest_path = os.path.join(out_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {manifest_path}")
    return 0


# --- losscheck ------------------------------------------------------------------

GRADIENT_TOLERANCE = 1e-5


def _finite_difference(fn, z, step=1e-5):
    grad = np.empty_like(z)
    flat = z.ravel()
    out = grad.ravel()
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + step
        hi = fn(z)
        flat[i] = orig - step
        lo = fn(z)
        flat[i] = orig
        out[i] = (hi - lo) / (2.0 * step)
    return grad


def _max_rel_error(got, want):
    scale = max(float(np.abs(want).max()), 1e-30)
    return float(np.abs(got - want).max()) / scale


def cmd_losscheck(args):
    if args.trials < 1:
        raise ConfigError(f"--trials must be >= 1, got {args.trials}")
    worst_mse = worst_rho = worst_uncentered = 0.0
    for t in range(args.trials):
        rng = np.random.default_rng((args.seed, t))
        z = rng.normal(0.0, 1.0, size=(16, 16))
        k = rng.normal(0.0, 1.0, size=(16, 16))

        fd = _finite_difference(lambda zz: mse_loss(zz, k).loss, z.copy())
        worst_mse = max(worst_mse, _max_rel_error(mse_loss(z, k).grad, fd))

        fd = _finite_difference(lambda zz: rho_loss(zz, k).loss, z.copy())
        exact = rho_loss(z, k).grad
        worst_rho = max(worst_rho, _max_rel_error(exact, fd))
        worst_uncentered = max(worst_uncentered,
                               _max_rel_error(rho_grad_uncentered(z, k), exact))

    print(f"trials: {args.trials} (seed {args.seed})")
    print(f"mse gradient max relative error vs finite differences: {worst_mse:.3e}")
    print(f"rho gradient max relative error vs finite differences: {worst_rho:.3e}")
    print(f"uncentered rho gradient max relative deviation from exact: "
          f"{worst_uncentered:.3e} (reported only)")
    if worst_mse > GRADIENT_TOLERANCE or worst_rho > GRADIENT_TOLERANCE:
        print(f"FAIL: verified gradients exceed {GRADIENT_TOLERANCE:g} relative error")
        return 4
    print("OK")
    return 0


# --- denoise ------------------------------------------------------------------

def cmd_denoise(args):
    from .denoise import get_denoiser
    img = load_image(args.image)
    if args.crop:
        img = center_crop(img, *_parse_crop(args.crop))
    out = get_denoiser(args.denoiser)(img, DenoiserConfig(sigma=args.sigma))
    _save_u8(out, args.out)
    print(f"wrote {args.out}")
    return 0


# --- parser -----------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="prnukit",
        description="Sensor-noise camera fingerprinting toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    fp_parser = sub.add_parser("fingerprint", help="build or quantize fingerprints")
    fp_sub = fp_parser.add_subparsers(dest="subcommand", required=True)

    p = fp_sub.add_parser("build", help="estimate a fingerprint from an image directory")
    p.add_argument("image_dir")
    p.add_argument("--out", required=True)
    _add_denoiser_flags(p)
    p.add_argument("--crop", default=None, metavar="WxH")
    p.add_argument("--camera-id", default=None)
    p.add_argument("--no-postprocess", action="store_true")
    p.add_argument("--raw", action="store_true",
                   help="write the float fingerprint in PRNU1 form instead of PNG")
    p.add_argument("--scale", type=float, default=DEFAULT_SCALE)
    p.add_argument("--search-scale", action="store_true",
                   help="pick the quantizer scale on the 1..128 grid")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_fingerprint_build)

    p = fp_sub.add_parser("quantize", help="quantize a PRNU1 fingerprint to PNG")
    p.add_argument("fingerprint")
    p.add_argument("--out", required=True)
    p.add_argument("--scale", type=float, default=DEFAULT_SCALE)
    p.add_argument("--search-scale", action="store_true")
    p.add_argument("--camera-id", default=None)
    p.add_argument("--num-images", type=int, default=1)
    p.add_argument("--extractor-id", default="dwt")
    p.add_argument("--postprocessed", action="store_true")
    p.set_defaults(func=cmd_fingerprint_quantize)

    p = sub.add_parser("match", help="score probe images against a fingerprint")
    p.add_argument("probes", nargs="*")
    p.add_argument("--fingerprint", required=True)
    p.add_argument("--tau", type=float, default=60.0)
    p.add_argument("--omega-radius", type=int, default=5)
    _add_denoiser_flags(p)
    p.add_argument("--crop", default=None, metavar="WxH")
    p.add_argument("--weighted", action="store_true",
                   help="weight the fingerprint by probe intensity before correlating")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("roc", help="ROC summary from positive/negative score files")
    p.add_argument("--positive", required=True)
    p.add_argument("--negative", required=True)
    p.add_argument("--fp", default="", help="comma-separated FP rates to report TP at")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("simulate", help="render a synthetic camera dataset")
    p.add_argument("config")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("losscheck", help="verify loss gradients by finite differences")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_losscheck)

    p = sub.add_parser("denoise", help="denoise a single image")
    p.add_argument("image")
    p.add_argument("--out", required=True)
    _add_denoiser_flags(p)
    p.add_argument("--crop", default=None, metavar="WxH")
    p.set_defaults(func=cmd_denoise)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InputError, FormatError, DimensionError, DegenerateInputError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
