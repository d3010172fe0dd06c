"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O or format
error. Every failure prints one ``ERROR <Name>: <detail>`` line on stderr.
Each written artifact gets a ``<path>.manifest.json`` next to it recording
the invocation, input digests, seed and method parameters.
"""

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import netpbm
from .combined import combined_deconvolve, write_combination
from .errors import Divergent, FormatError, NumericalFailure, UsageError
from .image import (Axis, ImageRaster, SeparableKernel2D, blur_axis,
                    deblur_axis, deblur_separable, is_boxcar,
                    make_boxcar_kernel, make_gaussian_kernel,
                    motion_deblur_uniform)
from .signals import (NoiseSpec, Signal1D, add_noise, convolve, format_signal,
                      mirror, read_signal, write_signal)
from .step import (StepOptions, flip_to_dominant, modified_doubling,
                   step_by_step, write_trace)


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


# -- helpers -------------------------------------------------------------------

def _is_image(path):
    with open(path, "rb") as fh:
        return fh.read(2) in (b"P5", b"P6")


def _load(path):
    return netpbm.read_image(path) if _is_image(path) else read_signal(path)


def _save(path, obj):
    if isinstance(obj, ImageRaster):
        netpbm.write_image(path, obj)
    else:
        write_signal(path, obj)


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(output, argv, inputs, params, seed=None, extra_outputs=()):
    manifest = {
        "command": " ".join(argv),
        "inputs": {os.fspath(p): _digest(p) for p in inputs if p},
        "seed": seed,
        "parameters": {k: str(v) for k, v in sorted(params.items())},
        "outputs": [os.fspath(output)] + [os.fspath(p) for p in extra_outputs],
    }
    with open(os.fspath(output) + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_window(text):
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise _Usage(f"window must look like lo:hi, got {text!r}") from None


# -- commands ------------------------------------------------------------------

def cmd_blur(args, argv):
    data = _load(args.input)
    kernel = read_signal(args.kernel)
    if isinstance(data, ImageRaster):
        if args.kernel_y:
            if args.axis is not None:
                raise _Usage("--axis conflicts with --kernel-y (the pair blurs X then Y)")
            out = blur_axis(data, kernel, Axis.X)
            out = blur_axis(out, read_signal(args.kernel_y), Axis.Y)
        else:
            out = blur_axis(data, kernel, Axis.parse(args.axis or "x"))
    else:
        if args.kernel_y or args.axis is not None:
            raise _Usage("--axis/--kernel-y apply to images only")
        out = convolve(data, kernel)
    _save(args.output, out)
    _write_manifest(args.output, argv, [args.input, args.kernel, args.kernel_y],
                    {"axis": args.axis or "x"})
    return 0


def _deblur_signal(args, H, S):
    report = {}
    if args.method == "step":
        opts = StepOptions(target_len=args.steps, normalize=not args.no_normalize,
                           divergence_factor=args.divergence_factor)
        try:
            h, trace = step_by_step(H, S, opts)
        except NumericalFailure as exc:
            if args.trace and getattr(exc, "trace", None) is not None:
                write_trace(args.trace, exc.trace)
            raise
        if args.trace:
            write_trace(args.trace, trace)
        if trace.diverged:
            raise Divergent(
                f"stop rule fired at step {trace.reconstructed_len}; only "
                f"{trace.reconstructed_len} samples confirmed", trace=trace)
        return h, report
    if args.method == "modified":
        if is_boxcar(S):
            img = ImageRaster(H.values[None, :, None])
            out, steps = motion_deblur_uniform(img, len(S), Axis.X,
                                               coefficient=float(S.values[0]))
            report["steps_used"] = steps
            return Signal1D(H.offset - S.offset, out.samples[0, :, 0]), report
        Hf, Sf, flipped = flip_to_dominant(H, S)
        h, trace = modified_doubling(Hf, Sf, args.steps, normalize=not args.no_normalize,
                                     divergence_factor=args.divergence_factor)
        if args.trace:
            write_trace(args.trace, trace)
        report["steps_used"] = len(trace.steps)
        report["flipped"] = flipped
        return (mirror(h) if flipped else h), report
    h, comb = combined_deconvolve(H, S, args.L, args.center)
    if args.combination:
        write_combination(args.combination, comb)
    report["C"], report["L"] = comb.C, comb.L
    return h, report


def _deblur_image(args, img, S):
    report = {}
    opts = {"divergence_factor": args.divergence_factor}
    if args.method == "combined":
        opts.update(L=args.L, C=args.center)
    elif args.method == "modified":
        opts["steps"] = args.steps
    if args.kernel_y:
        k = SeparableKernel2D(S, read_signal(args.kernel_y))
        return deblur_separable(img, k, args.order, args.method, **opts), report
    axis = Axis.parse(args.axis or "x")
    if args.method == "modified" and is_boxcar(S):
        out, steps = motion_deblur_uniform(img, len(S), axis, coefficient=float(S.values[0]))
        report["steps_used"] = steps
        return out, report
    return deblur_axis(img, S, axis, args.method, **opts), report


def cmd_deblur(args, argv):
    data = _load(args.input)
    S = read_signal(args.kernel)
    if isinstance(data, ImageRaster):
        out, report = _deblur_image(args, data, S)
    else:
        if args.kernel_y:
            raise _Usage("--kernel-y applies to images only")
        out, report = _deblur_signal(args, data, S)
    _save(args.output, out)
    extras = [p for p in (args.trace, args.combination) if p]
    params = {k: v for k, v in vars(args).items()
              if k in ("method", "L", "center", "steps", "no_normalize", "order",
                       "axis", "divergence_factor")}
    _write_manifest(args.output, argv, [args.input, args.kernel, args.kernel_y],
                    params, extra_outputs=extras)
    for key, value in report.items():
        print(f"{key}={value}")
    return 0


def cmd_synth(args, argv):
    try:
        if args.shape == "gaussian":
            k = make_gaussian_kernel(args.sigma, args.radius)
            if args.unit_sum:
                k = Signal1D(k.offset, k.values / k.values.sum())
        elif args.shape == "boxcar":
            k = make_boxcar_kernel(args.len, 1.0 if args.ones else None)
        else:
            values = [float(v) for v in args.values.split(",")]
            k = Signal1D(args.offset, values)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    if args.output:
        write_signal(args.output, k)
        _write_manifest(args.output, argv, [], {"shape": args.shape})
    else:
        sys.stdout.write(format_signal(k))
    return 0


def cmd_noise(args, argv):
    try:
        spec = NoiseSpec(args.level, args.seed)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    data = _load(args.input)
    if isinstance(data, ImageRaster):
        flat = Signal1D(0, data.samples.reshape(-1))
        noisy = add_noise(flat, spec)
        out = ImageRaster(noisy.window(0, data.samples.size).reshape(data.samples.shape))
    else:
        out = add_noise(data, spec)
    _save(args.output, out)
    _write_manifest(args.output, argv, [args.input], {"level": args.level}, seed=args.seed)
    return 0


def _image_diff(a, b):
    A, B = a.samples, b.samples
    shape = tuple(max(x, y) for x, y in zip(A.shape, B.shape))
    pa = np.zeros(shape)
    pb = np.zeros(shape)
    pa[:A.shape[0], :A.shape[1], :A.shape[2]] = A
    pb[:B.shape[0], :B.shape[1], :B.shape[2]] = B
    diff = np.abs(pa - pb)
    span = float(A.max() - A.min())
    return diff, span


def cmd_compare(args, argv):
    a, b = _load(args.a), _load(args.b)
    if isinstance(a, ImageRaster) != isinstance(b, ImageRaster):
        raise FormatError("cannot compare an image with a signal")
    if isinstance(a, ImageRaster):
        if args.window:
            raise _Usage("--window applies to signals only")
        diff, span = _image_diff(a, b)
    else:
        if args.window:
            lo, hi = _parse_window(args.window)
        else:
            lo, hi = min(a.offset, b.offset), max(a.stop, b.stop) - 1
        if hi < lo:
            raise _Usage(f"empty window {lo}:{hi}")
        diff = np.abs(a.window(lo, hi + 1) - b.window(lo, hi + 1))
        span = float(a.values.max() - a.values.min()) if len(a) > 1 else abs(float(a.values[0]))
    if args.metric == "maxabs":
        value = float(diff.max())
    elif args.metric == "rms":
        value = float(np.sqrt(np.mean(diff * diff)))
    else:
        value = float(diff.max()) / span if span > 0 else (0.0 if diff.max() == 0 else float("inf"))
    print(repr(value))
    return 0


# -- wiring --------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="shiftdeconv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("blur", help="convolve a signal or image with a kernel")
    b.add_argument("--input", required=True)
    b.add_argument("--kernel", required=True)
    b.add_argument("--axis", choices=["x", "y"])
    b.add_argument("--kernel-y")
    b.add_argument("--output", required=True)
    b.set_defaults(func=cmd_blur)

    d = sub.add_parser("deblur", help="undo a known blur")
    d.add_argument("--method", required=True, choices=["step", "modified", "combined"])
    d.add_argument("--input", required=True)
    d.add_argument("--kernel", required=True)
    d.add_argument("--kernel-y")
    d.add_argument("--axis", choices=["x", "y"])
    d.add_argument("--L", type=int)
    d.add_argument("--center", type=int)
    d.add_argument("--steps", type=int)
    d.add_argument("--no-normalize", action="store_true")
    d.add_argument("--order", choices=["xy", "yx"], default="xy")
    d.add_argument("--divergence-factor", type=float, default=1e6)
    d.add_argument("--output", required=True)
    d.add_argument("--trace")
    d.add_argument("--combination")
    d.set_defaults(func=cmd_deblur)

    s = sub.add_parser("synth", help="write a kernel")
    ss = s.add_subparsers(dest="shape", required=True, parser_class=_Parser)
    g = ss.add_parser("gaussian")
    g.add_argument("--sigma", type=float, required=True)
    g.add_argument("--radius", type=int, required=True)
    g.add_argument("--unit-sum", action="store_true")
    bx = ss.add_parser("boxcar")
    bx.add_argument("--len", type=int, required=True)
    bx.add_argument("--ones", action="store_true", help="coefficients 1 instead of 1/len")
    c = ss.add_parser("custom")
    c.add_argument("--values", required=True)
    c.add_argument("--offset", type=int, default=0)
    for sp in (g, bx, c):
        sp.add_argument("--output")
        sp.set_defaults(func=cmd_synth)

    n = sub.add_parser("noise", help="add seeded Gaussian noise")
    n.add_argument("--level", type=float, required=True)
    n.add_argument("--seed", type=int, required=True)
    n.add_argument("--input", required=True)
    n.add_argument("--output", required=True)
    n.set_defaults(func=cmd_noise)

    cp = sub.add_parser("compare", help="print an error metric between two files")
    cp.add_argument("a")
    cp.add_argument("b")
    cp.add_argument("--window")
    cp.add_argument("--metric", choices=["maxabs", "rms", "rel"], default="maxabs")
    cp.set_defaults(func=cmd_compare)
    return p


def _fail(name, detail, code):
    print(f"ERROR {name}: {detail}", file=sys.stderr)
    return code


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, ["shiftdeconv"] + argv)
    except _Usage as exc:
        return _fail("Usage", exc, 1)
    except UsageError as exc:
        return _fail(type(exc).__name__, exc, 1)
    except NumericalFailure as exc:
        return _fail(type(exc).__name__, exc, 2)
    except FormatError as exc:
        return _fail("FormatError", exc, 3)
    except OSError as exc:
        return _fail("IOError", exc, 3)
    except ValueError as exc:
        return _fail("Usage", exc, 1)


if __name__ == "__main__":
    sys.exit(main())
