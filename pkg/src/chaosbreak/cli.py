"""Command-line front end.

Secret keys are only ever read from key files. ``recover`` deliberately
takes no key: it works from the equivalent key alone.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import attack, avalanche, cipher, netpbm
from .chaos_maps import generate_keystream
from .keyfile import read_key
from .randomness import BitSequence, TestParams, batch_experiment, run_battery


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _cmd_encrypt(args):
    img = netpbm.read_ppm(args.inp)
    netpbm.write_ppm(cipher.encrypt(img, read_key(args.key)), args.out)


def _cmd_decrypt(args):
    img = netpbm.read_ppm(args.inp)
    netpbm.write_ppm(cipher.decrypt(img, read_key(args.key)), args.out)


def _cmd_derive_key(args):
    key = read_key(args.key)
    # stands in for the victim's encryption service
    equiv = attack.build_equivalent_key(lambda img: cipher.encrypt(img, key), args.height, args.width)
    netpbm.write_ppm(equiv.image, args.out)


def _cmd_recover(args):
    equiv = attack.EquivalentKey(netpbm.read_ppm(args.equiv))
    netpbm.write_ppm(attack.recover(netpbm.read_ppm(args.inp), equiv), args.out)


def _cmd_keystream(args):
    _, cks = generate_keystream(read_key(args.key), args.height, args.width)
    plane = {"r": cks.cksr, "g": cks.cksg, "b": cks.cksb}[args.channel]
    with open(args.out, "wb") as fh:
        fh.write(plane.tobytes())
    with open(f"{args.out}.len", "w", encoding="ascii") as fh:
        fh.write(f"{8 * plane.size}\n")


def _params(args) -> TestParams:
    return TestParams(
        block_frequency_m=args.block_m,
        template_m=len(args.template),
        template_B=args.template,
        serial_m=args.serial_m,
        apen_m=args.apen_m,
        alpha=args.alpha,
    )


def _cmd_nist(args):
    with open(args.inp, "rb") as fh:
        data = fh.read()
    sidecar = f"{args.inp}.len"
    if os.path.exists(sidecar):
        with open(sidecar, encoding="ascii") as fh:
            declared = int(fh.read().strip())
        if declared != args.bits:
            raise ValueError(f"--bits {args.bits} disagrees with {sidecar} ({declared})")
    if not 1 <= args.bits <= 8 * len(data):
        raise ValueError(f"--bits {args.bits} outside 1..{8 * len(data)} for {args.inp}")
    report = run_battery(BitSequence.from_bytes(data, args.bits), _params(args))
    _write_json(args.report, report.to_dict())
    for r in report.results:
        print(f"{r.test_name:26s} {'PASS' if r.passed else 'FAIL'}  "
              + " ".join(f"{p:.6f}" for p in r.p_values) + ("" if r.status == "ok" else f"  [{r.status}]"))


def _cmd_batch_nist(args):
    report = batch_experiment(args.count, args.height, args.width, args.seed, _params(args),
                              workers=args.workers)
    _write_json(args.report, report.to_dict())
    for name, passed in report.pass_counts.items():
        print(f"{name:26s} {passed}/{report.count}")


def _cmd_avalanche(args):
    img = netpbm.read_ppm(args.inp)
    loc = avalanche.BitLocation(args.channel, args.row, args.col, args.bit)
    report = avalanche.avalanche_experiment(img, read_key(args.key), loc)
    for c, name in enumerate("rgb"):
        netpbm.write_pgm(report.changed_maps[c], f"{args.out_prefix}_{name}.pgm")
    payload = {"location": {"channel": loc.channel, "row": loc.row, "col": loc.col, "bit": loc.bit}}
    payload.update(report.to_dict())
    _write_json(f"{args.out_prefix}.json", payload)
    print(f"changed bits: {report.hamming} of {report.total_bits} "
          f"({report.changed_fraction:.4%}); planes {sorted(report.changed_planes())}")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _add_test_overrides(p):
    p.add_argument("--block-m", type=_positive, default=100)
    p.add_argument("--template", default="010000111")
    p.add_argument("--serial-m", type=_positive, default=16)
    p.add_argument("--apen-m", type=_positive, default=10)
    p.add_argument("--alpha", type=float, default=0.01)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chaosbreak",
                                     description="Chaotic image cipher, its break, and its analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func in (("encrypt", _cmd_encrypt), ("decrypt", _cmd_decrypt)):
        p = sub.add_parser(name, help=f"{name} a P6 image")
        p.add_argument("--key", required=True)
        p.add_argument("--in", dest="inp", required=True)
        p.add_argument("--out", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("derive-key", help="ciphertext of the zero image (equivalent key)")
    p.add_argument("--key", required=True)
    p.add_argument("--width", type=_positive, required=True)
    p.add_argument("--height", type=_positive, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_derive_key)

    p = sub.add_parser("recover", help="decrypt with an equivalent key, no secret key")
    p.add_argument("--equiv", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("keystream", help="dump one keystream plane as raw bytes")
    p.add_argument("--key", required=True)
    p.add_argument("--width", type=_positive, required=True)
    p.add_argument("--height", type=_positive, required=True)
    p.add_argument("--channel", choices=("r", "g", "b"), default="b")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_keystream)

    p = sub.add_parser("nist", help="run the nine-test battery on a raw bit file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--bits", type=_positive, required=True)
    p.add_argument("--report", required=True)
    _add_test_overrides(p)
    p.set_defaults(func=_cmd_nist)

    p = sub.add_parser("batch-nist", help="battery over keystreams of random keys")
    p.add_argument("--count", type=_positive, required=True)
    p.add_argument("--width", type=_positive, required=True)
    p.add_argument("--height", type=_positive, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--workers", type=_positive, default=None)
    _add_test_overrides(p)
    p.set_defaults(func=_cmd_batch_nist)

    p = sub.add_parser("avalanche", help="flip one plaintext bit and map ciphertext changes")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--channel", choices=("r", "g", "b"), required=True)
    p.add_argument("--row", type=int, required=True)
    p.add_argument("--col", type=int, required=True)
    p.add_argument("--bit", type=int, required=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=_cmd_avalanche)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except (OSError, ValueError, IndexError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"chaosbreak {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
