"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 file
format error. Every command takes its randomness from an explicit seed,
so runs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .audit import composed_security_audit, contrast_audit, corrupted_copy, security_audit
from .codec import BinaryImage, decode, default_layout, split_image, stack
from .errors import CapacityError, FileFormatError, HeaderMismatchError
from .pbm import read_pbm, write_pbm
from .recursive import (
    Placement,
    SecretChain,
    band_placement,
    embed_chain,
    extract_embedded,
    extract_level,
)
from .schemes import analyze_family
from .scheme_spec import parse_scheme
from .sharefile import load_manifest, read_share, require_compatible, write_share, write_stacked

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_FORMAT = 3


def _read_shares(paths: list[str]):
    pairs = [read_share(p) for p in paths]
    headers = [h for _, h in pairs]
    require_compatible(headers)
    return [s for s, _ in pairs], headers


def cmd_split(args) -> int:
    img = read_pbm(args.infile)
    spec = parse_scheme(args.scheme)
    basis = spec.build().basis
    layout = default_layout(basis.m, args.pad)
    shares = split_image(img, basis, layout, args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for share in shares:
        write_share(share, spec, out / f"share_{share.index}.pbm")
    print(f"scheme {spec.text}: n={basis.n} k={basis.k} m={basis.m} "
          f"d={basis.d} alpha={basis.alpha} r={basis.r}")
    print(f"wrote {basis.n} shares ({shares[0].grid_width}x{shares[0].grid_height} px) to {out}")
    return EXIT_OK


def cmd_stack(args) -> int:
    shares, headers = _read_shares(args.infiles)
    stacked = stack(shares)
    indices = tuple(sorted(s.index for s in shares))
    write_stacked(stacked, headers[0].scheme, indices, args.out)
    print(f"stacked {stacked.count} shares {list(indices)} -> {args.out}")
    return EXIT_OK


def cmd_decode(args) -> int:
    shares, headers = _read_shares(args.infiles)
    k = headers[0].scheme.k
    if len(shares) < k:
        raise ValueError(f"decoding needs at least k={k} shares; {len(shares)} given "
                         "(fewer shares reveal nothing, by design)")
    basis = headers[0].scheme.build().basis
    if basis.m != headers[0].m:
        raise FileFormatError(f"header says m={headers[0].m}, scheme builds m={basis.m}")
    secret = decode(stack(shares), basis)
    write_pbm(secret, args.out)
    print(f"decoded {len(shares)} shares -> {args.out} ({secret.width}x{secret.height})")
    return EXIT_OK


def _chain_from_manifest(manifest):
    built = manifest.scheme.build()
    secrets = tuple(read_pbm(p) for p in manifest.secret_paths)
    if manifest.placement == "bands":
        chain = SecretChain.with_band_placements(built.basis, secrets)
    else:
        placements = tuple(Placement(regions=regions) for regions in manifest.explicit_regions)
        chain = SecretChain(basis=built.basis, secrets=secrets, placements=placements)
    return built, chain


def cmd_embed(args) -> int:
    manifest = load_manifest(args.manifest)
    built, chain = _chain_from_manifest(manifest)
    layout = default_layout(built.basis.m, manifest.pad_value)
    result = embed_chain(chain, manifest.seed, layout)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    levels = tuple((img.width, img.height) for img in chain.secrets)
    chain_meta = levels if len(levels) > 1 and manifest.placement == "bands" else None
    for share in result.shares:
        write_share(share, manifest.scheme, out / f"share_{share.index}.pbm",
                    chain_levels=chain_meta)
    for depth, level in enumerate(result.level_shares[:-1]):
        trail_dir = out / "trail" / f"level_{depth + 1}"
        trail_dir.mkdir(parents=True, exist_ok=True)
        meta = levels[: depth + 1] if depth > 0 and manifest.placement == "bands" else None
        for share in level:
            write_share(share, manifest.scheme, trail_dir / f"share_{share.index}.pbm",
                        chain_levels=meta)
    pinned = sum(len(c) for c in result.constraints)
    print(f"embedded chain of {len(chain.secrets)} secrets ({pinned} pinned pixel codes); "
          f"final shares in {out}")
    return EXIT_OK


def cmd_extract(args) -> int:
    shares, headers = _read_shares(args.infiles)
    n = headers[0].scheme.n
    if sorted(s.index for s in shares) != list(range(n)):
        raise ValueError(f"extraction reads every share's own region; supply all {n} shares")
    if args.manifest:
        manifest = load_manifest(args.manifest)
        if manifest.placement == "explicit":
            raise ValueError("extraction with explicit regions is only available through the API")
        imgs = [read_pbm(p) for p in manifest.secret_paths]
        levels = tuple((img.width, img.height) for img in imgs)
    elif headers[0].chain_levels:
        levels = headers[0].chain_levels
    else:
        raise ValueError("these shares carry no chain metadata; pass --manifest")
    if not 1 <= args.level < len(levels):
        raise ValueError(f"--level must be between 1 and {len(levels) - 1} (1 = smallest secret)")
    if (headers[0].secret_width, headers[0].secret_height) != levels[-1]:
        raise HeaderMismatchError(f"shares are {headers[0].secret_width}x{headers[0].secret_height} "
                                  f"but the chain's largest secret is {levels[-1][0]}x{levels[-1][1]}")

    current = sorted(shares, key=lambda s: s.index)
    for depth in range(len(levels) - 1, args.level - 1, -1):
        placement = band_placement(levels[depth - 1], levels[depth], n)
        current = extract_level(current, placement, *levels[depth - 1])
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = levels[: args.level] if args.level > 1 else None
    for share in current:
        write_share(share, headers[0].scheme, out / f"share_{share.index}.pbm",
                    chain_levels=meta)
    print(f"extracted level {args.level} shares "
          f"({current[0].width}x{current[0].height}) to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = parse_scheme(args.scheme)
    built = spec.build()
    basis = built.basis
    if args.corrupt:
        basis = corrupted_copy(basis)
        print("auditing a deliberately corrupted copy (one white bit cleared)")
    method = "full" if args.full_enum else "columns"
    report: dict = {"scheme": spec.text, "n": basis.n, "k": basis.k, "m": basis.m,
                    "d": basis.d, "alpha": str(basis.alpha), "r": basis.r}
    ok = True

    contrast = contrast_audit(basis)
    report["contrast"] = {"derived_d": contrast.derived_d,
                          "derived_alpha": str(contrast.derived_alpha),
                          "passed": contrast.passed}
    ok &= contrast.passed

    q_values = [args.q] if args.q else list(range(1, basis.k))
    report["security"] = []
    for q in q_values:
        check = security_audit(basis, q, method=method)
        report["security"].append({"q": q, "method": check.method,
                                   "subsets": check.subsets_checked,
                                   "matrices_per_side": check.matrices_per_side,
                                   "passed": check.passed})
        ok &= check.passed

    if spec.family == "kofn":
        report["composed"] = []
        for q in q_values:
            comp = composed_security_audit(built.base, built.family, q, trials=200)
            report["composed"].append({"q": q, "f": list(comp.f_values),
                                       "passed": comp.passed})
            ok &= comp.passed

    # a checker that cannot catch a broken basis proves nothing
    negative = security_audit(corrupted_copy(basis), 1, method="columns")
    report["negative_control_detected"] = not negative.passed
    ok &= not negative.passed
    report["passed"] = bool(ok)

    if args.json:
        print(json.dumps(report, indent=1))
    else:
        print(f"scheme {spec.text}: n={basis.n} k={basis.k} m={basis.m} "
              f"d={basis.d} alpha={basis.alpha} r={basis.r}")
        print(f"contrast: d={contrast.derived_d} alpha={contrast.derived_alpha} "
              f"{'PASS' if contrast.passed else 'FAIL'}")
        for entry in report["security"]:
            print(f"security q={entry['q']} [{entry['method']}]: {entry['subsets']} subsets, "
                  f"{entry['matrices_per_side']} matrices/side "
                  f"{'PASS' if entry['passed'] else 'FAIL'}")
        for entry in report.get("composed", []):
            print(f"composed q={entry['q']}: f={entry['f']} "
                  f"{'PASS' if entry['passed'] else 'FAIL'}")
        print(f"negative control: corrupted basis "
              f"{'detected PASS' if report['negative_control_detected'] else 'MISSED FAIL'}")
        print(f"verify {spec.text}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_analyze(args) -> int:
    spec = parse_scheme(args.scheme)
    if spec.family != "kofn":
        raise ValueError("analyze expects a composed scheme (kofn:k,n[,family])")
    built = spec.build()
    analysis = analyze_family(built.family, spec.k)
    guaranteed = analysis.min_beta_k * built.base.alpha
    if args.json:
        doc = {"scheme": spec.text, "l": built.family.size, "m": built.basis.m,
               "base_alpha": str(built.base.alpha),
               "min_beta_k": str(analysis.min_beta_k),
               "guaranteed_alpha": str(guaranteed),
               "achieved_alpha": str(built.basis.alpha),
               "betas": {"-".join(map(str, B)): [str(b) for b in dist]
                         for B, dist in analysis.betas.items()}}
        print(json.dumps(doc, indent=1))
        return EXIT_OK
    print(f"scheme {spec.text}: l={built.family.size} m'={built.basis.m} "
          f"base alpha={built.base.alpha}")
    distinct = sorted(set(analysis.betas.values()))
    if len(distinct) == 1:
        dist = distinct[0]
        print("all subsets: " + "  ".join(f"beta_{q + 1}={b}" for q, b in enumerate(dist)))
    else:
        for B, dist in sorted(analysis.betas.items()):
            print(f"subset {B}: " + "  ".join(f"beta_{q + 1}={b}" for q, b in enumerate(dist)))
    print(f"min beta_{spec.k} = {analysis.min_beta_k}")
    print(f"guaranteed alpha' >= {guaranteed}; achieved alpha' = {built.basis.alpha}")
    return EXIT_OK


def _expand(img: BinaryImage, fw: int, fh: int) -> BinaryImage:
    """Solid-block enlargement of a secret, for side-by-side previews."""
    pixels = bytearray(img.width * fw * img.height * fh)
    for y in range(img.height):
        for x in range(img.width):
            v = img.pixel(x, y)
            for r in range(fh):
                base = (y * fh + r) * img.width * fw + x * fw
                for c in range(fw):
                    pixels[base + c] = v
    return BinaryImage(img.width * fw, img.height * fh, bytes(pixels))


def _demo_secrets(large: bool) -> list[BinaryImage]:
    if not large:
        one = BinaryImage(1, 1, b"\x01")
        five = BinaryImage(1, 5, bytes([1, 0, 1, 0, 1]))
        grid = [[1 if x == y or x + y == 4 else 0 for x in range(5)] for y in range(5)]
        return [one, five, BinaryImage.from_rows(grid)]

    def disk(cx, cy, rad, x, y):
        return (x - cx) ** 2 + (y - cy) ** 2 <= rad * rad

    # stick figure, 78x76
    stick = [[0] * 78 for _ in range(76)]
    for y in range(76):
        for x in range(78):
            head = disk(39, 14, 9, x, y) and not disk(39, 14, 6, x, y)
            body = 36 <= x <= 40 and 22 <= y <= 50
            arms = 18 <= x <= 58 and 30 <= y <= 33
            left_leg = abs((x - 38) + (y - 50)) <= 2 and y > 50
            right_leg = abs((x - 40) - (y - 50)) <= 2 and y > 50
            stick[y][x] = 1 if (head or body or arms or left_leg or right_leg) else 0
    # banner, 78x380: dashed bars
    banner = [[1 if (y // 10) % 2 == 0 and (x // 13 + y // 10) % 2 == 0 else 0
               for x in range(78)] for y in range(380)]
    # portrait-scale test card, 390x380
    card = [[0] * 390 for _ in range(380)]
    for y in range(380):
        for x in range(390):
            rings = disk(195, 190, 150, x, y) and not disk(195, 190, 120, x, y)
            pupil = disk(195, 190, 60, x, y)
            checker = (x // 30 + y // 30) % 2 == 0 and not disk(195, 190, 160, x, y)
            card[y][x] = 1 if (rings or pupil or checker) else 0
    return [BinaryImage.from_rows(stick), BinaryImage.from_rows(banner),
            BinaryImage.from_rows(card)]


def cmd_demo(args) -> int:
    spec = parse_scheme("3ofN:5")
    basis = spec.build().basis
    layout = default_layout(basis.m)
    secrets = _demo_secrets(args.large)
    chain = SecretChain.with_band_placements(basis, secrets)
    out = Path(args.out_dir)
    for sub in ("secrets", "shares", "stacks", "decoded"):
        (out / sub).mkdir(parents=True, exist_ok=True)

    levels = tuple((img.width, img.height) for img in chain.secrets)
    for i, img in enumerate(secrets):
        write_pbm(img, out / "secrets" / f"level_{i + 1}.pbm")
        write_pbm(_expand(img, layout.block_w, layout.block_h),
                  out / "secrets" / f"level_{i + 1}_expanded.pbm")

    result = embed_chain(chain, args.seed, layout)
    for share in result.shares:
        write_share(share, spec, out / "shares" / f"share_{share.index}.pbm",
                    chain_levels=levels)

    all_exact = True
    for depth, level in enumerate(result.level_shares):
        stacked = stack(level[:3])
        write_stacked(stacked, spec, (0, 1, 2), out / "stacks" / f"level_{depth + 1}_stack3.pbm")
        revealed = decode(stacked, basis)
        write_pbm(revealed, out / "decoded" / f"level_{depth + 1}.pbm")
        exact = revealed == secrets[depth]
        all_exact &= exact
        print(f"level {depth + 1} ({secrets[depth].width}x{secrets[depth].height}): "
              f"3-share decode {'exact' if exact else 'WRONG'}")

    extracted = extract_embedded(result.shares, chain)
    recovered_ok = extracted == result.level_shares[:-1]
    all_exact &= recovered_ok
    for depth, level in enumerate(extracted):
        ex_dir = out / "extracted" / f"level_{depth + 1}"
        ex_dir.mkdir(parents=True, exist_ok=True)
        for share in level:
            write_share(share, spec, ex_dir / f"share_{share.index}.pbm")
    print(f"extraction recovered the embedded shares "
          f"{'bit-exactly' if recovered_ok else 'WRONG'}")
    print(f"demo output in {out} (shares, stacks, extracted levels, decoded secrets)")
    return EXIT_OK if all_exact else EXIT_VERIFY


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vcshare",
                     description="Visual-cryptography secret sharing with recursive hiding.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="split a secret image into n shares")
    p.add_argument("--scheme", required=True, help="3ofN:n | kofk:k | kofn:k,n[,family]")
    p.add_argument("--seed", required=True, help="seed for all share randomness")
    p.add_argument("--in", dest="infile", required=True, help="secret image (PBM P1/P4)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--pad", type=int, choices=(0, 1), default=1,
                   help="constant value of unused block cells (default 1)")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("stack", help="OR shares together into a viewable image")
    p.add_argument("--in", dest="infiles", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stack)

    p = sub.add_parser("decode", help="stack k or more shares and threshold back to the secret")
    p.add_argument("--in", dest="infiles", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("embed", help="split a chain of secrets, nesting each level's shares")
    p.add_argument("--manifest", required=True, help="TOML chain description")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover embedded shares from their host regions")
    p.add_argument("--level", type=int, required=True, help="1 = smallest secret")
    p.add_argument("--in", dest="infiles", nargs="+", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--manifest", help="chain description, if shares carry no chain metadata")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="audit a scheme's contrast and security exhaustively")
    p.add_argument("--scheme", required=True)
    p.add_argument("--q", type=int, help="audit a single sub-threshold stack size")
    p.add_argument("--full-enum", action="store_true",
                   help="walk all m! permutations instead of the column-multiset form")
    p.add_argument("--corrupt", action="store_true",
                   help="flip a bit first and demonstrate that the audit catches it")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="distinct-value distributions of a composed scheme's family")
    p.add_argument("--scheme", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("demo", help="end-to-end recursive hiding walkthrough with generated images")
    p.add_argument("--seed", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--large", action="store_true", help="portrait-scale chain instead of desk-scale")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"vcshare: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except HeaderMismatchError as exc:
        print(f"vcshare: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapacityError, ValueError, OSError) as exc:
        print(f"vcshare: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
